from fastapi import APIRouter, HTTPException
from src.api.schemas import (
    SourceRequest,
    PalRequest,
    CheckResponse,
    InvertResponse,
    RunResponse,
    CompileResponse,
    MachineResponse,
    ExecResponse,
    LayoutResponse
)
from src.core.errors import RooplError
from src.services import toolchain_service

router = APIRouter()


def _call(fn, *args, **kwargs):
    """Runs a pipeline function; user-caused failures answer 400, anything else 500."""
    try:
        return fn(*args, **kwargs)
    except RooplError as e:
        raise HTTPException(status_code=400, detail={
            "error": e.rule,
            "message": str(e),
            "diagnostics": [d.to_dict() for d in e.diagnostics()],
        })
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal Server Error: {str(e)}")


@router.post("/check", response_model=CheckResponse)
def check_endpoint(request: SourceRequest):
    """Parse, class analysis and type checking; diagnostics are returned, not raised."""
    return _call(toolchain_service.check_source, request.source)


@router.post("/invert", response_model=InvertResponse)
def invert_endpoint(request: SourceRequest):
    return _call(toolchain_service.invert_source, request.source)


@router.post("/run", response_model=RunResponse)
def run_endpoint(request: SourceRequest):
    """
    Execute the program on the chosen backend and return the fields of the main class.
    """
    options = {}
    if request.backend == "vm":
        options = dict(runtime_checks=request.runtime_checks, step_limit=request.step_limit,
                       memory_size=request.memory_size)
    return _call(toolchain_service.run_source, request.source, request.backend, **options)


@router.post("/compile", response_model=CompileResponse)
def compile_endpoint(request: SourceRequest):
    return _call(toolchain_service.compile_source, request.source, runtime_checks=request.runtime_checks)


@router.post("/simulate", response_model=MachineResponse)
def simulate_endpoint(request: PalRequest):
    return _call(toolchain_service.simulate_pal, request.pal, step_limit=request.step_limit,
                 memory_size=request.memory_size, dump_memory=request.dump_memory)


@router.post("/exec", response_model=ExecResponse)
def exec_endpoint(request: SourceRequest):
    """Compile, simulate and interpret; ``match`` is false when the two output maps differ."""
    return _call(toolchain_service.exec_source, request.source, runtime_checks=request.runtime_checks,
                 step_limit=request.step_limit, memory_size=request.memory_size)


@router.post("/layout", response_model=LayoutResponse)
def layout_endpoint(request: SourceRequest):
    return _call(toolchain_service.layout_report, request.source)
