from pydantic import BaseModel, Field
from typing import List, Dict, Optional

# Pydantic models for request/response
class SourceRequest(BaseModel):
    """A ROOPL program plus the execution options every pipeline endpoint accepts."""
    source: str = Field(description="ROOPL program text")
    runtime_checks: bool = Field(default=False, description="Emit run-time checks in compiled code")
    step_limit: Optional[int] = Field(default=None, description="Maximum VM instructions to execute")
    memory_size: Optional[int] = Field(default=None, description="VM memory size in words")
    backend: str = Field(default="interpreter", description="Execution backend: interpreter or vm")

class PalRequest(BaseModel):
    pal: str = Field(description="PISA assembly text")
    step_limit: Optional[int] = None
    memory_size: Optional[int] = None
    dump_memory: Optional[str] = Field(default=None, description="Address range 'start:end' to include in the response")

class DiagnosticResponse(BaseModel):
    rule: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None

class CheckResponse(BaseModel):
    ok: bool
    classes: int = 0
    main_class: Optional[str] = None
    diagnostics: List[DiagnosticResponse] = []

class InvertResponse(BaseModel):
    source: str

class RunResponse(BaseModel):
    backend: str
    outputs: Dict[str, int]
    steps: Optional[int] = None

class CompileResponse(BaseModel):
    pal: str
    instructions: int
    source_lines: int
    main_class: str

class MachineResponse(BaseModel):
    outputs: Dict[str, int]
    steps: int
    trapped: bool
    registers: List[int]
    memory: Optional[List[str]] = None

class ExecResponse(BaseModel):
    interpreter: Dict[str, int]
    vm: Dict[str, int]
    match: bool
    steps: int
    differences: List[str] = []

class LayoutResponse(BaseModel):
    layout: str

class HealthResponse(BaseModel):
    status: str
    timestamp: str
    version: str
    commit_sha: Optional[str] = None

class InfoResponse(BaseModel):
    service: str
    version: str
    description: str
    endpoints: List[str]
    features: List[str]
