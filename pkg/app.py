"""
FastAPI service for the ROOPL toolchain.
Exposes checking, inversion, interpretation, compilation to PISA and
simulation of the reversible machine as a REST API.
"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
import uvicorn
import os
from datetime import datetime
from src.api.routes.toolchain import router as toolchain_router
from src.api.schemas import HealthResponse, InfoResponse
from src.core import config

VERSION = "1.0.0"
DESCRIPTION = "Reversible object-oriented language toolchain: type checker, inverter, interpreter, PISA compiler and reversible VM"

config.configure_logging("INFO")

app = FastAPI(
    title="ROOPL Toolchain API",
    description=DESCRIPTION,
    version=VERSION
)

# Add CORS middleware for frontend integration
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # Configure appropriately for production
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(toolchain_router)

@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now().isoformat(),
        version=VERSION,
        commit_sha=os.getenv("COMMIT_SHA")
    )

@app.get("/info", response_model=InfoResponse)
async def service_info():
    """Service information endpoint."""
    return InfoResponse(
        service="ROOPL Toolchain API",
        version=VERSION,
        description=DESCRIPTION,
        endpoints=[
            "/check",
            "/invert",
            "/run",
            "/compile",
            "/simulate",
            "/exec",
            "/layout",
            "/health",
            "/info"
        ],
        features=[
            "Static checking (class analysis and type checking)",
            "Program inversion",
            "Reference interpreter with forward and backward semantics",
            "Compilation to PISA assembly with dynamic dispatch",
            "Bidirectional PISA virtual machine",
            "Interpreter vs VM differential execution"
        ]
    )

@app.get("/")
async def root():
    """Root endpoint with basic service information."""
    return {
        "service": "ROOPL Toolchain API",
        "version": VERSION,
        "status": "running",
        "description": DESCRIPTION,
        "endpoints": {
            "check": "/check",
            "run": "/run",
            "exec": "/exec",
            "health": "/health",
            "info": "/info"
        }
    }

if __name__ == "__main__":
    uvicorn.run(app, host="0.0.0.0", port=config.get_port())
