import logging
from datetime import datetime
from typing import List, Optional

from fastapi import Depends, FastAPI, HTTPException
from sqlalchemy.orm import Session as DBSession

from armkit import config
from armkit.cli.fit import fit_growth
from armkit.core.verifier import VerificationManager
from armkit.database import get_db
from armkit.errors import ArmError, ParseError
from armkit.machine.parser import parse_program
from armkit.machine.vm import run
from armkit.programs.stdlib import load_stdlib
from armkit.schemas import (
    FitRequest, GrowthFit, ProfileCreate, RunRequest, RunResult, StepProfile, StoredProfile,
    VerificationReport, VerifyRequest,
)
from armkit.services.profile_store import ProfileStore

config.configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title="armkit")


def _bad_request(e: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(e))


def _program(request: RunRequest):
    if request.stdlib_id:
        return load_stdlib(request.stdlib_id)
    if not request.program:
        raise ParseError("send either program text or a stdlib id")
    return parse_program(request.program, name="request", allow_files=False)


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.get("/ping")
def ping():
    """Lightweight ping endpoint for warming up Lambda"""
    return {"status": "warm", "timestamp": datetime.now().isoformat()}


@app.post("/run", response_model=RunResult)
def run_program(request: RunRequest) -> RunResult:
    try:
        return run(_program(request), request.input, fuel=request.fuel, seed=request.seed)
    except ArmError as e:
        raise _bad_request(e)
    except Exception as e:
        logger.error(f"run failed: {e}")
        raise HTTPException(status_code=500, detail="internal error")


@app.post("/verify", response_model=VerificationReport)
def verify(request: VerifyRequest) -> VerificationReport:
    try:
        return VerificationManager().handle(request)
    except ArmError as e:
        raise _bad_request(e)
    except Exception as e:
        logger.error(f"verify failed: {e}")
        raise HTTPException(status_code=500, detail="internal error")


@app.post("/fit", response_model=GrowthFit)
def fit(request: FitRequest) -> GrowthFit:
    try:
        return fit_growth(StepProfile(samples=request.samples))
    except (ArmError, ValueError) as e:
        raise _bad_request(e)


@app.get("/profiles", response_model=List[StoredProfile])
def list_profiles(program: Optional[str] = None, db: DBSession = Depends(get_db)) -> List[StoredProfile]:
    store = ProfileStore(db)
    return [store.to_schema(r) for r in store.list_runs(program)]


@app.post("/profiles", response_model=StoredProfile)
def create_profile(request: ProfileCreate, db: DBSession = Depends(get_db)) -> StoredProfile:
    result = None
    if request.fit:
        try:
            result = fit_growth(request.profile)
        except ArmError as e:
            raise _bad_request(e)
    store = ProfileStore(db)
    return store.to_schema(store.save(request.profile, result))
