import logging
from typing import List, Optional

from sqlalchemy.orm import Session

from armkit.models import ProfileRun, ProfileSample
from armkit.schemas import GrowthFit, GrowthModel, StepProfile, StepSample, StoredProfile

logger = logging.getLogger(__name__)


class ProfileStore:
    """Handles persistence of step profiles and their fits."""

    def __init__(self, db: Session):
        self.db = db

    def save(self, profile: StepProfile, fit: Optional[GrowthFit] = None) -> ProfileRun:
        run = ProfileRun(program=profile.program, generator=profile.generator)
        if fit is not None:
            run.model = fit.model.value
            run.a, run.b, run.residual = fit.a, fit.b, fit.residual
            run.residuals = dict(fit.residuals)
        run.samples = [
            ProfileSample(n=s.n, steps_med=s.steps_med, steps_min=s.steps_min, steps_max=s.steps_max,
                          weak_med=s.weak_med, strong_med=s.strong_med)
            for s in profile.samples
        ]
        self.db.add(run)
        self.db.commit()
        self.db.refresh(run)
        logger.info("stored profile %d of %s (%d samples)", run.id, run.program, len(run.samples))
        return run

    def list_runs(self, program: Optional[str] = None) -> List[ProfileRun]:
        query = self.db.query(ProfileRun)
        if program:
            query = query.filter(ProfileRun.program == program)
        return query.order_by(ProfileRun.id).all()

    def get(self, run_id: int) -> Optional[ProfileRun]:
        return self.db.get(ProfileRun, run_id)

    @staticmethod
    def to_schema(run: ProfileRun) -> StoredProfile:
        profile = StepProfile(
            program=run.program,
            generator=run.generator,
            samples=[
                StepSample(n=s.n, steps_med=s.steps_med, steps_min=s.steps_min, steps_max=s.steps_max,
                           weak_med=s.weak_med, strong_med=s.strong_med)
                for s in run.samples
            ],
        )
        fit = None
        if run.model is not None:
            fit = GrowthFit(model=GrowthModel(run.model), a=run.a, b=run.b, residual=run.residual,
                            residuals=run.residuals or {})
        return StoredProfile(id=run.id, profile=profile, fit=fit, created_at=run.created_at)
