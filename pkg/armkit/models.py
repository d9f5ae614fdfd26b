# armkit/models.py
from __future__ import annotations

from datetime import datetime
from typing import Optional

from sqlalchemy import (
    JSON,
    DateTime,
    Float,
    ForeignKey,
    Index,
    Integer,
    String,
    UniqueConstraint,
    func,
)
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


# ---------- Base ----------

class Base(DeclarativeBase):
    """Declarative base (SQLAlchemy 2.x)."""
    pass


# ---------- Mixins ----------

class TimestampMixin:
    created_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True), server_default=func.now(), nullable=False
    )
    updated_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True), server_default=func.now(), onupdate=func.now(), nullable=False
    )


# ---------- Profiles ----------

class ProfileRun(Base, TimestampMixin):
    __tablename__ = "profile_runs"

    id: Mapped[int] = mapped_column("run_id", Integer, primary_key=True, autoincrement=True)
    program: Mapped[str] = mapped_column(String(80), nullable=False)
    generator: Mapped[str] = mapped_column(String(40), nullable=False, default="")
    model: Mapped[Optional[str]] = mapped_column(String(24))
    a: Mapped[Optional[float]] = mapped_column(Float)
    b: Mapped[Optional[float]] = mapped_column(Float)
    residual: Mapped[Optional[float]] = mapped_column(Float)
    residuals: Mapped[Optional[dict]] = mapped_column(JSON)

    samples: Mapped[list[ProfileSample]] = relationship(
        back_populates="run", cascade="all, delete-orphan", order_by="ProfileSample.n"
    )

    __table_args__ = (Index("ix_profile_runs_program", "program"),)

    def __repr__(self) -> str:
        return f"<ProfileRun {self.id} {self.program} {self.model}>"


class ProfileSample(Base):
    __tablename__ = "profile_samples"

    id: Mapped[int] = mapped_column("sample_id", Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(
        ForeignKey("profile_runs.run_id", ondelete="CASCADE"), nullable=False
    )
    n: Mapped[int] = mapped_column(Integer, nullable=False)
    steps_med: Mapped[float] = mapped_column(Float, nullable=False)
    steps_min: Mapped[int] = mapped_column(Integer, nullable=False)
    steps_max: Mapped[int] = mapped_column(Integer, nullable=False)
    weak_med: Mapped[Optional[float]] = mapped_column(Float)
    strong_med: Mapped[Optional[float]] = mapped_column(Float)

    run: Mapped[ProfileRun] = relationship(back_populates="samples")

    __table_args__ = (UniqueConstraint("run_id", "n", name="uq_profile_samples_run_n"),)
