"""Least-squares fits of step counts against the candidate growth classes."""
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from armkit.errors import FitError
from armkit.schemas import GrowthFit, GrowthModel, StepProfile

logger = logging.getLogger(__name__)

MIN_SAMPLES = 3
MIN_SPAN = 4.0
# residuals this close count as a tie; the earlier (simpler) model wins
TIE = 1e-9


def _log(n: np.ndarray) -> np.ndarray:
    return np.log2(np.maximum(n, 2.0))


def _columns(model: GrowthModel, n: np.ndarray) -> np.ndarray:
    """Design matrix; the first column carries a, the last one b."""
    ones = np.ones_like(n)
    if model == GrowthModel.CONST:
        return ones[:, None]
    if model == GrowthModel.POLYLOG3:
        L = _log(n)
        return np.column_stack([L ** 3, L ** 2, L, ones])
    return np.column_stack([_GROWTH[model](n), ones])


_GROWTH: Dict[GrowthModel, Callable[[np.ndarray], np.ndarray]] = {
    GrowthModel.LOG: _log,
    GrowthModel.N_OVER_LOG: lambda n: n / _log(n),
    GrowthModel.LINEAR: lambda n: n,
    GrowthModel.N_LOG_N: lambda n: n * _log(n),
    GrowthModel.QUADRATIC: lambda n: n ** 2,
    GrowthModel.CUBIC: lambda n: n ** 3,
}


def evaluate(model: GrowthModel, a: float, b: float, n: float) -> float:
    """a * model(n) + b for the two-parameter models."""
    if model == GrowthModel.CONST:
        return b
    if model == GrowthModel.POLYLOG3:
        raise FitError("polylog-deg3 has four coefficients")
    return float(a * _GROWTH[model](np.array([float(n)]))[0] + b)


def _fit_one(model: GrowthModel, n: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    X = _columns(model, n)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    yhat = X @ coef
    residual = float(np.sqrt(np.mean((y - yhat) ** 2)) / np.mean(y))
    a = 0.0 if model == GrowthModel.CONST else float(coef[0])
    return a, float(coef[-1]), residual


def measure_of(profile: StepProfile, measure: str) -> List[float]:
    if measure == "steps":
        return [s.steps_med for s in profile.samples]
    values = [getattr(s, f"{measure}_med", None) for s in profile.samples]
    if measure not in ("weak", "strong") or any(v is None for v in values):
        raise FitError(f"profile has no {measure!r} measure on every sample")
    return values


def fit_growth(profile: StepProfile, measure: str = "steps") -> GrowthFit:
    """Winner is the candidate with the least RMS residual over mean steps.

    A candidate takes part only with more samples than coefficients, so
    polylog-deg3 needs five.
    """
    if len(profile.samples) < MIN_SAMPLES:
        raise FitError(f"need at least {MIN_SAMPLES} samples, got {len(profile.samples)}")
    n = np.array([float(s.n) for s in profile.samples])
    y = np.array(measure_of(profile, measure), dtype=float)
    if n.min() <= 0 or n.max() / n.min() < MIN_SPAN:
        raise FitError(f"sizes must span at least {MIN_SPAN:g}x, got {n.min():g}..{n.max():g}")
    if np.mean(y) <= 0:
        raise FitError("step counts must be positive")

    fits: Dict[GrowthModel, Tuple[float, float, float]] = {}
    for model in GrowthModel:
        if len(n) <= _columns(model, n).shape[1]:
            continue
        fits[model] = _fit_one(model, n, y)
    best = min(r for _, _, r in fits.values())
    winner = next(m for m in fits if fits[m][2] <= best + TIE)
    a, b, residual = fits[winner]
    logger.info("fit %s: %s (a=%.4g, b=%.4g, residual %.4f)", profile.program or "profile",
                winner.value, a, b, residual)
    return GrowthFit(model=winner, a=a, b=b, residual=residual,
                     residuals={m.value: r for m, (_, _, r) in fits.items()})
