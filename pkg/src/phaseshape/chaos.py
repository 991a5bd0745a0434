"""Classical chaos statistics of a reconstructed attractor.

Largest Lyapunov exponent by the divergence-of-nearest-neighbors method,
the correlation integral and correlation dimension, and a fixed 10-number
feature vector [lambda1, corr_dim, C(r1..r8)] used as the comparison
baseline for shape-distribution features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingParams, PhaseSpace, delay_embed
from .errors import NumericalError, ValidationError
from .series import TimeSeries

__all__ = [
    "LLEConfig",
    "LLEResult",
    "default_lle_config",
    "divergence_curve",
    "lle_rosenstein",
    "attractor_diameter",
    "correlation_integral",
    "correlation_dimension",
    "ChaosFeatureVector",
    "chaos_feature_vector",
    "N_RADII",
    "LOW_R2_THRESHOLD",
]

# Pairwise work is done in row blocks of this size to bound memory.
CHUNK = 1000

# Distances are floored here before the log to survive exact duplicates.
DIST_FLOOR = 1e-12

# Fits with R^2 below this are flagged as unreliable, not rejected.
LOW_R2_THRESHOLD = 0.95

# Correlation-integral radii per feature vector, geometric from 5% to 100%
# of the attractor diameter.
N_RADII = 8
RADII_SPAN = (0.05, 1.0)


@dataclass(frozen=True)
class LLEConfig:
    """Divergence-tracking settings.

    theiler excludes temporal neighbors |i - j| <= theiler from the nearest
    neighbor search; k_max is the number of steps the pair separation is
    followed; fit_range optionally pins the linear-fit segment [k_lo, k_hi]
    (inclusive), otherwise the fit stops where the curve first reaches 70%
    of its total rise.
    """

    theiler: int
    k_max: int
    fit_range: tuple[int, int] | None = None

    def __post_init__(self):
        if not (isinstance(self.theiler, (int, np.integer)) and self.theiler >= 0):
            raise ValidationError(f"theiler must be an integer >= 0, got {self.theiler!r}")
        if not (isinstance(self.k_max, (int, np.integer)) and self.k_max >= 3):
            raise ValidationError(f"k_max must be an integer >= 3, got {self.k_max!r}")
        object.__setattr__(self, "theiler", int(self.theiler))
        object.__setattr__(self, "k_max", int(self.k_max))
        if self.fit_range is not None:
            lo, hi = self.fit_range
            lo, hi = int(lo), int(hi)
            if not (0 <= lo and lo + 1 < hi + 1 and hi < self.k_max and hi - lo >= 1):
                raise ValidationError(
                    f"fit_range must satisfy 0 <= lo < hi < k_max, got {self.fit_range!r}"
                )
            object.__setattr__(self, "fit_range", (lo, hi))


def _mean_period(x) -> float | None:
    """Mean period in samples: reciprocal of the power-weighted mean
    frequency of the spectrum (DC removed). None for a flat/empty spectrum."""
    x0 = np.asarray(x, dtype=float)
    x0 = x0 - x0.mean()
    p = np.abs(np.fft.rfft(x0)) ** 2
    freqs = np.fft.rfftfreq(len(x0))
    p[0] = 0.0
    tot = p.sum()
    if tot <= 0.0:
        return None
    fbar = (freqs * p).sum() / tot
    if fbar <= 0.0:
        return None
    return 1.0 / fbar


def default_lle_config(ps: PhaseSpace) -> LLEConfig:
    """Derive theiler/k_max from the mean period of the first coordinate.

    theiler = round(mean period), k_max = round(3 mean periods), clamped so
    the divergence curve precondition P > theiler + k_max + 1 holds. A
    degenerate spectrum falls back to multiples of the embedding delay.
    """
    p = len(ps.points)
    mp = _mean_period(ps.points[:, 0])
    if mp is None:
        theiler = 4 * ps.params.tau
        k_max = 12 * ps.params.tau
    else:
        theiler = max(1, int(round(mp)))
        k_max = int(round(3.0 * mp))
    if p <= theiler + k_max + 1:
        k_max = p - theiler - 2
    if k_max < 3:
        raise ValidationError(
            f"series too short for divergence tracking: {p} points, theiler {theiler}"
        )
    return LLEConfig(theiler=theiler, k_max=k_max)


def _nearest_neighbors(pts: np.ndarray, theiler: int) -> np.ndarray:
    """Index of each point's nearest neighbor outside the theiler window."""
    p = len(pts)
    idx = np.arange(p)
    nn = np.empty(p, dtype=int)
    nnd = np.empty(p)
    for s in range(0, p, CHUNK):
        e = min(s + CHUNK, p)
        d = np.linalg.norm(pts[s:e, None, :] - pts[None, :, :], axis=2)
        mask = np.abs(idx[s:e, None] - idx[None, :]) <= theiler
        d[mask] = np.inf
        nn[s:e] = np.argmin(d, axis=1)
        nnd[s:e] = d[np.arange(e - s), nn[s:e]]
    if not np.isfinite(nnd).all():
        raise ValidationError(
            f"theiler window {theiler} leaves some point with no admissible neighbor"
        )
    return nn


def divergence_curve(ps: PhaseSpace, config: LLEConfig) -> np.ndarray:
    """Mean log separation of initially-nearest pairs after k steps.

    curve[k] = mean over pairs (i, nn(i)) still inside the series of
    ln max(||x[i+k] - x[nn(i)+k]||, 1e-12), for k = 0 .. k_max-1.
    """
    pts = ps.points
    p = len(pts)
    if p <= config.theiler + config.k_max + 1:
        raise ValidationError(
            f"need more than theiler + k_max + 1 = {config.theiler + config.k_max + 1} "
            f"points, got {p}"
        )
    nn = _nearest_neighbors(pts, config.theiler)
    i = np.arange(p)
    curve = []
    for k in range(config.k_max):
        alive = (i + k < p) & (nn + k < p)
        if not alive.any():
            break
        d = np.linalg.norm(pts[i[alive] + k] - pts[nn[alive] + k], axis=1)
        curve.append(np.log(np.maximum(d, DIST_FLOOR)).mean())
    return np.array(curve)


@dataclass(frozen=True, eq=False)
class LLEResult:
    """Largest Lyapunov estimate with its fit diagnostics.

    lambda1 is the least-squares slope of the divergence curve over
    fit_range (inclusive), divided by dt. low_r2 flags fits whose R^2 falls
    below 0.95; the estimate is still reported.
    """

    lambda1: float
    r2: float
    low_r2: bool
    fit_range: tuple[int, int]
    curve: np.ndarray
    theiler: int
    k_max: int


def _auto_fit_end(curve: np.ndarray) -> int:
    """First index where the curve reaches 70% of its rise, floored at 2."""
    y0 = curve[0]
    ysat = curve.max()
    reach = np.nonzero(curve >= y0 + 0.7 * (ysat - y0))[0]
    k_lin = int(reach[0]) if len(reach) else len(curve) - 1
    return max(k_lin, 2)


def lle_rosenstein(
    ps: PhaseSpace, config: LLEConfig | None = None, dt: float = 1.0
) -> LLEResult:
    """Largest Lyapunov exponent from nearest-neighbor divergence.

    With no explicit fit_range the linear segment runs from 0 to the first
    step where the curve has covered 70% of its rise (at least 2). Raises
    NumericalError if the curve is constant over the fit segment.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt!r}")
    if config is None:
        config = default_lle_config(ps)
    curve = divergence_curve(ps, config)
    if len(curve) < 3:
        raise NumericalError(f"divergence curve has only {len(curve)} usable steps")
    if config.fit_range is not None:
        lo, hi = config.fit_range
        if hi >= len(curve):
            raise ValidationError(
                f"fit_range {config.fit_range} exceeds curve length {len(curve)}"
            )
    else:
        lo, hi = 0, _auto_fit_end(curve)
    seg = curve[lo : hi + 1]
    ks = np.arange(lo, hi + 1)
    ss_tot = np.sum((seg - seg.mean()) ** 2)
    if ss_tot <= 0.0:
        raise NumericalError("divergence curve is constant over the fit range")
    slope, intercept = np.polyfit(ks, seg, 1)
    pred = slope * ks + intercept
    r2 = 1.0 - np.sum((seg - pred) ** 2) / ss_tot
    curve = np.array(curve)
    curve.setflags(write=False)
    return LLEResult(
        lambda1=float(slope / dt),
        r2=float(r2),
        low_r2=bool(r2 < LOW_R2_THRESHOLD),
        fit_range=(int(lo), int(hi)),
        curve=curve,
        theiler=config.theiler,
        k_max=config.k_max,
    )


def attractor_diameter(ps: PhaseSpace) -> float:
    """Largest pairwise distance between reconstructed points."""
    pts = ps.points
    dia = 0.0
    for s in range(0, len(pts), CHUNK):
        e = min(s + CHUNK, len(pts))
        d = np.linalg.norm(pts[s:e, None, :] - pts[None, :, :], axis=2)
        dia = max(dia, float(d.max()))
    return dia


def _pair_fractions(pts: np.ndarray, radii: np.ndarray, theiler: int) -> np.ndarray:
    """Fraction of pairs with j - i > theiler and distance <= r, per radius."""
    p = len(pts)
    idx = np.arange(p)
    counts = np.zeros(len(radii))
    total = 0
    for s in range(0, p, CHUNK):
        e = min(s + CHUNK, p)
        d = np.linalg.norm(pts[s:e, None, :] - pts[None, :, :], axis=2)
        mask = (idx[None, :] - idx[s:e, None]) > theiler
        dm = d[mask]
        total += dm.size
        for q, r in enumerate(radii):
            counts[q] += (dm <= r).sum()
    if total < 2:
        raise ValidationError(
            f"theiler window {theiler} leaves {total} admissible pairs; need at least 2"
        )
    return counts / total


def correlation_integral(ps: PhaseSpace, r, theiler: int = 0):
    """C(r): fraction of time-separated point pairs within distance r.

    Pairs (i, j) with j - i > theiler count once; the comparison is
    inclusive, so r at least the attractor diameter gives exactly 1.
    Accepts a single radius (returns a float) or a sequence of radii
    (returns an array of the same length).
    """
    if not (isinstance(theiler, (int, np.integer)) and theiler >= 0):
        raise ValidationError(f"theiler must be an integer >= 0, got {theiler!r}")
    radii = np.atleast_1d(np.asarray(r, dtype=float))
    if radii.ndim != 1 or radii.size == 0 or (radii < 0).any():
        raise ValidationError(f"radii must be nonnegative reals, got {r!r}")
    c = _pair_fractions(ps.points, radii, int(theiler))
    return float(c[0]) if np.isscalar(r) or np.ndim(r) == 0 else c


def _dimension_from(radii: np.ndarray, c: np.ndarray) -> float:
    """Log-log slope of C(r) over radii with nontrivial fractions."""
    ok = (c > 0.0) & (c < 1.0)
    if ok.sum() < 3:
        raise NumericalError(
            f"only {int(ok.sum())} radii with 0 < C(r) < 1; need at least 3 for a slope"
        )
    return float(np.polyfit(np.log(radii[ok]), np.log(c[ok]), 1)[0])


def correlation_dimension(
    ps: PhaseSpace, radii=None, theiler: int = 0
) -> float:
    """Correlation dimension: slope of log C(r) against log r.

    Radii default to a geometric ladder from 5% to 100% of the attractor
    diameter. Radii where C(r) is 0 or 1 carry no slope information and are
    dropped; fewer than 3 useful radii raise NumericalError.
    """
    if radii is None:
        dia = attractor_diameter(ps)
        if dia <= 0:
            raise ValidationError("all points coincide; correlation dimension undefined")
        radii = np.geomspace(RADII_SPAN[0] * dia, RADII_SPAN[1] * dia, N_RADII)
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) < 3 or (radii <= 0).any():
        raise ValidationError("need at least 3 positive radii")
    c = _pair_fractions(ps.points, radii, int(theiler))
    return _dimension_from(radii, c)


@dataclass(frozen=True, eq=False)
class ChaosFeatureVector:
    """The 10-number baseline feature: [lambda1, corr_dim, C(r1..r8)].

    radii are the 8 correlation-integral radii (geometric, 5% to 100% of
    the attractor diameter); integrals is C at those radii, nondecreasing
    in [0, 1]. Fit diagnostics ride along for reporting.
    """

    lambda1: float
    corr_dim: float
    integrals: np.ndarray
    radii: np.ndarray
    theiler: int
    fit_range: tuple[int, int]
    r2: float
    low_r2: bool

    def __post_init__(self):
        integrals = np.array(self.integrals, dtype=float)
        radii = np.array(self.radii, dtype=float)
        if integrals.shape != (N_RADII,) or radii.shape != (N_RADII,):
            raise ValidationError(
                f"expected {N_RADII} radii and integrals, got {radii.shape} and {integrals.shape}"
            )
        if (integrals < 0).any() or (integrals > 1).any():
            raise ValidationError("correlation integrals must lie in [0, 1]")
        if (np.diff(integrals) < 0).any():
            raise ValidationError("correlation integrals must be nondecreasing in r")
        integrals.setflags(write=False)
        radii.setflags(write=False)
        object.__setattr__(self, "integrals", integrals)
        object.__setattr__(self, "radii", radii)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([[self.lambda1, self.corr_dim], self.integrals])

    def to_dict(self) -> dict:
        return {
            "lambda1": float(self.lambda1),
            "corr_dim": float(self.corr_dim),
            "integrals": self.integrals.tolist(),
            "radii": self.radii.tolist(),
            "theiler": int(self.theiler),
            "fit_range": list(self.fit_range),
            "r2": float(self.r2),
            "low_r2": bool(self.low_r2),
        }


def chaos_feature_vector(
    series: TimeSeries,
    embed: EmbeddingParams,
    config: LLEConfig | None = None,
) -> ChaosFeatureVector:
    """Build the 10-number chaos feature from one channel.

    The channel is delay-embedded, lambda1 is estimated with the divergence
    method, and C(r) is evaluated at the 8 standard radii with the same
    theiler exclusion; corr_dim is the log-log slope over those radii.
    """
    if np.ptp(series.samples) == 0.0:
        raise ValidationError("constant series has no attractor geometry")
    ps = delay_embed(series, embed)
    if config is None:
        config = default_lle_config(ps)
    res = lle_rosenstein(ps, config, dt=series.dt)
    dia = attractor_diameter(ps)
    radii = np.geomspace(RADII_SPAN[0] * dia, RADII_SPAN[1] * dia, N_RADII)
    integrals = _pair_fractions(ps.points, radii, config.theiler)
    corr_dim = _dimension_from(radii, integrals)
    return ChaosFeatureVector(
        lambda1=res.lambda1,
        corr_dim=corr_dim,
        integrals=integrals,
        radii=radii,
        theiler=config.theiler,
        fit_range=res.fit_range,
        r2=res.r2,
        low_r2=res.low_r2,
    )
