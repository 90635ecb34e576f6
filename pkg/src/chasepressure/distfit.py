"""Fit gamma, exponential, and Weibull models to phase-pooled PI values.

Values of exactly 0 mark a finished chase and carry no distributional
information, so they are dropped before fitting; all three families have
support on the positive half-line. Family selection is by minimum AIC and
goodness of fit is assessed with a parametric-bootstrap K-S test (classical
K-S p-values are invalid when parameters are estimated from the data).
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, gammainc, gammaln, polygamma

from .errors import DegenerateSample, EmptyInput
from .phases import DEATH, DEFAULT_PHASES, MIDDLE, POWERPLAY
from .pressure import PiSequence

log = logging.getLogger(__name__)

# Bundled fallback gamma parameters (shape, rate) per phase, used when no
# fitted corpus is available. Their means are roughly 1.32, 1.74, 2.86.
DEFAULT_PHASE_GAMMAS: dict[str, tuple[float, float]] = {
    POWERPLAY: (38.276, 28.931),
    MIDDLE: (18.447, 10.62),
    DEATH: (3.667, 1.286),
}


class Family(enum.Enum):
    GAMMA = "gamma"
    EXPONENTIAL = "exponential"
    WEIBULL = "weibull"


_N_PARAMS = {Family.GAMMA: 2, Family.EXPONENTIAL: 1, Family.WEIBULL: 2}


@dataclass(frozen=True)
class PhaseFit:
    """MLE fit of one family to one pool of positive PI values."""

    family: Family
    shape: float  # 1.0 for the exponential
    rate: float
    n: int
    log_likelihood: float
    aic: float
    bic: float
    ks_statistic: float
    phase: str | None = None
    bootstrap_p: float | None = None
    n_bootstrap: int | None = None

    @property
    def mean(self) -> float:
        if self.family is Family.WEIBULL:
            return math.gamma(1 + 1 / self.shape) / self.rate
        return self.shape / self.rate

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family is Family.WEIBULL:
            return 1.0 - np.exp(-((x * self.rate) ** self.shape))
        if self.family is Family.EXPONENTIAL:
            return 1.0 - np.exp(-self.rate * x)
        return gammainc(self.shape, self.rate * x)

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.shape, self.rate
        if self.family is Family.WEIBULL:
            return (math.log(a) + a * math.log(b) + (a - 1) * np.log(x)
                    - (b * x) ** a)
        if self.family is Family.EXPONENTIAL:
            return math.log(b) - b * x
        return a * math.log(b) - gammaln(a) + (a - 1) * np.log(x) - b * x

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.family is Family.WEIBULL:
            return rng.weibull(self.shape, n) / self.rate
        if self.family is Family.EXPONENTIAL:
            return rng.exponential(1 / self.rate, n)
        return rng.gamma(self.shape, 1 / self.rate, n)


@dataclass(frozen=True)
class PhaseStats:
    phase: str
    n: int
    mean: float
    median: float
    sd: float
    p25: float
    p75: float

    @property
    def iqr(self) -> float:
        return self.p75 - self.p25


def partition_by_phase(
    seqs: list[PiSequence], phases=DEFAULT_PHASES
) -> dict[str, list[float]]:
    """Pool over-end PI values by the phase of their over number.

    Zeros (target reached) are excluded; use excluded_zero_count for the tally.
    """
    pools: dict[str, list[float]] = {p.label: [] for p in phases}
    for seq in seqs:
        for i, v in enumerate(seq.values):
            if v == 0.0:
                continue
            for p in phases:
                if p.contains(i + 1):
                    pools[p.label].append(v)
                    break
    return pools


def excluded_zero_count(seqs: list[PiSequence]) -> int:
    return sum(1 for s in seqs for v in s.values if v == 0.0)


def _clean(values) -> np.ndarray:
    x = np.asarray([v for v in values if v != 0.0], dtype=float)
    if x.size == 0:
        raise DegenerateSample("no positive values to fit")
    if np.any(x <= 0):
        raise DegenerateSample("values must be positive")
    return x


def _gamma_shape_newton(s) -> np.ndarray:
    """Solve log(a) - digamma(a) = s for the gamma shape, elementwise."""
    s = np.asarray(s, dtype=float)
    a = (3.0 - s + np.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(100):
        f = np.log(a) - digamma(a) - s
        a_next = np.clip(a - f / (1.0 / a - polygamma(1, a)), 1e-10, 1e12)
        if np.all(np.abs(a_next - a) <= 1e-12 * np.abs(a_next)):
            a = a_next
            break
        a = a_next
    return a


def _ks_statistic(x: np.ndarray, cdf) -> float:
    xs = np.sort(x)
    n = xs.size
    f = cdf(xs)
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(grid - f), np.max(f - (grid - 1 / n))))


def fit_family(values, family: Family, phase: str | None = None) -> PhaseFit:
    """Maximum-likelihood fit of one family to strictly positive values."""
    x = _clean(values)
    n = x.size
    mean = float(x.mean())
    logs = np.log(x)

    if family is Family.EXPONENTIAL:
        rate = 1.0 / mean
        shape = 1.0
        ll = n * math.log(rate) - rate * float(x.sum())
    elif family is Family.GAMMA:
        s = math.log(mean) - float(logs.mean())
        if s <= 0:
            raise DegenerateSample("sample has no spread; gamma fit undefined")
        shape = float(_gamma_shape_newton(s))
        rate = shape / mean
        ll = float(n * (shape * math.log(rate) - gammaln(shape))
                   + (shape - 1) * logs.sum() - rate * x.sum())
    elif family is Family.WEIBULL:
        if np.all(x == x[0]):
            raise DegenerateSample("sample has no spread; Weibull fit undefined")
        mlog = float(logs.mean())

        def g(k):
            xk = np.power(x, k)
            return float((xk * logs).sum() / xk.sum() - 1.0 / k - mlog)

        lo, hi = 1e-3, 1.0
        while g(hi) < 0 and hi < 1e4:
            hi *= 2
        shape = float(brentq(g, lo, hi, xtol=1e-12))
        scale = float(np.power(np.power(x, shape).mean(), 1.0 / shape))
        rate = 1.0 / scale
        ll = float(n * (math.log(shape) + shape * math.log(rate))
                   + (shape - 1) * logs.sum() - np.power(x * rate, shape).sum())
    else:
        raise ValueError(f"unknown family {family!r}")

    dim = _N_PARAMS[family]
    fit = PhaseFit(
        family=family, shape=shape, rate=rate, n=n,
        log_likelihood=ll,
        aic=2 * dim - 2 * ll,
        bic=dim * math.log(n) - 2 * ll,
        ks_statistic=0.0, phase=phase,
    )
    d = _ks_statistic(x, fit.cdf)
    return PhaseFit(**{**fit.__dict__, "ks_statistic": d})


def select_family(values, phase: str | None = None) -> tuple[PhaseFit, list[PhaseFit]]:
    """Fit all families and pick the minimum-AIC one.

    AIC ties within 1e-9 go to the family with fewer parameters. Returns the
    winner together with every candidate fit.
    """
    candidates = [fit_family(values, fam, phase) for fam in Family]
    best_aic = min(f.aic for f in candidates)
    tied = [f for f in candidates if f.aic - best_aic <= 1e-9]
    best = min(tied, key=lambda f: (_N_PARAMS[f.family], f.aic))
    return best, candidates


def bootstrap_ks(
    values, family: Family, B: int = 1000, seed: int = 0
) -> tuple[float, float]:
    """Parametric-bootstrap K-S test of one family against the data.

    Each of B resamples of size n is drawn from the fitted distribution and
    refit; p-hat is the fraction of resample statistics at least as large as
    the observed one. Resamples whose refit fails are skipped and logged.
    """
    if B < 100:
        raise ValueError("bootstrap size must be at least 100")
    x = _clean(values)
    n = x.size
    fit = fit_family(x, family)
    d_obs = fit.ks_statistic
    rng = np.random.default_rng(seed)
    grid = np.arange(1, n + 1) / n

    if family in (Family.GAMMA, Family.EXPONENTIAL):
        # Vectorized path: all resamples fitted at once.
        if family is Family.GAMMA:
            xs = np.sort(rng.gamma(fit.shape, 1 / fit.rate, (B, n)), axis=1)
            means = xs.mean(axis=1)
            s = np.log(means) - np.log(xs).mean(axis=1)
            shapes = _gamma_shape_newton(s)
            rates = shapes / means
            f = gammainc(shapes[:, None], rates[:, None] * xs)
        else:
            xs = np.sort(rng.exponential(1 / fit.rate, (B, n)), axis=1)
            rates = 1.0 / xs.mean(axis=1)
            f = 1.0 - np.exp(-rates[:, None] * xs)
        d_b = np.maximum((grid - f).max(axis=1), (f - (grid - 1 / n)).max(axis=1))
        return d_obs, float(np.mean(d_b >= d_obs))

    d_list = []
    for b in range(B):
        sample = fit.sample(n, rng)
        try:
            refit = fit_family(sample, family)
        except (DegenerateSample, ValueError) as exc:
            log.warning("bootstrap resample %d skipped: %s", b, exc)
            continue
        d_list.append(refit.ks_statistic)
    if not d_list:
        raise DegenerateSample("every bootstrap resample failed to fit")
    d_arr = np.asarray(d_list)
    return d_obs, float(np.mean(d_arr >= d_obs))


def phase_marginals(pools: dict[str, list[float]]) -> dict[str, PhaseStats]:
    """Sample statistics per phase; empty pools are omitted.

    Percentiles use linear interpolation; sd is the population form.
    """
    out: dict[str, PhaseStats] = {}
    for label, values in pools.items():
        if not values:
            continue
        x = np.asarray(values, dtype=float)
        p25, p50, p75 = np.percentile(x, [25, 50, 75])
        out[label] = PhaseStats(
            phase=label, n=x.size, mean=float(x.mean()), median=float(p50),
            sd=float(x.std()), p25=float(p25), p75=float(p75),
        )
    return out


def save_fits(fits: dict[str, tuple[PhaseFit, list[PhaseFit]]], path) -> None:
    """Write per-phase selected fits plus all candidates as JSON."""
    payload = {
        label: {
            "selected": _fit_to_dict(best),
            "candidates": [_fit_to_dict(f) for f in cands],
        }
        for label, (best, cands) in fits.items()
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)


def load_fits(path) -> dict[str, PhaseFit]:
    """Read the selected per-phase fits back from JSON."""
    with open(path) as fh:
        payload = json.load(fh)
    return {label: _fit_from_dict(entry["selected"]) for label, entry in payload.items()}


def _fit_to_dict(f: PhaseFit) -> dict:
    d = dict(f.__dict__)
    d["family"] = f.family.value
    return d


def _fit_from_dict(d: dict) -> PhaseFit:
    d = dict(d)
    d["family"] = Family(d["family"])
    return PhaseFit(**d)


def fit_phases(
    seqs: list[PiSequence], B: int = 1000, seed: int = 0, phases=DEFAULT_PHASES
) -> dict[str, tuple[PhaseFit, list[PhaseFit]]]:
    """Select and bootstrap-validate the best family for each phase pool."""
    pools = partition_by_phase(seqs, phases)
    out: dict[str, tuple[PhaseFit, list[PhaseFit]]] = {}
    for label, values in pools.items():
        if not values:
            raise EmptyInput(f"no values in phase {label}")
        best, candidates = select_family(values, label)
        d_obs, p_hat = bootstrap_ks(values, best.family, B, seed)
        best = PhaseFit(**{**best.__dict__, "bootstrap_p": p_hat, "n_bootstrap": B})
        out[label] = (best, candidates)
    return out
