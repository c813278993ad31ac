"""Seeded random streams and the three distribution families the model needs.

Every stochastic consumer in the simulation owns its own :class:`RngHandle`,
derived from the run seed and a fixed stream id, so two scenarios run with the
same seed see the same researcher and journal populations.

Samplers accept either scalars (hot path, returns ``float``) or a ``size``
argument (returns ``numpy.ndarray``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import gammaln, log_ndtr, ndtr, ndtri, ndtri_exp

from pubsim.errors import ConfigurationError, DomainError

# One stream per logical consumer; ids are part of the reproducibility contract.
STREAM_IDS: dict[str, int] = {
    "population": 0,
    "paper_quality": 1,
    "review_noise": 2,
    "journal_perception": 3,
    "scheduler": 4,
    "reviewer_selection": 5,
}

GUMBEL_LOWER_TAIL = 0.005
GUMBEL_UPPER_TAIL = 0.995

_U64 = 2**64
_SQRT2 = math.sqrt(2.0)


@dataclass
class RngHandle:
    """A PCG64 stream keyed by ``(seed, stream_id)``.

    Streams with different ids are spawned from one ``SeedSequence`` via
    distinct spawn keys and are statistically independent.
    """

    seed: int
    stream_id: int
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < _U64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if int(self.stream_id) < 0:
            raise ConfigurationError(f"stream_id must be non-negative, got {self.stream_id}")
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def random(self, size=None):
        return self.generator.random(size)


def make_streams(seed: int) -> dict[str, RngHandle]:
    """Return one fresh handle per named consumer."""
    return {name: RngHandle(seed, sid) for name, sid in STREAM_IDS.items()}


# --------------------------------------------------------------------------
# Bounded Gumbel
# --------------------------------------------------------------------------


def _std_gumbel_quantile(u, skew: str):
    if skew == "right":
        return -np.log(-np.log(u))
    return np.log(-np.log1p(-u))


@dataclass(frozen=True)
class BoundedGumbelSpec:
    """Gumbel law restricted to its central 99% and mapped onto a target support.

    ``a`` and ``b`` are the 0.5% and 99.5% quantiles of the standard law of the
    requested skew; ``alpha`` and ``x0`` are the scale and location that send
    ``(a, b)`` onto ``(support_lo, support_hi)``.
    """

    skew: Literal["right", "left"]
    support_lo: float
    support_hi: float
    a: float = field(init=False)
    b: float = field(init=False)
    alpha: float = field(init=False)
    x0: float = field(init=False)

    def __post_init__(self) -> None:
        if self.skew not in ("right", "left"):
            raise ConfigurationError(f"skew must be 'right' or 'left', got {self.skew!r}")
        lo, hi = float(self.support_lo), float(self.support_hi)
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise ConfigurationError(f"inverted or empty support ({lo}, {hi})")
        a = float(_std_gumbel_quantile(GUMBEL_LOWER_TAIL, self.skew))
        b = float(_std_gumbel_quantile(GUMBEL_UPPER_TAIL, self.skew))
        alpha = (hi - lo) / (b - a)
        if not alpha > 0:
            raise ConfigurationError("bounded Gumbel scale must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "x0", lo - alpha * a)

    def transform(self, u):
        """Map ``u`` in ``[0.005, 0.995]`` to the bounded support."""
        return self.x0 + self.alpha * _std_gumbel_quantile(u, self.skew)


def bounded_gumbel_sample(rng: RngHandle, spec: BoundedGumbelSpec, size=None):
    u = GUMBEL_LOWER_TAIL + (GUMBEL_UPPER_TAIL - GUMBEL_LOWER_TAIL) * rng.generator.random(size)
    x = spec.transform(u)
    # rounding can land a hair outside the support at the extreme quantiles
    x = np.clip(x, spec.support_lo, spec.support_hi)
    return float(x) if size is None else x


# --------------------------------------------------------------------------
# Truncated normal
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncNormalSpec:
    mu: float
    sigma: float
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if not self.lo < self.hi:
            raise ConfigurationError(f"need lo < hi, got ({self.lo}, {self.hi})")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        alpha = (self.lo - self.mu) / self.sigma
        beta = (self.hi - self.mu) / self.sigma
        z = (x - self.mu) / self.sigma
        dens = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi) / self.sigma / (ndtr(beta) - ndtr(alpha))
        return np.where((x > self.lo) & (x < self.hi), dens, 0.0)


def truncnorm_ppf(u, mu, sigma, lo, hi):
    """Inverse CDF of ``N(mu, sigma)`` truncated to ``(lo, hi)``.

    Broadcasts over all arguments. Intervals lying entirely in the upper tail
    are mirrored, and the CDF is handled in log space, so intervals many
    standard deviations from ``mu`` still invert accurately.
    """
    u = np.asarray(u, dtype=float)
    mu = np.asarray(mu, dtype=float)
    alpha = (lo - mu) / sigma
    beta = (hi - mu) / sigma
    flip = alpha > 0
    lo_z = np.where(flip, -beta, alpha)
    hi_z = np.where(flip, -alpha, beta)
    # in the mirrored case the lower end of the interval is the upper quantile
    w = np.where(flip, 1.0 - u, u)
    with np.errstate(divide="ignore"):
        log_p = np.logaddexp(np.log1p(-w) + log_ndtr(lo_z), np.log(w) + log_ndtr(hi_z))
    z = ndtri_exp(log_p)
    z = np.where(flip, -z, z)
    x = mu + sigma * z
    return np.clip(x, np.nextafter(lo, hi), np.nextafter(hi, lo))


def _truncnorm_ppf_scalar(u: float, mu: float, sigma: float, lo: float, hi: float) -> float:
    alpha = (lo - mu) / sigma
    beta = (hi - mu) / sigma
    flip = alpha > 0
    if flip:
        alpha, beta, u = -beta, -alpha, 1.0 - u
    if alpha > -5.0:
        # away from the lower tail plain CDF arithmetic keeps full precision
        pa = 0.5 * math.erfc(-alpha / _SQRT2)
        pb = 0.5 * math.erfc(-beta / _SQRT2)
        z = float(ndtri(pa + u * (pb - pa)))
    else:
        log_a = math.log1p(-u) + float(log_ndtr(alpha)) if u < 1.0 else -math.inf
        log_b = math.log(u) + float(log_ndtr(beta)) if u > 0.0 else -math.inf
        z = float(ndtri_exp(np.logaddexp(log_a, log_b)))
    x = mu + sigma * (-z if flip else z)
    if x <= lo:
        return math.nextafter(lo, hi)
    if x >= hi:
        return math.nextafter(hi, lo)
    return x


def trunc_normal_draw(rng: RngHandle, mu, sigma: float, lo: float, hi: float, size=None):
    """Draw truncated normals; ``mu`` may be an array (one draw per entry)."""
    if size is None:
        if np.ndim(mu) == 0:
            return _truncnorm_ppf_scalar(rng.generator.random(), float(mu), sigma, lo, hi)
        size = np.shape(mu)
    return truncnorm_ppf(rng.generator.random(size), mu, sigma, lo, hi)


def trunc_normal_sample(rng: RngHandle, spec: TruncNormalSpec, size=None):
    return trunc_normal_draw(rng, spec.mu, spec.sigma, spec.lo, spec.hi, size)


# --------------------------------------------------------------------------
# Regularized incomplete beta
# --------------------------------------------------------------------------

_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAXIT = 500


def _betacf_scalar(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise DomainError(f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}")


def _betainc_scalar(x: float, a: float, b: float) -> float:
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf_scalar(a, b, x) / a
    return 1.0 - front * _betacf_scalar(b, a, 1.0 - x) / b


def _betacf_array(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    # Same recurrence as the scalar version without the tiny-denominator guards;
    # the caller re-evaluates any non-finite entry on the guarded scalar path.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 / (1.0 - qab * x / qap)
    h = d.copy()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for m in range(1, _CF_MAXIT + 1):
            m2 = 2 * m
            aa = m * (b - m) * x / ((qam + m2) * (a + m2))
            d = 1.0 / (1.0 + aa * d)
            c = 1.0 + aa / c
            h *= d * c
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
            d = 1.0 / (1.0 + aa * d)
            c = 1.0 + aa / c
            delta = d * c
            h *= delta
            if not (np.abs(delta - 1.0) >= _CF_EPS).any():
                return h
    raise DomainError("incomplete beta continued fraction did not converge")


def _betainc_array(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    x, a, b = np.broadcast_arrays(x, a, b)
    out = np.empty(x.shape, dtype=float)
    out[x == 0.0] = 0.0
    out[x == 1.0] = 1.0
    inner = (x > 0.0) & (x < 1.0)
    if not inner.any():
        return out
    xi, ai, bi = x[inner], a[inner], b[inner]
    front = np.exp(
        gammaln(ai + bi) - gammaln(ai) - gammaln(bi) + ai * np.log(xi) + bi * np.log1p(-xi)
    )
    direct = xi < (ai + 1.0) / (ai + bi + 2.0)
    # evaluate the fraction on whichever side converges quickly
    aa = np.where(direct, ai, bi)
    bb = np.where(direct, bi, ai)
    xx = np.where(direct, xi, 1.0 - xi)
    cf = _betacf_array(aa, bb, xx)
    vals = np.where(direct, front * cf / ai, 1.0 - front * cf / bi)
    bad = ~np.isfinite(vals)
    if bad.any():
        vals[bad] = [_betainc_scalar(*t) for t in zip(xi[bad], ai[bad], bi[bad])]
    out[inner] = vals
    return out


def regularized_incomplete_beta(x, a, b):
    """Regularized incomplete beta ``I_x(a, b)``, the Beta(a, b) CDF at ``x``.

    Scalars take a pure-Python path; arrays are evaluated elementwise in numpy.
    Absolute error is below 1e-10 for the parameter ranges the model uses.
    """
    if np.ndim(x) == 0 and np.ndim(a) == 0 and np.ndim(b) == 0:
        x, a, b = float(x), float(a), float(b)
        if not (a > 0 and b > 0):
            raise DomainError(f"shape parameters must be positive, got a={a}, b={b}")
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"x must lie in [0, 1], got {x}")
        return _betainc_scalar(x, a, b)
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(a > 0) and np.all(b > 0)):
        raise DomainError("shape parameters must be positive")
    if not np.all((x >= 0.0) & (x <= 1.0)):
        raise DomainError("x must lie in [0, 1]")
    return _betainc_array(x, a, b)
