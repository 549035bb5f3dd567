"""Cumulants of the signal/interference aggregates and moment transforms.

The aggregate received power from transmitters in an annulus [r_lo, r_hi]
around the origin, with density lambda, path loss P r^{-alpha} and i.i.d.
channel gains G, has cumulants in closed form (Campbell's theorem):

    kappa_n = 2 pi lambda mu_n(G) P^n (r_lo^{2-n alpha} - r_hi^{2-n alpha}) / (n alpha - 2)

Omega = theta*Y - X combines the interference aggregate Y (outside the
cooperation radius R) and the signal aggregate X (annulus [a, R]); its
cumulants follow by independence of disjoint regions.  Moment <-> cumulant
conversion goes through partial Bell polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, CapabilityError, DivergenceError, DomainError

# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class NetworkGeometry:
    """PPP intensity, exclusion/cooperation radii, path loss, transmit power."""

    intensity: float       # lambda, 1/m^2
    a: float               # exclusion radius, m
    R: float               # cooperation radius, m
    alpha: float           # path-loss exponent
    P: float = 1.0         # transmit power, linear

    def __post_init__(self):
        if not 0 < self.a < self.R:
            raise ArgumentError(f"need 0 < a < R, got a={self.a}, R={self.R}")
        if self.alpha <= 2:
            raise ArgumentError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if self.intensity <= 0 or self.P <= 0:
            raise ArgumentError("intensity and power must be positive")


@dataclass(frozen=True)
class FadingModel:
    """Channel power gain model: raw moments always, an MGF when it exists.

    kind is one of "unit" (deterministic G = 1), "gamma" (shape alpha_f,
    rate beta_f; Rayleigh power is shape 1), or "lognormal" (moments exist
    but the MGF diverges, so MGF-requiring paths must reject it).
    """

    kind: str
    shape: float = 1.0     # gamma alpha_f
    rate: float = 1.0      # gamma beta_f
    mu_ln: float = 0.0
    sigma_ln: float = 0.0

    @classmethod
    def unit(cls):
        return cls(kind="unit")

    @classmethod
    def gamma(cls, shape: float, rate: float):
        if shape <= 0 or rate <= 0:
            raise ArgumentError("gamma fading needs positive shape and rate")
        return cls(kind="gamma", shape=shape, rate=rate)

    @classmethod
    def lognormal(cls, mu_ln: float, sigma_ln: float):
        if sigma_ln <= 0:
            raise ArgumentError("lognormal fading needs sigma > 0")
        return cls(kind="lognormal", mu_ln=mu_ln, sigma_ln=sigma_ln)

    def moment(self, n: int) -> float:
        """Raw moment mu_n(G) = E[G^n]."""
        if n < 0:
            raise ArgumentError("moment order must be >= 0")
        if n == 0:
            return 1.0
        if self.kind == "unit":
            return 1.0
        if self.kind == "gamma":
            # Gamma(shape+n)/Gamma(shape)/rate^n as a stable product
            out = 1.0
            for k in range(n):
                out *= (self.shape + k) / self.rate
            return out
        if self.kind == "lognormal":
            return math.exp(n * self.mu_ln + 0.5 * n * n * self.sigma_ln**2)
        raise ArgumentError(f"unknown fading kind {self.kind!r}")

    @property
    def has_mgf(self) -> bool:
        return self.kind in ("unit", "gamma")

    def mgf(self, t):
        """E[e^{-tG}] for real or complex t (array-friendly)."""
        if self.kind == "unit":
            return np.exp(-np.asarray(t))
        if self.kind == "gamma":
            return (1.0 + np.asarray(t) / self.rate) ** (-self.shape)
        raise CapabilityError("MGF does not exist for lognormal fading")


@dataclass(frozen=True)
class CumulantSet:
    """Ordered cumulants kappa_1..kappa_N."""

    kappa: tuple

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        if len(self.kappa) < 1:
            raise ArgumentError("need at least kappa_1")

    @property
    def order(self) -> int:
        return len(self.kappa)

    def __getitem__(self, n: int) -> float:
        """kappa_n, 1-based."""
        if not 1 <= n <= self.order:
            raise ArgumentError(f"kappa_{n} not available (order {self.order})")
        return self.kappa[n - 1]

    @property
    def skewness(self) -> float:
        return self[3] / self[2] ** 1.5

    @property
    def excess_kurtosis(self) -> float:
        return self[4] / self[2] ** 2


@dataclass(frozen=True)
class MomentSet:
    """Ordered raw moments mu_0..mu_N with mu_0 = 1."""

    mu: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        if len(self.mu) < 2 or self.mu[0] != 1.0:
            raise ArgumentError("MomentSet needs mu_0 = 1 followed by mu_1..")

    @property
    def order(self) -> int:
        return len(self.mu) - 1

    def __getitem__(self, n: int) -> float:
        if not 0 <= n <= self.order:
            raise ArgumentError(f"mu_{n} not available (order {self.order})")
        return self.mu[n]


# ---------------------------------------------------------------------------
# Bell polynomials and moment <-> cumulant transforms


def bell_partial(n: int, k: int, x) -> float:
    """Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).

    Uses the standard recursion
        B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B_{n-i, k-1}
    with B_{0,0} = 1 and B_{n,0} = B_{0,k} = 0 otherwise.
    """
    if not (1 <= k <= n):
        raise ArgumentError(f"need 1 <= k <= n, got n={n}, k={k}")
    x = tuple(float(v) for v in x)
    if len(x) < n - k + 1:
        raise ArgumentError(f"need at least {n - k + 1} entries in x, got {len(x)}")
    return _bell(n, k, x)


@lru_cache(maxsize=None)
def _bell(n: int, k: int, x: tuple) -> float:
    if n == 0 and k == 0:
        return 1.0
    if n == 0 or k == 0:
        return 0.0
    total = 0.0
    for i in range(1, n - k + 2):
        total += math.comb(n - 1, i - 1) * x[i - 1] * _bell(n - i, k - 1, x)
    return total


def cumulants_to_moments(k: CumulantSet) -> MomentSet:
    """mu_n = sum_k B_{n,k}(kappa_1, ...)."""
    kap = k.kappa
    mus = [1.0]
    for n in range(1, len(kap) + 1):
        mus.append(sum(_bell(n, j, kap[: n - j + 1]) for j in range(1, n + 1)))
    return MomentSet(tuple(mus))


def moments_to_cumulants(m: MomentSet) -> CumulantSet:
    """kappa_n = sum_k (-1)^{k-1} (k-1)! B_{n,k}(mu_1, ...)."""
    mu = m.mu[1:]
    kap = []
    for n in range(1, len(mu) + 1):
        s = 0.0
        for j in range(1, n + 1):
            s += (-1) ** (j - 1) * math.factorial(j - 1) * _bell(n, j, mu[: n - j + 1])
        kap.append(s)
    return CumulantSet(tuple(kap))


def log_derivatives(g_derivs, g0: float):
    """Derivatives of log g at a point from derivatives of g.

    g_derivs = (g', g'', ..., g^(N)); returns (d/dt log g, ..., d^N/dt^N log g).
    Same Bell-polynomial combination as moments_to_cumulants with scale g0.
    """
    d = tuple(float(v) for v in g_derivs)
    out = []
    for n in range(1, len(d) + 1):
        s = 0.0
        for j in range(1, n + 1):
            s += (-1) ** (j - 1) * math.factorial(j - 1) * _bell(n, j, d[: n - j + 1]) / g0**j
        out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# Campbell cumulants of the aggregates and of Omega


def campbell_cumulant(n: int, geom: NetworkGeometry, fading: FadingModel,
                      r_lo: float, r_hi: float) -> float:
    """n-th cumulant of the aggregate power from the annulus [r_lo, r_hi]."""
    if n < 1:
        raise ArgumentError("cumulant order must be >= 1")
    if not 0 < r_lo < r_hi:
        raise ArgumentError(f"need 0 < r_lo < r_hi, got ({r_lo}, {r_hi})")
    na2 = n * geom.alpha - 2.0
    if na2 <= 0:
        raise DivergenceError(
            f"integral diverges: n*alpha = {n * geom.alpha} <= 2")
    hi_term = 0.0 if math.isinf(r_hi) else r_hi**(-na2)
    return (2.0 * math.pi * geom.intensity * fading.moment(n) * geom.P**n
            * (r_lo**(-na2) - hi_term) / na2)


def omega_cumulant(n: int, geom: NetworkGeometry, fading: FadingModel,
                   theta: float, window: float = math.inf) -> float:
    """n-th cumulant of Omega = theta*Y - X.

    Y aggregates [R, window) (interference), X aggregates [a, R) (signal);
    window defaults to infinity, matching the unbounded field.
    """
    if theta <= 0:
        raise ArgumentError(f"threshold must be positive, got {theta}")
    if window <= geom.R:
        raise ArgumentError("window must exceed the cooperation radius")
    y = campbell_cumulant(n, geom, fading, geom.R, window)
    x = campbell_cumulant(n, geom, fading, geom.a, geom.R)
    return theta**n * y + (-1.0) ** n * x


def omega_cumulant_set(geom: NetworkGeometry, fading: FadingModel, theta: float,
                       order: int = 8, window: float = math.inf) -> CumulantSet:
    """CumulantSet of Omega up to ``order``."""
    return CumulantSet(tuple(
        omega_cumulant(n, geom, fading, theta, window) for n in range(1, order + 1)))


def omega_shape_stats(geom: NetworkGeometry, fading: FadingModel):
    """(skew^2, excess kurtosis) of Omega in the small-a limit.

    For a << R the signal aggregate dominates every cumulant ratio, so the
    shape statistics reduce to ratios of the limiting X cumulants
    kappa_n = 2 pi lambda mu_n(G) P^n a^{2-n alpha} / (n alpha - 2)
    and the threshold drops out.  Written out:

        skew^2  = 8 (alpha-1)^3 / (3 alpha-2)^2 * (mu_3^2/mu_2^3) / (2 pi lambda a^2)
        ex_kurt = (alpha-1)^2 / (2 alpha-1) * (mu_4/mu_2^2) / (pi lambda a^2)

    Deterministic unit fading has zero gain variance, so the gain shape ratios
    it would scale are undefined; rejected.
    """
    if fading.kind == "unit":
        raise ArgumentError("shape statistics are undefined for deterministic fading")
    lam, a, al, P = geom.intensity, geom.a, geom.alpha, geom.P

    def lim(n):
        return 2.0 * math.pi * lam * fading.moment(n) * P**n * a**(2 - n * al) / (n * al - 2)

    k2, k3, k4 = lim(2), lim(3), lim(4)
    return k3**2 / k2**3, k4 / k2**2
