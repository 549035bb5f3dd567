"""Orthogonal-polynomial reconstruction of the outage probability from moments.

Two base families: probabilists' Hermite polynomials against the standard
normal density, and Krishnamoorthy polynomials against the Student-t density
(degrees of freedom matched to the excess kurtosis).  A general Pearson-weight
route builds either family from the weight's moment recurrence using exact
rational arithmetic.

All weights are stored as *normalized densities*, so expanding a base
distribution in its own system gives a_0 = 1 and a_k = 0 for k >= 1.
The default pipeline standardizes Omega before expanding; the paper-literal
mode plugs raw moments into the base directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from .cumulants import (CumulantSet, MomentSet, cumulants_to_moments,
                        moments_to_cumulants)
from .errors import ArgumentError, CapabilityError
from .result import OutageResult, clamp_probability
from .specfun import beta_fn, normal_cdf, normal_pdf

_FOOTNOTE_TOL = 1e-6


@dataclass(frozen=True)
class Polynomial:
    """Coefficients by ascending power: p(x) = sum coeffs[i] * x^i."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class OrthogonalSystem:
    """Polynomials orthogonal against a normalized base density."""

    family: str                      # "hermite" | "krishnamoorthy" | "pearson"
    polys: tuple
    norms: tuple                     # C_k = int phi_k^2 w dx; may be inf
    v: int | None = None             # degrees of freedom for the t base
    notes: tuple = field(default=())

    @property
    def max_degree(self) -> int:
        return len(self.polys) - 1


# ---------------------------------------------------------------------------
# base-family constructors


def hermite_system(max_order: int) -> OrthogonalSystem:
    """He_0..He_max against the standard normal density; C_n = n!."""
    if max_order < 0:
        raise ArgumentError("max_order must be non-negative")
    polys = [np.array([1.0]), np.array([0.0, 1.0])]
    for n in range(2, max_order + 1):
        a = np.zeros(n + 1)
        a[1:] = polys[-1]
        b = np.zeros(n + 1)
        b[: n - 1] = polys[-2]
        polys.append(a - (n - 1) * b)
    polys = polys[: max_order + 1]
    return OrthogonalSystem(
        family="hermite",
        polys=tuple(Polynomial(tuple(p)) for p in polys),
        norms=tuple(float(math.factorial(n)) for n in range(max_order + 1)))


def t_density_moment(v: int, n: int) -> float:
    """Raw moment mu_n of the Student-t density; finite for n < v."""
    if n >= v:
        return math.inf
    if n % 2 == 1:
        return 0.0
    k = n // 2
    out = float(v) ** k * float(special.factorial2(max(n - 1, 1), exact=True))
    for j in range(1, k + 1):
        out /= v - 2 * j
    return out if n > 0 else 1.0


def _moment_norm(coeffs, moment_fn) -> float:
    """int p(x)^2 w(x) dx via the weight's moment sequence."""
    total = 0.0
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            m = moment_fn(i + j)
            if math.isinf(m):
                return math.inf
            total += ci * cj * m
    return total


def _krishnamoorthy_footnote_norm(v: int, n: int) -> float:
    """The printed closed-form norm (against the unnormalized weight)."""
    return (2.0 ** (1 - v + 2 * n) * math.pi * math.sqrt(v) / (v - 2 * n)
            * special.gamma(n + 1) * special.gamma(v - n + 1)
            / special.gamma((v + 1) / 2 - n) ** 2)


def krishnamoorthy_system(v: int) -> OrthogonalSystem:
    """T_0..T_{floor(v/2)} against the Student-t(v) density.

    Recurrence n T_n = (v+2-2n) x T_{n-1} - (v+2-n) v T_{n-2} with T_0 = 1
    and T_1 scaled to (v+1)x.  Norms come from the exact t moments; the
    printed closed-form norm constant is cross-checked and a warning note is
    attached when it disagrees (orthonormality is the ground truth).
    """
    if v < 5:
        raise ArgumentError("need v >= 5 for at least orders 0..2")
    k_max = v // 2
    polys = [np.array([1.0]), np.array([0.0, float(v)])]
    for n in range(2, k_max + 1):
        a = np.zeros(n + 1)
        a[1:] = polys[-1]
        b = np.zeros(n + 1)
        b[: n - 1] = polys[-2]
        polys.append(((v + 2 - 2 * n) * a - (v + 2 - n) * v * b) / n)
    polys = polys[: k_max + 1]
    polys[1] = polys[1] * (v + 1) / v
    norms = [_moment_norm(p, lambda n: t_density_moment(v, n)) for p in polys]
    # cross-check the printed constant (normalized by the weight mass
    # m_0 = sqrt(v) B(v/2, 1/2) to compare on the density scale)
    m0 = math.sqrt(v) * beta_fn(v / 2.0, 0.5)
    notes = []
    bad = [n for n in range(min(k_max, (v - 1) // 2) + 1)
           if math.isfinite(norms[n]) and abs(
               _krishnamoorthy_footnote_norm(v, n) / m0 - norms[n])
           > _FOOTNOTE_TOL * norms[n]]
    if bad:
        notes.append("printed norm constant disagrees with quadrature at "
                     f"degrees {bad}; using the quadrature (moment) values")
    return OrthogonalSystem(
        family="krishnamoorthy",
        polys=tuple(Polynomial(tuple(p)) for p in polys),
        norms=tuple(norms), v=v, notes=tuple(notes))


def pearson_orthopoly(a0: float, a1: float, b0: float, b1: float, b2: float,
                      max_order: int) -> OrthogonalSystem:
    """Orthogonal system for the Pearson weight w'/w = (a0+a1 x)/(b0+b1 x+b2 x^2).

    The weight's normalized moments satisfy
        m_{j+1} = -[(a0 + (j+1) b1) m_j + j b0 m_{j-1}] / (a1 + (j+2) b2),
    terminating when the denominator hits zero (heavy-tail moment cutoff);
    the polynomials follow by Gram-Schmidt on 1, x, x^2, ... in exact
    rational arithmetic, so both classic families are reproduced exactly.
    """
    if max_order < 1:
        raise ArgumentError("max_order must be at least 1")
    fa0, fa1, fb0, fb1, fb2 = (Fraction(x).limit_denominator(10**12)
                               for x in (a0, a1, b0, b1, b2))
    moments = [Fraction(1)]
    den = fa1 + 2 * fb2
    if den != 0:
        moments.append(-(fa0 + fb1) / den)
        for j in range(1, 2 * max_order):
            den = fa1 + (j + 2) * fb2
            if den == 0:
                break
            moments.append(-((fa0 + (j + 1) * fb1) * moments[j]
                             + j * fb0 * moments[j - 1]) / den)

    def inner(p, q):
        s = Fraction(0)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                if i + j >= len(moments):
                    return None
                s += pi * qj * moments[i + j]
        return s

    polys = [[Fraction(1)]]
    for n in range(1, max_order + 1):
        p = [Fraction(0)] * n + [Fraction(1)]
        ok = True
        for q in polys:
            num = inner(p, q)
            dq = inner(q, q)
            if num is None or dq is None or dq == 0:
                ok = False
                break
            c = num / dq
            p = [pi - c * (q[i] if i < len(q) else Fraction(0))
                 for i, pi in enumerate(p)]
        if not ok:
            break
        polys.append(p)
    norms = []
    for p in polys:
        s = inner(p, p)
        norms.append(float(s) if s is not None else math.inf)
    return OrthogonalSystem(
        family="pearson",
        polys=tuple(Polynomial(tuple(float(c) for c in p)) for p in polys),
        norms=tuple(norms))


# ---------------------------------------------------------------------------
# orthogonal moments and incomplete base moments


def orthogonal_moments(system: OrthogonalSystem, moments: MomentSet):
    """a_k = (1/C_k) sum_i phi_{ki} mu_i; zero where the norm is infinite."""
    if moments.order < system.max_degree:
        raise ArgumentError(
            f"need moments through order {system.max_degree}, "
            f"got {moments.order}")
    out = []
    for k, (poly, ck) in enumerate(zip(system.polys, system.norms)):
        if not math.isfinite(ck):
            out.append(0.0)
            continue
        out.append(sum(c * moments[i] for i, c in enumerate(poly.coeffs)) / ck)
    return out


def hermite_incomplete_moments(w: float, n_max: int):
    """I_n = int_{-inf}^w x^n phi(x) dx for the normal density phi."""
    pw = normal_pdf(w)
    vals = [normal_cdf(w), -pw]
    for n in range(2, n_max + 1):
        vals.append(-w ** (n - 1) * pw + (n - 1) * vals[n - 2])
    return vals[: n_max + 1]


def t_incomplete_moments(w: float, v: int, n_max: int):
    """J_n = int_{-inf}^w x^n f_v(x) dx for the normalized t density."""
    if n_max >= v - 1:
        raise ArgumentError("t incomplete moments need n < v - 1")
    m0 = math.sqrt(v) * beta_fn(v / 2.0, 0.5)
    core = (1.0 + w * w / v) ** (-(v - 1) / 2.0) / m0
    vals = [float(special.stdtr(v, w)), -(v / (v - 1.0)) * core]
    for n in range(2, n_max + 1):
        vals.append((v / (v - n)) * ((n - 1) * vals[n - 2] - w ** (n - 1) * core))
    return vals[: n_max + 1]


def density_minimum(system: OrthogonalSystem, coeffs, lo: float = -6.0,
                    hi: float = 6.0, n_grid: int = 241) -> float:
    """Minimum of the reconstructed density over [lo, hi] (quality metric)."""
    x = np.linspace(lo, hi, n_grid)
    series = np.zeros_like(x)
    for a_k, poly in zip(coeffs, system.polys):
        if a_k != 0.0:
            series += a_k * poly(x)
    if system.family == "krishnamoorthy":
        m0 = math.sqrt(system.v) * beta_fn(system.v / 2.0, 0.5)
        base = (1.0 + x * x / system.v) ** (-(system.v + 1) / 2.0) / m0
    else:
        base = normal_pdf(x)
    return float(np.min(series * base))


# ---------------------------------------------------------------------------
# outage pipelines


def _standardized_moments(cumulants: CumulantSet, scale: float,
                          order: int) -> MomentSet:
    """Moments of Z = scale * (Omega - kappa_1) from the cumulants of Omega."""
    kz = [0.0] + [scale ** n * cumulants[n] for n in range(2, order + 1)]
    return cumulants_to_moments(CumulantSet(tuple(kz)))


def outage_hermite(moments: MomentSet, eval_point: float, max_order: int = 6,
                   mode: str = "standardized") -> OutageResult:
    """Pr(Omega > eval_point) by Hermite expansion of the CDF."""
    if not 2 <= max_order <= 8:
        raise ArgumentError("max_order must lie in 2..8")
    if moments.order < max_order:
        raise ArgumentError(f"need moments through order {max_order}")
    if mode not in ("standardized", "paper-literal"):
        raise ArgumentError(f"unknown mode {mode!r}")
    system = hermite_system(max_order)
    notes = []
    if mode == "standardized":
        cums = moments_to_cumulants(moments)
        scale = 1.0 / math.sqrt(cums[2])
        mu_z = _standardized_moments(cums, scale, max_order)
        a = orthogonal_moments(system, mu_z)
        w_star = (eval_point - cums[1]) * scale
    else:
        a = orthogonal_moments(system, moments)
        w_star = eval_point
    inc = hermite_incomplete_moments(w_star, max_order)
    cdf = sum(a_k * sum(c * inc[i] for i, c in enumerate(poly.coeffs))
              for a_k, poly in zip(a, system.polys))
    dmin = density_minimum(system, a)
    if dmin < 0:
        notes.append(f"reconstructed density dips to {dmin:.3g}")
    prob = clamp_probability(1.0 - cdf, notes)
    return OutageResult(probability=prob, method="charlier:hermite",
                        truncation_order=max_order, notes=tuple(notes))


def match_dof(excess_kurtosis: float) -> int:
    """Degrees of freedom from moment matching: v = 6/ExKurt + 4, >= 5."""
    if excess_kurtosis <= 0:
        raise CapabilityError(
            "t base needs positive excess kurtosis; use the Hermite base")
    return max(5, round(6.0 / excess_kurtosis + 4.0))


def outage_krishnamoorthy(moments: MomentSet, cumulants: CumulantSet,
                          eval_point: float, max_order: int = 6,
                          mode: str = "standardized") -> OutageResult:
    """Pr(Omega > eval_point) by Krishnamoorthy (t-base) expansion."""
    if not 2 <= max_order <= 8:
        raise ArgumentError("max_order must lie in 2..8")
    if mode not in ("standardized", "paper-literal"):
        raise ArgumentError(f"unknown mode {mode!r}")
    v = match_dof(cumulants.excess_kurtosis)
    system = krishnamoorthy_system(v)
    notes = list(system.notes)
    # usable degrees: finite norm (2k < v) and within the requested order
    k_use = min(max_order, max(k for k in range(system.max_degree + 1)
                               if 2 * k < v))
    if mode == "standardized":
        k_use = min(k_use, cumulants.order)
    if k_use < max_order:
        notes.append(f"order truncated to {k_use} by finite-norm limit "
                     f"(v = {v})")
    sub = OrthogonalSystem(family=system.family,
                           polys=system.polys[: k_use + 1],
                           norms=system.norms[: k_use + 1], v=v)
    if mode == "standardized":
        scale = math.sqrt(v / ((v - 2.0) * cumulants[2]))
        mu_z = _standardized_moments(cumulants, scale, max(k_use, 2))
        a = orthogonal_moments(sub, mu_z)
        w_star = (eval_point - cumulants[1]) * scale
    else:
        if moments.order < k_use:
            raise ArgumentError(f"need moments through order {k_use}")
        a = orthogonal_moments(sub, moments)
        w_star = eval_point
    inc = t_incomplete_moments(w_star, v, k_use)
    cdf = sum(a_k * sum(c * inc[i] for i, c in enumerate(poly.coeffs))
              for a_k, poly in zip(a, sub.polys))
    dmin = density_minimum(sub, a)
    if dmin < 0:
        notes.append(f"reconstructed density dips to {dmin:.3g}")
    prob = clamp_probability(1.0 - cdf, notes)
    return OutageResult(probability=prob, method="charlier:t",
                        truncation_order=k_use, notes=tuple(notes))
