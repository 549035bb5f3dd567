"""Saddle point approximations of Pr(Omega > omega).

Works in the forward convention Kbar(s) = K(-s) = log E[e^{s Omega}], so the
saddle solves Kbar'(s_hat) = omega.  Four base distributions are available:

* ``normal``  - Lugannani-Rice.
* ``chisq``   - gamma/chi-square base matched by skewness.
* ``ig``      - inverse-Gaussian base matched by skewness.
* ``nig``     - normal-inverse-Gaussian base matched by skewness and kurtosis.

All non-normal bases use the same master formula

    F_hat = G_Z(z_hat) + g_Z(z_hat) * (1/s_base - 1/u_hat),
    u_hat = s_hat * sqrt(Kbar''(s_hat) / L_Z''(s_base)),

which is invariant to the base's scale normalization.  Bases that require
positive skewness (chisq, ig) mirror the problem when the target is skewed
the other way; any base that fails its validity condition falls back to the
normal base with a recorded diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special, stats

from .errors import ArgumentError, SaddleError
from .quadrature import integrate_adaptive
from .result import OutageResult, clamp_probability
from .specfun import lambert_w, normal_cdf, normal_pdf

_BASES = ("normal", "chisq", "ig", "nig")
_NEAR_MEAN = 1e-4


@dataclass(frozen=True)
class SaddleContext:
    """Saddle location and local shape of Kbar at the saddle."""

    s_hat: float
    c: float        # s_hat * omega - Kbar(s_hat) >= 0
    k2: float       # Kbar''(s_hat)
    k3: float       # Kbar'''(s_hat)
    k4: float       # Kbar''''(s_hat)

    @property
    def eta(self) -> float:
        return self.k3 * self.k3 / self.k2**3

    @property
    def rho(self) -> float:
        return self.k4 / (self.k2 * self.k2)

    def mirrored(self) -> "SaddleContext":
        return SaddleContext(-self.s_hat, self.c, self.k2, -self.k3, self.k4)


class _BaseFailure(Exception):
    """A non-normal base could not be fit; carries the reason."""


def _kbar(cgf, s: float) -> float:
    return float(np.real(cgf.eval(-s)))


def _kbar_deriv(cgf, n: int, s: float, k2: float | None = None):
    """(-1)^n K^(n)(-s), with a finite-difference fallback for n >= 3."""
    try:
        return (-1.0) ** n * cgf.deriv(n, -s), False
    except (NotImplementedError, ArgumentError):
        if k2 is None or n < 3:
            raise
        h = 1e-4 / math.sqrt(k2)
        if n == 3:
            d = (cgf.deriv(2, -s - h) - cgf.deriv(2, -s + h)) / (2.0 * h)
        else:
            d = (cgf.deriv(2, -s - h) - 2.0 * cgf.deriv(2, -s)
                 + cgf.deriv(2, -s + h)) / (h * h)
        return d, True


def solve_saddle(cgf, omega: float = 0.0) -> tuple[SaddleContext, tuple[str, ...]]:
    """Locate Kbar'(s_hat) = omega and collect local derivatives."""
    notes: list[str] = []
    lo_t, hi_t = cgf.strip()
    s_lo, s_hi = -hi_t, -lo_t      # strip of Kbar

    def kp(s):
        return -cgf.deriv(1, -s)

    s_hat = None
    closed = getattr(cgf, "model", None)
    if omega == 0.0 and closed is not None and hasattr(closed, "aggregation"):
        from .cgf import case_a_saddle
        t_hat, how = case_a_saddle(closed)
        s_hat = -t_hat
        notes.append(f"saddle:{how}")
    if s_hat is None:
        k1 = -cgf.deriv(1, 0.0)    # Kbar'(0) = kappa_1
        if omega == k1:
            s_hat = 0.0
        else:
            direction = 1.0 if omega > k1 else -1.0
            edge = s_hi if direction > 0 else s_lo
            h = 0.5 * (1.0 / math.sqrt(cgf.deriv(2, 0.0)))
            prev = 0.0
            for _ in range(200):
                step = direction * h
                cand = prev + step
                if math.isfinite(edge) and (cand - edge) * direction >= 0:
                    cand = prev + 0.5 * (edge - prev)
                if (kp(cand) - omega) * direction >= 0:
                    bracket = sorted((prev, cand))
                    s_hat = optimize.brentq(lambda s: kp(s) - omega,
                                            bracket[0], bracket[1],
                                            xtol=5e-16, rtol=8.9e-16)
                    break
                prev = cand
                h *= 2.0
            else:
                raise SaddleError("saddle bracket expansion failed")
    resid = abs(kp(s_hat) - omega)
    if resid > 1e-10 * max(1.0, abs(omega)):
        raise SaddleError(f"saddle residual {resid:.2e} exceeds tolerance")

    c = s_hat * omega - _kbar(cgf, s_hat)
    c = max(c, 0.0)
    k2 = cgf.deriv(2, -s_hat)
    if not k2 > 0:
        raise SaddleError("Kbar'' at the saddle is not positive")
    k3, fd3 = _kbar_deriv(cgf, 3, s_hat, k2)
    k4, fd4 = _kbar_deriv(cgf, 4, s_hat, k2)
    if fd3 or fd4:
        notes.append("reduced_order:finite-difference k3/k4")
    return SaddleContext(s_hat, c, float(k2), float(k3), float(k4)), tuple(notes)


# ---------------------------------------------------------------------------
# bases


def _lr_cdf(ctx: SaddleContext) -> float:
    """Lugannani-Rice CDF estimate F_hat(omega)."""
    z = math.copysign(math.sqrt(2.0 * ctx.c), ctx.s_hat)
    if abs(z) < _NEAR_MEAN:
        return normal_cdf(z) + normal_pdf(z) * ctx.k3 / (6.0 * ctx.k2**1.5)
    u = ctx.s_hat * math.sqrt(ctx.k2)
    return normal_cdf(z) + normal_pdf(z) * (1.0 / z - 1.0 / u)


def _master(ctx: SaddleContext, G_z: float, g_z: float, s_base: float,
            lpp: float) -> float:
    if abs(ctx.s_hat) * math.sqrt(ctx.k2) < _NEAR_MEAN:
        return G_z
    u_hat = ctx.s_hat * math.sqrt(ctx.k2 / lpp)
    return G_z + g_z * (1.0 / s_base - 1.0 / u_hat)


def _chisq_cdf(ctx: SaddleContext) -> float:
    if ctx.k3 <= 0:
        raise _BaseFailure("chi-square base needs positive skew at the saddle")
    alpha = 8.0 / ctx.eta
    x_arg = 2.0 * ctx.c / alpha
    if x_arg < 1e-6:
        # Lambert W is a double root at the branch point (saddle at the
        # mean); iterate-and-halt solvers lose half their digits there, the
        # series in p = sqrt(2(1 + e x)) does not
        p = math.sqrt(2.0 * -math.expm1(-x_arg))
        if ctx.s_hat >= 0:
            p = -p
        w = -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0 - 43.0 * p**4 / 540.0
    else:
        arg = -math.exp(-x_arg - 1.0)
        branch = "principal" if ctx.s_hat < 0 else "lower"
        w = lambert_w(arg, branch=branch)
    z = -alpha * w
    if not z > 0:
        raise _BaseFailure("chi-square base point collapsed")
    s_base = 0.5 * (1.0 - alpha / z)
    lpp = 2.0 * z * z / alpha
    return _master(ctx, float(stats.chi2.cdf(z, alpha)),
                   float(stats.chi2.pdf(z, alpha)), s_base, lpp)


def _ig_cdf(ctx: SaddleContext) -> float:
    if ctx.k3 <= 0:
        raise _BaseFailure("inverse-Gaussian base needs positive skew at the saddle")
    z = ctx.eta / 9.0
    den = 1.0 + math.copysign(math.sqrt(2.0 * ctx.c * ctx.eta / 9.0), ctx.s_hat)
    if den <= 0:
        raise _BaseFailure("inverse-Gaussian base mean is not positive")
    mu_b = z / den
    s_base = 0.5 * (mu_b**-2 - z**-2)
    lpp = z**3
    return _master(ctx, float(stats.invgauss.cdf(z, mu_b)),
                   float(stats.invgauss.pdf(z, mu_b)), s_base, lpp)


def _nig_pdf(z, alpha: float, beta: float):
    gamma0 = math.sqrt(alpha * alpha - beta * beta)
    w = np.sqrt(1.0 + np.asarray(z) ** 2)
    return (alpha / math.pi * special.k1e(alpha * w)
            * np.exp(gamma0 + beta * np.asarray(z) - alpha * w) / w)


def _nig_cdf_quad(z: float, alpha: float, beta: float) -> float:
    if z <= 0:
        ext = 60.0 / (alpha + beta)
        val, _, _ = integrate_adaptive(lambda x: _nig_pdf(x, alpha, beta),
                                       z - ext, z, 1e-12)
        return float(val)
    ext = 60.0 / (alpha - beta)
    val, _, _ = integrate_adaptive(lambda x: _nig_pdf(x, alpha, beta),
                                   z, z + ext, 1e-12)
    return float(1.0 - val)


def _nig_cdf(ctx: SaddleContext) -> float:
    eta, rho = ctx.eta, ctx.rho
    if not 3.0 * rho > 5.0 * eta:
        raise _BaseFailure("normal-inverse-Gaussian base needs 3 rho > 5 eta")
    z = math.copysign((3.0 * rho / max(eta, 1e-300) - 5.0) ** -0.5, ctx.k3) \
        if eta > 0 else 0.0
    alpha = 9.0 / math.sqrt((3.0 * rho - 5.0 * eta) * (3.0 * rho - 4.0 * eta))
    wz = math.sqrt(1.0 + z * z)
    E = alpha * wz - ctx.c
    disc = alpha * alpha * (1.0 + z * z) - E * E
    if disc < 0:
        raise _BaseFailure("normal-inverse-Gaussian shape equations have no root")
    sigma = 1.0 if ctx.s_hat < 0 else -1.0
    beta = (E * z + sigma * math.sqrt(disc)) / (1.0 + z * z)
    if not abs(beta) < alpha or E - beta * z < 0:
        raise _BaseFailure("normal-inverse-Gaussian parameters out of range")
    s_base = -beta + alpha * z / wz
    lpp = wz**3 / alpha
    return _master(ctx, _nig_cdf_quad(z, alpha, beta),
                   float(_nig_pdf(z, alpha, beta)), s_base, lpp)


# ---------------------------------------------------------------------------
# public entry point


def outage_spa(cgf, omega: float = 0.0, base: str = "normal") -> OutageResult:
    """Outage probability Pr(Omega > omega) with the requested base."""
    if base not in _BASES:
        raise ArgumentError(f"unknown saddle point base {base!r}; "
                            f"choose one of {', '.join(_BASES)}")
    ctx, notes = solve_saddle(cgf, omega)
    notes = list(notes)
    F = None
    if base == "normal":
        F = _lr_cdf(ctx)
    else:
        work = ctx
        mirrored = False
        if base in ("chisq", "ig") and ctx.k3 <= 0:
            work = ctx.mirrored()
            mirrored = True
        try:
            if base == "chisq":
                F_w = _chisq_cdf(work)
            elif base == "ig":
                F_w = _ig_cdf(work)
            else:
                F_w = _nig_cdf(work)
            F = 1.0 - F_w if mirrored else F_w
            if mirrored:
                notes.append("mirrored")
        except _BaseFailure as exc:
            notes.append(f"fallback_to_normal: {exc}")
            F = _lr_cdf(ctx)
    prob = 1.0 - F
    prob = clamp_probability(prob, notes)
    return OutageResult(probability=prob, method=f"spa:{base}",
                        saddle_point=ctx.s_hat, notes=tuple(notes))
