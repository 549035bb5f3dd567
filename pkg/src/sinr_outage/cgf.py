"""CGF models of Omega = theta*Y - X for the three uncertainty cases.

Sign convention throughout: K(t) = log E[e^{-t Omega}], so K'(0) = -kappa_1
and K^(n)(0) = (-1)^n kappa_n.  Complex evaluation on the imaginary axis
serves the inversion engine; real derivatives serve the saddle point methods.

Case A: fixed distances, random counts and gamma gains (closed form).
Case B: random distances in an annulus field, unit gains (radial quadrature;
        this CGF is entire, so the strip is all of R).
Case C: random distances and gamma gains with an MGF (radial quadrature).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .cumulants import (CumulantSet, FadingModel, NetworkGeometry,
                        log_derivatives, omega_cumulant_set)
from .errors import (ArgumentError, CapabilityError, SaddleError, StripError)
from .quadrature import integrate_adaptive, integrate_panels
from .specfun import cexpm1, clog1p, inc_gamma_lower, inc_gamma_upper_imag

_EPS_STRIP = 1e-9


def rising_factorial(x: float, n: int) -> float:
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


# ---------------------------------------------------------------------------
# abstract interface


class Cgf:
    """Evaluable CGF with derivatives and a convergence strip."""

    def eval(self, t):
        raise NotImplementedError

    def deriv(self, n: int, t: float) -> float:
        raise NotImplementedError

    def strip(self):
        """Open interval (t_min, t_max) containing 0 where eval is finite."""
        raise NotImplementedError

    def eval_imag(self, tau):
        """K(j*tau) for an array of real tau; override for batched models."""
        return np.array([self.eval(1j * float(t)) for t in np.atleast_1d(tau)],
                        dtype=complex)

    def cumulants(self, order: int = 4) -> CumulantSet:
        """kappa_n = (-1)^n K^(n)(0)."""
        return CumulantSet(tuple((-1.0) ** n * self.deriv(n, 0.0)
                                 for n in range(1, order + 1)))

    def atom_at_zero(self) -> float:
        """Point mass at Omega = 0 (both aggregates empty); 0 if continuous."""
        return 0.0

    def check_strip(self, t: float):
        lo, hi = self.strip()
        if not lo < t < hi:
            raise StripError(f"t = {t} outside convergence strip ({lo}, {hi})")


class GaussianCgf(Cgf):
    """K(t) = -kappa_1 t + kappa_2 t^2 / 2; exact reference model."""

    def __init__(self, kappa1: float, kappa2: float):
        if kappa2 <= 0:
            raise ArgumentError("kappa_2 must be positive")
        self.kappa1 = float(kappa1)
        self.kappa2 = float(kappa2)

    def eval(self, t):
        t = np.asarray(t)
        return -self.kappa1 * t + 0.5 * self.kappa2 * t * t

    def eval_imag(self, tau):
        return self.eval(1j * np.atleast_1d(np.asarray(tau, dtype=float)))

    def deriv(self, n, t):
        if n == 1:
            return -self.kappa1 + self.kappa2 * t
        if n == 2:
            return self.kappa2
        if n >= 3:
            return 0.0
        raise ArgumentError("derivative order must be >= 1")

    def strip(self):
        return (-math.inf, math.inf)

    def cumulants(self, order: int = 4) -> CumulantSet:
        kap = [self.kappa1, self.kappa2] + [0.0] * (order - 2)
        return CumulantSet(tuple(kap[:order]))


# ---------------------------------------------------------------------------
# direct two-variable pair: Omega = theta*G2 - G1, G ~ Gamma(shape, rate)


@dataclass(frozen=True)
class PairModel:
    theta: float
    fading: FadingModel

    def __post_init__(self):
        if self.theta <= 0:
            raise ArgumentError("threshold must be positive")
        if self.fading.kind != "gamma":
            raise CapabilityError("pair model requires gamma fading")


class PairCgf(Cgf):
    def __init__(self, model: PairModel):
        self.model = model
        self._af = model.fading.shape
        self._beta = model.fading.rate
        self._theta = model.theta

    def eval(self, t):
        t = np.asarray(t)
        return -self._af * (clog1p(self._theta * t / self._beta)
                            + clog1p(-t / self._beta))

    def eval_imag(self, tau):
        return self.eval(1j * np.atleast_1d(np.asarray(tau, dtype=float)))

    def deriv(self, n, t):
        self.check_strip(t)
        a = 1.0 + self._theta * t / self._beta
        b = 1.0 - t / self._beta
        return (self._af * math.factorial(n - 1) * self._beta**(-n)
                * ((-self._theta) ** n * a**(-n) + b**(-n)))

    def strip(self):
        return (-self._beta / self._theta, self._beta)


def pair_outage_exact(theta: float) -> float:
    """P(theta*G2 > G1) for i.i.d. exponentials: theta/(1+theta)."""
    return theta / (1.0 + theta)


# ---------------------------------------------------------------------------
# Case A: fixed distances, random counts, gamma gains


@dataclass(frozen=True)
class CaseAModel:
    """Counts either Poisson (lam1 signal-side X, lam2 interference-side Y)
    or binomial (L total, cooperation probability p)."""

    fading: FadingModel
    theta: float
    aggregation: str          # "poisson" | "binomial"
    lam1: float = 0.0         # mean count on the X side (poisson)
    lam2: float = 0.0         # mean count on the Y side (poisson)
    L: int = 0                # total nodes (binomial)
    p: float = 0.0            # probability a node lands on the X side (binomial)

    def __post_init__(self):
        if self.fading.kind != "gamma":
            raise CapabilityError("case A requires gamma fading")
        if self.theta <= 0:
            raise ArgumentError("threshold must be positive")
        if self.aggregation == "poisson":
            if self.lam1 <= 0 or self.lam2 <= 0:
                raise ArgumentError("poisson aggregation needs lam1, lam2 > 0")
        elif self.aggregation == "binomial":
            if self.L < 1 or not 0 < self.p < 1:
                raise ArgumentError("binomial aggregation needs L >= 1, 0 < p < 1")
        else:
            raise ArgumentError(f"unknown aggregation {self.aggregation!r}")


class CaseACgf(Cgf):
    """Closed-form CGF.

    Poisson counts:  K(t) = lam2 (A^{-af} - 1) + lam1 (B^{-af} - 1)
    Binomial counts: K(t) = L [log(p + q A^{-af}) + log(q + p B^{-af})]
    with A = 1 + theta t / beta, B = 1 - t / beta.  The binomial form treats
    the two side counts as independent Bin(L, q), Bin(L, p) draws, which is
    the model the closed-form saddle points assume.
    """

    def __init__(self, model: CaseAModel):
        self.model = model
        self._af = model.fading.shape
        self._beta = model.fading.rate
        self._theta = model.theta

    def _ab(self, t):
        t = np.asarray(t)
        return (1.0 + self._theta * t / self._beta, 1.0 - t / self._beta)

    def eval(self, t):
        m = self.model
        af = self._af
        t = np.asarray(t)
        ya = -af * clog1p(self._theta * t / self._beta)   # log A^{-af}
        xb = -af * clog1p(-t / self._beta)                # log B^{-af}
        if m.aggregation == "poisson":
            return m.lam2 * cexpm1(ya) + m.lam1 * cexpm1(xb)
        q = 1.0 - m.p
        return m.L * (clog1p(q * cexpm1(ya)) + clog1p(m.p * cexpm1(xb)))

    def eval_imag(self, tau):
        return self.eval(1j * np.atleast_1d(np.asarray(tau, dtype=float)))

    def _power_derivs(self, t, n_max):
        """Derivatives of A^{-af} and B^{-af} up to order n_max."""
        a, b = self._ab(t)
        af, beta, th = self._af, self._beta, self._theta
        da = [rising_factorial(af, n) * (-th / beta) ** n * a**(-af - n)
              for n in range(1, n_max + 1)]
        db = [rising_factorial(af, n) * (1.0 / beta) ** n * b**(-af - n)
              for n in range(1, n_max + 1)]
        return a, b, da, db

    def deriv(self, n, t):
        self.check_strip(t)
        m = self.model
        a, b, da, db = self._power_derivs(float(t), n)
        if m.aggregation == "poisson":
            return float(m.lam2 * da[n - 1] + m.lam1 * db[n - 1])
        q = 1.0 - m.p
        gy = m.p + q * a**(-self._af)
        gx = q + m.p * b**(-self._af)
        ly = log_derivatives([q * d for d in da], float(gy))
        lx = log_derivatives([m.p * d for d in db], float(gx))
        return float(m.L * (ly[n - 1] + lx[n - 1]))

    def strip(self):
        return (-self._beta / self._theta, self._beta)

    def cumulants(self, order: int = 4) -> CumulantSet:
        return CumulantSet(tuple((-1.0) ** n * self.deriv(n, 0.0)
                                 for n in range(1, order + 1)))

    def atom_at_zero(self) -> float:
        m = self.model
        if m.aggregation == "poisson":
            return math.exp(-m.lam1 - m.lam2)
        return (m.p * (1.0 - m.p)) ** m.L


def case_a_cgf(model: CaseAModel) -> CaseACgf:
    return CaseACgf(model)


def _binomial_saddle_fn(model: CaseAModel):
    """The polynomial whose root in the strip is the binomial saddle:
    p^2 A^{af+1} - theta q^2 B^{af+1} + p q (A - theta B), in t."""
    af = model.fading.shape
    beta = model.fading.rate
    th = model.theta
    p, q = model.p, 1.0 - model.p

    def fn(t):
        a = 1.0 + th * t / beta
        b = 1.0 - t / beta
        return p * p * a**(af + 1) - th * q * q * b**(af + 1) + p * q * (a - th * b)

    return fn


def case_a_saddle(model: CaseAModel):
    """(t_hat, method): root of K'(t) = 0 in the strip.

    Poisson-gamma has the closed form t_hat = beta (r - 1) / (r (1 + theta)),
    r = (theta lam2 / lam1)^{1/(af+1)}.  Binomial-gamma uses the closed-form
    quadratic for shape 1 and a safeguarded root search otherwise.
    """
    af = model.fading.shape
    beta = model.fading.rate
    th = model.theta
    if model.aggregation == "poisson":
        r = (th * model.lam2 / model.lam1) ** (1.0 / (af + 1.0))
        return beta * (r - 1.0) / (th + r), "closed-form"
    p, q = model.p, 1.0 - model.p
    if af == 1.0:
        # expand p^2 A^2 - th q^2 B^2 + pq(A - th B) = c2 t^2 + c1 t + c0
        c2 = (th / beta) ** 2 * (p * p - q * q / th)
        c1 = (2.0 * th / beta) * (p * p + q * q + p * q)
        c0 = p - th * q
        if abs(c2) < 1e-14 * abs(c1):
            t_hat = -c0 / c1
        else:
            disc = c1 * c1 - 4.0 * c2 * c0
            if disc < 0:
                raise SaddleError("no real root for the binomial saddle quadratic")
            big = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
            inside = [t for t in (big / c2, c0 / big)
                      if -beta / th < t < beta]
            if not inside:
                raise SaddleError("binomial saddle roots fall outside the strip")
            t_hat = min(inside, key=abs)
        return t_hat, "closed-form"
    fn = _binomial_saddle_fn(model)
    lo = -beta / th * (1.0 - _EPS_STRIP)
    hi = beta * (1.0 - _EPS_STRIP)
    if fn(lo) * fn(hi) > 0:
        raise SaddleError("binomial saddle not bracketed inside the strip")
    t_hat = optimize.brentq(fn, lo, hi, xtol=1e-15, rtol=8.9e-16)
    return t_hat, "numeric"


# ---------------------------------------------------------------------------
# compound-count composition (utility + test surface)


def poisson_count_cgf(lam: float):
    """K_N(s) = log E[e^{-sN}] for N ~ Poisson(lam)."""
    return lambda s: lam * (np.exp(-np.asarray(s)) - 1.0)


def binomial_count_cgf(L: int, p: float):
    """K_N(s) for N ~ Binomial(L, p)."""
    return lambda s: L * np.log(1.0 - p + p * np.exp(-np.asarray(s)))


def compound_cgf(count_cgf, increment_cgf, t):
    """CGF of a compound sum: K_N evaluated at -K_increment(t)."""
    return count_cgf(-np.asarray(increment_cgf(t)))


# ---------------------------------------------------------------------------
# Cases B and C: random distances in [a, window], radial quadrature


@dataclass(frozen=True)
class CaseBModel:
    geom: NetworkGeometry
    theta: float
    window: float = math.inf   # outer truncation radius of the field

    def __post_init__(self):
        if self.theta <= 0:
            raise ArgumentError("threshold must be positive")
        if self.window <= self.geom.R:
            raise ArgumentError("window must exceed the cooperation radius")

    @property
    def fading(self) -> FadingModel:
        return FadingModel.unit()


@dataclass(frozen=True)
class CaseCModel:
    geom: NetworkGeometry
    theta: float
    fading: FadingModel
    window: float = math.inf

    def __post_init__(self):
        if self.theta <= 0:
            raise ArgumentError("threshold must be positive")
        if self.window <= self.geom.R:
            raise ArgumentError("window must exceed the cooperation radius")
        if not self.fading.has_mgf:
            raise CapabilityError("MGF does not exist for this fading model")


def _annulus_cf(y: float, alpha: float, u_lo: float, u_hi: float) -> complex:
    """int (e^{-i y u} - 1) u^{-2/alpha - 1} du / alpha over [u_lo, u_hi].

    This is the radial integral int (e^{-i y r^-alpha} - 1) r dr after the
    substitution u = r^-alpha (u_lo = 0 handles an unbounded outer radius):
    one integration by parts turns it into boundary terms plus upper
    incomplete gamma values on the imaginary axis, so the cost is O(1) in y.
    Requires y > 0; conjugate for the opposite phase sign.
    """
    c = 2.0 / alpha
    q = 1.0 - c
    s = 1j * y
    bnd = cexpm1(-s * u_hi) * u_hi ** (-c)
    g_hi = inc_gamma_upper_imag(q, y * u_hi)
    if u_lo > 0.0:
        bnd = bnd - cexpm1(-s * u_lo) * u_lo ** (-c)
        g_lo = inc_gamma_upper_imag(q, y * u_lo)
    else:
        g_lo = inc_gamma_upper_imag(q, 0.0)
    s_pow_c = y**c * complex(math.cos(0.5 * math.pi * c),
                             math.sin(0.5 * math.pi * c))
    return (-bnd / c - (s_pow_c / c) * (g_lo - g_hi)) / alpha


class RadialCgf(Cgf):
    """CGF for random-distance models.

    K(t) = 2 pi lambda [ int_a^R (M_G(-t P r^-alpha) - 1) r dr
                       + int_R^W (M_G(theta t P r^-alpha) - 1) r dr ].

    Unit gains on the imaginary axis use the exact incomplete-gamma form of
    the radial integrals (_annulus_cf); everything else integrates radially.
    For quadrature the signal integral is split at the knee
    r = (|t| P / beta)^{1/alpha}; the interference tail is mapped by
    u = (R/r)^{alpha-2}, which makes the integrand bounded with a finite
    u -> 0 limit.  Gamma-gain integrands have bounded phase (at most
    alpha_f pi / 2), so they need knee resolution but no oscillation
    splitting.
    """

    _ATOL_FACTOR = 1e-13

    def __init__(self, geom: NetworkGeometry, theta: float, fading: FadingModel,
                 window: float = math.inf):
        self.geom = geom
        self.theta = float(theta)
        self.fading = fading
        self.window = float(window)
        self._unit = fading.kind == "unit"
        g = geom
        self._pref = 2.0 * math.pi * g.intensity
        self._am2 = g.alpha - 2.0
        self._u_lo = 0.0 if math.isinf(self.window) else (g.R / self.window) ** self._am2

    # -- per-point transform: M_G(s) - 1, stable near s = 0
    def _mgfm1(self, s):
        if self._unit:
            return cexpm1(-np.asarray(s))
        return cexpm1(-self.fading.shape * clog1p(np.asarray(s) / self.fading.rate))

    def _mgf_deriv(self, n, s):
        """d^n/ds^n M_G(s) for real s in the strip."""
        if self._unit:
            return (-1.0) ** n * np.exp(-np.asarray(s))
        af, b = self.fading.shape, self.fading.rate
        return ((-1.0) ** n * rising_factorial(af, n) / b**n
                * (1.0 + np.asarray(s) / b) ** (-af - n))

    def strip(self):
        if self._unit:
            return (-math.inf, math.inf)
        g = self.geom
        b = self.fading.rate
        lo = -b * g.R**g.alpha / (self.theta * g.P)
        hi = b * g.a**g.alpha / g.P
        return (lo, hi)

    def atom_at_zero(self) -> float:
        if math.isinf(self.window):
            return 0.0
        area = math.pi * (self.window ** 2 - self.geom.a ** 2)
        return math.exp(-self.geom.intensity * area)

    # -- radial panel edges
    def _signal_edges(self, t_scale: float, oscillation: float):
        g = self.geom
        rate = 1.0 if self._unit else self.fading.rate
        n_knee = 7 if self._unit else 7 + int(min(2.0 * self.fading.shape, 96))
        edges = set(np.geomspace(g.a, g.R, 17))
        knee = (t_scale * g.P / rate) ** (1.0 / g.alpha) if t_scale > 0 else 0.0
        if g.a < knee < g.R:
            edges.update(np.geomspace(g.a, knee, n_knee))
            edges.update(np.geomspace(knee, g.R, n_knee))
        if oscillation > 0:
            phase_a = oscillation * g.P * g.a ** (-g.alpha)
            m = int(min(phase_a / math.pi, 500000))
            if m >= 1:
                rm = (oscillation * g.P / (math.pi * np.arange(m, 0, -1))) ** (1.0 / g.alpha)
                edges.update(r for r in rm if g.a < r < g.R)
        return sorted(edges)

    def _tail_edges(self, t_scale: float, oscillation: float):
        g = self.geom
        u_lo = self._u_lo
        edges = set(np.linspace(u_lo, 1.0, 13))
        if t_scale > 0 and not self._unit:
            # refine around where theta*t*P*r^-alpha crosses the gain rate
            r_k = (t_scale * self.theta * g.P / self.fading.rate) ** (1.0 / g.alpha)
            if r_k > g.R:
                u_k = (g.R / r_k) ** self._am2
                lo = max(u_k * 0.125, u_lo, 1e-12)
                hi = min(u_k * 8.0, 1.0)
                if lo < hi:
                    edges.update(np.geomspace(lo, hi, 11))
        if oscillation > 0:
            phase_r = oscillation * self.theta * g.P * g.R ** (-g.alpha)
            m = int(min(phase_r / math.pi, 100000))
            if m >= 1:
                um = (math.pi * np.arange(1, m + 1) / phase_r) ** (self._am2 / g.alpha)
                edges.update(u for u in um if u_lo < u < 1.0)
        return sorted(edges)

    def _tail_transform(self, f_of_r):
        """Map int_R^W f(r) r dr onto u in [u_lo, 1]."""
        g = self.geom
        c = g.R * g.R / self._am2

        def fu(u):
            r_pow = g.R ** (-g.alpha) * u ** (g.alpha / self._am2)  # r^-alpha
            return f_of_r(r_pow) * u ** (-2.0 / self._am2 - 1.0) * c

        return fu

    # -- evaluation
    def eval(self, t):
        t = complex(t)
        if t == 0:
            return 0.0
        if t.real == 0.0:
            return complex(self.eval_imag(np.array([t.imag]))[0])
        if t.imag == 0:
            self.check_strip(t.real)
        g = self.geom
        osc = abs(t.imag)
        atol = self._ATOL_FACTOR * max(g.R * g.R - g.a * g.a, 1.0)

        sig, es, _ = integrate_adaptive(
            lambda r: self._mgfm1(-t * g.P * r ** (-g.alpha)) * r,
            g.a, g.R, atol, edges=self._signal_edges(abs(t), osc))
        fu = self._tail_transform(
            lambda r_pow: self._mgfm1(self.theta * t * g.P * r_pow))
        tail, et, _ = integrate_adaptive(
            fu, max(self._u_lo, 1e-300), 1.0, atol,
            edges=self._tail_edges(abs(t), osc))
        val = self._pref * (sig + tail)
        if t.imag == 0:
            return float(np.real(val))
        return complex(val)

    def eval_imag(self, tau):
        """Batched K(j*tau).

        Unit gains go through the exact incomplete-gamma form, so the cost
        does not grow with tau; gamma gains share a knee-resolved radial
        grid sized by the largest |tau|.
        """
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        g = self.geom
        t_max = float(np.max(np.abs(tau))) if tau.size else 0.0
        if t_max == 0.0:
            return np.zeros_like(tau, dtype=complex)
        if self._unit:
            u_sig_lo, u_sig_hi = g.R ** (-g.alpha), g.a ** (-g.alpha)
            u_win = 0.0 if math.isinf(self.window) else self.window ** (-g.alpha)
            out = np.empty(tau.shape, dtype=complex)
            for i, tv in enumerate(tau):
                if tv == 0.0:
                    out[i] = 0.0
                    continue
                y = abs(float(tv)) * g.P
                sig = np.conj(_annulus_cf(y, g.alpha, u_sig_lo, u_sig_hi))
                tail = _annulus_cf(self.theta * y, g.alpha, u_win, u_sig_lo)
                val = self._pref * (sig + tail)
                out[i] = val if tv > 0 else np.conj(val)
            return out

        def sig_f(r):
            return self._mgfm1(np.multiply.outer(-1j * tau, g.P * r ** (-g.alpha))) * r

        sig = integrate_panels(sig_f, self._signal_edges(t_max, 0.0))

        def tail_f(u):
            r_pow = g.R ** (-g.alpha) * u ** (g.alpha / self._am2)
            vals = self._mgfm1(np.multiply.outer(1j * tau * self.theta, g.P * r_pow))
            return vals * (u ** (-2.0 / self._am2 - 1.0) * g.R * g.R / self._am2)

        tail = integrate_panels(tail_f, self._tail_edges(t_max, 0.0))
        return self._pref * (sig + tail)

    def deriv(self, n, t):
        if not 1 <= n <= 4:
            raise ArgumentError("derivative order must be 1..4")
        t = float(t)
        self.check_strip(t)
        g = self.geom
        th = self.theta
        atol = self._ATOL_FACTOR * max(g.R * g.R - g.a * g.a, 1.0)

        def sig_f(r):
            lp = g.P * r ** (-g.alpha)
            return (-lp) ** n * self._mgf_deriv(n, -t * lp) * r

        sig, es, _ = integrate_adaptive(sig_f, g.a, g.R, atol,
                                        edges=self._signal_edges(abs(t), 0.0))

        def tail_core(r_pow):
            lp = g.P * r_pow
            return (th * lp) ** n * self._mgf_deriv(n, th * t * lp)

        tail, et, _ = integrate_adaptive(
            self._tail_transform(tail_core), max(self._u_lo, 1e-300), 1.0, atol,
            edges=self._tail_edges(abs(t), 0.0))
        return float(self._pref * (sig + tail))

    def cumulants(self, order: int = 4) -> CumulantSet:
        return omega_cumulant_set(self.geom, self.fading, self.theta,
                                  order=order, window=self.window)


def case_b_cgf(model: CaseBModel) -> RadialCgf:
    return RadialCgf(model.geom, model.theta, FadingModel.unit(), model.window)


def case_c_cgf(model: CaseCModel) -> RadialCgf:
    if not model.fading.has_mgf:
        raise CapabilityError("MGF does not exist for this fading model")
    return RadialCgf(model.geom, model.theta, model.fading, model.window)


# ---------------------------------------------------------------------------
# closed-form derivatives for the unit-gain radial model (cross-check path)


def _sc_series(c: float, x: float, max_terms: int = 200) -> float:
    """S_c(x) = sum_k x^k / (k! (c + k)); positive-term series, c > 0."""
    term = 1.0 / c
    total = term
    for k in range(1, max_terms):
        term *= x * (c + k - 1) / (k * (c + k))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def case_b_closed_deriv(model: CaseBModel, n: int, t: float) -> float:
    """d^n/dt^n K(t) for the unit-gain radial model at real t > 0.

    Interference part via the lower incomplete gamma, signal part via the
    S_c series; both come from substituting x = t * theta * P * r^-alpha
    (resp. x = t P r^-alpha) into the radial integrals.
    """
    if t <= 0:
        raise StripError("closed-form derivative path requires t > 0")
    g = model.geom
    th = model.theta
    lam, P, al = g.intensity, g.P, g.alpha
    c0 = n - 2.0 / al
    x_r = t * th * P * g.R ** (-al)
    gamma_part = inc_gamma_lower(c0, x_r)
    if not math.isinf(model.window):
        gamma_part -= inc_gamma_lower(c0, t * th * P * model.window ** (-al))
    d_tail = ((-1.0) ** n * (2.0 * math.pi * lam / al)
              * (th * t * P) ** (2.0 / al) / t**n * gamma_part)
    c = n - 2.0 / al
    d_sig = ((2.0 * math.pi * lam / al) * P**n
             * (g.a ** (2 - n * al) * _sc_series(c, t * P * g.a ** (-al))
                - g.R ** (2 - n * al) * _sc_series(c, t * P * g.R ** (-al))))
    return d_tail + d_sig
