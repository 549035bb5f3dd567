import math

import numpy as np
import pytest
from scipy import integrate

from sinr_outage.cgf import (
    CaseAModel,
    CaseBModel,
    CaseCModel,
    GaussianCgf,
    PairCgf,
    PairModel,
    binomial_count_cgf,
    case_a_cgf,
    case_a_saddle,
    case_b_cgf,
    case_b_closed_deriv,
    case_c_cgf,
    compound_cgf,
    pair_outage_exact,
    poisson_count_cgf,
    rising_factorial,
)
from sinr_outage.cumulants import FadingModel, NetworkGeometry
from sinr_outage.errors import ArgumentError, CapabilityError, StripError


GEOM = NetworkGeometry(intensity=1.0, a=1.0, R=2.0, alpha=4.0)


def _fd_deriv(f, t, n, h):
    """Central finite difference of order n (n <= 3)."""
    if n == 1:
        return (f(t + h) - f(t - h)) / (2 * h)
    if n == 2:
        return (f(t + h) - 2 * f(t) + f(t - h)) / h**2
    return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h**3)


# ---------------------------------------------------------------------------
# Gaussian and pair models


def test_rising_factorial():
    assert rising_factorial(3.0, 0) == 1.0
    assert rising_factorial(2.5, 3) == pytest.approx(2.5 * 3.5 * 4.5, rel=1e-15)


def test_gaussian_cgf():
    g = GaussianCgf(1.5, 2.0)
    assert g.eval(0.5) == pytest.approx(-0.75 + 0.25, rel=1e-15)
    assert g.deriv(1, 0.25) == pytest.approx(-1.5 + 0.5, rel=1e-15)
    assert g.deriv(2, 9.0) == 2.0
    assert g.deriv(5, 0.0) == 0.0
    assert g.cumulants(6).kappa == (1.5, 2.0, 0.0, 0.0, 0.0, 0.0)
    assert g.atom_at_zero() == 0.0
    z = g.eval_imag(np.array([0.3]))[0]
    assert z == pytest.approx(-0.3j * 1.5 - 0.5 * 2.0 * 0.09, abs=1e-15)
    with pytest.raises(ArgumentError):
        GaussianCgf(0.0, -1.0)


def test_pair_cgf():
    cgf = PairCgf(PairModel(theta=2.0, fading=FadingModel.gamma(1.0, 1.0)))
    assert cgf.strip() == (-0.5, 1.0)
    # K(0.5) = -log(1 + 1) - log(1 - 0.5) = 0
    assert cgf.eval(0.5) == pytest.approx(0.0, abs=1e-15)
    assert cgf.deriv(1, 0.0) == pytest.approx(-1.0, rel=1e-15)
    fd = _fd_deriv(lambda t: float(cgf.eval(t).real), 0.3, 2, 1e-5)
    assert cgf.deriv(2, 0.3) == pytest.approx(fd, rel=1e-6)
    with pytest.raises(StripError):
        cgf.deriv(1, 1.5)
    assert pair_outage_exact(3.0) == 0.75


def test_pair_model_validation():
    with pytest.raises(ArgumentError):
        PairModel(theta=-1.0, fading=FadingModel.gamma(1.0, 1.0))
    with pytest.raises(CapabilityError):
        PairModel(theta=1.0, fading=FadingModel.unit())


# ---------------------------------------------------------------------------
# case A: fixed distances, random counts


def test_case_a_model_validation():
    ray = FadingModel.gamma(1.0, 1.0)
    with pytest.raises(ArgumentError):
        CaseAModel(fading=ray, theta=1.0, aggregation="poisson", lam1=0.0, lam2=1.0)
    with pytest.raises(ArgumentError):
        CaseAModel(fading=ray, theta=1.0, aggregation="binomial", L=0, p=0.5)
    with pytest.raises(ArgumentError):
        CaseAModel(fading=ray, theta=1.0, aggregation="negbin", lam1=1.0, lam2=1.0)
    with pytest.raises(CapabilityError):
        CaseAModel(fading=FadingModel.unit(), theta=1.0, aggregation="poisson",
                   lam1=1.0, lam2=1.0)


def test_case_a_poisson_cumulants_closed_form():
    """kappa_n = theta^n lam2 mu_n + (-1)^n lam1 mu_n with mu_n the raw
    increment moments -- the compound-count route, independent of the
    derivative chain used by cumulants()."""
    m = CaseAModel(fading=FadingModel.gamma(2.5, 1.7), theta=0.7,
                   aggregation="poisson", lam1=3.0, lam2=5.0)
    ks = case_a_cgf(m).cumulants(order=6)
    for n in range(1, 7):
        mu_n = rising_factorial(2.5, n) / 1.7**n
        want = 0.7**n * 5.0 * mu_n + (-1.0) ** n * 3.0 * mu_n
        assert ks[n] == pytest.approx(want, rel=1e-12)


def test_case_a_poisson_exponential_cumulants():
    m = CaseAModel(fading=FadingModel.gamma(1.0, 1.0), theta=0.7,
                   aggregation="poisson", lam1=3.0, lam2=5.0)
    ks = case_a_cgf(m).cumulants(order=2)
    assert ks[1] == pytest.approx(0.5, rel=1e-14)
    assert ks[2] == pytest.approx(10.9, rel=1e-14)


def test_case_a_binomial_deriv_vs_fd():
    m = CaseAModel(fading=FadingModel.gamma(1.5, 2.0), theta=3.0,
                   aggregation="binomial", L=12, p=0.35)
    cgf = case_a_cgf(m)
    for n, rel in ((1, 1e-6), (2, 1e-6), (3, 1e-4)):
        fd = _fd_deriv(lambda t: float(np.real(cgf.eval(t))), 0.2, n, 1e-4)
        assert cgf.deriv(n, 0.2) == pytest.approx(fd, rel=rel)


def test_case_a_atoms():
    ray = FadingModel.gamma(1.0, 1.0)
    mp = CaseAModel(fading=ray, theta=1.0, aggregation="poisson",
                    lam1=3.0, lam2=5.0)
    assert case_a_cgf(mp).atom_at_zero() == pytest.approx(math.exp(-8.0), rel=1e-14)
    mb = CaseAModel(fading=ray, theta=1.0, aggregation="binomial", L=10, p=0.3)
    assert case_a_cgf(mb).atom_at_zero() == pytest.approx(0.21**10, rel=1e-12)


def test_case_a_saddle_poisson_closed_form():
    ray = FadingModel.gamma(1.0, 1.0)
    t_hat, how = case_a_saddle(CaseAModel(
        fading=ray, theta=4.0, aggregation="poisson", lam1=2.0, lam2=2.0))
    assert how == "closed-form"
    assert t_hat == pytest.approx(1.0 / 6.0, rel=1e-14)
    t_hat, _ = case_a_saddle(CaseAModel(
        fading=FadingModel.gamma(2.0, 1.0), theta=2.0, aggregation="poisson",
        lam1=5.0, lam2=5.0))
    assert t_hat == pytest.approx(0.0797323143464640, rel=1e-13)
    # theta = 1 with equal intensities is symmetric: the saddle sits at 0
    t_hat, _ = case_a_saddle(CaseAModel(
        fading=ray, theta=1.0, aggregation="poisson", lam1=3.0, lam2=3.0))
    assert t_hat == pytest.approx(0.0, abs=1e-15)


def test_case_a_saddle_binomial_quadratic():
    ray = FadingModel.gamma(1.0, 1.0)
    m = CaseAModel(fading=ray, theta=2.0, aggregation="binomial", L=10, p=0.5)
    t_hat, how = case_a_saddle(m)
    assert how == "closed-form"
    assert t_hat == pytest.approx(0.16227766016837933, rel=1e-13)
    assert case_a_cgf(m).deriv(1, t_hat) == pytest.approx(0.0, abs=1e-12)
    m = CaseAModel(fading=ray, theta=4.0, aggregation="binomial", L=10, p=0.3)
    t_hat, _ = case_a_saddle(m)
    assert t_hat == pytest.approx(0.40935730534636516, rel=1e-13)


def test_case_a_saddle_binomial_general_shape():
    m = CaseAModel(fading=FadingModel.gamma(2.5, 1.0), theta=3.0,
                   aggregation="binomial", L=8, p=0.4)
    t_hat, how = case_a_saddle(m)
    assert how == "numeric"
    assert case_a_cgf(m).deriv(1, t_hat) == pytest.approx(0.0, abs=1e-10)


# ---------------------------------------------------------------------------
# compound-count composition


def test_compound_cgf_closed_values():
    inc_exp = lambda t: -np.log1p(t)          # exp(1) increments
    assert compound_cgf(poisson_count_cgf(3.0), inc_exp, 1.0) == pytest.approx(
        -1.5, rel=1e-15)
    assert binomial_count_cgf(4, 0.5)(math.log(2.0)) == pytest.approx(
        4.0 * math.log(0.75), rel=1e-14)


def test_compound_composition_matches_case_a():
    af, beta, th = 2.0, 1.5, 0.8
    lam1, lam2 = 2.0, 4.0
    m = CaseAModel(fading=FadingModel.gamma(af, beta), theta=th,
                   aggregation="poisson", lam1=lam1, lam2=lam2)
    inc_y = lambda t: -af * np.log1p(th * np.asarray(t) / beta)
    inc_x = lambda t: -af * np.log1p(-np.asarray(t) / beta)
    for t in (0.4, -0.3, 1.1):
        want = (compound_cgf(poisson_count_cgf(lam2), inc_y, t)
                + compound_cgf(poisson_count_cgf(lam1), inc_x, t))
        assert float(np.real(case_a_cgf(m).eval(t))) == pytest.approx(
            float(want), rel=1e-13)


# ---------------------------------------------------------------------------
# cases B and C: radial models


def _radial_quad_reference(geom, theta, fading, tau, window=math.inf):
    """K(j tau) by direct scipy quadrature of the radial integrals."""
    if fading.kind == "unit":
        sig = lambda r: np.expm1(1j * tau * geom.P * r**-geom.alpha)
        tail = lambda r: np.expm1(-1j * tau * theta * geom.P * r**-geom.alpha)
    else:
        af, b = fading.shape, fading.rate

        def sig(r):
            return (1.0 - 1j * tau * geom.P * r**-geom.alpha / b) ** -af - 1.0

        def tail(r):
            return (1.0 + 1j * tau * theta * geom.P * r**-geom.alpha / b) ** -af - 1.0

    def quad_c(f, lo, hi):
        re = integrate.quad(lambda r: (f(r) * r).real, lo, hi, limit=400,
                            epsabs=1e-13, epsrel=1e-12)[0]
        im = integrate.quad(lambda r: (f(r) * r).imag, lo, hi, limit=400,
                            epsabs=1e-13, epsrel=1e-12)[0]
        return re + 1j * im

    pref = 2.0 * math.pi * geom.intensity
    return pref * (quad_c(sig, geom.a, geom.R) + quad_c(tail, geom.R, window))


def test_case_b_eval_imag_vs_direct_quadrature():
    model = CaseBModel(geom=GEOM, theta=1.3)
    cgf = case_b_cgf(model)
    for tau in (0.2, 0.7, 3.0):
        got = cgf.eval_imag(np.array([tau]))[0]
        want = _radial_quad_reference(GEOM, 1.3, FadingModel.unit(), tau)
        assert got == pytest.approx(want, abs=2e-10)


def test_case_b_eval_imag_conjugate_symmetry():
    cgf = case_b_cgf(CaseBModel(geom=GEOM, theta=2.0))
    z = cgf.eval_imag(np.array([0.9, -0.9]))
    assert z[1] == pytest.approx(np.conj(z[0]), abs=1e-13)


def test_case_b_small_tau_matches_cumulants():
    cgf = case_b_cgf(CaseBModel(geom=GEOM, theta=1.0))
    ks = cgf.cumulants(order=5)
    tau = 0.01
    want = (-1j * tau * ks[1] - 0.5 * tau**2 * ks[2]
            + (1j * tau) ** 3 / 6.0 * -ks[3] + tau**4 / 24.0 * ks[4])
    got = cgf.eval_imag(np.array([tau]))[0]
    assert got == pytest.approx(want, abs=2.0 * abs(ks[5]) * tau**5 / 120.0)


def test_case_b_closed_deriv_vs_quadrature():
    model = CaseBModel(geom=GEOM, theta=1.5)
    cgf = case_b_cgf(model)
    for n in (1, 2, 3):
        assert cgf.deriv(n, 0.4) == pytest.approx(
            case_b_closed_deriv(model, n, 0.4), rel=1e-9)


def test_case_b_closed_deriv_small_t_limit():
    # K'(0+) = -kappa_1 = pi/2 for this geometry at theta = 1
    model = CaseBModel(geom=GEOM, theta=1.0)
    assert case_b_closed_deriv(model, 1, 1e-9) == pytest.approx(
        0.5 * math.pi, rel=1e-6)
    with pytest.raises(StripError):
        case_b_closed_deriv(model, 1, 0.0)


def test_case_b_strip_is_whole_line():
    cgf = case_b_cgf(CaseBModel(geom=GEOM, theta=1.0))
    assert cgf.strip() == (-math.inf, math.inf)
    # deterministic gains: eval stays finite on both sides of zero
    assert np.isfinite(float(np.real(cgf.eval(-0.2))))


def test_case_b_transmit_power_scaling():
    """Power enters the signal and the interference branch alike; compare the
    quadrature derivative path against the closed-form series at P = 2."""
    geom2 = NetworkGeometry(intensity=1.0, a=1.0, R=2.0, alpha=4.0, P=2.0)
    model = CaseBModel(geom=geom2, theta=1.5)
    cgf = case_b_cgf(model)
    for n in (1, 2):
        assert cgf.deriv(n, 0.3) == pytest.approx(
            case_b_closed_deriv(model, n, 0.3), rel=1e-9)
    from sinr_outage.cumulants import omega_cumulant
    assert cgf.cumulants(2)[2] == pytest.approx(
        omega_cumulant(2, geom2, FadingModel.unit(), 1.5), rel=1e-13)


def test_case_b_finite_window_atom():
    model = CaseBModel(geom=GEOM, theta=1.0, window=5.0)
    assert case_b_cgf(model).atom_at_zero() == pytest.approx(
        math.exp(-math.pi * 24.0), rel=1e-12)
    assert case_b_cgf(CaseBModel(geom=GEOM, theta=1.0)).atom_at_zero() == 0.0


def test_case_b_finite_window_eval_imag():
    model = CaseBModel(geom=GEOM, theta=1.3, window=6.0)
    got = case_b_cgf(model).eval_imag(np.array([0.8]))[0]
    want = _radial_quad_reference(GEOM, 1.3, FadingModel.unit(), 0.8, window=6.0)
    assert got == pytest.approx(want, abs=2e-10)


def test_case_c_eval_imag_vs_direct_quadrature():
    fad = FadingModel.gamma(2.0, 1.5)
    model = CaseCModel(geom=GEOM, theta=2.0, fading=fad)
    cgf = case_c_cgf(model)
    for tau in (0.3, 0.9):
        got = cgf.eval_imag(np.array([tau]))[0]
        want = _radial_quad_reference(GEOM, 2.0, fad, tau)
        assert got == pytest.approx(want, abs=2e-10)


def test_case_c_strip_and_real_eval():
    fad = FadingModel.gamma(2.0, 1.5)
    cgf = case_c_cgf(CaseCModel(geom=GEOM, theta=2.0, fading=fad))
    lo, hi = cgf.strip()
    assert lo == pytest.approx(-1.5 * 2.0**4 / 2.0, rel=1e-15)
    assert hi == pytest.approx(1.5, rel=1e-15)
    # real-axis eval against the tau = 0 analytic continuation of the
    # reference integrand (same formulas with j tau -> -t)
    t = 0.4

    def sig(r):
        return (1.0 + t * GEOM.P * r**-GEOM.alpha / 1.5) ** -2.0 - 1.0

    # interference side carries e^{+ t theta ...} under E[e^{-t Omega}]
    def tail(r):
        return (1.0 - t * 2.0 * GEOM.P * r**-GEOM.alpha / 1.5) ** -2.0 - 1.0

    want = 2.0 * math.pi * (
        integrate.quad(lambda r: sig(r) * r, 1.0, 2.0, epsabs=1e-13)[0]
        + integrate.quad(lambda r: tail(r) * r, 2.0, np.inf, epsabs=1e-13)[0])
    assert float(np.real(cgf.eval(-t))) == pytest.approx(want, rel=1e-9)


def test_case_c_rejects_lognormal():
    with pytest.raises(CapabilityError):
        case_c_cgf(CaseCModel(geom=GEOM, theta=1.0,
                              fading=FadingModel.lognormal(0.0, 1.0)))


def test_case_bc_model_validation():
    with pytest.raises(ArgumentError):
        CaseBModel(geom=GEOM, theta=1.0, window=1.5)
    with pytest.raises(ArgumentError):
        CaseCModel(geom=GEOM, theta=-2.0, fading=FadingModel.unit())
