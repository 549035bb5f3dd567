"""Monte Carlo simulation of the signal/interference difference.

Trials are processed in fixed-size chunks; each chunk draws from its own
Philox counter-based substream keyed by (seed, chunk index), and outage
events are aggregated by integer counting.  Results are therefore
bit-identical for a given (seed, config) no matter how the chunks are
scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cgf import CaseAModel, CaseBModel, CaseCModel, PairModel
from .cumulants import CumulantSet
from .errors import ArgumentError

_POINT_BUDGET = 4_000_000     # target points per chunk for network cases
_MAX_CHUNK = 50_000


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    ``window_radius`` truncates the interference field for the network
    cases (points beyond it are ignored); it must exceed the cooperation
    radius.  ``sinr`` switches the outage indicator from theta*Y > X to
    theta*(Y + noise_power) > X.  ``independent_counts`` makes the
    binomial count split draw the two counts independently instead of as
    (M, L - M), matching the independent-terminal product form of the
    analytic CGF.  ``fixed_count`` places exactly the mean number of points
    each trial instead of a Poisson count.
    """

    model: object
    trials: int
    seed: int
    window_radius: float = 1000.0
    sinr: bool = False
    noise_power: float = 1.0
    independent_counts: bool = False
    fixed_count: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ArgumentError("trials must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        geom = getattr(self.model, "geom", None)
        if geom is not None and self.window_radius <= geom.R:
            raise ArgumentError("window_radius must exceed the cooperation "
                               f"radius R = {geom.R}")


@dataclass(frozen=True)
class EmpiricalResult:
    p_hat: float
    std_err: float
    trials: int
    sample_cumulants_x: CumulantSet
    sample_cumulants_y: CumulantSet


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    """Substream for one chunk: Philox keyed by seed, counter by index."""
    return np.random.Generator(np.random.Philox(key=seed,
                                                counter=[0, 0, 0, index]))


def _gamma_sums(rng, shape_per_term, counts, rate):
    """Per-trial sums of iid Gamma(shape, rate) gains via gamma additivity."""
    total_shape = shape_per_term * counts
    out = np.zeros(counts.shape, dtype=float)
    pos = total_shape > 0
    out[pos] = rng.gamma(total_shape[pos]) / rate
    return out


def _draw_pair(model: PairModel, rng, n):
    fad = model.fading
    x = rng.gamma(fad.shape, size=n) / fad.rate
    y = rng.gamma(fad.shape, size=n) / fad.rate
    return x, y


def _draw_case_a(model: CaseAModel, cfg: SimConfig, rng, n):
    if model.aggregation == "poisson":
        m = rng.poisson(model.lam1, n)
        k = rng.poisson(model.lam2, n)
    elif cfg.independent_counts:
        m = rng.binomial(model.L, model.p, n)
        k = rng.binomial(model.L, 1.0 - model.p, n)
    else:
        m = rng.binomial(model.L, model.p, n)
        k = model.L - m
    fad = model.fading
    x = _gamma_sums(rng, fad.shape, m, fad.rate)
    y = _gamma_sums(rng, fad.shape, k, fad.rate)
    return x, y


def _draw_network(model, cfg: SimConfig, rng, n):
    geom = model.geom
    w = cfg.window_radius
    a2, w2 = geom.a ** 2, w ** 2
    mean_count = geom.intensity * math.pi * (w2 - a2)
    if cfg.fixed_count:
        counts = np.full(n, int(round(mean_count)), dtype=np.int64)
    else:
        counts = rng.poisson(mean_count, n)
    total = int(counts.sum())
    r = np.sqrt(a2 + rng.random(total) * (w2 - a2))
    power = geom.P * r ** (-geom.alpha)
    fad = model.fading
    if fad.kind == "gamma":
        power = power * rng.gamma(fad.shape, size=total) / fad.rate
    elif fad.kind == "lognormal":
        power = power * rng.lognormal(fad.mu_ln, fad.sigma_ln, total)
    trial = np.repeat(np.arange(n), counts)
    signal_mask = r < geom.R
    x = np.bincount(trial, weights=np.where(signal_mask, power, 0.0),
                    minlength=n)
    y = np.bincount(trial, weights=np.where(signal_mask, 0.0, power),
                    minlength=n)
    return x, y


def _kstats(n, s1, s2, s3, s4) -> CumulantSet:
    """Unbiased k-statistics k_1..k_4 from raw power sums."""
    mean = s1 / n
    m2 = s2 / n - mean ** 2
    m3 = s3 / n - 3 * mean * s2 / n + 2 * mean ** 3
    m4 = s4 / n - 4 * mean * s3 / n + 6 * mean ** 2 * s2 / n - 3 * mean ** 4
    k2 = n * m2 / (n - 1)
    k3 = n ** 2 * m3 / ((n - 1) * (n - 2))
    k4 = (n ** 2 * ((n + 1) * m4 - 3 * (n - 1) * m2 ** 2)
          / ((n - 1) * (n - 2) * (n - 3)))
    return CumulantSet((mean, k2, k3, k4))


def sample_cumulants(values, max_order: int = 4) -> CumulantSet:
    """Unbiased k-statistics of a sample, orders 1..max_order."""
    if max_order != 4:
        raise ArgumentError("only max_order = 4 is supported")
    values = np.asarray(values, dtype=float)
    if values.size < 10:
        raise ArgumentError("need at least 10 values")
    return _kstats(values.size, *(np.sum(values ** k) for k in (1, 2, 3, 4)))


def simulate(cfg: SimConfig) -> EmpiricalResult:
    """Estimate Pr(theta*Y > X) (or the SINR variant) by simulation."""
    model = cfg.model
    if isinstance(model, (CaseBModel, CaseCModel)):
        mean_pts = (model.geom.intensity * math.pi
                    * (cfg.window_radius ** 2 - model.geom.a ** 2))
        chunk = int(min(_MAX_CHUNK, max(1000, _POINT_BUDGET / max(mean_pts, 1))))
        draw = lambda rng, n: _draw_network(model, cfg, rng, n)
    elif isinstance(model, CaseAModel):
        chunk = _MAX_CHUNK
        draw = lambda rng, n: _draw_case_a(model, cfg, rng, n)
    elif isinstance(model, PairModel):
        chunk = _MAX_CHUNK
        draw = lambda rng, n: _draw_pair(model, rng, n)
    else:
        raise ArgumentError(f"cannot simulate model type {type(model).__name__}")

    theta = model.theta
    shift = theta * cfg.noise_power if cfg.sinr else 0.0
    hits = 0
    sums_x = np.zeros(4)
    sums_y = np.zeros(4)
    done = 0
    index = 0
    while done < cfg.trials:
        n = min(chunk, cfg.trials - done)
        x, y = draw(_chunk_rng(cfg.seed, index), n)
        hits += int(np.count_nonzero(theta * y + shift > x))
        for k in range(4):
            sums_x[k] += np.sum(x ** (k + 1))
            sums_y[k] += np.sum(y ** (k + 1))
        done += n
        index += 1

    p_hat = hits / cfg.trials
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / cfg.trials)
    if cfg.trials >= 10:
        kx = _kstats(cfg.trials, *sums_x)
        ky = _kstats(cfg.trials, *sums_y)
    else:
        kx = ky = CumulantSet((float(sums_x[0]) / cfg.trials,))
    return EmpiricalResult(p_hat=p_hat, std_err=std_err, trials=cfg.trials,
                           sample_cumulants_x=kx, sample_cumulants_y=ky)
