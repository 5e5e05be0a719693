"""Stochastic verification of integrability thresholds.

The exact modules assert that |f|^(-2*lambda) is locally integrable exactly
for lambda below a rational threshold.  This module checks such claims
numerically, without trusting the algebra: for each lambda on a probe grid
it estimates the cutoff integral

    I(eps, lambda) = integral of |f|^(-2 lambda) over the domain minus the
                     eps-neighborhood of the zero divisor of f

across a ladder of shrinking cutoffs eps, fits the growth exponent of
I against eps on log-log axes, and locates the lambda where that exponent
departs from zero.  Below the threshold I(eps) stays bounded (slope near 0);
above it I(eps) blows up like a power of 1/eps (slope near the theoretical
supercritical value, which is linear in lambda with a coefficient K
computable from the input: each unit of lambda past the threshold steepens
the blow-up by K).

Threshold extraction uses a fixed slope cut of half the theoretical
supercritical slope one grid step past the threshold, i.e. level -K*h/2
for grid spacing h: a grid point is called supercritical when its fitted
slope sits at or below the cut, the crossing is located by linear
interpolation, and the known h/2 offset of the cut level is subtracted.
If every grid point lands on one side of the cut the grid missed the
threshold and ThresholdOutsideGrid reports the direction.

Sampling is importance-weighted toward the divisor (uniform-area/log-radius
mixtures), since uniform sampling under-resolves the singular locus.  All
randomness flows from counter-based Philox streams keyed by (seed, shell),
so estimates are bit-identical for a given config no matter how the
(lambda, shell) work is scheduled.  Results are test instruments only; no
exact code path consumes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InputError, ThresholdOutsideGrid
from .exactmath import Rat

_MIN_SHELLS = 5
_MIN_SAMPLES = 1000


@dataclass(frozen=True)
class OracleConfig:
    """Monte-Carlo protocol parameters.

    cutoffs must decrease strictly within (0, 1]; a geometric ladder makes
    the log-log fit evenly weighted.  The default ladder is deep (1e-8 down
    to 1e-16) on purpose: one grid step below the threshold the cutoff
    integral converges like eps^q with q ~ 0.1, so shallow ladders leave a
    transient slope that spills past the cut and drags the estimate low.
    lambda_grid holds the rationals to probe, sorted increasing; the
    threshold finder assumes near-uniform spacing.  tolerance is the
    default relative error for verify_threshold.
    """

    samples_per_shell: int = 40_000
    cutoffs: tuple = (1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15, 1e-16)
    lambda_grid: tuple = ()
    seed: int = 20260814
    tolerance: float = 0.1

    def __post_init__(self):
        if not isinstance(self.samples_per_shell, int) or self.samples_per_shell < _MIN_SAMPLES:
            raise InputError(f"samples_per_shell must be an integer >= {_MIN_SAMPLES}")
        cuts = tuple(float(e) for e in self.cutoffs)
        if len(cuts) < _MIN_SHELLS:
            raise InputError(f"need at least {_MIN_SHELLS} cutoff shells, got {len(cuts)}")
        if any(not 0 < e <= 1 for e in cuts):
            raise InputError("cutoffs must lie in (0, 1]")
        if any(cuts[i] <= cuts[i + 1] for i in range(len(cuts) - 1)):
            raise InputError("cutoffs must be strictly decreasing")
        grid = tuple(Fraction(x) for x in self.lambda_grid)
        if len(grid) < 3:
            raise InputError("lambda_grid needs at least 3 probe points")
        if any(grid[i] >= grid[i + 1] for i in range(len(grid) - 1)):
            raise InputError("lambda_grid must be strictly increasing")
        if grid[0] <= 0:
            raise InputError("lambda_grid must be positive")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise InputError("seed must be a nonnegative integer")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        object.__setattr__(self, "cutoffs", cuts)
        object.__setattr__(self, "lambda_grid", grid)


@dataclass(frozen=True)
class ExponentEstimate:
    """Fitted threshold with a coarse confidence halfwidth.

    per_lambda_slopes echoes every probed lambda with its fitted log-log
    growth exponent; threshold_estimate always lies within the probed
    range (clamped after the cut-offset correction).
    """

    threshold_estimate: float
    confidence_halfwidth: float
    per_lambda_slopes: tuple

    def __post_init__(self):
        lams = [float(l) for l, _ in self.per_lambda_slopes]
        if not lams or not min(lams) <= self.threshold_estimate <= max(lams):
            raise AssertionError("threshold estimate escaped the probed grid")


def _shell_rng(seed: int, shell: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, shell]))


def _slope_fit(log_eps, log_i):
    """Least-squares slope of log I against log eps, with its standard error."""
    x = np.asarray(log_eps)
    y = np.asarray(log_i)
    m = len(x)
    xm = x - x.mean()
    sxx = float(xm @ xm)
    slope = float(xm @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xm
    dof = max(m - 2, 1)
    se = math.sqrt(max(float(resid @ resid), 0.0) / dof / sxx)
    return slope, se


def _log_mean_exp(arg, mask=None):
    """log(mean(exp(arg) * mask)), stabilized; -inf when nothing survives."""
    if mask is not None:
        if not mask.any():
            return -math.inf
        arg = arg[mask]
        top = float(arg.max())
        return top + math.log(float(np.exp(arg - top).sum()) / mask.size)
    top = float(arg.max())
    return top + math.log(float(np.exp(arg - top).mean()))


def _extract_threshold(grid, slopes, ses, k_coeff) -> ExponentEstimate:
    lams = [float(l) for l in grid]
    h = (lams[-1] - lams[0]) / (len(lams) - 1)
    cut = -k_coeff * h / 2.0
    flagged = [s <= cut for s in slopes]
    per = tuple((grid[i], slopes[i]) for i in range(len(grid)))
    if all(flagged):
        raise ThresholdOutsideGrid(
            "below", f"every probed lambda is supercritical (slopes <= {cut:.3g}); "
            "the threshold lies below the grid"
        )
    if not any(flagged):
        raise ThresholdOutsideGrid(
            "above", f"no probed lambda is supercritical (slopes > {cut:.3g}); "
            "the threshold lies above the grid"
        )
    i = flagged.index(True)
    if i == 0:
        crossing = lams[0]
        se_local = ses[0]
    else:
        s0, s1 = slopes[i - 1], slopes[i]
        crossing = lams[i - 1] + (cut - s0) * (lams[i] - lams[i - 1]) / (s1 - s0)
        se_local = 0.5 * (ses[i - 1] + ses[i])
    est = min(max(crossing - h / 2.0, lams[0]), lams[-1])
    halfwidth = h / 2.0 + se_local / k_coeff
    return ExponentEstimate(
        threshold_estimate=est, confidence_halfwidth=halfwidth, per_lambda_slopes=per
    )


# ---------------------------------------------------------------------------
# Monomial integrand on a polydisc


def estimate_monomial_threshold(exponents, cfg: OracleConfig) -> ExponentEstimate:
    """Probe the integrability threshold of |prod z_j^(a_j)|^(-2 lambda).

    Domain: unit polydisc minus the eps-neighborhood of the coordinate
    divisor, i.e. every |z_j| runs over [eps, 1].  Each radius is drawn
    from an equal mixture of the uniform-area density 2r/(1-eps^2) and the
    log-uniform density 1/(r log(1/eps)), which keeps the weight of the
    near-divisor region heavy enough for stable tails.  The supercritical
    slope coefficient is K = 2 * (sum of the maximal exponents), since each
    coordinate attaining a_max contributes 2 - 2*lambda*a_max to the decay
    exponent past the threshold.
    """
    exps = tuple(exponents)
    if not exps:
        raise InputError("exponent list must be nonempty")
    for a in exps:
        if not isinstance(a, int) or isinstance(a, bool) or a < 1:
            raise InputError(f"exponents must be positive integers, got {a!r}")
    a_max = max(exps)
    k_coeff = 2.0 * a_max * exps.count(a_max)
    a_vec = np.array(exps, dtype=float)

    log_eps = [math.log(e) for e in cfg.cutoffs]
    lam_f = np.array([float(l) for l in cfg.lambda_grid])
    log_i = np.empty((len(cfg.lambda_grid), len(cfg.cutoffs)))
    for shell, eps in enumerate(cfg.cutoffs):
        rng = _shell_rng(cfg.seed, shell)
        n, k = cfg.samples_per_shell, len(exps)
        pick_log = rng.random((n, k)) < 0.5
        u = rng.random((n, k))
        r_area = np.sqrt(eps * eps + u * (1 - eps * eps))
        r_log = np.exp(u * math.log(eps))
        r = np.where(pick_log, r_log, r_area)
        log_r = np.log(r)
        dens = 0.5 * (2 * r / (1 - eps * eps)) + 0.5 / (r * math.log(1 / eps))
        # Angular part integrates to 2*pi*r per coordinate.
        log_w = (np.log(2 * math.pi * r) - np.log(dens)).sum(axis=1)
        s_a = log_r @ a_vec
        for j, lam in enumerate(lam_f):
            log_i[j, shell] = _log_mean_exp(-2.0 * lam * s_a + log_w)
    slopes, ses = [], []
    for j in range(len(lam_f)):
        sl, se = _slope_fit(log_eps, log_i[j])
        slopes.append(sl)
        ses.append(se)
    return _extract_threshold(cfg.lambda_grid, slopes, ses, k_coeff)


# ---------------------------------------------------------------------------
# Binomial u^n + v^n on the unit ball of C^2


def estimate_bp_threshold(n: int, cfg: OracleConfig) -> ExponentEstimate:
    """Probe the integrability threshold of |u^n + v^n|^(-2 lambda).

    Domain: unit ball of C^2 minus the eps-neighborhood of the zero set,
    which is the union of the n complex lines u = zeta*v over the n-th
    roots zeta of -1 (distance to such a line is |u - zeta*v|/sqrt(2)).
    The blow-up past the threshold 2/n is driven by the origin where all
    lines meet, with decay exponent 4 - 2*lambda*n, so K = 2n.

    Sampling mixes three components: uniform on the ball, an origin
    component (log-uniform radius, uniform direction), and per-line tube
    components (uniform position along the line, log-uniform transverse
    radius).  The importance weight is the reciprocal of the full mixture
    density, evaluated exactly for every sample.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InputError(f"n must be an integer >= 2, got {n!r}")
    k_coeff = 2.0 * n
    zetas = np.array([np.exp(1j * math.pi * (2 * j + 1) / n) for j in range(n)])
    # Unit direction along line j is (zeta_j, 1)/sqrt(2); unit normal is
    # (1, -conj(zeta_j))/sqrt(2).  In those coordinates dist(x, L_j) = |w|.
    w_ball, w_origin, w_tube = 0.4, 0.3, 0.3
    vol_ball = math.pi ** 2 / 2
    area_s3 = 2 * math.pi ** 2

    log_eps = [math.log(e) for e in cfg.cutoffs]
    lam_f = [float(l) for l in cfg.lambda_grid]
    log_i = np.empty((len(cfg.lambda_grid), len(cfg.cutoffs)))
    for shell, eps in enumerate(cfg.cutoffs):
        rng = _shell_rng(cfg.seed, shell)
        n_s = cfg.samples_per_shell
        log_inv_eps = math.log(1 / eps)
        comp = rng.choice(3, size=n_s, p=[w_ball, w_origin, w_tube])
        pts = np.empty((n_s, 2), dtype=complex)

        idx = np.flatnonzero(comp == 0)
        if idx.size:
            g = rng.standard_normal((idx.size, 4))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            rad = rng.random(idx.size) ** 0.25
            xy = g * rad[:, None]
            pts[idx, 0] = xy[:, 0] + 1j * xy[:, 1]
            pts[idx, 1] = xy[:, 2] + 1j * xy[:, 3]

        idx = np.flatnonzero(comp == 1)
        if idx.size:
            g = rng.standard_normal((idx.size, 4))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            rad = np.exp(rng.random(idx.size) * math.log(eps))
            xy = g * rad[:, None]
            pts[idx, 0] = xy[:, 0] + 1j * xy[:, 1]
            pts[idx, 1] = xy[:, 2] + 1j * xy[:, 3]

        tube_idx = np.flatnonzero(comp == 2)
        tube_line = tube_rad = None
        if tube_idx.size:
            tube_line = rng.integers(0, n, size=tube_idx.size)
            c_rad = np.sqrt(rng.random(tube_idx.size))
            c_ang = rng.random(tube_idx.size) * 2 * math.pi
            c = c_rad * np.exp(1j * c_ang)
            tube_rad = np.exp(rng.random(tube_idx.size) * math.log(eps))
            s_ang = rng.random(tube_idx.size) * 2 * math.pi
            w = tube_rad * np.exp(1j * s_ang)
            z = zetas[tube_line]
            inv_sqrt2 = 1 / math.sqrt(2)
            pts[tube_idx, 0] = (c * z + w) * inv_sqrt2
            pts[tube_idx, 1] = (c - w * np.conj(z)) * inv_sqrt2

        u, v = pts[:, 0], pts[:, 1]
        norm2 = (u * np.conj(u) + v * np.conj(v)).real
        # Transverse coordinates to every line at once: w_j = <x, normal_j>.
        inv_sqrt2 = 1 / math.sqrt(2)
        w_all = (u[:, None] - v[:, None] * zetas[None, :]) * inv_sqrt2
        w_abs = np.abs(w_all)
        if tube_idx.size:
            # A tube sample's distance to its own line is the sampled radius
            # exactly; recomputing it as u - zeta*v cancels catastrophically
            # once the radius is near float epsilon.
            w_abs[tube_idx, tube_line] = tube_rad
        # Along-line coordinate c_j = <x, direction_j>.
        c_all = (u[:, None] * np.conj(zetas)[None, :] + v[:, None]) * inv_sqrt2
        dist = w_abs.min(axis=1)
        mask = (norm2 <= 1.0) & (dist >= eps)

        dens = np.zeros(n_s)
        inside_ball = norm2 <= 1.0
        dens += w_ball * inside_ball / vol_ball
        rad = np.sqrt(norm2)
        origin_ok = (rad >= eps) & (rad <= 1.0)
        with np.errstate(divide="ignore"):
            dens += np.where(
                origin_ok, w_origin / (area_s3 * log_inv_eps * rad ** 4), 0.0
            )
        tube_ok = (np.abs(c_all) <= 1.0) & (w_abs >= eps) & (w_abs <= 1.0)
        tube_dens = np.where(
            tube_ok, 1.0 / (math.pi * 2 * math.pi * w_abs ** 2 * log_inv_eps), 0.0
        ).sum(axis=1)
        dens += w_tube * tube_dens / n

        # |u^n + v^n| equals the product of the n line distances times
        # sqrt(2)^n; summing logs of the patched distances stays stable
        # arbitrarily close to the divisor.
        with np.errstate(divide="ignore"):
            log_f = np.where(
                mask, np.log(w_abs).sum(axis=1) + n * math.log(math.sqrt(2)), 0.0
            )
            log_q = np.where(mask, np.log(dens), 0.0)
        if not mask.any():
            raise InputError(
                f"no admissible samples at cutoff {eps}; increase samples_per_shell"
            )
        for j, lam in enumerate(lam_f):
            log_i[j, shell] = _log_mean_exp(-2.0 * lam * log_f - log_q, mask)
    slopes, ses = [], []
    for j in range(len(lam_f)):
        sl, se = _slope_fit(log_eps, log_i[j])
        slopes.append(sl)
        ses.append(se)
    return _extract_threshold(cfg.lambda_grid, slopes, ses, k_coeff)


def verify_threshold(analytic, est: ExponentEstimate, tol: float) -> bool:
    """Relative agreement test: |estimate - analytic| / analytic <= tol."""
    if isinstance(analytic, bool) or not isinstance(analytic, Rational):
        raise InputError(f"analytic threshold must be rational, got {analytic!r}")
    analytic = Fraction(analytic)
    if analytic <= 0:
        raise InputError("analytic threshold must be positive")
    if not tol > 0:
        raise InputError("tolerance must be positive")
    return abs(est.threshold_estimate - float(analytic)) / float(analytic) <= tol
