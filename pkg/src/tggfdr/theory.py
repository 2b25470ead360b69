"""Rate theory for the sparse tGG testing problem.

All logarithms are natural. Constants ``z_lower``/``z_upper`` are explicit
arguments everywhere; the constructive sampler has ``z_lower = z_upper = 2``
(see :data:`tggfdr.tgg.EXACT_Z`).

Assumption checks return flags instead of raising, so regimes outside the
hypotheses of the bounds can still be evaluated.
"""

from dataclasses import dataclass
import math

from .tgg import EXACT_Z
from ._validation import (
    DomainError,
    InfeasibleError,
    check_gamma,
    check_int,
    check_open_unit,
    check_positive,
)

_LOG_3_OVER_LOG_16 = math.log(3.0 / math.log(16.0))


def d_gamma(a, b, gamma):
    """gamma-distance ``|a**(1/gamma) - b**(1/gamma)| ** gamma``."""
    gamma = check_gamma(gamma)
    if a < 0 or b < 0:
        raise DomainError(f"d_gamma needs non-negative arguments, got {a}, {b}")
    return abs(a ** (1.0 / gamma) - b ** (1.0 / gamma)) ** gamma


def kappa_from_q(q, n):
    return math.log(1.0 / q) / math.log(n)


def q_from_kappa(kappa, n):
    return math.exp(-kappa * math.log(n))


def _root_gap(kappa, beta, r, gamma):
    # g(kappa) = D(beta + kappa, r)^(1/gamma) - kappa^(1/gamma); strictly decreasing
    inv = 1.0 / gamma
    return abs((beta + kappa) ** inv - r ** inv) - kappa ** inv


def solve_kappa_star(beta, r, gamma, tol=1e-14):
    """Unique solution of ``kappa = d_gamma(beta + kappa, r)`` for ``0 < beta < r``.

    Bisection on ``[0, r - beta]``, where the root gap ``g`` changes sign and
    is strictly decreasing. Stops when the bracket is narrower than ``tol``
    or cannot shrink further in floating point.
    """
    gamma = check_gamma(gamma)
    beta, r = float(beta), float(r)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if r <= beta:
        raise InfeasibleError(f"infeasible: r <= beta (r={r}, beta={beta})")
    check_positive(tol, "tol")
    lo, hi = 0.0, r - beta
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            break
        if _root_gap(mid, beta, r, gamma) > 0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller fixed-point residual
    return min((lo, hi), key=lambda k: abs(k - d_gamma(beta + k, r, gamma)))


def r_min_branch(beta, kappa, n):
    """1 when the first (sparse) branch of ``r_min`` applies, else 2."""
    return 1 if kappa <= 1.0 - beta - _LOG_3_OVER_LOG_16 / math.log(n) else 2


def r_min(beta, kappa, n, z_lower):
    """Critical signal exponent for a target FDR ``n**(-kappa)``."""
    check_int(n, "n", 2)
    check_positive(z_lower, "z_lower")
    log_n = math.log(n)
    if r_min_branch(beta, kappa, n) == 1:
        return beta + kappa + math.log(1.0 / (6.0 * z_lower)) / log_n
    return 1.0 + math.log(1.0 / (24.0 * z_lower)) / log_n


def tau_min(beta, n, gamma, z_lower, *, kappa=None, q=None):
    """Critical threshold ``(gamma r_min log n) ** (1/gamma)``.

    Give exactly one of ``kappa`` and ``q``. A non-positive ``r_min`` yields 0.
    """
    if (kappa is None) == (q is None):
        raise DomainError("give exactly one of kappa and q")
    if kappa is None:
        kappa = kappa_from_q(q, n)
    gamma = check_gamma(gamma)
    rm = r_min(beta, kappa, n, z_lower)
    if rm <= 0:
        return 0.0
    return (gamma * rm * math.log(n)) ** (1.0 / gamma)


def algorithm_constants(z_lower, z_upper):
    """``(c_bh, c_bc, zeta)`` for the given tail constants."""
    z_lower = check_positive(z_lower, "z_lower")
    z_upper = check_positive(z_upper, "z_upper")
    if z_lower < z_upper:
        raise DomainError(f"need z_lower >= z_upper, got {z_lower} < {z_upper}")
    zeta = max(6.0 * z_lower, 1.0 / (6.0 * z_lower))
    return z_upper / (36.0 * z_lower), z_upper / (48.0 * z_lower), zeta


def _sparsity_power(beta, gamma):
    return beta ** ((1.0 - gamma) / gamma)


def fnr_bounds_at_tau(beta, kappa, r, gamma, z_lower, z_upper, n, scale_c=1.0):
    """Lower and upper bounds on the fixed-threshold FNR near the critical threshold.

    ``lower`` bounds ``FNR(t)`` for ``t >= tau_min(q)``; it is ``1/2`` when
    ``r <= r_min(kappa)``. ``upper`` bounds ``FNR(t)`` for
    ``t <= tau_min(scale_c * q)``. Both share the factor
    ``n ** -d_gamma(beta + kappa, r)``.
    """
    gamma = check_gamma(gamma)
    scale_c = check_positive(scale_c, "scale_c")
    zeta = algorithm_constants(z_lower, z_upper)[2]
    two_b = 2.0 * _sparsity_power(beta, gamma)
    log_rate = -d_gamma(beta + kappa, r, gamma) * math.log(n)
    upper = math.exp(two_b * math.log(max(scale_c, 1.0 / scale_c) * zeta)
                     - math.log(z_upper) + log_rate)
    if r <= r_min(beta, kappa, n, z_lower):
        return 0.5, upper
    lower = math.exp(-two_b * math.log(zeta) - math.log(z_lower) + log_rate)
    return lower, upper


def prefactor_c(beta, gamma, z_lower, z_upper=None):
    """Prefactor of the minimax lower bound, ``c0 * exp(-c1 * beta**((1-gamma)/gamma))``.

    ``c0 = 1/(16 z_lower)`` and ``c1 = 2 log(4 zeta)``.
    """
    zeta = algorithm_constants(z_lower, z_lower if z_upper is None else z_upper)[2]
    c0 = 1.0 / (16.0 * z_lower)
    c1 = 2.0 * math.log(4.0 * zeta)
    return c0 * math.exp(-c1 * _sparsity_power(beta, check_gamma(gamma)))


def minimax_fnr_lower(beta, kappa, r, gamma, z_lower, z_upper, n):
    """FNR lower bound for any threshold procedure with FDR at most ``n**(-kappa)``."""
    if beta <= r <= r_min(beta, kappa, n, z_lower):
        return 1.0 / 32.0
    value = prefactor_c(beta, gamma, z_lower, z_upper) * math.exp(
        -d_gamma(beta + kappa, r, gamma) * math.log(n))
    return min(value, 1.0)


def procedure_fnr_upper(beta, q, r, gamma, z_lower, z_upper, n, algorithm="bh"):
    """FNR upper bound for BH or BC run at target FDR ``q``."""
    c_bh, c_bc, zeta = algorithm_constants(z_lower, z_upper)
    algorithm = algorithm.lower()
    if algorithm not in ("bh", "bc"):
        raise DomainError(f"algorithm must be 'bh' or 'bc', got {algorithm!r}")
    c_a = c_bh if algorithm == "bh" else c_bc
    kappa = kappa_from_q(q, n)
    two_b = 2.0 * _sparsity_power(beta, check_gamma(gamma))
    bound = 2.0 * math.exp(two_b * math.log(zeta / c_a) - math.log(z_upper)
                           - d_gamma(beta + kappa, r, gamma) * math.log(n))
    return bound + q if algorithm == "bc" else bound


def q_cap(z_lower):
    return min(1.0 / 24.0, 1.0 / (6.0 * z_lower))


def optimal_q_star(beta, r, gamma, n, c_star, z_lower=EXACT_Z):
    """Rate-optimal target FDR ``c_star * n ** (-kappa_star)``."""
    cap = q_cap(z_lower)
    if not 0.0 < c_star <= cap * (1.0 + 1e-12):
        raise DomainError(f"c_star must lie in (0, {cap:.6g}], got {c_star}")
    kappa = solve_kappa_star(beta, r, gamma)
    return c_star * math.exp(-kappa * math.log(n)) if n > 1 else float(c_star)


def n_min_lower(z_lower, r_max):
    """Sample-size floor for the lower bound; the bound applies for ``n > n_min_lower``."""
    return math.floor((24.0 * max(z_lower, 1.0) * math.log(4.0)) ** (1.0 / (1.0 - r_max)))


def n_min_upper(z_upper, r_max):
    """Smallest ``n`` from which ``n**(1 - r_max) / 24 >= log(z_upper n)`` holds for good.

    The left side minus the right is decreasing then increasing in ``n``, so
    the answer is one past the last integer where the inequality fails.
    """
    a = 1.0 - r_max

    def slack(m):
        return m ** a / 24.0 - math.log(z_upper * m)

    turn = (24.0 / a) ** (1.0 / a)
    if slack(max(turn, 1.0)) >= 0:
        return 1
    lo = max(int(math.floor(turn)), 1)  # slack(lo) < 0
    while slack(lo) >= 0:
        lo -= 1
    hi = lo * 2
    while slack(hi) < 0:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if slack(mid) < 0:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class TheoryParams:
    """Inputs for the analytic layer; ``q == n ** -kappa``.

    Use :meth:`build` to supply either ``q`` or ``kappa``.
    """

    beta: float
    r: float
    gamma: float
    n: int
    kappa: float
    q: float
    z_lower: float = EXACT_Z
    z_upper: float = EXACT_Z
    r_max: float = 0.9

    @classmethod
    def build(cls, beta, r, gamma, n, *, q=None, kappa=None, z_lower=EXACT_Z,
              z_upper=EXACT_Z, r_max=0.9):
        n = check_int(n, "n", 2)
        if (q is None) == (kappa is None):
            raise DomainError("give exactly one of q and kappa")
        if q is None:
            kappa = float(kappa)
            q = q_from_kappa(kappa, n)
        else:
            q = check_open_unit(q, "q")
            kappa = kappa_from_q(q, n)
        algorithm_constants(z_lower, z_upper)
        return cls(beta=float(beta), r=float(r), gamma=check_gamma(gamma), n=n,
                   kappa=kappa, q=q, z_lower=float(z_lower), z_upper=float(z_upper),
                   r_max=float(r_max))


@dataclass(frozen=True)
class AssumptionReport:
    sparsity: bool          # beta >= log 2 / log n
    signal_floor: bool      # max(beta, log(n)^-((gamma - 1/2)/gamma)) < r
    signal_cap: bool        # r < r_max
    q_cap: bool             # q <= min(1/24, 1/(6 z_lower))
    q_decay: bool           # (3 c_bc / 4) q / log(1/q) n^(1-beta) >= 1
    n_min_lower: int
    n_min_upper: int
    n_above_lower: bool
    n_above_upper: bool

    @property
    def lower_bound_applies(self):
        return self.sparsity and self.signal_floor and self.signal_cap and self.q_cap \
            and self.n_above_lower

    @property
    def upper_bound_applies(self):
        return self.q_cap and self.n_above_upper


def check_assumptions(params):
    """Evaluate each hypothesis of the two main bounds at ``params``."""
    p = params
    log_n = math.log(p.n)
    c_bc = algorithm_constants(p.z_lower, p.z_upper)[1]
    floor = log_n ** (-(p.gamma - 0.5) / p.gamma)
    decay = 0.75 * c_bc * p.q / math.log(1.0 / p.q) * math.exp((1.0 - p.beta) * log_n)
    nl = n_min_lower(p.z_lower, p.r_max)
    nu = n_min_upper(p.z_upper, p.r_max)
    return AssumptionReport(
        sparsity=p.beta >= math.log(2.0) / log_n,
        signal_floor=max(p.beta, floor) < p.r,
        signal_cap=p.r < p.r_max,
        q_cap=p.q <= q_cap(p.z_lower),
        q_decay=decay >= 1.0,
        n_min_lower=nl,
        n_min_upper=nu,
        n_above_lower=p.n > nl,
        n_above_upper=p.n > nu,
    )


@dataclass(frozen=True)
class RateReport:
    kappa_star: float
    r_min: float
    r_min_branch: int
    tau_min: float
    tau_min_degenerate: bool
    feasible: bool
    in_critical_regime: bool
    fnr_lower: float
    fnr_upper: float
    n_min_lower: int
    n_min_upper: int
    prefactor_c: float


def rate_report(params):
    """Collect the analytic quantities for one parameter point.

    ``kappa_star`` is NaN when ``r <= beta``.
    """
    p = params
    feasible = p.r > p.beta
    rm = r_min(p.beta, p.kappa, p.n, p.z_lower)
    return RateReport(
        kappa_star=solve_kappa_star(p.beta, p.r, p.gamma) if feasible else math.nan,
        r_min=rm,
        r_min_branch=r_min_branch(p.beta, p.kappa, p.n),
        tau_min=tau_min(p.beta, p.n, p.gamma, p.z_lower, kappa=p.kappa),
        tau_min_degenerate=rm <= 0,
        feasible=feasible,
        in_critical_regime=p.r <= rm,
        fnr_lower=minimax_fnr_lower(p.beta, p.kappa, p.r, p.gamma, p.z_lower, p.z_upper, p.n),
        fnr_upper=procedure_fnr_upper(p.beta, p.q, p.r, p.gamma, p.z_lower, p.z_upper, p.n, "bh"),
        n_min_lower=n_min_lower(p.z_lower, p.r_max),
        n_min_upper=n_min_upper(p.z_upper, p.r_max),
        prefactor_c=prefactor_c(p.beta, p.gamma, p.z_lower, p.z_upper),
    )
