"""Closed forms for a link powered by a single dedicated power beacon.

Covers the save-then-transmit frame: the probability that the harvested
energy covers the codeword energy, the finite-blocklength achievable rate
with its feasibility constraints, the asymptotic (large-frame) rate, and
the transmit power that maximizes the asymptotic rate.

Conventions: all logarithms are natural; rates are reported in both nats
and bits per channel use. The power ratio ``a`` here is transmit power over
mean harvested power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .specfun import DomainError, RealTol, lambert_w0

__all__ = [
    "LinkParams",
    "BlocklengthPlan",
    "RateResult",
    "SearchError",
    "energy_supply_prob",
    "energy_outage_prob",
    "within_derivation_domain",
    "min_power_ratio",
    "asymptotic_supply_limit",
    "transmit_floor",
    "harvest_floor_real",
    "harvest_len_feasible_at_floor",
    "transmit_len_within_energy_cap",
    "transmit_len_meets_error_floor",
    "harvest_len_covers_transmit",
    "achievable_rate_fbl",
    "asymptotic_rate",
    "capacity_prelog",
    "high_reliability_rate",
    "optimal_power_asymptotic",
    "optimal_power_slope",
    "optimal_power_fbl",
]

_LN2 = math.log(2.0)
_INV_E = math.exp(-1.0)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SearchError(RuntimeError):
    """Raised when a numerical search cannot produce a meaningful result."""


# =============================================================================
# Core parameter types
# =============================================================================


@dataclass(frozen=True)
class LinkParams:
    """Physical parameters of one powered link.

    Attributes:
        p_t: Transmit power (energy per channel use), >= 0.
        p_e: Mean harvested power (energy per channel use), > 0.
        sigma2: Receiver noise power, > 0.
    """

    p_t: float
    p_e: float
    sigma2: float = 1.0

    def __post_init__(self) -> None:
        if not (self.p_t >= 0.0):
            raise DomainError(f"p_t must be >= 0, got {self.p_t!r}")
        if not (self.p_e > 0.0):
            raise DomainError(f"p_e must be > 0, got {self.p_e!r}")
        if not (self.sigma2 > 0.0):
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2!r}")

    @property
    def a(self) -> float:
        """Power ratio: transmit power over mean harvested power."""
        return self.p_t / self.p_e

    @property
    def gamma(self) -> float:
        """Receive SNR: transmit power over noise power."""
        return self.p_t / self.sigma2


@dataclass(frozen=True)
class BlocklengthPlan:
    """A (harvest, transmit) blocklength pair with its error target.

    The transmit length must be even; odd requests are rounded up one slot.
    """

    m: int
    n: int
    epsilon: float

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m!r}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if self.n % 2:
            object.__setattr__(self, "n", int(self.n) + 1)
        if not (0.0 <= self.epsilon < 1.0):
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def total(self) -> int:
        """Frame length: harvest slots plus transmit slots."""
        return self.m + self.n


@dataclass(frozen=True)
class RateResult:
    """Achievable-rate evaluation outcome.

    ``rate_nats`` is clamped at zero (a negative numerator means the bound
    is vacuous, not that information flows backwards); the unclamped value
    stays available in ``raw_rate_nats``. ``feasible`` reports whether the
    blocklength pair satisfies the energy feasibility constraints.
    """

    rate_nats: float
    rate_bits: float
    feasible: bool
    clamped: bool
    raw_rate_nats: float = field(default=math.nan)


# =============================================================================
# Energy supply probability
# =============================================================================


def _check_mn(m: float, n: float) -> None:
    if int(m) != m or m < 1:
        raise DomainError(f"harvest blocklength m must be an integer >= 1, got {m!r}")
    if int(n) != n or n < 2 or int(n) % 2:
        raise DomainError(f"transmit blocklength n must be an even integer >= 2, got {n!r}")


def energy_supply_prob(m: int, n: int, a: float) -> float:
    """Probability that harvested energy covers the whole codeword.

    Args:
        m: Harvest blocklength (integer >= 1).
        n: Transmit blocklength (even integer >= 2).
        a: Power ratio (transmit over mean harvested power), >= 0.

    Returns:
        (1 + 2a/m)^(-n/2), a value in (0, 1].
    """
    _check_mn(m, n)
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    return math.exp(-(n / 2.0) * math.log1p(2.0 * a / m))


def energy_outage_prob(m: int, n: int, a: float) -> float:
    """Complement of :func:`energy_supply_prob`."""
    return 1.0 - energy_supply_prob(m, n, a)


def within_derivation_domain(m: int, a: float) -> bool:
    """True when m > 2a, the regime assumed by the closed form's derivation.

    The derivation of the supply probability bounds a moment generating
    function under m > 2a; the resulting expression stays a valid
    probability for every m >= 1, a >= 0, so evaluation is never blocked —
    this predicate just reports whether the assumption held.
    """
    return m > 2.0 * a


def min_power_ratio(m: int, n: int, rho: float) -> float:
    """Largest power ratio keeping the supply probability at least rho.

    Inverts the supply probability in ``a``: the returned ratio makes
    ``energy_supply_prob(m, n, a)`` equal rho exactly.
    """
    _check_mn(m, n)
    if not (0.0 < rho <= 1.0):
        raise DomainError(f"rho must lie in (0, 1], got {rho!r}")
    # rho^(-2/n) - 1 evaluated without cancellation.
    return (m / 2.0) * math.expm1(-(2.0 / n) * math.log(rho))


def asymptotic_supply_limit(a: float, c: float) -> float:
    """Large-frame limit of the supply probability along m = c*n."""
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    if not (c > 0.0):
        raise DomainError(f"proportionality constant c must be > 0, got {c!r}")
    return math.exp(-a / c)


# =============================================================================
# Feasibility constraints (real-valued forms)
# =============================================================================


def transmit_floor(epsilon: float) -> float:
    """Real-valued lower limit on the transmit blocklength for error target.

    Returns (ln((2+eps)/eps^2))^4. The operational (integer, even) floor is
    provided by the planner module.
    """
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return math.log((2.0 + epsilon) / (epsilon * epsilon)) ** 4


def harvest_floor_real(n: float, a: float, epsilon: float) -> float:
    """Real-valued lower limit on the harvest blocklength.

    Smallest m (as a real number) for which a transmit phase of length ``n``
    is energy-feasible: 2a / ((1 + eps/2)^(2/n) - 1). Accepts real n so it
    can also be evaluated at the real-valued transmit floor.
    """
    if not (n > 0.0):
        raise DomainError(f"n must be > 0, got {n!r}")
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if a == 0.0:
        return 0.0
    return 2.0 * a / math.expm1((2.0 / n) * math.log1p(0.5 * epsilon))


def harvest_len_feasible_at_floor(m: float, a: float, epsilon: float) -> bool:
    """m is long enough to power the shortest admissible transmit phase."""
    if a == 0.0:
        return True
    return m >= harvest_floor_real(transmit_floor(epsilon), a, epsilon)


def transmit_len_within_energy_cap(n: float, m: float, a: float, epsilon: float) -> bool:
    """n does not exceed the energy-limited cap 2 ln(1+eps/2)/ln(1+2a/m)."""
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    growth = math.log1p(2.0 * a / m)
    if growth == 0.0:
        return True
    return n <= 2.0 * math.log1p(0.5 * epsilon) / growth


def transmit_len_meets_error_floor(n: float, epsilon: float) -> bool:
    """n reaches the real-valued transmit floor for the error target."""
    return n >= transmit_floor(epsilon)


def harvest_len_covers_transmit(m: float, n: float, a: float, epsilon: float) -> bool:
    """m reaches the real-valued harvest floor for this transmit length."""
    return m >= harvest_floor_real(n, a, epsilon)


def _operational_feasible(m: int, n: int, a: float, epsilon: float) -> bool:
    """Feasibility as used by rate results: the energy cap on n plus the
    harvest floor evaluated at the operational (even-integer) transmit
    floor, so that minimum-latency plans validate their own feasibility."""
    if epsilon == 0.0:
        return a == 0.0
    from . import planner  # deferred: planner builds on this module

    n_floor = planner.min_transmit_blocklength(epsilon)
    return (
        m >= harvest_floor_real(n_floor, a, epsilon)
        and transmit_len_within_energy_cap(n, m, a, epsilon)
    )


# =============================================================================
# Finite-blocklength and asymptotic rates
# =============================================================================


def _raw_rate_nats(m: int, n: int, gamma: float, epsilon: float) -> float:
    """Unclamped rate bound numerator over total frame length, in nats."""
    snr_frac = gamma / (gamma + 1.0)
    if snr_frac == 0.0:
        penalty = 0.0
    elif epsilon == 0.0:
        return -math.inf
    else:
        penalty = math.sqrt((2.0 + epsilon) / epsilon * snr_frac * n)
    numer = (n / 2.0) * math.log1p(gamma) - penalty - n ** 0.25 - 1.0
    return numer / (n + m)


def achievable_rate_fbl(plan: BlocklengthPlan, link: LinkParams) -> RateResult:
    """Finite-blocklength achievable rate for a single-beacon link.

    Args:
        plan: Blocklength pair and error target.
        link: Physical link parameters (defines SNR and power ratio).

    Returns:
        RateResult with the clamped rate, feasibility of (m, n) under the
        energy constraints, and the raw (possibly negative) bound value.
    """
    raw = _raw_rate_nats(plan.m, plan.n, link.gamma, plan.epsilon)
    feasible = _operational_feasible(plan.m, plan.n, link.a, plan.epsilon)
    clamped = raw < 0.0
    rate = 0.0 if clamped else raw
    return RateResult(
        rate_nats=rate,
        rate_bits=rate / _LN2,
        feasible=feasible,
        clamped=clamped,
        raw_rate_nats=raw,
    )


def capacity_prelog(a: float, epsilon: float) -> float:
    """Fraction of AWGN capacity surviving the harvesting overhead.

    1 / (1 + a/ln(1+eps/2)), in [0, 1]. At epsilon = 0 the prelog is 1 for
    a = 0 and 0 otherwise (the overhead diverges).
    """
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    if not (0.0 <= epsilon < 1.0):
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    if epsilon == 0.0:
        return 1.0 if a == 0.0 else 0.0
    return 1.0 / (1.0 + a / math.log1p(0.5 * epsilon))


def asymptotic_rate(link: LinkParams, epsilon: float) -> float:
    """Large-frame achievable rate in nats per channel use."""
    return capacity_prelog(link.a, epsilon) * 0.5 * math.log1p(link.gamma)


def high_reliability_rate(link: LinkParams, epsilon: float) -> float:
    """Small-epsilon approximation of the asymptotic rate (nats/use)."""
    if not (0.0 <= epsilon < 1.0):
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    cap = 0.5 * math.log1p(link.gamma)
    if epsilon == 0.0:
        return cap if link.a == 0.0 else 0.0
    return cap / (1.0 + 2.0 * link.a / epsilon)


# =============================================================================
# Optimal transmit power
# =============================================================================


def _shifted_budget(p_e: float, sigma2: float, epsilon: float) -> float:
    if not (p_e > 0.0) or not (sigma2 > 0.0):
        raise DomainError("p_e and sigma2 must be > 0")
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return (p_e / sigma2) * math.log1p(0.5 * epsilon) - 1.0


def optimal_power_asymptotic(
    p_e: float, sigma2: float, epsilon: float, tol: RealTol | None = None
) -> float:
    """Transmit power maximizing the asymptotic rate.

    Solves the stationarity condition of the asymptotic rate in closed form:
    with t = (p_e/sigma2) ln(1+eps/2) - 1, the maximizer is
    sigma2 * (t / W0(t/e) - 1).
    """
    t = _shifted_budget(p_e, sigma2, epsilon)
    if t == 0.0:
        # Limit t -> 0 of t / W0(t/e) is e.
        return sigma2 * (math.e - 1.0)
    w = lambert_w0(t * _INV_E, tol)
    return sigma2 * (t / w - 1.0)


def optimal_power_slope(
    p_e: float, sigma2: float, epsilon: float, tol: RealTol | None = None
) -> float:
    """Derivative of the optimal transmit power with respect to p_e."""
    t = _shifted_budget(p_e, sigma2, epsilon)
    return math.log1p(0.5 * epsilon) / (1.0 + lambert_w0(t * _INV_E, tol))


def optimal_power_fbl(
    epsilon: float,
    p_e: float,
    sigma2: float = 1.0,
    tol: RealTol | None = None,
) -> tuple[float, float]:
    """Maximize the finite-blocklength rate over transmit power.

    For each candidate power the blocklengths are re-planned (minimal even
    transmit length for the error target, then the minimal harvest length
    for the resulting power ratio). The search is golden-section on
    ln(p_t) over [1e-6 * p_e, p_e], seeded by a 32-point pre-scan; the
    asymptotically optimal power is always included as a candidate.

    Returns:
        (p_t_star, rate_nats_star).

    Raises:
        SearchError: If the rate is zero over the whole bracket.
    """
    tol = tol or RealTol(rel_tol=1e-10, max_iter=200)
    from . import planner  # deferred: planner builds on this module

    n = planner.min_transmit_blocklength(epsilon)

    def rate_at(p_t: float) -> float:
        m = planner.min_harvest_blocklength(n, p_t / p_e, epsilon)
        plan = BlocklengthPlan(m=m, n=n, epsilon=epsilon)
        return achievable_rate_fbl(plan, LinkParams(p_t, p_e, sigma2)).rate_nats

    lo, hi = math.log(1e-6 * p_e), math.log(p_e)
    grid = [lo + (hi - lo) * i / 31.0 for i in range(32)]
    scans = [(rate_at(math.exp(x)), x) for x in grid]
    best_rate, best_x = max(scans)
    if best_rate <= 0.0:
        raise SearchError("rate is zero over the whole power bracket")

    # Golden-section refinement around the pre-scan winner.
    idx = grid.index(best_x)
    a_x = grid[max(idx - 1, 0)]
    b_x = grid[min(idx + 1, 31)]
    x1 = b_x - _GOLDEN * (b_x - a_x)
    x2 = a_x + _GOLDEN * (b_x - a_x)
    f1, f2 = rate_at(math.exp(x1)), rate_at(math.exp(x2))
    for _ in range(tol.max_iter):
        if b_x - a_x <= tol.rel_tol * max(1.0, abs(a_x) + abs(b_x)):
            break
        if f1 < f2:
            a_x, x1, f1 = x1, x2, f2
            x2 = a_x + _GOLDEN * (b_x - a_x)
            f2 = rate_at(math.exp(x2))
        else:
            b_x, x2, f2 = x2, x1, f1
            x1 = b_x - _GOLDEN * (b_x - a_x)
            f1 = rate_at(math.exp(x1))
    candidates = [(f1, x1), (f2, x2), (best_rate, best_x)]
    p_asym = optimal_power_asymptotic(p_e, sigma2, epsilon)
    if 1e-6 * p_e <= p_asym <= p_e:
        candidates.append((rate_at(p_asym), math.log(p_asym)))
    rate_star, x_star = max(candidates)
    return math.exp(x_star), rate_star
