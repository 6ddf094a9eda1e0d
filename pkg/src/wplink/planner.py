"""Minimum-latency blocklength planning.

Given an error target (and a power ratio or network), pick the shortest
transmit phase admitted by the target and the shortest harvest phase that
powers it, plus the scaling-law helpers describing how the harvest phase
grows with the transmit phase.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from . import multi_pb, single_pb
from .specfun import DomainError

__all__ = [
    "UnsatisfiableError",
    "ScalingRate",
    "min_transmit_blocklength",
    "min_harvest_blocklength",
    "min_harvest_blocklength_mp",
    "scaling_rate",
    "harvest_overhead",
]

_M_SEARCH_CAP = 10 ** 9


class UnsatisfiableError(RuntimeError):
    """No harvest blocklength up to the search cap meets the constraint."""


class ScalingRate(NamedTuple):
    """Harvest-per-transmit slot ratio, exact and small-epsilon forms."""

    exact: float
    small_eps: float


def _check_epsilon(epsilon: float) -> None:
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def min_transmit_blocklength(epsilon: float) -> int:
    """Shortest even transmit blocklength admitted by the error target.

    The real-valued floor (ln((2+eps)/eps^2))^4 is rounded to the nearest
    integer and then pushed up to the next even value, with 2 as the
    smallest possible answer.
    """
    _check_epsilon(epsilon)
    n = max(int(math.floor(single_pb.transmit_floor(epsilon) + 0.5)), 2)
    return n + 1 if n % 2 else n


def min_harvest_blocklength(n: int, a: float, epsilon: float) -> int:
    """Shortest harvest blocklength powering an n-slot transmit phase."""
    if int(n) != n or n < 2 or int(n) % 2:
        raise DomainError(f"n must be an even integer >= 2, got {n!r}")
    _check_epsilon(epsilon)
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    return int(math.ceil(single_pb.harvest_floor_real(float(n), a, epsilon)))


def min_harvest_blocklength_mp(
    n: int,
    p_t: float,
    net: "multi_pb.NetworkParams",
    epsilon: float,
    lo_hint: int | None = None,
) -> int:
    """Shortest harvest blocklength for a Poisson-field powered link.

    Finds the smallest m whose energy supply probability reaches
    2/(2+eps), by doubling then bisection — the supply probability is
    increasing in m. ``lo_hint`` optionally seeds the doubling phase
    (useful when sweeping nearby parameter points).

    Raises:
        UnsatisfiableError: If the constraint still fails at m = 10^9.
    """
    if int(n) != n or n < 2 or int(n) % 2:
        raise DomainError(f"n must be an even integer >= 2, got {n!r}")
    _check_epsilon(epsilon)
    if not (p_t >= 0.0):
        raise DomainError(f"p_t must be >= 0, got {p_t!r}")
    target = 2.0 / (2.0 + epsilon)

    def ok(m: int) -> bool:
        return multi_pb.energy_supply_prob_mp(m, n, p_t, net) >= target

    if p_t == 0.0 or ok(1):
        return 1

    lo = 1  # known infeasible
    hi = 0  # feasible once found
    if lo_hint is not None and lo_hint > 1:
        h = min(int(lo_hint), _M_SEARCH_CAP)
        if ok(h):
            hi = h
        else:
            lo = h
    if not hi:
        hi = 2 * lo
        while not ok(hi):
            if hi >= _M_SEARCH_CAP:
                raise UnsatisfiableError(
                    f"supply probability below {target:.6g} even at m={_M_SEARCH_CAP}"
                )
            lo = hi
            hi = min(2 * hi, _M_SEARCH_CAP)
    # Invariant: ok(hi) and not ok(lo); shrink to the boundary.
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def scaling_rate(a: float, epsilon: float) -> ScalingRate:
    """Asymptotic harvest slots needed per transmit slot.

    Returns the exact ratio a/ln(1+eps/2) alongside the small-epsilon
    approximation 2a/eps.
    """
    _check_epsilon(epsilon)
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    return ScalingRate(
        exact=a / math.log1p(0.5 * epsilon),
        small_eps=2.0 * a / epsilon,
    )


def harvest_overhead(a: float, epsilon: float) -> float:
    """Frame-length inflation factor from harvesting: 1 + 2a/eps."""
    _check_epsilon(epsilon)
    if not (a >= 0.0):
        raise DomainError(f"power ratio a must be >= 0, got {a!r}")
    return 1.0 + 2.0 * a / epsilon
