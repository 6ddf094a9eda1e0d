"""Closed forms for a link powered by a Poisson field of power beacons.

The per-slot harvested energy Z is a shot-noise functional of a planar
Poisson process under the bounded path loss max(1, r^eta). Its Laplace
transform exp(g(s)) is known in closed form, and every quantity here is
driven by g and its derivatives:

* :func:`laplace_z` / :func:`mean_harvested` -- the transform and its mean.
* :func:`laplace_derivs` -- derivative ladder via the product recurrence
  for derivatives of exp(g) (reference path).
* :func:`laplace_derivs_bell` -- the same ladder through complete Bell
  polynomials (audit path; cross-validated against the reference).
* :func:`energy_supply_prob_mp` -- probability that m slots of harvesting
  cover an n-slot codeword, via a rescaled nonnegative series that stays
  stable to thousands of terms.
* :func:`achievable_rate_mp` -- finite-blocklength rate with the
  supply-probability feasibility gate.

The power ratio in this module is a = p_t / (mu * p_pb) — transmit power
over the mean *per-beacon* harvested scale — not the single-beacon p_t/p_e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, betaln

from . import single_pb
from .specfun import (
    DEFAULT_TOL,
    ConvergenceError,
    DomainError,
    RealTol,
    complete_bell,
    gauss_2f1,
    gauss_2f1_deriv,
    pochhammer,
)

__all__ = [
    "NetworkParams",
    "LaplaceDerivs",
    "StabilityError",
    "laplace_z",
    "mean_harvested",
    "f_deriv",
    "laplace_derivs",
    "laplace_derivs_bell",
    "energy_supply_prob_mp",
    "achievable_rate_mp",
]

# Above this argument the hypergeometric series route needs too many terms;
# switch to the large-argument expansion of the radial functional.
_U_SWITCH = 500.0

# Hard cap on raw derivative order: beyond this the factorially scaled
# ladder loses double-precision headroom.
_DERIV_CAP = 64

# Cap on the number of supply-series terms (n/2). The rescaled series is
# stable at this size; cost grows quadratically.
_SERIES_CAP = 100_000

_SIGN_SLACK = 1e-9


class StabilityError(ArithmeticError):
    """Raised when an evaluation leaves its mathematically valid range."""


@dataclass(frozen=True)
class NetworkParams:
    """Poisson beacon field parameters.

    Attributes:
        density: Beacon density (nodes per unit area), > 0.
        p_pb: Beacon transmit power (energy per channel use), > 0.
        mu: Rectifier efficiency, in (0, 1].
        eta: Path loss exponent, > 2.
    """

    density: float
    p_pb: float
    mu: float = 1.0
    eta: float = 3.6

    def __post_init__(self) -> None:
        if not (self.density > 0.0):
            raise DomainError(f"density must be > 0, got {self.density!r}")
        if not (self.p_pb > 0.0):
            raise DomainError(f"p_pb must be > 0, got {self.p_pb!r}")
        if not (0.0 < self.mu <= 1.0):
            raise DomainError(f"mu must lie in (0, 1], got {self.mu!r}")
        if not (self.eta > 2.0):
            raise DomainError(f"eta must be > 2, got {self.eta!r}")


@dataclass(frozen=True)
class LaplaceDerivs:
    """Derivatives d^k/ds^k of the energy Laplace transform at one point.

    ``values[k]`` is the k-th derivative; a Laplace transform of a
    nonnegative random variable is completely monotone, so the entries
    alternate in sign: (-1)^k values[k] >= 0.
    """

    s: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise DomainError("values must hold at least the 0th derivative")
        if not (0.0 < self.values[0] <= 1.0 + _SIGN_SLACK):
            raise DomainError(f"values[0] must lie in (0, 1], got {self.values[0]!r}")
        scale = max(abs(v) for v in self.values)
        for k, v in enumerate(self.values):
            if (-1.0) ** k * v < -_SIGN_SLACK * scale:
                raise DomainError(f"sign alternation violated at order {k}")

    @property
    def order(self) -> int:
        return len(self.values) - 1


# =============================================================================
# The radial interference functional and its derivatives
# =============================================================================


def _f_large_arg(k: int, u: float, eta: float, tol: RealTol) -> float:
    """k-th derivative of the radial functional for large arguments.

    Uses the expansion F(u) = (2/eta) [pi/sin(pi*alpha) u^alpha
    - sum_{j>=0} (-1)^j u^(-j)/(alpha+j)], differentiated term by term.
    The tail is alternating with decaying terms for u > 1, so truncation
    error is bounded by the first omitted term.
    """
    alpha = 2.0 / eta
    lead_coef = math.pi / math.sin(math.pi * alpha)
    falling = 1.0
    for i in range(k):
        falling *= alpha - i
    lead = lead_coef * falling * u ** (alpha - k)

    acc = 0.0
    if k == 0:
        acc += 1.0 / alpha  # j = 0 term; constants vanish under derivatives
    sign_k = -1.0 if k % 2 else 1.0
    for j in range(1, tol.max_iter):
        term = sign_k * pochhammer(float(j), k) * u ** (-j - k) / (alpha + j)
        if j % 2:
            term = -term
        acc += term
        if abs(term) <= tol.rel_tol * (abs(acc) + abs(lead)):
            return (2.0 / eta) * (lead - acc)
    raise ConvergenceError(f"large-argument expansion stalled at u={u!r}")


def f_deriv(k: int, x1: float, eta: float, tol: RealTol | None = None) -> float:
    """k-th derivative of the radial energy-capture functional F(x1, eta).

    F(x1, eta) = (2 x1/(eta-2)) * 2F1(1, 1-2/eta; 2-2/eta; -x1) integrates
    the captured power over beacon distances; its derivatives feed the
    Laplace-transform ladder. k = 0 returns F itself.
    """
    tol = tol or DEFAULT_TOL
    if k < 0:
        raise DomainError(f"derivative order k must be >= 0, got {k!r}")
    if not (x1 >= 0.0):
        raise DomainError(f"x1 must be >= 0, got {x1!r}")
    if not (eta > 2.0):
        raise DomainError(f"eta must be > 2, got {eta!r}")
    if x1 > _U_SWITCH:
        return _f_large_arg(k, x1, eta, tol)
    if k == 0:
        return (2.0 * x1 / (eta - 2.0)) * gauss_2f1(
            1.0, 1.0 - 2.0 / eta, 2.0 - 2.0 / eta, -x1, tol
        )
    return (2.0 * k / (eta - 2.0)) * gauss_2f1_deriv(k - 1, x1, eta, tol) + (
        2.0 * x1 / (eta - 2.0)
    ) * gauss_2f1_deriv(k, x1, eta, tol)


# =============================================================================
# Laplace transform of the harvested energy
# =============================================================================


def _log_laplace(u: float, net: NetworkParams, tol: RealTol | None) -> float:
    """g(u) = ln L_Z expressed in the scaled argument u = p_pb*mu*s."""
    return -math.pi * net.density * (u / (1.0 + u) + f_deriv(0, u, net.eta, tol))


def laplace_z(s: float, net: NetworkParams, tol: RealTol | None = None) -> float:
    """Laplace transform E[exp(-s Z)] of the per-slot harvested energy."""
    if not (s >= 0.0):
        raise DomainError(f"s must be >= 0, got {s!r}")
    if s == 0.0:
        return 1.0
    return math.exp(_log_laplace(net.p_pb * net.mu * s, net, tol))


def mean_harvested(net: NetworkParams) -> float:
    """Mean per-slot harvested energy: pi*density*(eta/(eta-2))*mu*p_pb."""
    return math.pi * net.density * (net.eta / (net.eta - 2.0)) * net.mu * net.p_pb


def _check_deriv_args(s: float, order: int) -> None:
    if not (s > 0.0):
        raise DomainError(f"s must be > 0, got {s!r}")
    if int(order) != order or order < 0:
        raise DomainError(f"derivative order must be a non-negative integer, got {order!r}")
    if order > _DERIV_CAP:
        raise DomainError(f"derivative order {order} exceeds the stability cap {_DERIV_CAP}")


def _g_derivs_s(
    s: float, order: int, net: NetworkParams, tol: RealTol | None
) -> list[float]:
    """[g(s), g'(s), ..., g^(order)(s)] via the scaled-argument chain rule."""
    b = net.p_pb * net.mu
    u = b * s
    out = [_log_laplace(u, net, tol)]
    b_pow = 1.0
    for k in range(1, order + 1):
        b_pow *= b
        rational = -(-1.0) ** k * math.factorial(k) / (1.0 + u) ** (k + 1)
        g_u = -math.pi * net.density * (rational + f_deriv(k, u, net.eta, tol))
        out.append(b_pow * g_u)
    return out


def _check_alternation(values: list[float]) -> None:
    scale = max(abs(v) for v in values)
    for k, v in enumerate(values):
        if (-1.0) ** k * v < -_SIGN_SLACK * scale:
            raise StabilityError(
                f"derivative ladder lost sign alternation at order {k}"
            )


def laplace_derivs(
    s: float, order: int, net: NetworkParams, tol: RealTol | None = None
) -> LaplaceDerivs:
    """Derivatives of the energy Laplace transform, orders 0..order.

    Reference evaluation path: with L = exp(g), successive derivatives obey
    L^(i) = sum_j C(i-1, j) g^(i-j) L^(j), which needs only the derivatives
    of g (closed forms above).

    Raises:
        DomainError: If ``order`` exceeds the stability cap (64).
        StabilityError: If the completely-monotone sign pattern breaks.
    """
    _check_deriv_args(s, order)
    g = _g_derivs_s(s, order, net, tol)
    values = [math.exp(g[0])]
    for i in range(1, order + 1):
        acc = 0.0
        for j in range(i):
            acc += math.comb(i - 1, j) * g[i - j] * values[j]
        values.append(acc)
    _check_alternation(values)
    return LaplaceDerivs(s=s, values=tuple(values))


def laplace_derivs_bell(
    s: float, order: int, net: NetworkParams, tol: RealTol | None = None
) -> LaplaceDerivs:
    """Derivatives of the energy Laplace transform via Bell polynomials.

    Audit path: L^(i) = exp(g) * B_i(g', ..., g^(i)) with the complete Bell
    polynomial, and each g^(i) assembled from the parameter-shifted
    hypergeometric family directly (no reuse of the reference ladder's
    derivative closed forms beyond the shared 2F1 core). Practical for
    moderate scaled arguments; very large ones exceed the series budget of
    the underlying 2F1 and raise a convergence error rather than degrade.
    """
    _check_deriv_args(s, order)
    b = net.p_pb * net.mu
    u = b * s
    lam_pi = math.pi * net.density
    beta = 2.0 / net.eta

    def f_hat(j: int) -> float:
        # Index-shifted hypergeometric core scaled by the functional's
        # leading rational factor; j = 0 reproduces F itself.
        return (2.0 * u / (net.eta - 2.0)) * gauss_2f1(
            j + 1.0, j + 1.0 - beta, j + 2.0 - beta, -u, tol
        )

    def upsilon(j: int) -> float:
        sign = -1.0 if j % 2 else 1.0
        return sign * math.factorial(j) * pochhammer(1.0 - beta, j) / pochhammer(2.0 - beta, j)

    f_hats = [f_hat(j) for j in range(order + 1)]
    g0 = -lam_pi * (u / (1.0 + u) + f_hats[0])
    g_s: list[float] = []
    b_pow = 1.0
    for i in range(1, order + 1):
        b_pow *= b
        rational = (-1.0) ** (i + 1) * math.factorial(i) / (1.0 + u) ** (i + 1)
        g_u = -lam_pi * (
            rational
            + (i / u) * upsilon(i - 1) * f_hats[i - 1]
            + upsilon(i) * f_hats[i]
        )
        g_s.append(b_pow * g_u)

    base = math.exp(g0)
    values = [base * complete_bell(g_s[:i]) for i in range(order + 1)]
    _check_alternation(values)
    return LaplaceDerivs(s=s, values=tuple(values))


# =============================================================================
# Energy supply probability
# =============================================================================


def _series_coefficients(count: int, u: float, net: NetworkParams) -> np.ndarray:
    """Nonnegative ladder coefficients c_1..c_count for the outage series.

    c_r = (-1)^r u^r g^(r)(u) / (r-1)! in the scaled argument; both the
    near-field term and the radial-functional term reduce to closed forms
    (a geometric-in-w sequence and an incomplete-beta integral), which is
    what keeps the series free of factorials and cancellation.
    """
    alpha = 2.0 / net.eta
    w = u / (1.0 + u)
    log_w = math.log(u) - math.log1p(u)
    r = np.arange(1, count + 1, dtype=float)
    with np.errstate(under="ignore"):
        near = r * np.exp(r * log_w) / (1.0 + u)
        radial = (
            (2.0 / net.eta)
            * r
            * math.exp(alpha * math.log(u))
            * np.exp(betaln(1.0 + alpha, r - alpha))
            * betainc(r - alpha, 1.0 + alpha, w)
        )
    return math.pi * net.density * (near + radial)


def energy_supply_prob_mp(
    m: int, n: int, p_t: float, net: NetworkParams, tol: RealTol | None = None
) -> float:
    """Probability that m harvesting slots cover an n-slot codeword.

    Evaluates 1 minus the outage series sum_{i<n/2} T_i, where
    T_i = (-1)^i s^i L^(i)(s) / i! at s = m/(2a), a = p_t/(mu*p_pb).
    Each T_i is nonnegative (it is E[(sZ)^i exp(-sZ)]/i!), and the ladder
    T_i = (1/i) sum_r c_r T_{i-r} with nonnegative c_r makes the partial
    sums monotone — no alternation, no factorial growth. A running
    log-offset rescales the ladder whenever values approach the double
    range, so very negative exponents g(s) stay exact.

    Raises:
        DomainError: Odd n, m < 1, or n/2 beyond the series cap.
        StabilityError: If the accumulated outage leaves [0, 1] beyond
            tolerance.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"harvest blocklength m must be an integer >= 1, got {m!r}")
    if int(n) != n or n < 2 or int(n) % 2:
        raise DomainError(f"transmit blocklength n must be an even integer >= 2, got {n!r}")
    if not (p_t >= 0.0):
        raise DomainError(f"p_t must be >= 0, got {p_t!r}")
    if p_t == 0.0:
        return 1.0
    count = n // 2
    if count > _SERIES_CAP:
        raise DomainError(f"n/2 = {count} exceeds the series cap {_SERIES_CAP}")

    u = m * net.mu * net.p_pb / (2.0 * p_t)
    if not math.isfinite(u) or u > 1e200:
        # The threshold argument dwarfs any representable series scale;
        # outage is far below double-precision resolution.
        return 1.0

    offset = _log_laplace(u, net, tol)
    t = np.zeros(count)
    t[0] = 1.0
    total = 1.0
    if count > 1:
        c = _series_coefficients(count - 1, u, net)
        for i in range(1, count):
            ti = float(np.dot(c[:i], t[i - 1 :: -1])) / i
            t[i] = ti
            total += ti
            if ti > 1e250:
                t[: i + 1] /= ti
                total /= ti
                offset += math.log(ti)

    log_outage = offset + math.log(total)
    outage = math.exp(log_outage) if log_outage > -745.0 else 0.0
    if outage > 1.0 + _SIGN_SLACK:
        raise StabilityError(f"outage series left [0, 1]: {outage!r}")
    return max(0.0, 1.0 - outage)


def achievable_rate_mp(
    plan: "single_pb.BlocklengthPlan",
    p_t: float,
    sigma2: float,
    net: NetworkParams,
    tol: RealTol | None = None,
) -> "single_pb.RateResult":
    """Finite-blocklength achievable rate for a Poisson-field powered link.

    The rate expression matches the single-beacon bound with SNR
    p_t/sigma2; feasibility requires the transmit blocklength to reach the
    error-target floor and the supply probability to reach 2/(2+eps).
    """
    if not (p_t >= 0.0):
        raise DomainError(f"p_t must be >= 0, got {p_t!r}")
    if not (sigma2 > 0.0):
        raise DomainError(f"sigma2 must be > 0, got {sigma2!r}")
    raw = single_pb._raw_rate_nats(plan.m, plan.n, p_t / sigma2, plan.epsilon)
    if plan.epsilon == 0.0:
        feasible = p_t == 0.0
    else:
        from . import planner  # deferred: planner builds on this module

        feasible = plan.n >= planner.min_transmit_blocklength(plan.epsilon) and (
            energy_supply_prob_mp(plan.m, plan.n, p_t, net, tol)
            >= 2.0 / (2.0 + plan.epsilon)
        )
    clamped = raw < 0.0
    rate = 0.0 if clamped else raw
    return single_pb.RateResult(
        rate_nats=rate,
        rate_bits=rate / math.log(2.0),
        feasible=feasible,
        clamped=clamped,
        raw_rate_nats=raw,
    )
