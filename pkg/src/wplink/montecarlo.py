"""Stochastic oracles for the closed forms.

Every estimator here simulates the model directly — exponential energy
packets or a planar Poisson beacon field, and codeword energy as a sum of
squared Gaussian symbols — so agreement with the analytic modules is
evidence, not circularity.

Determinism contract: draws come from counter-based Philox streams. Trials
are processed in fixed blocks of :data:`BLOCK` trials; block ``b`` of seed
``s`` uses the 128-bit key ``(s << 64) | b``, and within a block the draw
order is fixed (energy variables first, then channel symbols in chunks of
256). Estimates are therefore bit-identical for a given (seed, parameters)
regardless of how blocks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .multi_pb import NetworkParams
from .specfun import DomainError

__all__ = [
    "BLOCK",
    "McConfig",
    "McEstimate",
    "estimate_supply_prob_single",
    "check_prefix_equivalence",
    "truncation_radius",
    "sample_ppp_energy",
    "sample_ppp_energies",
    "estimate_supply_prob_mp",
]

BLOCK = 4096
_SYMBOL_CHUNK = 256


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run configuration.

    Attributes:
        trials: Number of independent trials (>= 1).
        seed: 64-bit unsigned stream identifier.
        truncation_tail: For Poisson-field sampling, the admissible ratio of
            neglected far-field mean energy to the total mean.
    """

    trials: int
    seed: int = 0
    truncation_tail: float = 1e-4

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (0.0 < self.truncation_tail < 1.0):
            raise DomainError(
                f"truncation_tail must lie in (0, 1), got {self.truncation_tail!r}"
            )


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its binomial standard error."""

    mean: float
    std_err: float
    trials: int
    seed: int


def _rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed << 64) | block))


def _block_sizes(trials: int):
    for start in range(0, trials, BLOCK):
        yield start // BLOCK, min(BLOCK, trials - start)


def _binomial_estimate(count: int, cfg: McConfig) -> McEstimate:
    p = count / cfg.trials
    return McEstimate(
        mean=p,
        std_err=math.sqrt(p * (1.0 - p) / cfg.trials),
        trials=cfg.trials,
        seed=cfg.seed,
    )


def _codeword_energies(
    rng: np.random.Generator, size: int, n: int, p_t: float, budget: np.ndarray | None
):
    """Total codeword energy per trial; optionally also prefix violations.

    Symbols are drawn as standard normals in fixed chunks and squared, so
    the per-trial energy is p_t times a chi-squared(n) sum. When ``budget``
    is given, also reports whether any running prefix of the cumulative
    energy exceeded it (possible only where the total does, since the
    cumulative energy never decreases).
    """
    total = np.zeros(size)
    prefix_violated = np.zeros(size, dtype=bool) if budget is not None else None
    done = 0
    while done < n:
        chunk = min(_SYMBOL_CHUNK, n - done)
        x = rng.standard_normal((size, chunk))
        energies = p_t * np.square(x)
        if budget is not None:
            running = total[:, None] + np.cumsum(energies, axis=1)
            prefix_violated |= (running > budget[:, None]).any(axis=1)
        total += energies.sum(axis=1)
        done += chunk
    return total, prefix_violated


def estimate_supply_prob_single(
    m: int, n: int, p_t: float, p_e: float, cfg: McConfig
) -> McEstimate:
    """Empirical probability that harvested energy covers the codeword.

    Per trial: one exponential energy packet of mean ``p_e`` scaled by the
    ``m`` harvesting slots, against the summed squared-Gaussian symbol
    energies of an ``n``-slot codeword at power ``p_t``.
    """
    if m < 1 or n < 1:
        raise DomainError("m and n must be >= 1")
    if not (p_t >= 0.0) or not (p_e > 0.0):
        raise DomainError("p_t must be >= 0 and p_e > 0")
    count = 0
    for block, size in _block_sizes(cfg.trials):
        rng = _rng(cfg.seed, block)
        budget = m * rng.exponential(scale=p_e, size=size)
        total, _ = _codeword_energies(rng, size, n, p_t, None)
        count += int((total <= budget).sum())
    return _binomial_estimate(count, cfg)


def check_prefix_equivalence(
    m: int, n: int, p_t: float, p_e: float, cfg: McConfig
) -> tuple[int, int]:
    """Count prefix-sum energy violations against final-sum violations.

    Returns (trials where some prefix exceeded the budget, trials where the
    final total exceeded it). Cumulative symbol energy is non-decreasing,
    so the two counts must agree exactly — checked trial by trial here
    rather than assumed.
    """
    if m < 1 or n < 1:
        raise DomainError("m and n must be >= 1")
    if not (p_t >= 0.0) or not (p_e > 0.0):
        raise DomainError("p_t must be >= 0 and p_e > 0")
    prefix_count = 0
    final_count = 0
    for block, size in _block_sizes(cfg.trials):
        rng = _rng(cfg.seed, block)
        budget = m * rng.exponential(scale=p_e, size=size)
        total, prefix_violated = _codeword_energies(rng, size, n, p_t, budget)
        prefix_count += int(prefix_violated.sum())
        final_count += int((total > budget).sum())
    return prefix_count, final_count


def truncation_radius(net: NetworkParams, truncation_tail: float) -> float:
    """Sampling disk radius keeping the neglected far-field mean small.

    Beacons beyond radius R contribute mean energy
    2*pi*density*mu*p_pb*R^(2-eta)/(eta-2); requiring that to be at most
    ``truncation_tail`` of the total mean gives R = (2/(eta*tail))^(1/(eta-2)),
    independent of density and beacon power. Never below the unit disk.
    """
    r = (2.0 / (net.eta * truncation_tail)) ** (1.0 / (net.eta - 2.0))
    return max(r, 1.0)


def _far_field_mean(net: NetworkParams, radius: float) -> float:
    """Mean energy of the beacons beyond the sampling disk."""
    return (
        2.0 * math.pi * net.density * net.mu * net.p_pb
        * radius ** (2.0 - net.eta) / (net.eta - 2.0)
    )


def _ppp_block(rng: np.random.Generator, size: int, net: NetworkParams, radius: float) -> np.ndarray:
    """One block of per-slot harvested energies from the beacon field.

    Beacons beyond the sampling disk are folded in as their deterministic
    mean: their variance decays like R^(2-2*eta), so at the default radius
    the replacement error is far below Monte Carlo noise, while dropping
    them entirely would bias every estimate low by the tail mean.
    """
    counts = rng.poisson(lam=net.density * math.pi * radius * radius, size=size)
    points = int(counts.sum())
    # Uniform placement in the disk, then unit-mean exponential fades.
    radii = radius * np.sqrt(rng.random(points))
    fades = rng.standard_exponential(points)
    contrib = net.mu * net.p_pb * fades / np.maximum(1.0, radii ** net.eta)
    owner = np.repeat(np.arange(size), counts)
    return np.bincount(owner, weights=contrib, minlength=size) + _far_field_mean(net, radius)


def sample_ppp_energies(net: NetworkParams, cfg: McConfig, count: int) -> np.ndarray:
    """Batch of ``count`` per-slot harvested energy draws (deterministic)."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count!r}")
    radius = truncation_radius(net, cfg.truncation_tail)
    out = np.empty(count)
    done = 0
    block = 0
    while done < count:
        size = min(BLOCK, count - done)
        out[done : done + size] = _ppp_block(_rng(cfg.seed, block), size, net, radius)
        done += size
        block += 1
    return out


def sample_ppp_energy(net: NetworkParams, cfg: McConfig) -> float:
    """One per-slot harvested energy draw from the beacon field."""
    return float(sample_ppp_energies(net, cfg, 1)[0])


def estimate_supply_prob_mp(
    m: int, n: int, p_t: float, net: NetworkParams, cfg: McConfig
) -> McEstimate:
    """Empirical supply probability for the Poisson-field link.

    Per trial: one beacon-field energy draw scaled by the ``m`` harvesting
    slots, against a chi-squared(n) codeword energy at power ``p_t``.
    """
    if m < 1 or n < 1:
        raise DomainError("m and n must be >= 1")
    if not (p_t >= 0.0):
        raise DomainError("p_t must be >= 0")
    radius = truncation_radius(net, cfg.truncation_tail)
    count = 0
    for block, size in _block_sizes(cfg.trials):
        rng = _rng(cfg.seed, block)
        budget = m * _ppp_block(rng, size, net, radius)
        total, _ = _codeword_energies(rng, size, n, p_t, None)
        count += int((total <= budget).sum())
    return _binomial_estimate(count, cfg)
