"""Forwarding-relay achievable rate and capacity upper bounds.

With forwarding relays the network collapses into a point-to-point channel
from the source bit ``U`` to the vector ``(Y_1, ..., Y_K)``: each coordinate
is an independent BSC with crossover ``p_i``. The achievable rate is the
mutual information of that product channel under a uniform input, computed
either by enumerating all ``2**K`` outputs or, when every ``p_i`` is equal, by
a closed form that groups outputs by their number of zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .channel_model import (
    EndToEndChannel,
    NetworkConfig,
    binary_entropy,
    bsc_capacity,
)
from .errors import EnumerationCapError, InvalidConfigError, NumericalError

DEFAULT_ENUMERATION_CAP = 20
SOURCE_CUT = "source_cut"
DESTINATION_CUT = "destination_cut"

# slack allowed before a rate outside [0, 1] is treated as a numerical failure
_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class ProductChannel:
    """Memoryless channel ``u -> (y_1, ..., y_K)`` with independent BSC coordinates."""

    crossover: tuple[float, ...]

    @classmethod
    def from_channel(cls, ch: EndToEndChannel) -> ProductChannel:
        return cls(tuple(ch.effective_crossover))

    @property
    def relay_count(self) -> int:
        return len(self.crossover)

    def transition(self, y: Sequence[int], u: int) -> float:
        """``p*(y | u)`` for a single output vector."""
        if len(y) != len(self.crossover):
            raise InvalidConfigError("output vector length does not match the channel")
        prob = 1.0
        for yi, p in zip(y, self.crossover):
            prob *= (1.0 - p) if yi == u else p
        return prob

    def likelihoods(self, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(p*(y|0), p*(y|1))`` over all outputs.

        Output ``y`` is indexed by the integer whose most significant of ``K``
        bits is ``y_1``.
        """
        k = len(self.crossover)
        if k > cap:
            raise EnumerationCapError("product-channel enumeration", k, cap)
        given0 = np.ones(1)
        given1 = np.ones(1)
        for p in self.crossover:
            given0 = np.outer(given0, (1.0 - p, p)).ravel()
            given1 = np.outer(given1, (p, 1.0 - p)).ravel()
        return given0, given1


ChannelLike = Union[ProductChannel, EndToEndChannel, Sequence[float]]


def _crossovers(ch: ChannelLike) -> tuple[float, ...]:
    if isinstance(ch, ProductChannel):
        return ch.crossover
    if isinstance(ch, EndToEndChannel):
        return ch.effective_crossover
    return EndToEndChannel(tuple(ch)).effective_crossover


def _entropy_bits(pmf: np.ndarray) -> float:
    nz = pmf[pmf > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def _finite_rate(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NumericalError(f"{what}: non-finite result {value!r}")
    if value < -_RANGE_SLACK or value > 1.0 + _RANGE_SLACK:
        raise NumericalError(f"{what}: result {value!r} is outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def mutual_information(
    ch: ChannelLike, prior_one: float = 0.5, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """``I(U; Y_1..Y_K)`` in bits for ``Pr{U = 1} = prior_one``, by enumeration."""
    if not 0.0 <= prior_one <= 1.0:
        raise InvalidConfigError(f"prior_one: {prior_one!r} is outside [0, 1]")
    crossover = _crossovers(ch)
    given0, given1 = ProductChannel(crossover).likelihoods(cap)
    output = (1.0 - prior_one) * given0 + prior_one * given1
    # H(Y|U) does not depend on the prior: every coordinate is a BSC
    noise_entropy = math.fsum(binary_entropy(p) for p in crossover)
    return _finite_rate(_entropy_bits(output) - noise_entropy, "mutual information")


def forwarding_rate_exact(ch: ChannelLike, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Forwarding-relay rate ``I(U; Y)`` under uniform ``U``, summed over all outputs.

    Raises :class:`EnumerationCapError` when ``K > cap``; use
    :func:`forwarding_rate_closed_form` for large homogeneous networks.
    """
    return mutual_information(ch, 0.5, cap)


def _log2_binomials(n: int) -> np.ndarray:
    ln2 = math.log(2.0)
    lg_n = math.lgamma(n + 1)
    return np.array(
        [(lg_n - math.lgamma(l + 1) - math.lgamma(n - l + 1)) / ln2 for l in range(n + 1)]
    )


def forwarding_rate_closed_form(relay_count: int, p: float) -> float:
    """Forwarding-relay rate for ``K`` relays sharing one crossover ``p``.

    Uses the zero-count grouping ``1 + K p log p + K q log q - sum_l C(K-1, l)
    a_l log a_l`` with ``a_l = q^l p^(K-l) + q^(K-l) p^l``. The ``x log x``
    parts of each ``a_l log a_l`` cancel the ``K p log p + K q log q`` terms
    in closed form, leaving ``1 - sum_l [p B_l log(1 + r_l) + q B'_l log(1 + 1/r_l)]``
    where ``B_l``/``B'_l`` are Binomial(K-1, q)/(K-1, p) masses and
    ``r_l = (q/p)^(K-2l)``. Every summand is nonnegative and evaluated in the
    log domain, so there is no cancellation and no underflow for ``K`` in the
    thousands.
    """
    if isinstance(relay_count, bool) or not isinstance(relay_count, int) or relay_count < 1:
        raise InvalidConfigError(f"relay_count: expected a positive integer, got {relay_count!r}")
    if not (isinstance(p, (int, float)) and 0.0 <= p <= 0.5):
        raise InvalidConfigError(f"p: {p!r} is outside [0, 1/2]")
    if p == 0.0:
        return 1.0
    k = relay_count
    q = 1.0 - p
    log_p = math.log2(p)
    log_q = math.log2(q)
    l = np.arange(k, dtype=float)
    log_binom = _log2_binomials(k - 1)
    log_mass_q = log_binom + l * log_q + (k - 1 - l) * log_p
    log_mass_p = log_binom + l * log_p + (k - 1 - l) * log_q
    exponent = (k - 2 * l) * (log_q - log_p)
    terms = p * np.exp2(log_mass_q) * np.logaddexp2(0.0, exponent)
    terms += q * np.exp2(log_mass_p) * np.logaddexp2(0.0, -exponent)
    if not np.all(np.isfinite(terms)):
        raise NumericalError(f"closed-form rate (K={k}, p={p}): non-finite summand")
    return _finite_rate(1.0 - math.fsum(terms.tolist()), f"closed-form rate (K={k}, p={p})")


def uniform_input_information(
    crossover: Sequence[float], cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """``I(U; Y)`` under uniform ``U``; 0 for no coordinates.

    Equal crossovers use the closed form, so they are not limited by ``cap``.
    """
    crossover = tuple(crossover)
    if not crossover:
        return 0.0
    if all(p == crossover[0] for p in crossover):
        return forwarding_rate_closed_form(len(crossover), crossover[0])
    return forwarding_rate_exact(crossover, cap)


def relays_for_rate(
    p: float, target: float, decimals: int | None = None, k_max: int = 100_000
) -> int:
    """Smallest ``K`` whose closed-form forwarding rate reaches ``target``.

    With ``decimals`` set, the rate is rounded to that many decimal places
    before the comparison. Scans upward from ``K = 1``; the rate is increasing
    in ``K`` so the first hit is the answer.
    """
    if not 0.0 <= p < 0.5:
        raise InvalidConfigError(f"p: {p!r} must lie in [0, 1/2) for any target to be reachable")
    if not 0.0 < target <= 1.0:
        raise InvalidConfigError(f"target: {target!r} is outside (0, 1]")
    for k in range(1, k_max + 1):
        rate = forwarding_rate_closed_form(k, p)
        if decimals is not None:
            rate = round(rate, decimals)
        if rate >= target:
            return k
    raise EnumerationCapError("relay-count search", k_max + 1, k_max)


@dataclass(frozen=True)
class RateBoundPair:
    cutset_bound: float
    binding_cut: str
    source_cut: float
    destination_cut: float
    trivial_bound: float = field(default=1.0)


def cutset_bound(cfg: NetworkConfig, cap: int = DEFAULT_ENUMERATION_CAP) -> RateBoundPair:
    """Min of the source-side and destination-side cut rates, capped at 1.

    The source-side cut is ``I(U; V_1..V_K)`` over the source-to-relay BSCs;
    the destination-side cut is the sum of the relay-to-destination
    capacities. Ties report the source cut.
    """
    source = uniform_input_information(cfg.source_to_relay, cap)
    destination = math.fsum(bsc_capacity(p) for p in cfg.relay_to_dest)
    if source <= destination:
        bound, binding = source, SOURCE_CUT
    else:
        bound, binding = destination, DESTINATION_CUT
    return RateBoundPair(
        cutset_bound=min(bound, 1.0),
        binding_cut=binding,
        source_cut=source,
        destination_cut=destination,
    )
