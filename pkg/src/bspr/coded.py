"""Coded transmission with decoding relays and the hybrid decode/forward scheme.

Relays in a decode set fully decode the source message, so the rate is
limited by the worst source-to-relay link in that set; the destination then
sees independent bit pipes from those relays plus, in the hybrid scheme, a
forwarded product channel from the remaining relays. Uniform inputs are used
throughout since every link is a BSC.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .channel_model import NetworkConfig, bsc_capacity, effective_channel
from .errors import EnumerationCapError, InvalidConfigError
from .forwarding import DEFAULT_ENUMERATION_CAP, uniform_input_information

DEFAULT_BRUTE_FORCE_CAP = 16


@dataclass(frozen=True)
class RelaySubset:
    """Sorted set of 1-based relay indices."""

    members: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(m) for m in self.members)))
        if any(m < 1 for m in members):
            raise InvalidConfigError(f"relay indices are 1-based, got {members}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_bitmask(cls, mask: int) -> RelaySubset:
        return cls(tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1))

    def bitmask(self) -> int:
        """Integer with bit ``i - 1`` set for every member ``i``."""
        return sum(1 << (m - 1) for m in self.members)

    def check(self, relay_count: int) -> RelaySubset:
        if self.members and self.members[-1] > relay_count:
            raise InvalidConfigError(
                f"relay index {self.members[-1]} exceeds relay_count {relay_count}"
            )
        return self

    def complement(self, relay_count: int) -> RelaySubset:
        return RelaySubset(tuple(i for i in range(1, relay_count + 1) if i not in self.members))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: object) -> bool:
        return item in self.members


def _subset(members: RelaySubset | Iterable[int]) -> RelaySubset:
    return members if isinstance(members, RelaySubset) else RelaySubset(tuple(members))


def decoding_rate_for_subset(cfg: NetworkConfig, subset: RelaySubset | Iterable[int]) -> float:
    """Rate when exactly the relays in ``subset`` decode and re-encode."""
    subset = _subset(subset).check(cfg.relay_count)
    if not subset:
        raise InvalidConfigError("decode subset must be nonempty")
    decode = min(bsc_capacity(cfg.source_to_relay[i - 1]) for i in subset)
    deliver = math.fsum(bsc_capacity(cfg.relay_to_dest[i - 1]) for i in subset)
    return min(decode, deliver)


def _source_order(cfg: NetworkConfig) -> list[int]:
    # stable: equal crossovers keep index order
    return sorted(range(1, cfg.relay_count + 1), key=lambda i: cfg.source_to_relay[i - 1])


def best_decoding_rate(cfg: NetworkConfig) -> tuple[RelaySubset, float]:
    """Best decode set, searched over threshold sets ``{i : p_{s,i} <= t}``.

    Adding a relay whose source link is no worse than the current worst one
    never lowers the rate, so some optimum is such a threshold set. Ties keep
    the smaller set.
    """
    order = _source_order(cfg)
    best: tuple[RelaySubset, float] | None = None
    for size in range(1, cfg.relay_count + 1):
        threshold = cfg.source_to_relay[order[size - 1] - 1]
        if size < cfg.relay_count and cfg.source_to_relay[order[size] - 1] == threshold:
            # not a threshold set: the next relay has the same source crossover
            continue
        subset = RelaySubset(tuple(order[:size]))
        rate = decoding_rate_for_subset(cfg, subset)
        if best is None or rate > best[1]:
            best = (subset, rate)
    assert best is not None
    return best


@dataclass(frozen=True)
class HybridPartition:
    decode_set: RelaySubset
    forward_set: RelaySubset
    rate: float
    decode_constraint: float
    dest_rate: float


def hybrid_rate(
    cfg: NetworkConfig,
    decode_set: RelaySubset | Iterable[int],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> HybridPartition:
    """Evaluate one decode/forward split.

    The destination rate is ``I(U; Y_F)`` over the forwarded relays' composed
    channels plus the relay-to-destination capacities of the decoding relays.
    """
    decode_set = _subset(decode_set).check(cfg.relay_count)
    forward_set = decode_set.complement(cfg.relay_count)
    if decode_set:
        decode_constraint = bsc_capacity(max(cfg.source_to_relay[i - 1] for i in decode_set))
    else:
        decode_constraint = 1.0
    crossover = effective_channel(cfg).effective_crossover
    forwarded = uniform_input_information([crossover[i - 1] for i in forward_set], cap)
    dest_rate = forwarded + math.fsum(bsc_capacity(cfg.relay_to_dest[i - 1]) for i in decode_set)
    return HybridPartition(
        decode_set=decode_set,
        forward_set=forward_set,
        rate=min(decode_constraint, dest_rate),
        decode_constraint=decode_constraint,
        dest_rate=dest_rate,
    )


@dataclass(frozen=True)
class HybridSearch:
    """Outcome of a partition search.

    ``by_size[n]`` is the best partition with ``n`` decoding relays among
    those examined; ``exhaustive`` is False when the greedy fallback ran.
    """

    best: HybridPartition
    by_size: dict[int, HybridPartition] = field(default_factory=dict)
    exhaustive: bool = True


def _sort_key(part: HybridPartition) -> tuple:
    # higher rate first, then fewer decoding relays, then lexicographic decode set
    return (-part.rate, len(part.decode_set), part.decode_set.members)


def _candidate_sets(cfg: NetworkConfig, exhaustive: bool) -> Iterator[RelaySubset]:
    k = cfg.relay_count
    if exhaustive:
        for size in range(k + 1):
            for combo in itertools.combinations(range(1, k + 1), size):
                yield RelaySubset(combo)
    else:
        order = _source_order(cfg)
        for size in range(k + 1):
            yield RelaySubset(tuple(order[:size]))


def best_hybrid_partition(
    cfg: NetworkConfig,
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP,
    cap: int = DEFAULT_ENUMERATION_CAP,
    heuristic: bool = True,
) -> HybridSearch:
    """Search decode sets for the best hybrid rate.

    Up to ``brute_force_cap`` relays every one of the ``2**K`` decode sets is
    tried. Beyond it, with ``heuristic`` on, only the ``K + 1`` prefixes of the
    relays sorted by source crossover are tried; candidates whose forwarded
    part is too large to enumerate are skipped. Ties prefer fewer decoding
    relays, then the lexicographically smallest set.
    """
    exhaustive = cfg.relay_count <= brute_force_cap
    if not exhaustive and not heuristic:
        raise EnumerationCapError("hybrid partition search", cfg.relay_count, brute_force_cap)
    by_size: dict[int, HybridPartition] = {}
    for decode_set in _candidate_sets(cfg, exhaustive):
        try:
            part = hybrid_rate(cfg, decode_set, cap)
        except EnumerationCapError:
            if exhaustive:
                raise
            continue
        size = len(decode_set)
        if size not in by_size or _sort_key(part) < _sort_key(by_size[size]):
            by_size[size] = part
    best = min(by_size.values(), key=_sort_key)
    return HybridSearch(best=best, by_size=dict(sorted(by_size.items())), exhaustive=exhaustive)


@dataclass(frozen=True)
class CapacityVerdict:
    known: bool
    capacity: float | None
    reason: str  # "single_relay", "relay_sum_condition" or "unknown"


def relay_sum_condition(cfg: NetworkConfig) -> bool:
    """True when the summed relay-to-destination capacities do not exceed any
    single source-to-relay capacity."""
    total = math.fsum(bsc_capacity(p) for p in cfg.relay_to_dest)
    return all(total <= bsc_capacity(p) for p in cfg.source_to_relay)


def capacity_verdict(cfg: NetworkConfig) -> CapacityVerdict:
    if cfg.relay_count == 1:
        capacity = min(bsc_capacity(cfg.source_to_relay[0]), bsc_capacity(cfg.relay_to_dest[0]))
        return CapacityVerdict(True, capacity, "single_relay")
    if relay_sum_condition(cfg):
        capacity = math.fsum(bsc_capacity(p) for p in cfg.relay_to_dest)
        return CapacityVerdict(True, capacity, "relay_sum_condition")
    return CapacityVerdict(False, None, "unknown")


__all__ = [
    "DEFAULT_BRUTE_FORCE_CAP",
    "RelaySubset",
    "HybridPartition",
    "HybridSearch",
    "CapacityVerdict",
    "decoding_rate_for_subset",
    "best_decoding_rate",
    "hybrid_rate",
    "best_hybrid_partition",
    "relay_sum_condition",
    "capacity_verdict",
]
