"""Network description, end-to-end channel reduction and entropy helpers.

A BSPR network has one source, ``K`` parallel relays and one destination.
Every link is a binary symmetric channel: relay ``i`` hears the source through
a BSC with crossover ``p_{s,i}`` and the destination hears relay ``i`` through
a BSC with crossover ``p_{i,d}``. When relays merely forward, the two hops
compose into a single BSC per relay.

All entropies are in bits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import InvalidConfigError

__all__ = [
    "NetworkConfig",
    "EndToEndChannel",
    "effective_channel",
    "compose_crossover",
    "binary_entropy",
    "bsc_capacity",
    "load_config",
]


def _check_probability(value: Any, field: str, upper: float = 0.5) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfigError(f"{field}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value) or value < 0.0 or value > upper:
        raise InvalidConfigError(f"{field}: {value!r} is outside [0, {upper}]")
    return value


@dataclass(frozen=True)
class NetworkConfig:
    """One BSPR instance.

    ``source_to_relay[i]`` and ``relay_to_dest[i]`` describe relay ``i + 1``;
    relay numbering in subsets and reports is 1-based.
    """

    relay_count: int
    source_to_relay: tuple[float, ...]
    relay_to_dest: tuple[float, ...]

    def __post_init__(self) -> None:
        k = self.relay_count
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise InvalidConfigError(f"relay_count: expected a positive integer, got {k!r}")
        for name in ("source_to_relay", "relay_to_dest"):
            values = getattr(self, name)
            if isinstance(values, (str, bytes)) or not isinstance(values, Sequence):
                raise InvalidConfigError(f"{name}: expected an array of probabilities")
            if len(values) != k:
                raise InvalidConfigError(
                    f"{name}: expected {k} entries (relay_count), got {len(values)}"
                )
            checked = tuple(_check_probability(v, f"{name}[{i}]") for i, v in enumerate(values))
            object.__setattr__(self, name, checked)

    @classmethod
    def homogeneous(cls, relay_count: int, p_source: float, p_dest: float) -> NetworkConfig:
        return cls(relay_count, (p_source,) * relay_count, (p_dest,) * relay_count)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> NetworkConfig:
        """Build a config from its JSON form.

        Scalars given for ``source_to_relay`` / ``relay_to_dest`` are broadcast
        to length ``relay_count``.
        """
        if not isinstance(data, Mapping):
            raise InvalidConfigError("config: expected a JSON object")
        for field in ("relay_count", "source_to_relay", "relay_to_dest"):
            if field not in data:
                raise InvalidConfigError(f"{field}: missing required field")
        unknown = set(data) - {"relay_count", "source_to_relay", "relay_to_dest"}
        if unknown:
            raise InvalidConfigError(f"{sorted(unknown)[0]}: unknown field")
        k = data["relay_count"]
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise InvalidConfigError(f"relay_count: expected a positive integer, got {k!r}")
        vectors = []
        for field in ("source_to_relay", "relay_to_dest"):
            value = data[field]
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                value = [value] * k
            elif not isinstance(value, list):
                raise InvalidConfigError(f"{field}: expected an array or a number")
            vectors.append(tuple(value))
        return cls(k, vectors[0], vectors[1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "relay_count": self.relay_count,
            "source_to_relay": list(self.source_to_relay),
            "relay_to_dest": list(self.relay_to_dest),
        }


def load_config(path: str | Path) -> NetworkConfig:
    """Read a :class:`NetworkConfig` from a JSON file.

    Syntax errors are reported with their line and column.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return NetworkConfig.from_dict(data)


@dataclass(frozen=True)
class EndToEndChannel:
    """Per-relay crossover of the composed source-to-destination BSCs."""

    effective_crossover: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.effective_crossover) == 0:
            raise InvalidConfigError("effective_crossover: at least one relay is required")
        checked = tuple(
            _check_probability(v, f"effective_crossover[{i}]")
            for i, v in enumerate(self.effective_crossover)
        )
        object.__setattr__(self, "effective_crossover", checked)

    @property
    def relay_count(self) -> int:
        return len(self.effective_crossover)

    def is_homogeneous(self) -> bool:
        first = self.effective_crossover[0]
        return all(p == first for p in self.effective_crossover)


def compose_crossover(p_first: float, p_second: float) -> float:
    """Crossover of two cascaded BSCs: the bit flips iff exactly one hop flips it."""
    p = p_first * (1.0 - p_second) + (1.0 - p_first) * p_second
    # exact value never exceeds 1/2 for inputs in [0, 1/2]; guard rounding
    return min(p, 0.5)


def effective_channel(cfg: NetworkConfig) -> EndToEndChannel:
    return EndToEndChannel(
        tuple(
            compose_crossover(ps, pd) for ps, pd in zip(cfg.source_to_relay, cfg.relay_to_dest)
        )
    )


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) variable, with ``0 log 0 = 0``."""
    p = _check_probability(p, "p", upper=1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def bsc_capacity(p: float) -> float:
    return 1.0 - binary_entropy(p)
