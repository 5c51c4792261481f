"""Uncoded transmission over forwarding relays.

The source sends each message bit ``W`` directly and every relay forwards
what it hears, so the destination observes ``Y_i = W xor N_i`` with
``Pr{N_i = 1} = p_i``. This module decodes such observations, computes exact
bit-error probabilities, the Hoeffding tail bound for majority decoding, and
runs seeded Monte Carlo checks of all of it.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Literal, Sequence

import numpy as np

from .channel_model import EndToEndChannel, NetworkConfig, effective_channel
from .coded import RelaySubset
from .errors import InvalidConfigError
from .forwarding import DEFAULT_ENUMERATION_CAP, ProductChannel

DecoderKind = Literal["majority", "ml", "subset_majority"]
DECODER_KINDS = ("majority", "ml", "subset_majority")
MC_BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class DecoderSpec:
    kind: DecoderKind = "majority"
    subset: RelaySubset | None = None

    def __post_init__(self) -> None:
        if self.kind not in DECODER_KINDS:
            raise InvalidConfigError(f"decoder: unknown kind {self.kind!r}")
        if self.kind == "subset_majority":
            if self.subset is None or len(self.subset) == 0:
                raise InvalidConfigError("decoder: subset_majority needs a nonempty subset")
        elif self.subset is not None:
            raise InvalidConfigError(f"decoder: kind {self.kind!r} takes no subset")

    def coordinates(self, relay_count: int) -> list[int]:
        """0-based coordinates the decoder looks at."""
        if self.subset is None:
            return list(range(relay_count))
        return [i - 1 for i in self.subset.check(relay_count)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "subset": None if self.subset is None else list(self.subset.members),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DecoderSpec:
        subset = data.get("subset")
        return cls(data["kind"], None if subset is None else RelaySubset(tuple(subset)))


def _crossover_array(ch: EndToEndChannel) -> np.ndarray:
    return np.asarray(ch.effective_crossover, dtype=float)


def _ml_batch(y: np.ndarray, p: np.ndarray) -> np.ndarray:
    noiseless = np.flatnonzero(p == 0.0)
    if noiseless.size:
        # a noiseless coordinate is decisive; the first one wins
        return y[:, noiseless[0]].astype(np.uint8)
    # sum LLRs per group of equal weight so exact ties stay exactly zero
    llr = np.zeros(len(y))
    for value in np.unique(p):
        if value == 0.5:
            continue
        cols = np.flatnonzero(p == value)
        ones = y[:, cols].sum(axis=1, dtype=np.int64)
        zeros = len(cols) - ones
        llr += math.log2((1.0 - value) / value) * (zeros - ones)
    return (llr < 0).astype(np.uint8)


def decode_batch(y: np.ndarray, ch: EndToEndChannel, spec: DecoderSpec) -> np.ndarray:
    """Decode each row of a ``(n, K)`` 0/1 array; returns ``n`` bits."""
    y = np.asarray(y, dtype=np.uint8)
    if y.ndim != 2 or y.shape[1] != ch.relay_count:
        raise InvalidConfigError(
            f"observations: expected shape (n, {ch.relay_count}), got {y.shape}"
        )
    if spec.kind == "ml":
        return _ml_batch(y, _crossover_array(ch))
    cols = spec.coordinates(ch.relay_count)
    zeros = len(cols) - y[:, cols].sum(axis=1, dtype=np.int64)
    # ties go to 0
    return (2 * zeros < len(cols)).astype(np.uint8)


def decode(y: Sequence[int], ch: EndToEndChannel, spec: DecoderSpec = DecoderSpec()) -> int:
    """Estimate the transmitted bit from one received vector."""
    if len(y) != ch.relay_count:
        raise InvalidConfigError(f"observation length {len(y)} != relay count {ch.relay_count}")
    if any(b not in (0, 1) for b in y):
        raise InvalidConfigError("observation must contain only 0 and 1")
    return int(decode_batch(np.asarray([y]), ch, spec)[0])


def flip_count_pmf(probabilities: Sequence[float]) -> np.ndarray:
    """Distribution of the number of flips among independent coordinates."""
    pmf = np.ones(1)
    for p in probabilities:
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    return pmf


def _majority_errors(probabilities: Sequence[float]) -> tuple[float, float]:
    pmf = flip_count_pmf(probabilities)
    m = len(probabilities)
    counts = np.arange(m + 1)
    # W=1 is misread when the zeros (flips) reach m/2; W=0 when flips exceed m/2
    given_one = math.fsum(pmf[2 * counts >= m])
    given_zero = math.fsum(pmf[2 * counts > m])
    return given_zero, given_one


def majority_error_given_one(ch: EndToEndChannel, spec: DecoderSpec = DecoderSpec()) -> float:
    """``Pr{flips >= m/2}``: the majority decoder's error when ``W = 1``.

    Equals the averaged error for odd ``m`` and upper-bounds it for even ``m``.
    """
    if spec.kind == "ml":
        raise InvalidConfigError("majority_error_given_one applies to majority decoders only")
    p = ch.effective_crossover
    return _majority_errors([p[i] for i in spec.coordinates(ch.relay_count)])[1]


def exact_error_probability(
    ch: EndToEndChannel,
    spec: DecoderSpec = DecoderSpec(),
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Bit-error probability with equally likely ``W``.

    Majority decoders use the flip-count distribution; ML sums the smaller
    posterior mass over all ``2**K`` outputs and is limited by ``cap``.
    """
    if spec.kind == "ml":
        given0, given1 = ProductChannel.from_channel(ch).likelihoods(cap)
        return 0.5 * math.fsum(np.minimum(given0, given1))
    p = ch.effective_crossover
    given_zero, given_one = _majority_errors([p[i] for i in spec.coordinates(ch.relay_count)])
    return 0.5 * (given_zero + given_one)


def hoeffding_bound(relay_count: int, p: float) -> float:
    """``exp(-2 K (1/2 - p)^2)``, valid for ``0 <= p < 1/2``."""
    if relay_count < 1:
        raise InvalidConfigError(f"relay_count: expected a positive integer, got {relay_count!r}")
    if not 0.0 <= p < 0.5:
        raise InvalidConfigError(f"p: {p!r} must lie in [0, 1/2) for the bound to apply")
    return math.exp(-2.0 * relay_count * (0.5 - p) ** 2)


def required_relays(p: float, target_error: float) -> int:
    """Smallest ``K`` strictly above ``ln(1/eps) / (2 (1/2 - p)^2)``."""
    if not 0.0 <= p < 0.5:
        raise InvalidConfigError(f"p: {p!r} must lie in [0, 1/2)")
    if not 0.0 < target_error < 1.0:
        raise InvalidConfigError(f"target_error: {target_error!r} is outside (0, 1)")
    delta = 2.0 * (0.5 - p) ** 2
    return math.floor(math.log(1.0 / target_error) / delta) + 1


@dataclass(frozen=True)
class SubsetMerit:
    subset: RelaySubset
    merit: float
    attainable: bool


def select_majority_subset(source: NetworkConfig | EndToEndChannel) -> SubsetMerit:
    """Relay subset maximising ``|M| (1/2 - max_{i in M} p_i)^2``.

    Only prefixes of the relays sorted by effective crossover are examined;
    any optimum is one, since adding relays no noisier than the current
    maximum is free. ``attainable`` is False when every merit is zero.
    """
    ch = effective_channel(source) if isinstance(source, NetworkConfig) else source
    p = ch.effective_crossover
    order = sorted(range(len(p)), key=lambda i: p[i])
    best_size, best_merit = 1, -1.0
    for size in range(1, len(p) + 1):
        merit = size * (0.5 - p[order[size - 1]]) ** 2
        if merit > best_merit:
            best_size, best_merit = size, merit
    subset = RelaySubset(tuple(i + 1 for i in order[:best_size]))
    return SubsetMerit(subset, best_merit, best_merit > 0.0)


@dataclass(frozen=True)
class SimReport:
    trials: int
    errors: int
    empirical_pe: float
    exact_pe: float | None
    hoeffding_bound: float | None
    seed: int
    decoder: DecoderSpec
    error_given_one: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["decoder"] = self.decoder.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _block_errors(
    seed: int, block: int, n: int, ch: EndToEndChannel, spec: DecoderSpec
) -> int:
    seq = np.random.SeedSequence(seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.Philox(seq))
    w = rng.integers(0, 2, size=n, dtype=np.uint8)
    noise = (rng.random((n, ch.relay_count)) < _crossover_array(ch)).astype(np.uint8)
    y = noise ^ w[:, None]
    return int(np.count_nonzero(decode_batch(y, ch, spec) != w))


def _bound_for(ch: EndToEndChannel, spec: DecoderSpec) -> float | None:
    # ML never does worse than majority over all coordinates, so that bound covers it
    cols = spec.coordinates(ch.relay_count)
    worst = max(ch.effective_crossover[i] for i in cols)
    if worst >= 0.5:
        return None
    return hoeffding_bound(len(cols), worst)


def monte_carlo(
    ch: EndToEndChannel,
    spec: DecoderSpec = DecoderSpec(),
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> SimReport:
    """Simulate ``trials`` uncoded bits and count decoding errors.

    Trials are split into fixed blocks, each drawing from a Philox stream keyed
    by ``(seed, block index)``, so the report does not depend on ``workers``.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise InvalidConfigError(f"trials: expected a positive integer, got {trials!r}")
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise InvalidConfigError(f"seed: expected an unsigned 64-bit integer, got {seed!r}")
    spec.coordinates(ch.relay_count)
    blocks = [
        (b, min(MC_BLOCK_SIZE, trials - b * MC_BLOCK_SIZE))
        for b in range(-(-trials // MC_BLOCK_SIZE))
    ]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(lambda bn: _block_errors(seed, bn[0], bn[1], ch, spec), blocks))
    else:
        counts = [_block_errors(seed, b, n, ch, spec) for b, n in blocks]
    errors = sum(counts)

    exact = None
    if spec.kind != "ml" or ch.relay_count <= cap:
        exact = exact_error_probability(ch, spec, cap)
    given_one = None if spec.kind == "ml" else majority_error_given_one(ch, spec)
    return SimReport(
        trials=trials,
        errors=errors,
        empirical_pe=errors / trials,
        exact_pe=exact,
        hoeffding_bound=_bound_for(ch, spec),
        seed=seed,
        decoder=spec,
        error_given_one=given_one,
    )
