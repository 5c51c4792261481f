"""CSV sweeps over relay count or decode-set size.

Each sweep writes a version comment line, a header line, then one row per
point in sweep order. Rates carry six decimals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .channel_model import NetworkConfig, compose_crossover
from .coded import (
    best_decoding_rate,
    best_hybrid_partition,
    capacity_verdict,
)
from .errors import InvalidConfigError
from .forwarding import cutset_bound, forwarding_rate_closed_form, uniform_input_information

CSV_VERSION = 1
SWEEP_KINDS = ("fig3", "fig4", "fig5", "custom")

COLUMNS = {
    "fig3": ("p", "relay_count", "forwarding_rate"),
    "fig4": ("relay_count", "cutset_bound", "forwarding_rate", "decoding_rate", "verdict"),
    "fig5": ("decode_size", "hybrid_rate", "decode_bitmask"),
    "custom": (
        "relay_count",
        "cutset_bound",
        "forwarding_rate",
        "decoding_rate",
        "hybrid_rate",
        "verdict",
    ),
}


@dataclass
class SweepSpec:
    """What to sweep.

    fig3 sweeps ``K`` for each crossover in ``p_values``; fig4 sweeps ``K`` for
    a homogeneous network; fig5 sweeps the decode-set size of ``config``;
    custom sweeps the first ``K`` relays of ``config``.
    """

    kind: str
    p_values: Sequence[float] = field(default_factory=tuple)
    p_source: float | None = None
    p_dest: float | None = None
    k_min: int = 1
    k_max: int | None = None
    config: NetworkConfig | None = None

    def validate(self) -> None:
        if self.kind not in SWEEP_KINDS:
            raise InvalidConfigError(f"kind: unknown sweep {self.kind!r}")
        if self.kind in ("fig3", "fig4"):
            if self.k_max is None or self.k_max < self.k_min or self.k_min < 1:
                raise InvalidConfigError("k_max: relay range is empty")
        if self.kind == "fig3":
            if not self.p_values:
                raise InvalidConfigError("p: at least one crossover probability is required")
            for p in self.p_values:
                if not 0.0 <= p <= 0.5:
                    raise InvalidConfigError(f"p: {p!r} is outside [0, 1/2]")
        if self.kind == "fig4":
            if self.p_source is None or self.p_dest is None:
                raise InvalidConfigError("ps/pd: both crossover probabilities are required")
            NetworkConfig.homogeneous(1, self.p_source, self.p_dest)
        if self.kind in ("fig5", "custom") and self.config is None:
            raise InvalidConfigError("config: a network config is required")


def _rate(x: float) -> str:
    return f"{x:.6f}"


def _verdict(cfg: NetworkConfig) -> str:
    return "known" if capacity_verdict(cfg).known else "unknown"


def sweep_rows(spec: SweepSpec) -> Iterator[tuple]:
    spec.validate()
    if spec.kind == "fig3":
        for p in spec.p_values:
            for k in range(spec.k_min, spec.k_max + 1):
                yield (f"{p:g}", k, _rate(forwarding_rate_closed_form(k, p)))
    elif spec.kind == "fig4":
        p_end = compose_crossover(spec.p_source, spec.p_dest)
        for k in range(spec.k_min, spec.k_max + 1):
            cfg = NetworkConfig.homogeneous(k, spec.p_source, spec.p_dest)
            yield (
                k,
                _rate(cutset_bound(cfg).cutset_bound),
                _rate(forwarding_rate_closed_form(k, p_end)),
                _rate(best_decoding_rate(cfg)[1]),
                _verdict(cfg),
            )
    elif spec.kind == "fig5":
        search = best_hybrid_partition(spec.config)
        for size, part in search.by_size.items():
            yield (size, _rate(part.rate), part.decode_set.bitmask())
    else:
        full = spec.config
        last = full.relay_count if spec.k_max is None else min(spec.k_max, full.relay_count)
        for k in range(spec.k_min, last + 1):
            cfg = NetworkConfig(k, full.source_to_relay[:k], full.relay_to_dest[:k])
            p_end = [compose_crossover(a, b) for a, b in zip(cfg.source_to_relay, cfg.relay_to_dest)]
            yield (
                k,
                _rate(cutset_bound(cfg).cutset_bound),
                _rate(uniform_input_information(p_end)),
                _rate(best_decoding_rate(cfg)[1]),
                _rate(best_hybrid_partition(cfg).best.rate),
                _verdict(cfg),
            )


def render_sweep(spec: SweepSpec) -> str:
    """Full CSV text; rows are computed before anything is returned."""
    rows = list(sweep_rows(spec))
    buf = io.StringIO()
    buf.write(f"# bspr-sweep v{CSV_VERSION} {spec.kind}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS[spec.kind])
    writer.writerows(rows)
    return buf.getvalue()
