"""One-stop summary of every rate, bound and verdict for a single network."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .channel_model import NetworkConfig, effective_channel
from .coded import (
    DEFAULT_BRUTE_FORCE_CAP,
    HybridPartition,
    best_decoding_rate,
    best_hybrid_partition,
    capacity_verdict,
)
from .errors import EnumerationCapError, NumericalError
from .forwarding import DEFAULT_ENUMERATION_CAP, cutset_bound, uniform_input_information
from .uncoded import DecoderSpec, SimReport, monte_carlo, select_majority_subset

REPORT_VERSION = 1


@dataclass
class RateReport:
    config: NetworkConfig
    trivial_bound: float = 1.0
    cutset: dict[str, Any] | None = None
    forwarding_rate: float | None = None
    decoding: dict[str, Any] | None = None
    hybrid: dict[str, Any] | None = None
    verdict: dict[str, Any] | None = None
    majority_subset: dict[str, Any] | None = None
    simulation: SimReport | None = None
    failures: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": REPORT_VERSION,
            "config": self.config.to_dict(),
            "trivial_bound": self.trivial_bound,
            "cutset": self.cutset,
            "forwarding_rate": self.forwarding_rate,
            "decoding": self.decoding,
            "hybrid": self.hybrid,
            "verdict": self.verdict,
            "majority_subset": self.majority_subset,
            "simulation": None if self.simulation is None else self.simulation.to_dict(),
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def format_text(self) -> str:
        def rate(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.6f}"

        lines = [f"relays: {self.config.relay_count}", f"trivial bound: {rate(self.trivial_bound)}"]
        if self.cutset:
            lines.append(
                f"cut-set bound: {rate(self.cutset['bound'])} ({self.cutset['binding_cut']})"
            )
        lines.append(f"forwarding rate: {rate(self.forwarding_rate)}")
        if self.decoding:
            lines.append(
                f"decoding rate: {rate(self.decoding['rate'])} with relays {self.decoding['subset']}"
            )
        if self.hybrid:
            tag = "" if self.hybrid["exhaustive"] else " (greedy, non-exhaustive)"
            lines.append(
                f"hybrid rate: {rate(self.hybrid['rate'])} decode {self.hybrid['decode_set']}"
                f" forward {self.hybrid['forward_set']}{tag}"
            )
        if self.verdict:
            if self.verdict["known"]:
                lines.append(
                    f"capacity: {rate(self.verdict['capacity'])} ({self.verdict['reason']})"
                )
            else:
                lines.append("capacity: unknown")
        if self.majority_subset:
            ms = self.majority_subset
            flag = "" if ms["attainable"] else " (unattainable: all links randomized)"
            lines.append(f"majority subset: {ms['subset']} merit {ms['merit']:.6f}{flag}")
        if self.simulation:
            sim = self.simulation
            lines.append(
                f"simulation ({sim.decoder.kind}, {sim.trials} trials, seed {sim.seed}): "
                f"empirical {sim.empirical_pe:.6f}, exact {rate(sim.exact_pe)}, "
                f"hoeffding {rate(sim.hoeffding_bound)}"
            )
        for what, why in self.failures.items():
            lines.append(f"{what}: not computed ({why})")
        return "\n".join(lines) + "\n"


def _partition_dict(part: HybridPartition) -> dict[str, Any]:
    return {
        "rate": part.rate,
        "decode_set": list(part.decode_set.members),
        "forward_set": list(part.forward_set.members),
        "decode_constraint": part.decode_constraint,
        "dest_rate": part.dest_rate,
        "decode_bitmask": part.decode_set.bitmask(),
    }


def build_report(
    cfg: NetworkConfig,
    simulate: dict[str, Any] | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> RateReport:
    """Compute everything for ``cfg``.

    Enumeration-cap and numerical failures are recorded per quantity in
    ``failures`` instead of aborting the whole report. ``simulate`` takes
    ``trials``, ``seed`` and ``decoder`` (``majority``, ``ml`` or
    ``subset_majority``; the last uses the selected majority subset).
    """
    rep = RateReport(config=cfg)
    ch = effective_channel(cfg)

    try:
        bounds = cutset_bound(cfg, cap)
        rep.cutset = {
            "bound": bounds.cutset_bound,
            "binding_cut": bounds.binding_cut,
            "source_cut": bounds.source_cut,
            "destination_cut": bounds.destination_cut,
        }
    except (EnumerationCapError, NumericalError) as exc:
        rep.failures["cutset"] = str(exc)

    try:
        rep.forwarding_rate = uniform_input_information(ch.effective_crossover, cap)
    except (EnumerationCapError, NumericalError) as exc:
        rep.failures["forwarding_rate"] = str(exc)

    subset, rate = best_decoding_rate(cfg)
    rep.decoding = {"rate": rate, "subset": list(subset.members)}

    try:
        search = best_hybrid_partition(cfg, brute_force_cap, cap)
        rep.hybrid = _partition_dict(search.best)
        rep.hybrid["exhaustive"] = search.exhaustive
        rep.hybrid["by_size"] = {
            str(size): _partition_dict(part) for size, part in search.by_size.items()
        }
    except (EnumerationCapError, NumericalError) as exc:
        rep.failures["hybrid"] = str(exc)

    v = capacity_verdict(cfg)
    rep.verdict = {"known": v.known, "capacity": v.capacity, "reason": v.reason}

    sel = select_majority_subset(ch)
    rep.majority_subset = {
        "subset": list(sel.subset.members),
        "merit": sel.merit,
        "attainable": sel.attainable,
    }

    if simulate is not None:
        kind = simulate.get("decoder", "majority")
        spec = DecoderSpec(kind, sel.subset if kind == "subset_majority" else None)
        rep.simulation = monte_carlo(
            ch,
            spec,
            trials=int(simulate.get("trials", 100_000)),
            seed=int(simulate.get("seed", 0)),
            cap=cap,
        )
    return rep
