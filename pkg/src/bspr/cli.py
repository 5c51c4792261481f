"""``bspr`` command line.

    bspr report CONFIG.json [--simulate trials=N seed=S decoder=majority|ml] [--json PATH]
    bspr sweep fig3 --p 0.1,0.2,0.3,0.4 --k-max 400 -o fig3.csv
    bspr sweep fig4 --ps 0.05 --pd 0.3 --k-max 40 -o fig4.csv
    bspr sweep fig5 --config CONFIG.json -o fig5.csv
    bspr sweep custom --config CONFIG.json [--k-max N] -o custom.csv

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 enumeration
cap exceeded without a fallback.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .channel_model import load_config
from .errors import BSPRError, InvalidConfigError
from .report import build_report
from .sweeps import SweepSpec, render_sweep
from .uncoded import DECODER_KINDS

EXIT_INVALID = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _parse_simulate(tokens: list[str]) -> dict:
    options: dict = {"trials": 100_000, "seed": 0, "decoder": "majority"}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in options:
            raise InvalidConfigError(f"simulate: expected trials=N, seed=S or decoder=K, got {token!r}")
        if key == "decoder":
            if value not in DECODER_KINDS:
                raise InvalidConfigError(f"simulate: decoder must be one of {', '.join(DECODER_KINDS)}")
            options[key] = value
        else:
            try:
                options[key] = int(value)
            except ValueError:
                raise InvalidConfigError(f"simulate: {key} must be an integer, got {value!r}") from None
    return options


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bspr", description="Binary-symmetric parallel-relay network rates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rep = sub.add_parser("report", help="all rates, bounds and verdicts for one network")
    rep.add_argument("config", help="network config JSON")
    rep.add_argument("--simulate", nargs="+", metavar="KEY=VALUE",
                     help="run an uncoded simulation: trials=N seed=S decoder=majority|ml|subset_majority")
    rep.add_argument("--json", metavar="PATH", help="also write the report as JSON ('-' for stdout)")
    rep.add_argument("--cap", type=int, default=20, help="enumeration cap on relay count (default 20)")
    rep.add_argument("--brute-force-cap", type=int, default=16,
                     help="largest K searched exhaustively for the hybrid scheme (default 16)")

    sw = sub.add_parser("sweep", help="write a CSV sweep")
    sw.add_argument("kind", choices=("fig3", "fig4", "fig5", "custom"))
    sw.add_argument("--p", type=_float_list, help="fig3: comma-separated end-to-end crossovers")
    sw.add_argument("--ps", type=float, help="fig4: source-to-relay crossover")
    sw.add_argument("--pd", type=float, help="fig4: relay-to-destination crossover")
    sw.add_argument("--k-min", type=int, default=1)
    sw.add_argument("--k-max", type=int)
    sw.add_argument("--config", help="fig5/custom: network config JSON")
    sw.add_argument("-o", "--output", default="-", help="output CSV path ('-' for stdout)")
    return parser


def _run_report(args: argparse.Namespace) -> None:
    cfg = load_config(args.config)
    simulate = None if args.simulate is None else _parse_simulate(args.simulate)
    rep = build_report(cfg, simulate, cap=args.cap, brute_force_cap=args.brute_force_cap)
    if args.json != "-":
        sys.stdout.write(rep.format_text())
    if args.json:
        _write(args.json, rep.to_json())


def _run_sweep(args: argparse.Namespace) -> None:
    spec = SweepSpec(
        kind=args.kind,
        p_values=tuple(args.p or ()),
        p_source=args.ps,
        p_dest=args.pd,
        k_min=args.k_min,
        k_max=args.k_max,
        config=load_config(args.config) if args.config else None,
    )
    _write(args.output, render_sweep(spec))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            _run_report(args)
        else:
            _run_sweep(args)
    except BSPRError as exc:
        print(f"bspr: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"bspr: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
