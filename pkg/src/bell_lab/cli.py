"""Command-line front end: analyze, simulate, signal, fit, models.

Output is machine-readable by default (JSON with a fixed field order, so the
same flags and seed produce byte-identical bytes); ``--format table`` renders
the same payload for humans with values rounded to 4 decimals, and
``--format csv`` emits a per-command tabular extract.  Exit codes: 0 success,
2 unusable input (bad flags, malformed JSON, invalid tables), 3 incomplete
data (a model queried for cells it does not ship), 4 optimization budget
exhausted before convergence (the result is still printed).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .correlations import (
    EMPIRICAL_EPSILON,
    EXACT_EPSILON,
    Scenario,
    chsh,
    full_marginal_audit,
)
from .errors import BellLabError, EmptyCounts, IncompleteData, InvalidChannel, InvalidDistribution
from .fitting import fit_scenario
from .models import MODEL_NAMES, SETTINGS, build_model
from .montecarlo import counts_csv, empirical_scenario
from .signaling import ChannelConfig, run_channel

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCOMPLETE = 3
EXIT_BUDGET = 4


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _angles(text: str) -> tuple[float, float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"expected 4 comma-separated angles (A,Ap,B,Bp), got {len(parts)}"
        )
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bell-lab",
        description="Coincidence-experiment statistics, simulators, and fitters.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_source(p, with_input=True):
        p.add_argument("--model", choices=MODEL_NAMES, help="built-in model name")
        if with_input:
            p.add_argument("--input", type=Path, help="scenario JSON file")
        p.add_argument("--angles", type=_angles, default=None,
                       help="singlet analyzer angles A,Ap,B,Bp in radians")

    p_analyze = sub.add_parser("analyze", help="exact CHSH and marginal-law report")
    add_source(p_analyze)
    p_analyze.add_argument("--epsilon", type=float, default=None,
                           help="marginal tolerance (default: 1e-9 exact, 0.01 file input)")
    p_analyze.add_argument("--format", choices=("json", "csv", "table"), default="json")

    p_sim = sub.add_parser("simulate", help="seeded sampling plus empirical analysis")
    add_source(p_sim, with_input=False)
    p_sim.add_argument("--trials", "-n", type=_positive_int, required=True,
                       help="trials per setting (>= 1)")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--epsilon", type=float, default=EMPIRICAL_EPSILON)
    p_sim.add_argument("--format", choices=("json", "csv", "table"), default="json")

    p_sig = sub.add_parser("signal", help="regime-encoding channel simulation")
    add_source(p_sig, with_input=False)
    p_sig.add_argument("--bits", required=True, help="payload bit string, e.g. 10110")
    p_sig.add_argument("--trials-per-day", type=_positive_int, default=500)
    p_sig.add_argument("--seed", type=int, default=0)
    p_sig.add_argument("--format", choices=("json", "csv", "table"), default="json")

    p_fit = sub.add_parser("fit", help="fit a two-qubit representation to a scenario")
    add_source(p_fit)
    p_fit.add_argument("--class", dest="kind", choices=("product", "entangled"),
                       required=True, help="measurement class to fit")
    p_fit.add_argument("--restarts", type=int, default=20)
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--format", choices=("json", "csv", "table"), default="json")

    p_models = sub.add_parser("models", help="list built-in models or export exact tables")
    models_sub = p_models.add_subparsers(dest="models_command", required=True)
    models_sub.add_parser("list", help="list built-in model names")
    p_export = models_sub.add_parser("export", help="write a model's exact scenario JSON")
    p_export.add_argument("name", choices=MODEL_NAMES)
    p_export.add_argument("--angles", type=_angles, default=None)
    p_export.add_argument("--output", "-o", type=Path, default=None,
                          help="destination file (default: stdout)")

    return parser


def _load_scenario_source(args) -> tuple[Scenario, str]:
    """Resolve --model/--input into a scenario and a source label."""
    if getattr(args, "model", None) and getattr(args, "input", None):
        raise InvalidDistribution("give either --model or --input, not both")
    if getattr(args, "model", None):
        model = build_model(args.model, angles=args.angles)
        return model.scenario(), args.model
    if getattr(args, "input", None):
        text = Path(args.input).read_text()
        return Scenario.from_json_dict(json.loads(text)), str(args.input)
    raise InvalidDistribution("one of --model or --input is required")


def _require_model(args):
    if not args.model:
        raise InvalidDistribution("--model is required for this subcommand")
    return build_model(args.model, angles=args.angles)


def _round(value, places=4):
    if isinstance(value, float):
        return round(value, places)
    if isinstance(value, dict):
        return {k: _round(v, places) for k, v in value.items()}
    if isinstance(value, list):
        return [_round(v, places) for v in value]
    return value


def _render_table(payload: dict, prefix="") -> str:
    """Flatten the JSON payload to aligned 'dotted.path  value' rows."""
    rows: list[tuple[str, str]] = []

    def walk(obj, path):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(v, f"{path}.{k}" if path else str(k))
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(v, f"{path}[{i}]")
        else:
            rows.append((path, str(_round(obj))))

    walk(payload, prefix)
    width = max(len(p) for p, _ in rows)
    return "\n".join(f"{p.ljust(width)}  {v}" for p, v in rows) + "\n"


def _analysis_payload(scenario: Scenario, epsilon: float) -> dict:
    reports = full_marginal_audit(scenario, epsilon=epsilon)
    return {
        "chsh": chsh(scenario).to_json_dict(),
        "marginal_reports": [r.to_json_dict() for r in reports],
        "marginal_law_holds": all(r.holds for r in reports),
    }


def _marginal_csv(reports: list[dict]) -> str:
    lines = ["side,outcome,context,marginal,max_discrepancy,holds"]
    for r in reports:
        for v in r["values"]:
            lines.append(
                f"{r['side']},{r['outcome']},{v['context']},{v['marginal']!r},"
                f"{r['max_discrepancy']!r},{r['holds']}"
            )
    return "\n".join(lines) + "\n"


def _emit(payload: dict, fmt: str, csv_text: str | None, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "table":
        out.write(_render_table(payload))
    else:
        if csv_text is None:
            raise InvalidDistribution("this subcommand has no CSV form")
        out.write(csv_text)


def _cmd_analyze(args, out) -> int:
    scenario, source = _load_scenario_source(args)
    epsilon = args.epsilon
    if epsilon is None:
        epsilon = EXACT_EPSILON if args.model else EMPIRICAL_EPSILON
    analysis = _analysis_payload(scenario, epsilon)
    payload = {
        "command": "analyze",
        "source": source,
        "epsilon": epsilon,
        "scenario": scenario.to_json_dict(),
        **analysis,
    }
    _emit(payload, args.format, _marginal_csv(payload["marginal_reports"]), out)
    return EXIT_OK


def _cmd_simulate(args, out) -> int:
    model = _require_model(args)
    result = empirical_scenario(model, args.trials, args.seed)
    analysis = _analysis_payload(result.scenario, args.epsilon)
    payload = {
        "command": "simulate",
        "model": model.name,
        "trials_per_setting": args.trials,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "counts": {s.value: result.counts[s].to_json_dict() for s in SETTINGS},
        "estimates": {s.value: result.estimates[s].to_json_dict() for s in SETTINGS},
        "empirical_scenario": result.scenario.to_json_dict(),
        **analysis,
    }
    _emit(payload, args.format, counts_csv(result), out)
    return EXIT_OK


def _cmd_signal(args, out) -> int:
    model = _require_model(args)
    cfg = ChannelConfig(model=model, trials_per_day=args.trials_per_day)
    result = run_channel(cfg, args.bits, args.seed)
    payload = {"command": "signal", "model": model.name, **result.to_json_dict()}
    csv_lines = ["day,sent,decoded,daily_marginal"]
    for day, (s, d, m) in enumerate(
        zip(result.sent_bits, result.decoded_bits, result.daily_marginals)
    ):
        csv_lines.append(f"{day},{s},{d},{m!r}")
    _emit(payload, args.format, "\n".join(csv_lines) + "\n", out)
    return EXIT_OK


def _cmd_fit(args, out) -> int:
    scenario, source = _load_scenario_source(args)
    result = fit_scenario(scenario, kind=args.kind, restarts=args.restarts, seed=args.seed)
    payload = {
        "command": "fit",
        "source": source,
        "class": args.kind,
        "seed": args.seed,
        "restarts": args.restarts,
        **result.to_json_dict(),
    }
    csv_lines = ["setting,p11,p12,p21,p22"]
    for key, cells in payload["predicted"].items():
        if key.startswith("solo"):
            continue
        csv_lines.append(
            f"{key},{cells['p11']!r},{cells['p12']!r},{cells['p21']!r},{cells['p22']!r}"
        )
    _emit(payload, args.format, "\n".join(csv_lines) + "\n", out)
    return EXIT_OK if result.converged else EXIT_BUDGET


def _cmd_models(args, out) -> int:
    if args.models_command == "list":
        payload = {"command": "models", "models": list(MODEL_NAMES)}
        out.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    model = build_model(args.name, angles=args.angles)
    text = json.dumps(model.scenario().to_json_dict(), indent=2) + "\n"
    if args.output is not None:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)

    handlers = {
        "analyze": _cmd_analyze,
        "simulate": _cmd_simulate,
        "signal": _cmd_signal,
        "fit": _cmd_fit,
        "models": _cmd_models,
    }
    try:
        return handlers[args.subcommand](args, out)
    except IncompleteData as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INCOMPLETE
    except (InvalidDistribution, InvalidChannel, EmptyCounts) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, FileNotFoundError) as exc:
        err.write(f"error: cannot read input ({exc})\n")
        return EXIT_PARSE
    except BellLabError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
