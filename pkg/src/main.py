"""
Charge Qubit Gate Control Toolkit

Command line for optimizing two-qubit gates on coupled Josephson charge
qubits and for the leakage, 1/f noise and bandwidth studies built on them.

    python -m src.main optimize --config config/scenarios/jj_leakage.yaml --out runs/jj
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.config import Settings
from src.errors import ChargeControlError, ConfigurationError, describe, exit_code_for
from src.models.scenario import ScenarioConfig, ScenarioKind
from src.services.scenario_service import ScenarioService
from src.services.validation import load_scenario, validate_config

logger = logging.getLogger(__name__)

# Scenario kinds each run subcommand accepts
COMMAND_SCENARIOS = {
    "optimize": {ScenarioKind.OPTIMIZE_ONLY},
    "evaluate": {ScenarioKind.EVALUATE_ONLY},
    "leakage-sweep": {ScenarioKind.JJ_LEAKAGE, ScenarioKind.CC_LEAKAGE},
    "noise-sweep": {ScenarioKind.JJ_NOISE, ScenarioKind.CC_NOISE},
    "filter-sweep": {ScenarioKind.JJ_FILTER, ScenarioKind.CC_FILTER},
}


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chargeq",
        description="Krotov gate optimization for coupled Josephson charge qubits.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", required=True, type=Path, help="Scenario YAML file.")
        sub.add_argument("--seed", type=_seed, default=None, help="Overrides the config seed.")

    def add_run(sub: argparse.ArgumentParser) -> None:
        add_common(sub)
        sub.add_argument("--out", type=Path, default=None,
                         help="Output directory (default: <output_dir>/<config name>).")
        sub.add_argument("--threads", type=int, default=None, help="Worker threads (default from settings).")

    for name, text in (
        ("optimize", "Optimize one gate (OptimizeOnly)."),
        ("evaluate", "Score baseline pulses, a pulse file or the ideal gate (EvaluateOnly)."),
        ("leakage-sweep", "Optimized and baseline error versus E_J ratio."),
        ("noise-sweep", "Mean error under 1/f gate-charge noise versus amplitude."),
        ("filter-sweep", "Error of band-limited optimized pulses versus cutoff."),
    ):
        add_run(subparsers.add_parser(name, help=text))

    validate = subparsers.add_parser("validate", help="Check a scenario file without running physics.")
    add_common(validate)

    psd = subparsers.add_parser("psd", help="Dump the averaged spectrum of the configured noise ensemble.")
    add_run(psd)
    psd.add_argument("--trajectories", type=int, default=64, help="Trajectories to average.")
    psd.add_argument("--samples", type=int, default=None, help="Samples per trajectory.")
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def report_error(error: dict) -> None:
    """Machine-readable failure on stderr."""
    print(json.dumps(error), file=sys.stderr)


def _output_dir(args: argparse.Namespace, settings: Settings) -> Path:
    return args.out if args.out is not None else settings.output_dir / args.config.stem


def _check_kind(command: str, config: ScenarioConfig) -> None:
    allowed = COMMAND_SCENARIOS[command]
    if config.scenario not in allowed:
        names = ", ".join(sorted(k.value for k in allowed))
        raise ConfigurationError(f"'{command}' runs {names} scenarios, config has {config.scenario.value}")


def run_command(args: argparse.Namespace, settings: Settings) -> int:
    if args.command == "validate":
        report = validate_config(args.config, seed=args.seed)
        print(report.model_dump_json(indent=2))
        if not report.valid:
            report_error({"error_class": ConfigurationError.error_class, "message": report.summary()})
            return ConfigurationError.exit_code
        return 0

    config = load_scenario(args.config, seed=args.seed)
    out_dir = _output_dir(args, settings)
    threads = args.threads if args.threads is not None else settings.threads
    service = ScenarioService()

    if args.command == "psd":
        service.noise_spectrum(config, args.trajectories, samples=args.samples, out_dir=out_dir)
        print(json.dumps({"psd": str(out_dir / "psd.csv"), "trajectory": str(out_dir / "trajectory.txt")}))
        return 0

    _check_kind(args.command, config)
    record = service.run_scenario(config, out_dir=out_dir, threads=threads)
    print(json.dumps({
        "scenario": record.scenario,
        "complete": record.complete,
        "record": str(out_dir / "record.json"),
        "curve": str(out_dir / "curve.csv"),
        "rows": len(record.points),
    }))
    if not record.complete:
        report_error(record.error)
        return exit_code_for(record.error["error_class"])
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = Settings()
    configure_logging(settings.log_level)
    try:
        return run_command(args, settings)
    except ChargeControlError as exc:
        report_error(describe(exc))
        return exc.exit_code
    except Exception as exc:
        logger.exception("Unexpected failure")
        report_error(describe(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
