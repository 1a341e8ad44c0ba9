#!/usr/bin/env python3
"""
telecanon command-line interface

Builds three-qubit teleportation channels, certifies them against their
eight-element measurement bases and runs the protocol end to end.

Usage:
    python -m telecanon verify --form 1 --a 0.3 --b 0.4
    python -m telecanon teleport --form 2 --a 0.7071 --b 0.5 --shots 1000 --seed 7
    python -m telecanon sweep --form 1 --grid 20 --json
    python -m telecanon demo w1

Exit codes: 0 perfect/success, 1 not perfect, 2 invalid usage.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional

from ..config import NAMES, Config, RunConfig, parse_complex
from ..core.channels import NamedChannel
from ..core.errors import ConfigError, NotPerfectError, TelecanonError
from ..core.teleport_manager import DEMO_SHOTS, TeleportationManager

EXIT_OK = 0
EXIT_NOT_PERFECT = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False, log_file: Optional[str] = None):
    """Set up logging configuration; stdout stays reserved for the report"""
    level = logging.DEBUG if verbose else Config.log_level()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=level, format=Config.LOG_FORMAT, handlers=handlers, force=True)


def _common_parser() -> argparse.ArgumentParser:
    # Defaults are None so that file values survive unless a flag is given
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='JSON config file with the same field names as the flags')
    common.add_argument('--form', type=str, choices=['1', '2', 'named', 'general'],
                        help='Channel family (default: 1)')
    common.add_argument('--name', type=str, choices=list(NAMES), help='Named channel for --form named')
    common.add_argument('--a', type=float, help='Real amplitude a')
    common.add_argument('--b', type=float, help='Real amplitude b')
    common.add_argument('--delta', type=float, help='Phase delta in radians')
    common.add_argument('--lambda', dest='lambda_', type=float, help='Phase lambda in radians')
    common.add_argument('--gamma', type=float, help='Phase gamma in radians')
    common.add_argument('--amps', type=parse_complex, nargs=8, metavar='AMP',
                        help='Eight amplitudes a0..a7 for --form general (e.g. 1 0 0 0 0 0 0 0)')
    common.add_argument('--basis', type=str, choices=['auto', 'computational', 'form1', 'form2'],
                        help='Measurement basis (default: auto)')
    common.add_argument('--seed', type=int, help='Base seed (default: TELECANON_SEED or 0)')
    common.add_argument('--tol', type=float, help='Predicate tolerance (default: 1e-10)')
    common.add_argument('--json', dest='output', action='store_const', const='json',
                        help='Emit the machine-readable JSON report')
    common.add_argument('--dump-basis', dest='dump_basis', action='store_const', const=True,
                        help='Include all eight basis elements in the report')
    common.add_argument('--workers', type=int, help='Threads for batches and sweeps (default: 1)')
    common.add_argument('--verbose', '-v', action='store_const', const=True, help='Enable verbose logging')
    common.add_argument('--log-file', dest='log_file', type=str, help='Also write logs to this file')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='telecanon',
        description='Perfect teleportation through three-qubit canonical channels',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Certify a form 1 channel
  python -m telecanon verify --form 1 --a 0.3 --b 0.4

  # Teleport 1000 random qubits through a W-class channel
  python -m telecanon teleport --form 2 --a 0.7071 --b 0.5 --shots 1000 --seed 7

  # Check a whole parameter family
  python -m telecanon sweep --form 2 --grid 20 --random-phases --json

  # Negative control: a product channel
  python -m telecanon verify --form general --amps 1 0 0 0 0 0 0 0
        """
    )
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('verify', parents=[common], help='Extract operators and classify the channel')

    teleport = commands.add_parser('teleport', parents=[common], help='Run the protocol on many inputs')
    teleport.add_argument('--shots', type=int, help='Number of sessions (default: 1000)')
    teleport.add_argument('--alpha', type=parse_complex, help='Input amplitude of |0> (with --beta)')
    teleport.add_argument('--beta', type=parse_complex, help='Input amplitude of |1> (with --alpha)')
    teleport.add_argument('--traces', action='store_const', const=True, help='Include per-shot traces')

    sweep = commands.add_parser('sweep', parents=[common], help='Verify a uniform (a, b) grid')
    sweep.add_argument('--grid', type=int, help='Points per axis, at least 2 (default: 20)')
    sweep.add_argument('--random-phases', dest='random_phases', action='store_const', const=True,
                       help='Seeded uniform phases per point instead of the fixed ones')
    sweep.add_argument('--table', type=str, choices=['json', 'csv'],
                       help='Table format for --json output or csv on its own (default: json)')

    demo = commands.add_parser('demo', parents=[common], help='Run a named channel end to end')
    demo.add_argument('demo_name', choices=list(NAMES), help='ghz, w1, bell or wn')
    demo.add_argument('--shots', type=int, help=f'Sessions to run (default: {DEMO_SHOTS})')

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    overrides: Dict[str, Any] = {}
    for key in RunConfig.field_names():
        if key == 'config':
            continue
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    overrides['command'] = args.command
    defaults: Dict[str, Any] = {}
    if args.command == 'demo':
        overrides['form'] = 'named'
        overrides['name'] = args.demo_name
        defaults['shots'] = DEMO_SHOTS
    config = RunConfig.from_sources(overrides, args.config, defaults=defaults)
    config.validate()
    return config


def cmd_verify(config: RunConfig, manager: TeleportationManager) -> int:
    result = manager.verify(config.channel_spec(), config.basis, dump_basis=config.dump_basis)
    emit_report(result['payload'], config.output)
    return EXIT_OK if result['status'] == 'perfect' else EXIT_NOT_PERFECT


def cmd_teleport(config: RunConfig, manager: TeleportationManager) -> int:
    input_amplitudes = (config.alpha, config.beta) if config.alpha is not None else None
    result = manager.teleport(config.channel_spec(), config.shots, config.seed,
                              basis_choice=config.basis, input_amplitudes=input_amplitudes,
                              traces=config.traces, dump_basis=config.dump_basis)
    emit_report(result['payload'], config.output)
    if result['status'] == 'not_perfect':
        print("❌ Channel is not certified perfect; nothing was teleported", file=sys.stderr)
        return EXIT_NOT_PERFECT
    return EXIT_OK if result['status'] == 'success' else EXIT_NOT_PERFECT


def cmd_demo(config: RunConfig, manager: TeleportationManager) -> int:
    result = manager.demo(NamedChannel(config.name), config.seed, shots=config.shots, gamma=config.gamma,
                          b=config.b, delta=config.delta, lambda_=config.lambda_,
                          dump_basis=config.dump_basis)
    emit_report(result['payload'], config.output)
    return EXIT_OK if result['status'] == 'success' else EXIT_NOT_PERFECT


def cmd_sweep(config: RunConfig, manager: TeleportationManager) -> int:
    result = manager.sweep(int(config.form), config.grid, config.seed, random_phases=config.random_phases,
                           phases=(config.delta, config.lambda_, config.gamma))
    if config.table == 'csv':
        sys.stdout.write(rows_to_csv(result['rows']))
    elif config.output == 'json':
        payload = {'form': result['form'], 'grid': result['grid'],
                   'summary': result['summary'], 'points': result['rows']}
        print(json.dumps(_finite(payload), indent=2))
    else:
        print(format_sweep_text(result))
    return EXIT_OK if result['status'] == 'perfect' else EXIT_NOT_PERFECT


def rows_to_csv(rows: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return buffer.getvalue()


def _finite(value):
    """JSON has no infinity; missing residuals become null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_finite(v) for v in value]
    return value


def emit_report(payload: Dict[str, Any], output: str):
    if output == 'json':
        print(json.dumps(payload, indent=2))
    else:
        print(format_report_text(payload))


def _fmt_complex(z: Dict[str, float]) -> str:
    return f"{z['re']:+.6f}{z['im']:+.6f}j"


def _fmt_matrix(rows) -> str:
    return "[" + "; ".join(" ".join(_fmt_complex(z) for z in row) for row in rows) + "]"


def format_report_text(payload: Dict[str, Any]) -> str:
    """Human summary rendered from the JSON payload, so both modes show the same numbers"""
    verdict = payload['verdict']
    deviations = payload['basis_deviations']
    lines = [
        f"\n📊 {payload['channel']['description']}",
        f"Basis: {deviations['basis']} (gram {deviations['max_gram_deviation']:.3e}, "
        f"completeness {deviations['max_completeness_deviation']:.3e}, "
        f"sum sigma^dagger sigma - 4I {deviations['operator_completeness_deviation']:.3e})",
        "",
        "Transformation operators:",
    ]
    for op in payload['operators']:
        lines.append(f"  sigma^{op['index']}: {op['kind']:<7} {_fmt_matrix(op['matrix'])} "
                     f"(unitary residual {op['unitary_residual']:.3e}, zero residual {op['zero_residual']:.3e})")

    status = '✅ PERFECT' if verdict['perfect'] else '❌ NOT PERFECT'
    lines += [
        "",
        f"Verdict: {status}",
        f"  unitary indices: {verdict['unitary_indices']}",
        f"  zero indices: {verdict['zero_indices']}",
    ]
    for index, label in verdict['correction_labels'].items():
        lines.append(f"  correction for outcome {index}: {label or 'non-canonical'}")
    lines += [
        "",
        f"rho3: {_fmt_matrix(payload['rho3']['matrix'])} "
        f"(max deviation from I/2 {payload['rho3']['max_deviation_from_half_identity']:.3e})",
        f"Entropy of rho3: {payload['entropy_bits']:.10f} bits",
        f"Three-tangle: {payload['three_tangle']:.10f}",
    ]
    fidelity = payload['fidelity']
    if fidelity is not None:
        lines += [
            f"Fidelity over {fidelity['n_inputs']} sessions: min {fidelity['min_fidelity']:.12f}, "
            f"mean {fidelity['mean_fidelity']:.12f}",
            f"Outcome counts: {fidelity['outcome_counts']}",
        ]
        for trace in fidelity.get('traces', []):
            lines.append(f"  outcome {trace['outcome']} ({trace['bits']}) p={trace['probability']:.6f} "
                         f"fidelity={trace['fidelity']:.12f}")
    return "\n".join(lines)


def format_sweep_text(result: Dict[str, Any]) -> str:
    summary = result['summary']
    lines = [
        f"\n🎉 Sweep complete: form {result['form']}, {result['grid']}x{result['grid']} grid",
        f"📊 Points: {summary['total_points']}",
        f"✅ Perfect: {summary['perfect_points']} ({summary['perfect_fraction']:.1%})",
        f"❌ Not perfect: {summary['failed_points']}",
        f"📈 Max unitary residual: {summary['max_unitary_residual']:.3e}",
        f"📈 Max zero residual: {summary['max_zero_residual']:.3e}",
        f"📈 Max gram deviation: {summary['max_gram_deviation']:.3e}",
        f"📈 Max operator completeness deviation: {summary['max_operator_completeness_deviation']:.3e}",
        f"📈 Max rho3 deviation from I/2: {summary['max_rho3_deviation']:.3e}",
    ]
    for point in summary['failed']:
        lines.append(f"   • a={point['a']:.6f}, b={point['b']:.6f}")
    return "\n".join(lines)


COMMANDS = {
    'verify': cmd_verify,
    'teleport': cmd_teleport,
    'sweep': cmd_sweep,
    'demo': cmd_demo,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(bool(args.verbose), args.log_file)
    Config.load_environment()

    try:
        config = resolve_config(args)
    except (TelecanonError, ValueError, TypeError) as e:
        logger.error(f"❌ Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        manager = TeleportationManager(tol=config.tol, workers=config.workers)
        return COMMANDS[config.command](config, manager)

    except NotPerfectError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_NOT_PERFECT

    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    except KeyboardInterrupt:
        logger.info("⏹️  Interrupted by user")
        print("\n⏹️  Interrupted by user", file=sys.stderr)
        return EXIT_NOT_PERFECT

    except Exception as e:
        logger.error(f"💥 Unexpected error: {e}")
        print(f"💥 Unexpected error: {e}", file=sys.stderr)
        if config.verbose:
            raise
        return EXIT_NOT_PERFECT


if __name__ == '__main__':
    sys.exit(main())
