"""
Main Orchestration Module
Command-line entry point: parses the subcommand, builds a RunConfig and
hands it to core.runner.run.

Usage:
    python main.py design-verify --d 4 --ell 2 --method brute
    python main.py twirl --family sandwich --samples 10000 --seed 1 --in X.json
    python main.py discretize --d 64 --state vacuum --out rho.json
    python main.py profile --d 16 --alpha 1 --beta 0.5 --samples-per-box 8 --fit-degree 2
    python main.py ue demo --d 8 --ell 2 --seed 7
    python main.py ue attack --d 8 --ell 2 --trials 10000
    python main.py report-all --excel
"""

import argparse
import sys

from core.config import print_config
from core.errors import EXIT_USAGE
from core.runner import RunConfig, run
from utils.logger import critical, debug, info, log_header, log_separator
from writers.json_writer import write_error


class JsonArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as JSON on standard error."""

    def error(self, message):
        write_error({'error': 'usage_error', 'message': message, 'exit_code': EXIT_USAGE})
        sys.exit(EXIT_USAGE)


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--d', type=int, default=None, help="Box dimension d")
    common.add_argument('--convention', choices=['even_centered', 'odd_centered'], default=None,
                        help="Index convention (default follows the parity of d)")
    common.add_argument('--seed', type=int, default=None, help="Non-negative seed")
    common.add_argument('--out', dest='output_path', default=None, help="Write output to this file")
    common.add_argument('--format', dest='output_format', choices=['json', 'csv'], default='json')
    return common


def build_parser():
    common = _common_options()
    parser = JsonArgumentParser(prog='cv2design', description="CV two-design verification toolkit")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('design-verify', parents=[common], help="Norm of R^ell on K against d^-ell")
    p.add_argument('--ell', type=int, default=None)
    p.add_argument('--method', choices=['brute', 'structured'], default=None)
    p.add_argument('--allow-large', action='store_true', help="Lift the brute-force dimension guard")

    p = sub.add_parser('twirl', parents=[common], help="Monte-Carlo two-fold twirl of a matrix")
    p.add_argument('--family', choices=['q', 'p', 'sandwich'], default='sandwich')
    p.add_argument('--samples', type=int, default=None)
    p.add_argument('--in', dest='input_path', default=None, help="Input matrix (JSON); random when absent")

    p = sub.add_parser('discretize', parents=[common], help="Box-discretise a test state")
    p.add_argument('--state', default='vacuum', help="vacuum, fock1..fock4 or coherent")

    p = sub.add_parser('profile', parents=[common], help="Staircase phase profile as CSV")
    p.add_argument('--alpha', type=float, default=1.0)
    p.add_argument('--beta', type=float, default=0.0)
    p.add_argument('--samples-per-box', type=int, default=8)
    p.add_argument('--fit-degree', type=int, default=None)
    p.add_argument('--wrap', action='store_true', help="Reduce phases into [-pi, pi)")

    p = sub.add_parser('ue-demo', parents=[common], help="Encrypt/decrypt round trips")
    p.add_argument('--ell', type=int, default=None)
    p.add_argument('--round-trips', type=int, default=None)
    p.add_argument('--experimental', action='store_true', help="Prime-d variant (no security claim)")

    p = sub.add_parser('ue-attack', parents=[common], help="Measure-resend cloning baseline")
    p.add_argument('--ell', type=int, default=None)
    p.add_argument('--trials', type=int, default=None)

    p = sub.add_parser('report-all', parents=[common], help="Run the acceptance suite")
    p.add_argument('--excel', action='store_true', help="Also save the acceptance workbook")

    return parser


def _normalise_argv(argv):
    """Accept 'ue demo' / 'ue attack' as aliases of 'ue-demo' / 'ue-attack'."""
    if len(argv) >= 2 and argv[0] == 'ue' and argv[1] in ('demo', 'attack'):
        return [f"ue-{argv[1]}"] + list(argv[2:])
    return list(argv)


def parse_config(argv=None):
    """
    Parse command-line arguments into a RunConfig.

    Returns:
        RunConfig
    """
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_normalise_argv(argv))
    fields = {k: v for k, v in vars(args).items() if v is not None}
    return RunConfig(**fields)


def main(argv=None):
    """
    Parse arguments, log the effective configuration and run the subcommand.

    Returns:
        int: exit status
    """
    config = parse_config(argv)

    log_header(f"CV2DESIGN: {config.command}")
    print_config()
    debug(f"Run configuration: {config.to_dict()}")
    log_separator()

    status = run(config)

    log_header(f"COMPLETE: {config.command} (exit status {status})")
    return status


def _check_imports():
    from core import acceptance, discretization, opalg, runner  # noqa: F401
    from features import cvdisc, design, encryption, twirl, wavefunctions  # noqa: F401
    from utils import formatters, parallel, rng, validation  # noqa: F401
    from writers import csv_writer, excel_writer, json_writer  # noqa: F401


def _check_design():
    from core.discretization import make_config
    from features.design import norm_on_K

    report = norm_on_K(make_config(3), 1, 'structured')
    if not report.passed:
        raise AssertionError(f"Norm {report.norm_2to2_on_K} exceeds bound {report.bound}")


def quick_test():
    """
    Smoke test: imports, configuration and one small design check.

    Returns:
        bool: True when every step succeeds
    """
    log_header("QUICK SYSTEM TEST")
    steps = [("Imports", _check_imports), ("Configuration", print_config), ("Design check d=3", _check_design)]
    for name, step in steps:
        try:
            step()
        except Exception as e:
            critical(f"✗ {name}: {e}")
            return False
        info(f"✓ {name}")
    log_header("✓ SYSTEM TEST PASSED")
    return True


if __name__ == "__main__":
    sys.exit(main())
