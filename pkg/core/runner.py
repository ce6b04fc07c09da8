"""
Runner Module
RunConfig and the subcommand dispatcher behind main.py.
Results go to standard output (or --out); errors go to standard error as
one JSON object and select the exit code.
"""

import json
import os
from dataclasses import asdict, dataclass

import numpy as np

from core.config import (DEFAULT_D, DEFAULT_METHOD, DEFAULT_SEED,
                         MC_DEFAULT_SAMPLES, UE_ATTACK_TRIALS, UE_DEFAULT_D, UE_DEFAULT_ELL,
                         UE_DEMO_ROUND_TRIPS, WRITE_EXCEL_REPORT, get_thread_count)
from core.discretization import make_config
from core.errors import (EXIT_ACCEPTANCE_FAILURE, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE,
                         CVDesignError, DegenerateDimensionError, DimensionError, ParameterError)
from core.opalg import matrix_from_json, matrix_to_json
from features.cvdisc import discretization_check, discretize_pure, staircase_profile
from features.design import apply_R, norm_on_K, parse_method
from features.encryption import (decrypt, delta_report, encrypt, run_round_trips,
                                 sample_key, simulate_measure_resend, wrong_key_confidence)
from features.twirl import Basis, TwirlFamily, exact_double_twirl, mc_double_twirl, parse_family
from features.wavefunctions import state_by_name
from utils.logger import DesignLogger, get_logger
from utils.rng import Stream, chunk_generator
from writers.csv_writer import write_profile, write_table
from writers.json_writer import build_header, load_document, save_document, write_document, write_error

logger = get_logger(module_name="runner")

COMMANDS = ('design-verify', 'twirl', 'discretize', 'profile', 'ue-demo', 'ue-attack', 'report-all')
OUTPUT_FORMATS = ('json', 'csv')


@dataclass
class RunConfig:
    """
    Parameters of one CLI run. Unset values (None) take the settings.ini
    defaults of the command when the run starts.
    """

    command: str
    d: int = None
    ell: int = None
    seed: int = None
    samples: int = None
    method: str = None
    family: str = 'sandwich'
    state: str = 'vacuum'
    convention: str = None
    alpha: float = 1.0
    beta: float = 0.0
    samples_per_box: int = 8
    fit_degree: int = None
    wrap: bool = False
    trials: int = None
    round_trips: int = None
    experimental: bool = False
    allow_large: bool = False
    input_path: str = None
    output_path: str = None
    output_format: str = 'json'
    excel: bool = False

    def validate(self):
        """
        Raises:
            ParameterError: Unknown command or output format, negative counts,
                non-finite phase parameters
            DegenerateDimensionError: d < 2
        """
        if self.command not in COMMANDS:
            raise ParameterError(f"Unknown command '{self.command}', expected one of {', '.join(COMMANDS)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"Unknown output format '{self.output_format}'")
        if self.d is not None and int(self.d) < 2:
            raise DegenerateDimensionError(f"d must be at least 2, got d={self.d}")
        for name in ('samples', 'trials', 'round_trips', 'samples_per_box'):
            value = getattr(self, name)
            if value is not None and int(value) < 1:
                raise ParameterError(f"{name} must be positive, got {value}")
        if self.seed is not None and int(self.seed) < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")
        for name in ('alpha', 'beta'):
            value = getattr(self, name)
            if not np.isfinite(float(value)):
                raise ParameterError(f"{name} must be finite, got {value}")

    def to_dict(self):
        data = asdict(self)
        data.pop('output_path')
        return data


# ============================================================================
# Subcommands
# ============================================================================

def _emit(config, document):
    if config.output_path:
        path = save_document(document, config.output_path)
        logger.info(f"Output written to {path}")
    else:
        write_document(document)


def _design_verify(config):
    d = config.d or 4
    ell = config.ell or 1
    report = norm_on_K(make_config(d, config.convention), ell, parse_method(config.method or DEFAULT_METHOD),
                       allow_large=config.allow_large)
    _emit(config, {'header': build_header(config.command, config.to_dict()), 'report': report.to_dict()})
    return EXIT_OK if report.passed else EXIT_ACCEPTANCE_FAILURE


def _load_twirl_input(config, seed):
    if config.input_path:
        x = matrix_from_json(load_document(config.input_path))
        d = int(round(np.sqrt(x.shape[0])))
        if x.shape[0] != x.shape[1] or d * d != x.shape[0]:
            raise DimensionError(f"Twirl input must be d^2 x d^2, got {x.shape[0]}x{x.shape[1]}")
        if config.d is not None and config.d != d:
            raise DimensionError(f"--d {config.d} does not match the input dimension d={d}")
        return x, d, config.input_path

    d = config.d or 4
    rng = chunk_generator(seed, 0, Stream.GENERIC)
    n = d * d
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return x, d, 'random'


def _twirl(config):
    seed = DEFAULT_SEED if config.seed is None else config.seed
    n_samples = config.samples or MC_DEFAULT_SAMPLES
    family = parse_family(config.family)
    x, d, source = _load_twirl_input(config, seed)
    cfg = make_config(d, config.convention)

    averaged = mc_double_twirl(cfg, family, x, n_samples, seed, threads=get_thread_count())
    if family is TwirlFamily.SANDWICH:
        exact = apply_R(cfg, x)
    else:
        exact = exact_double_twirl(cfg, Basis.Q if family is TwirlFamily.Q_ONLY else Basis.P, x)
    error = float(np.linalg.norm(averaged - exact))
    tolerance = 5.0 * float(np.linalg.norm(x)) / np.sqrt(n_samples)

    document = {
        'header': build_header(config.command, config.to_dict(), seed),
        'input': source,
        'family': family.value,
        'n_samples': n_samples,
        'error_vs_exact': error,
        'error_tolerance': tolerance,
        'matrix': matrix_to_json(averaged),
    }
    _emit(config, document)
    return EXIT_OK


def _discretize(config):
    d = config.d or DEFAULT_D
    cfg = make_config(d, config.convention)
    psi = state_by_name(config.state)
    record = discretization_check(cfg, psi)
    rho = discretize_pure(cfg, psi).density_matrix()

    header = build_header(config.command, config.to_dict())
    sidecar = {
        'survival': record.survival,
        'bound': record.bound,
        'measured_distance': record.measured_distance,
        'check': record.to_dict(),
    }
    if config.output_path:
        base, _ = os.path.splitext(config.output_path)
        save_document({'header': header, **matrix_to_json(rho)}, config.output_path)
        save_document({'header': header, **sidecar}, f"{base}.sidecar.json")
        logger.info(f"Density matrix written to {config.output_path} (sidecar {base}.sidecar.json)")
    else:
        write_document({'header': header, 'matrix': matrix_to_json(rho), 'sidecar': sidecar})
    return EXIT_OK if record.passed else EXIT_ACCEPTANCE_FAILURE


def _profile(config):
    d = config.d or DEFAULT_D
    cfg = make_config(d, config.convention)
    profile = staircase_profile(cfg, config.alpha, config.beta, config.samples_per_box,
                                fit_degree=config.fit_degree, wrap=config.wrap)
    if profile.fit_degree is not None:
        logger.info(f"Profile fit degree {profile.fit_degree}: max deviation {profile.max_deviation:.6e}")

    if config.output_format == 'csv':
        write_profile(profile, config.output_path)
    else:
        _emit(config, {
            'header': build_header(config.command, config.to_dict()),
            'profile': profile.to_dict(),
            'rows': profile.data,
        })
    return EXIT_OK


def _ue_demo(config):
    d = config.d or UE_DEFAULT_D
    ell = config.ell or UE_DEFAULT_ELL
    seed = DEFAULT_SEED if config.seed is None else config.seed
    cfg = make_config(d, config.convention)
    n = config.round_trips or UE_DEMO_ROUND_TRIPS

    report = run_round_trips(cfg, ell, n, seed, experimental=config.experimental)
    document = {'header': build_header(config.command, config.to_dict(), seed), **report.to_dict()}
    if not config.experimental:
        document['delta'] = delta_report(d, ell) if d >= 4 else None
        document['wrong_key_mean_confidence'] = wrong_key_confidence(cfg, ell, n, seed)

    if config.output_path:
        # Exchange sample: one key and its ciphertext of x = 0
        key = sample_key(cfg, ell, seed, experimental=config.experimental)
        ciphertext = encrypt(cfg, 0, key)
        document['sample'] = {
            'x': 0,
            'key': key.to_dict(),
            'ciphertext': ciphertext.to_dict(),
            'decrypted': decrypt(cfg, ciphertext, key).x_hat,
        }
    _emit(config, document)
    return EXIT_OK if report.correct == report.total else EXIT_ACCEPTANCE_FAILURE


def _ue_attack(config):
    d = config.d or UE_DEFAULT_D
    ell = UE_DEFAULT_ELL if config.ell is None else config.ell
    seed = DEFAULT_SEED if config.seed is None else config.seed
    cfg = make_config(d, config.convention)
    report = simulate_measure_resend(cfg, ell, config.trials or UE_ATTACK_TRIALS, seed,
                                     threads=get_thread_count())
    _emit(config, {'header': build_header(config.command, config.to_dict(), seed), 'attack': report.to_dict()})
    return EXIT_OK


def _report_all(config):
    from core.acceptance import run_acceptance
    from writers.excel_writer import save_acceptance_workbook

    seed = DEFAULT_SEED if config.seed is None else config.seed
    tables = run_acceptance(seed=seed, threads=get_thread_count())
    summary = tables['summary']
    all_passed = bool(summary['passed'].all())

    if config.excel or WRITE_EXCEL_REPORT:
        save_acceptance_workbook(tables)

    if config.output_format == 'csv':
        write_table(summary, config.output_path)
    else:
        _emit(config, {
            'header': build_header(config.command, config.to_dict(), seed),
            'all_passed': all_passed,
            'criteria': summary,
        })
    return EXIT_OK if all_passed else EXIT_ACCEPTANCE_FAILURE


DISPATCH = {
    'design-verify': _design_verify,
    'twirl': _twirl,
    'discretize': _discretize,
    'profile': _profile,
    'ue-demo': _ue_demo,
    'ue-attack': _ue_attack,
    'report-all': _report_all,
}


def run(config):
    """
    Validate the config and run its command.

    Returns:
        int: exit status (0 success, 1 acceptance failure, 2 usage, 3 numerical)
    """
    dl = DesignLogger()
    run_logger = get_logger(run_name=config.command)
    dl.log_header(f"RUN {config.command}", run_logger)
    run_logger.info(json.dumps(config.to_dict(), default=str))

    try:
        config.validate()
        status = DISPATCH[config.command](config)
    except CVDesignError as e:
        run_logger.error(f"{type(e).__name__}: {e}")
        write_error(e.to_dict())
        status = e.exit_code
    except (OSError, json.JSONDecodeError) as e:
        run_logger.error(f"Input error: {e}")
        write_error({'error': 'input_error', 'message': str(e), 'exit_code': EXIT_USAGE})
        status = EXIT_USAGE
    except np.linalg.LinAlgError as e:
        run_logger.error(f"Linear algebra failure: {e}")
        write_error({'error': 'numerical_error', 'message': str(e), 'exit_code': EXIT_NUMERICAL})
        status = EXIT_NUMERICAL

    run_logger.info(f"Finished with exit status {status}")
    dl.close_run_logger(config.command)
    return status
