"""
Configuration Module
Loads and manages all configuration settings from settings.ini
The packaged settings.ini is read first; a settings.ini in the working
directory overrides individual keys.
"""

import configparser
import os

TOOL_NAME = "cv2design"
TOOL_VERSION = "0.1.0"

THREADS_ENV_VAR = "CV2DESIGN_THREADS"

# Load the configuration settings from settings.ini
config = configparser.ConfigParser()

PACKAGE_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
config_file_paths = [
    os.path.join(PACKAGE_ROOT, 'settings.ini'),
    os.path.join(os.getcwd(), 'settings.ini'),
]

# Later files override earlier ones; missing files are skipped
config.read(config_file_paths, encoding='utf-8')

# Paths section
OUTPUT_FOLDER = config.get('Paths', 'output_folder', fallback='OUTPUT')
LOG_FOLDER = config.get('Paths', 'log_folder', fallback='LOG')

# Numerics section
HERMITIAN_TOLERANCE = config.getfloat('Numerics', 'hermitian_tolerance', fallback=1e-12)
PSD_TOLERANCE = config.getfloat('Numerics', 'psd_tolerance', fallback=1e-10)
TRACE_TOLERANCE = config.getfloat('Numerics', 'trace_tolerance', fallback=1e-10)
K_MEMBERSHIP_TOLERANCE = config.getfloat('Numerics', 'k_membership_tolerance', fallback=1e-10)
TIE_TOLERANCE = config.getfloat('Numerics', 'tie_tolerance', fallback=1e-12)

# Discretization section
DEFAULT_D = config.getint('Discretization', 'default_d', fallback=64)
GAUSS_NODES = config.getint('Discretization', 'gauss_nodes', fallback=24)
INTEGRATION_DRIFT = config.getfloat('Discretization', 'integration_drift', fallback=1e-8)
SURROGATE_REFINEMENT = config.getint('Discretization', 'surrogate_refinement', fallback=16)
SURROGATE_DRIFT = config.getfloat('Discretization', 'surrogate_drift', fallback=1e-6)
WINDOW_PADDING = config.getfloat('Discretization', 'window_padding', fallback=6.0)
MIN_WINDOW_TRACE = config.getfloat('Discretization', 'min_window_trace', fallback=1e-6)

# Design section
BRUTE_FORCE_MAX_D = config.getint('Design', 'brute_force_max_d', fallback=6)
DEFAULT_METHOD = config.get('Design', 'default_method', fallback='structured')

# MonteCarlo section
MC_CHUNK_SIZE = config.getint('MonteCarlo', 'chunk_size', fallback=1024)
MC_DEFAULT_SAMPLES = config.getint('MonteCarlo', 'default_samples', fallback=10000)
DEFAULT_SEED = config.getint('MonteCarlo', 'default_seed', fallback=0)

# Encryption section
UE_DEFAULT_D = config.getint('Encryption', 'default_d', fallback=8)
UE_DEFAULT_ELL = config.getint('Encryption', 'default_ell', fallback=2)
UE_DEMO_ROUND_TRIPS = config.getint('Encryption', 'demo_round_trips', fallback=100)
UE_ATTACK_TRIALS = config.getint('Encryption', 'attack_trials', fallback=10000)
DELTA_LOG_BASE = config.getfloat('Encryption', 'log_base', fallback=2.0)

# Parallel section
THREADS = config.getint('Parallel', 'threads', fallback=1)

# Output section
FLOAT_PRECISION = config.getint('Output', 'float_precision', fallback=15)
WRITE_EXCEL_REPORT = config.getboolean('Output', 'write_excel_report', fallback=False)


def get_thread_count():
    """
    Resolve the parallelism cap.

    The CV2DESIGN_THREADS environment variable wins over [Parallel] threads.
    Invalid or non-positive values fall back to a single thread.

    Returns:
        int: Number of worker threads to use
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return max(1, THREADS)
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def config_snapshot():
    """
    Effective configuration as a plain dict (embedded in run outputs).

    Returns:
        dict: {section: {key: value}} for every known setting
    """
    return {
        'paths': {'output_folder': OUTPUT_FOLDER, 'log_folder': LOG_FOLDER},
        'numerics': {
            'hermitian_tolerance': HERMITIAN_TOLERANCE,
            'psd_tolerance': PSD_TOLERANCE,
            'trace_tolerance': TRACE_TOLERANCE,
            'k_membership_tolerance': K_MEMBERSHIP_TOLERANCE,
            'tie_tolerance': TIE_TOLERANCE,
        },
        'discretization': {
            'default_d': DEFAULT_D,
            'gauss_nodes': GAUSS_NODES,
            'integration_drift': INTEGRATION_DRIFT,
            'surrogate_refinement': SURROGATE_REFINEMENT,
            'surrogate_drift': SURROGATE_DRIFT,
            'window_padding': WINDOW_PADDING,
            'min_window_trace': MIN_WINDOW_TRACE,
        },
        'design': {'brute_force_max_d': BRUTE_FORCE_MAX_D, 'default_method': DEFAULT_METHOD},
        'monte_carlo': {
            'chunk_size': MC_CHUNK_SIZE,
            'default_samples': MC_DEFAULT_SAMPLES,
            'default_seed': DEFAULT_SEED,
        },
        'encryption': {
            'default_d': UE_DEFAULT_D,
            'default_ell': UE_DEFAULT_ELL,
            'demo_round_trips': UE_DEMO_ROUND_TRIPS,
            'attack_trials': UE_ATTACK_TRIALS,
            'log_base': DELTA_LOG_BASE,
        },
        'output': {'float_precision': FLOAT_PRECISION, 'write_excel_report': WRITE_EXCEL_REPORT},
    }


def print_config():
    """Display the configuration (for debugging purposes)."""
    from utils.logger import info

    info(f"Output folder: {OUTPUT_FOLDER}")
    info(f"Log folder: {LOG_FOLDER}")
    info(f"Hermitian tolerance: {HERMITIAN_TOLERANCE}")
    info(f"PSD tolerance: {PSD_TOLERANCE}")
    info(f"Trace tolerance: {TRACE_TOLERANCE}")
    info(f"K membership tolerance: {K_MEMBERSHIP_TOLERANCE}")
    info(f"Default d: {DEFAULT_D}")
    info(f"Gauss nodes per box: {GAUSS_NODES}")
    info(f"Integration drift limit: {INTEGRATION_DRIFT}")
    info(f"Surrogate refinement: {SURROGATE_REFINEMENT}x")
    info(f"Surrogate drift limit: {SURROGATE_DRIFT}")
    info(f"Brute-force max d: {BRUTE_FORCE_MAX_D}")
    info(f"Default norm method: {DEFAULT_METHOD}")
    info(f"Monte-Carlo chunk size: {MC_CHUNK_SIZE}")
    info(f"Default seed: {DEFAULT_SEED}")
    info(f"Encryption defaults: d={UE_DEFAULT_D}, ell={UE_DEFAULT_ELL}")
    info(f"Delta log base: {DELTA_LOG_BASE}")
    info(f"Threads: {get_thread_count()}")
    info(f"Float precision: {FLOAT_PRECISION}")
    info(f"Write Excel report: {WRITE_EXCEL_REPORT}")
