"""
JSON Writer Module
Every document carries a header (command, config, version, seed, timestamp)
and is serialised with allow_nan=False.
"""

import json
import os
import sys
from datetime import datetime, timezone

from core.config import TOOL_VERSION, config_snapshot
from utils.formatters import to_json_safe


def build_header(command, run_config, seed=None):
    """
    Output header shared by all commands.

    Args:
        command (str): Subcommand name
        run_config (dict): Effective run parameters
        seed: Seed of the run (None for deterministic commands)

    Returns:
        dict: The header
    """
    return {
        'command': command,
        'config': {'run': run_config, 'settings': config_snapshot()},
        'version': TOOL_VERSION,
        'seed': seed,
        'timestamp': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }


def dumps_document(document):
    """Serialise a document; NaN or infinite values raise NonFiniteOutputError."""
    return json.dumps(to_json_safe(document), allow_nan=False, indent=2)


def write_document(document, stream=None):
    """Write a document to a stream (standard output by default)."""
    stream = stream or sys.stdout
    stream.write(dumps_document(document))
    stream.write("\n")
    stream.flush()


def write_error(error_dict, stream=None):
    """Write a machine-readable error object to standard error."""
    stream = stream or sys.stderr
    stream.write(json.dumps(to_json_safe(error_dict), allow_nan=False))
    stream.write("\n")
    stream.flush()


def save_document(document, path):
    """
    Save a document to a file, creating parent folders.

    Returns:
        str: The path written
    """
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_document(document))
        f.write("\n")
    return path


def load_document(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
