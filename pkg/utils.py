"""
Utility functions shared by the verification modules and the CLI
"""

import sys

# Size caps and bounds; every function taking a cap falls back to these
DEFAULT_LIMITS = {
    "oracle_bound": 8,
    "partition_bound": 14,
    "tensor_cap": 4096,
    "faithfulness_max_level": 64,
    "limit_horizon": 3,
    "theta_cap": 10000,
    "basis_proxy_degree": 4,
}

_QUIET = False


def set_quiet(quiet):
    global _QUIET
    _QUIET = bool(quiet)


def log_progress(message):
    """Progress messages go to stderr so stdout stays machine-readable"""
    if not _QUIET:
        print(message, file=sys.stderr, flush=True)


def create_progress_bar(current, total, bar_length=40):
    """Create a simple progress bar string"""
    progress = current / total if total else 1.0
    filled_length = int(bar_length * progress)
    bar = '█' * filled_length + '-' * (bar_length - filled_length)
    return f'[{bar}] {progress:.1%} ({current}/{total})'


def format_duration(seconds):
    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = seconds % 60
    return f"{hours:02d}:{minutes:02d}:{secs:05.2f}"


def status_mark(passed):
    return '✅ PASS' if passed else '❌ FAIL'


def parse_int_list(text, separator=','):
    """"2,2,1" -> [2, 2, 1]; empty string gives []"""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(item) for item in text.split(separator)]
    except ValueError:
        raise ValueError(f"Expected {separator!r}-separated integers, got {text!r}")


def parse_matrix(text):
    """Row-major matrix "0,1;1,0" -> [[0, 1], [1, 0]]"""
    rows = [parse_int_list(row) for row in text.strip().split(';')]
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise ValueError(f"Matrix rows must have equal length: {text!r}")
    return rows


def parse_key_values(text):
    """"n=4,v=4,eps=-1" -> {"n": 4, "v": 4, "eps": -1}"""
    values = {}
    if not text.strip():
        return values
    for item in text.split(','):
        if '=' not in item:
            raise ValueError(f"Expected key=value, got {item!r}")
        key, raw = item.split('=', 1)
        try:
            values[key.strip()] = int(raw)
        except ValueError:
            raise ValueError(f"Value for {key.strip()!r} must be an integer, got {raw!r}")
    return values

