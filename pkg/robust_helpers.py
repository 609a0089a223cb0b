"""
Helper functions for PolyStab
Report formatting, JSON conversion, precondition decorators, range checks
"""

import math
from functools import wraps

import numpy as np

import config
from errors import DomainError


def require_family_kind(*kinds):
    """
    Decorator to check the kind of the MatrixFamily passed as first argument

    Args:
        kinds: Accepted family kinds ('polytopic', 'interval', 'mixed')
    """
    def decorator(func):
        @wraps(func)
        def wrapper(f, *args, **kwargs):
            if f.kind not in kinds:
                raise DomainError(
                    f"{func.__name__} needs a {' or '.join(kinds)} family, got a {f.kind} family"
                )
            return func(f, *args, **kwargs)
        return wrapper
    return decorator


def jsonable(value):
    """Convert numpy scalars, complex numbers and tuples into JSON-ready values"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return complex_to_json(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return 'inf' if value > 0 else ('-inf' if value < 0 else 'nan')
    return value


def complex_to_json(z):
    z = complex(z)
    return {'re': z.real, 'im': z.imag}


def exit_code_for(status):
    """Map a verdict status to the process exit code"""
    return config.EXIT_CODES[status.upper()]


def stability_report(command, status, label, diagnostics, config_echo,
                     witness=None, extra=None):
    """
    Format a standard report

    Args:
        command: Subcommand that produced the report
        status: 'stable', 'unstable' or 'inconclusive'
        label: Human readable verdict line
        diagnostics: Counts and resource usage
        config_echo: Checker configuration used
        witness: Witness dict (kept only for unstable verdicts)
        extra: Additional top-level fields
    """
    report = {
        'tool': config.TOOL_INFO['tool_name'],
        'version': config.TOOL_INFO['version'],
        'command': command,
        'status': status,
        'exit_code': exit_code_for(status),
        'label': label,
    }
    if status == 'unstable' and witness is not None:
        report['witness'] = witness
    report['diagnostics'] = diagnostics
    report['config'] = config_echo
    if extra:
        report.update(extra)
    return jsonable(report)


def error_report(command, message, exit_name='INPUT_ERROR', extra=None):
    """Create an error report"""
    report = {
        'tool': config.TOOL_INFO['tool_name'],
        'version': config.TOOL_INFO['version'],
        'command': command,
        'status': 'error',
        'exit_code': config.EXIT_CODES[exit_name],
        'error': message,
    }
    if extra:
        report.update(extra)
    return jsonable(report)


def validate_range(value, min_val, max_val, param_name):
    """
    Validate value is within range

    Returns:
        tuple: (is_valid, error_message)
    """
    if value < min_val or value > max_val:
        return False, f"{param_name} must be between {min_val} and {max_val}"
    return True, None
