"""Config-driven interface to the path-space functional-integral core.

Every function accepts a config either as a dict or as JSON text; results
come back as plain python values (dicts, complex numbers, lists).
"""

import json as _json

from . import _core
from ._core import ConfigError, Error

__all__ = [
    "ConfigError",
    "Error",
    "analytic_j",
    "class_bounds",
    "config_hash",
    "feynman_value",
    "normalized_config",
    "run_verification",
    "sample_path",
    "__version__",
]

# _core.version() is "<name> <semver>"
__version__ = _core.version().split()[-1]


def _text(config):
    return _json.dumps(config) if isinstance(config, dict) else config


def config_hash(config):
    """Content hash of the normalized config (stable across formatting)."""
    return _core.config_hash(_text(config))


def normalized_config(config):
    """The config with every default materialized, as a dict."""
    return _json.loads(_core.normalized_config_json(_text(config)))


def run_verification(config, suites=(), threads=0, seed=None):
    """Run verification suites and return the report as a dict.

    ``suites`` defaults to the config's own list (or "all"); ``threads=0``
    means one worker per available core; ``seed`` overrides the config seed.
    """
    report = _core.run_verification_json(_text(config), list(suites), threads, seed)
    return _json.loads(report)


def feynman_value(config):
    """Analytic functional integral at the config's q, as a complex number."""
    return _core.feynman_value(_text(config))


def analytic_j(config, lambda1, lambda2):
    """Closed-form scaled expectation J(lambda1, lambda2)."""
    return _core.analytic_j(_text(config), complex(lambda1), complex(lambda2))


def class_bounds(config):
    """(functional bound, first-variation bound) at q0 = min(|q1|, |q2|)."""
    return _core.class_bounds(_text(config))


def sample_path(config, draw=0):
    """One simulated trajectory as (times, values) lists.

    ``draw`` selects the sample; it uses the same random stream as the k-th
    CSV file written by the command-line ``simulate``.
    """
    return _core.sample_path(_text(config), draw)
