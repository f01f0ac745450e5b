"""Adversarial Rademacher complexity toolkit.

Exact and search-based worst-case perturbations for linear, single-ReLU and
one-hidden-layer hypotheses, Monte Carlo complexity estimators, closed-form
bound evaluators, and sign-pattern shattering statistics. The heavy lifting
lives in the compiled `_core` extension.
"""

import os

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401


def cli_path():
    """Path of the bundled command-line tool, if it was installed."""
    here = os.path.dirname(__file__)
    candidate = os.path.join(here, "bin", "advrc")
    return candidate if os.path.exists(candidate) else None
