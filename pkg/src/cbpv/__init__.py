"""Call-by-push-value toolkit relating call-by-value and call-by-name evaluation.

Submodules: ``syntax``/``typecheck``/``subst`` (the core calculus),
``evaluate`` (big-step evaluation with fuel), ``source`` (the source
language and its translations), ``galois_syntax`` (term-level conversion
maps), ``posets``/``monads`` (finite order structures), ``denote``
(denotational semantics) and ``harness`` (property checks).
"""

from .errors import CBPVError
from .report import CheckReport

__version__ = "0.1.0"
__all__ = ["CBPVError", "CheckReport", "__version__"]
