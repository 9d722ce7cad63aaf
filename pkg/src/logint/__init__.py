"""Closed forms and numerical verification for log integrals

    F(m, k, a) = int_0^inf x^m ln x / ((x-1)(x+a)^(k+m+1)) dx

and their Fibonacci/Lucas specialisations at golden-ratio arguments.
"""

__version__ = "0.1.0"

from .closed_forms import closed_F0, closed_F1, closed_F2, closed_F_general, closed_form  # noqa: E402
from .kernel import LogPolyExpr, parse, render  # noqa: E402
from .quadrature import LogIntegrand, integrate, quad_F  # noqa: E402

__all__ = [
    "__version__",
    "LogPolyExpr",
    "LogIntegrand",
    "closed_F0",
    "closed_F1",
    "closed_F2",
    "closed_F_general",
    "closed_form",
    "integrate",
    "parse",
    "quad_F",
    "render",
]
