"""High-precision literals shared by the exact layer and the quadrature oracle.

Every float conversion of an exact value goes through these strings, so the
closed forms and the numerical oracle never disagree about what pi or the
golden ratio is.
"""

from decimal import Decimal, localcontext

DECIMAL_DIGITS = 50

PI = "3.14159265358979323846264338327950288419716939937510"
SQRT5 = "2.23606797749978969640917366873127623544061835961152"
# ln((1 + sqrt 5) / 2)
LN_ALPHA = "0.48121182505960344749775891342436842313518433438566"

PI_F = float(PI)
PI2_F = float(Decimal(PI) * Decimal(PI))
SQRT5_F = float(SQRT5)
LN_ALPHA_F = float(LN_ALPHA)
ALPHA_F = (1.0 + SQRT5_F) / 2.0

# ln x / (x - 1) is replaced by its Taylor series when |x - 1| < PATCH_RADIUS
PATCH_RADIUS = 1e-3
SERIES_CUTOFF = 1e-18


def pi_decimal() -> Decimal:
    return Decimal(PI)


def pi2_decimal() -> Decimal:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return Decimal(PI) * Decimal(PI)


def sqrt5_decimal() -> Decimal:
    return Decimal(SQRT5)


def ln_alpha_decimal() -> Decimal:
    return Decimal(LN_ALPHA)
