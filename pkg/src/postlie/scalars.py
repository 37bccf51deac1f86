"""Scalar handling: exact rationals vs floats, selected per computation context.

The mode lives on the owning algebra/context, never on individual values.
Exact mode works with int/Fraction (arithmetic is exact by construction);
float mode works with int/float and compares against a tolerance.  Mixing a
float into an exact context raises ModeMismatch.
"""

from fractions import Fraction

from .errors import ModeMismatch

EXACT = "exact"
FLOAT = "float"


def check_mode(mode):
    if mode not in (EXACT, FLOAT):
        raise ModeMismatch("unknown scalar mode %r (use 'exact' or 'float')" % (mode,))
    return mode


def coerce(value, mode):
    """Validate and normalize one scalar for the given mode."""
    if isinstance(value, bool):
        raise ModeMismatch("booleans are not scalars")
    if mode == EXACT:
        if isinstance(value, (int, Fraction)):
            return Fraction(value) if not isinstance(value, int) else value
        if isinstance(value, str):
            return parse_rational(value)
        raise ModeMismatch("exact mode rejects %r (use int, Fraction or 'p/q')" % (value,))
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return float(parse_rational(value))
    raise ModeMismatch("float mode rejects %r" % (value,))


def parse_rational(s):
    """Parse 'p/q' or 'p' into a Fraction (used by the JSON loaders)."""
    return Fraction(str(s).strip())


def format_rational(q):
    """Serialize a scalar back to the 'p/q' / 'p' string form."""
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 else "%d" % q.numerator


def is_zero(value, mode, tol):
    if mode == EXACT:
        return value == 0
    return abs(value) <= tol


def ratio(p, q, mode):
    """The scalar p/q in the given mode (exact division vs float division)."""
    return Fraction(p, q) if mode == EXACT else p / q
