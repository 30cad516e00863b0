"""Exact rational parsing and formatting.

All probabilities and payoffs in this package are ``fractions.Fraction``
values.  Decimal strings are converted exactly ("0.2" -> 1/5); binary
floats are rejected at the boundary so no rounding ever sneaks in.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInputError


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts Fraction, int, and strings like "3", "-3/125", "0.25", "1e-3".
    Rejects floats: a binary float has already lost the decimal the user
    wrote, so callers must pass the literal as a string instead.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInputError(f"cannot interpret {value!r} as a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InvalidInputError(
            f"refusing to convert float {value!r}; pass a string like '1/4' or '0.25'"
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"cannot parse rational {value!r}: {exc}") from None
    raise InvalidInputError(f"cannot interpret {value!r} as a rational")


def frac_str(value: Fraction) -> str:
    """Format a Fraction as "p" or "p/q" for JSON payloads."""
    return str(Fraction(value))
