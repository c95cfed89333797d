"""Measure lines: one-dimensional real spaces and the quantities living in them.

A `Dimension` is an exact exponent vector over the primitive lines ``[kg]``,
``[kgs]`` and ``[kgm]``. Only ``[kgm]`` is oriented; ``[kg]`` and ``[kgs]`` are not.
Orientation is tracked by a per-base parity (``twist``): a dimension is oriented
when no unoriented base occurs an odd number of times outside an absolute value.

>>> format_dimension(parse_dimension("kgs/kg"))
'kg^-1*kgs'
>>> parse_dimension("|kgm/kg|^2") == dim_pow(M, 2)
True
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Final

import numpy as np

from .exceptions import (
    DimensionMismatch,
    DivisionByZero,
    DomainError,
    NegativeRoot,
    ParseError,
    UnknownBase,
)

BASES: Final[tuple[str, str, str]] = ("kg", "kgs", "kgm")
#: Bases without an orientation, in the order of ``Dimension.twist``.
UNORIENTED_BASES: Final[tuple[str, str]] = ("kg", "kgs")

Exponents = tuple[Fraction, Fraction, Fraction]
Twist = tuple[bool, bool]

_NO_TWIST: Final[Twist] = (False, False)


def _as_fraction(value: int | Fraction | str) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"Exponents must be exact rationals, received float {value}")
    return Fraction(value)


@dataclass(frozen=True)
class Dimension:
    """A measure line, up to canonical isomorphism."""

    exponents: Exponents = (Fraction(0), Fraction(0), Fraction(0))
    absolute: bool = False
    twist: Twist = field(default=_NO_TWIST)

    def __post_init__(self):
        if len(self.exponents) != len(BASES):
            raise ValueError(f"Expected {len(BASES)} exponents, got {self.exponents}")
        object.__setattr__(
            self, "exponents", tuple(_as_fraction(e) for e in self.exponents)
        )
        object.__setattr__(self, "twist", tuple(bool(t) for t in self.twist))
        if self.absolute and any(self.twist):
            raise ValueError("An absolute dimension is always oriented")

    @classmethod
    def from_map(
        cls,
        exponents: dict[str, int | Fraction],
        *,
        absolute: bool = False,
    ) -> Dimension:
        """Build a dimension from ``{base: exponent}``.

        Non-absolute dimensions get the natural parity of their integer exponents.
        """
        unknown = set(exponents) - set(BASES)
        if unknown:
            raise ValueError(f"Unknown bases {sorted(unknown)}")
        exps = tuple(_as_fraction(exponents.get(b, 0)) for b in BASES)
        twist = _NO_TWIST if absolute else _natural_twist(exps)  # type: ignore
        return cls(exps, absolute, twist)  # type: ignore

    @property
    def oriented(self) -> bool:
        return not any(self.twist)

    @property
    def is_dimensionless(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def exponent(self, base: str) -> Fraction:
        return self.exponents[BASES.index(base)]

    def as_map(self) -> dict[str, Fraction]:
        return {b: e for b, e in zip(BASES, self.exponents, strict=True) if e != 0}

    def scale_factor(self, *, kg: float, kgs: float, kgm: float) -> float:
        """Factor by which a magnitude of this dimension changes when the base
        lines are rescaled by ``kg``, ``kgs`` and ``kgm``.

        Absolute dimensions only see the size of the factors.
        """
        factors = dict(zip(BASES, (kg, kgs, kgm), strict=True))
        value = 1.0
        for base, exp in zip(BASES, self.exponents, strict=True):
            if exp == 0:
                continue
            factor = factors[base]
            if factor == 0:
                raise DivisionByZero(f"Scale factor for [{base}] must be nonzero")
            value *= abs(factor) ** float(exp)
            if not self.absolute and exp.denominator == 1 and exp.numerator % 2:
                value *= math.copysign(1.0, factor)
        return value

    def __mul__(self, other: Dimension) -> Dimension:
        return dim_mul(self, other)

    def __truediv__(self, other: Dimension) -> Dimension:
        return dim_div(self, other)

    def __pow__(self, p: int | Fraction) -> Dimension:
        return dim_pow(self, p)

    def __abs__(self) -> Dimension:
        return dim_abs(self)

    def __str__(self) -> str:
        return format_dimension(self)


def _natural_twist(exponents: Exponents) -> Twist:
    twist = []
    for base in UNORIENTED_BASES:
        exp = exponents[BASES.index(base)]
        twist.append(exp.denominator == 1 and exp.numerator % 2 == 1)
    return tuple(twist)  # type: ignore


def _xor(a: Twist, b: Twist) -> Twist:
    return (a[0] != b[0], a[1] != b[1])


DIMENSIONLESS: Final = Dimension()
KG: Final = Dimension.from_map({"kg": 1})
KGS: Final = Dimension.from_map({"kgs": 1})
KGM: Final = Dimension.from_map({"kgm": 1})


def dim_mul(a: Dimension, b: Dimension) -> Dimension:
    """Tensor product of two measure lines."""
    exps = tuple(x + y for x, y in zip(a.exponents, b.exponents, strict=True))
    absolute = a.absolute and b.absolute
    return Dimension(exps, absolute, _xor(a.twist, b.twist))  # type: ignore


def dim_inverse(a: Dimension) -> Dimension:
    exps = tuple(-e for e in a.exponents)
    return Dimension(exps, a.absolute, a.twist)  # type: ignore


def dim_div(a: Dimension, b: Dimension) -> Dimension:
    """Quotient ``a/b``, the space of linear maps from ``b`` to ``a``."""
    return dim_mul(a, dim_inverse(b))


def dim_abs(a: Dimension) -> Dimension:
    """The nonnegative part of the oriented line ``|a|``. Idempotent."""
    return Dimension(a.exponents, True, _NO_TWIST)


def dim_root(a: Dimension, n: int) -> Dimension:
    """``n``-th root. Unoriented lines are rooted through their absolute value."""
    if n < 1:
        raise ValueError(f"Root index must be a positive integer, received {n}")
    exps = tuple(e / n for e in a.exponents)
    if a.oriented:
        return Dimension(exps, a.absolute, _NO_TWIST)  # type: ignore
    return Dimension(exps, True, _NO_TWIST)  # type: ignore


def dim_pow(a: Dimension, p: int | Fraction) -> Dimension:
    """Integer or rational power; ``a^(p/q)`` is the ``q``-th root of ``a^p``."""
    p = Fraction(p)
    if p.denominator != 1:
        return dim_root(dim_pow(a, p.numerator), p.denominator)
    k = p.numerator
    if k == 0:
        return DIMENSIONLESS
    exps = tuple(e * k for e in a.exponents)
    twist = a.twist if k % 2 else _NO_TWIST
    return Dimension(exps, a.absolute, twist)  # type: ignore


M: Final = dim_abs(dim_div(KGM, KG))
S: Final = dim_div(KGS, KG)
VELOCITY: Final = dim_div(M, S)
SPEED: Final = dim_abs(VELOCITY)


# Quantities


def _magnitude(value) -> float | np.ndarray:
    if np.ndim(value) == 0:
        return float(value)
    return np.asarray(value, dtype=float)


@dataclass(frozen=True, eq=False)
class Quantity:
    """An element of a measure line, given by its magnitude in a fixed frame.

    The magnitude may be a numpy array for vector-valued quantities.
    """

    magnitude: float | np.ndarray
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "magnitude", _magnitude(self.magnitude))
        if self.dim.absolute and np.any(np.asarray(self.magnitude) < 0):
            raise DomainError(
                f"Expected a nonnegative magnitude for |{self.dim}| "
                f"but received {self.magnitude}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quantity):
            return NotImplemented
        return self.dim == other.dim and bool(
            np.array_equal(self.magnitude, other.magnitude)
        )

    __hash__ = None  # type: ignore

    def __add__(self, other: Quantity) -> Quantity:
        return qty_add(self, other)

    def __sub__(self, other: Quantity) -> Quantity:
        return qty_add(self, -other)

    def __neg__(self) -> Quantity:
        return Quantity(-self.magnitude, self.dim)

    def __mul__(self, other: Quantity | float) -> Quantity:
        if isinstance(other, Quantity):
            return qty_mul(self, other)
        return Quantity(self.magnitude * other, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other: Quantity | float) -> Quantity:
        if isinstance(other, Quantity):
            return qty_div(self, other)
        return qty_div(self, Quantity(other))

    def __abs__(self) -> Quantity:
        return qty_abs(self)

    def root(self, n: int) -> Quantity:
        return qty_root(self, n)

    def __float__(self) -> float:
        return float(self.magnitude)  # type: ignore

    def __repr__(self) -> str:
        return f"Quantity({self.magnitude!r}, {format_dimension(self.dim)!r})"


def qty_add(a: Quantity, b: Quantity) -> Quantity:
    if a.dim != b.dim:
        raise DimensionMismatch(
            f"Cannot add {format_dimension(a.dim)} and {format_dimension(b.dim)}"
        )
    return Quantity(a.magnitude + b.magnitude, a.dim)


def qty_mul(a: Quantity, b: Quantity) -> Quantity:
    return Quantity(a.magnitude * b.magnitude, dim_mul(a.dim, b.dim))


def qty_div(a: Quantity, b: Quantity) -> Quantity:
    if np.any(np.asarray(b.magnitude) == 0):
        raise DivisionByZero(f"Division of {a!r} by zero {format_dimension(b.dim)}")
    return Quantity(a.magnitude / b.magnitude, dim_div(a.dim, b.dim))


def qty_abs(a: Quantity) -> Quantity:
    return Quantity(np.abs(a.magnitude), dim_abs(a.dim))


def qty_root(a: Quantity, n: int) -> Quantity:
    dim = dim_root(a.dim, n)
    x = np.asarray(a.magnitude, dtype=float)
    if n % 2 == 0 and np.any(x < 0):
        raise NegativeRoot(f"Even root of negative magnitude {a.magnitude}")
    if dim.absolute:
        value = np.abs(x) ** (1.0 / n)
    else:
        value = np.sign(x) * np.abs(x) ** (1.0 / n)
    return Quantity(value, dim)


# Text form


def _format_exponent(exp: Fraction) -> str:
    if exp == 1:
        return ""
    if exp.denominator == 1:
        return f"^{exp.numerator}"
    return f"^{exp.numerator}/{exp.denominator}"


def _format_product(exponents: Exponents) -> str:
    parts = [
        f"{base}{_format_exponent(exp)}"
        for base, exp in zip(BASES, exponents, strict=True)
        if exp != 0
    ]
    return "*".join(parts) if parts else "kg^0"


def _parses_absolute(exponents: Exponents) -> bool:
    # kg and kgs with a fractional exponent are read as roots of unoriented lines
    kgm = exponents[BASES.index("kgm")]
    if kgm != 0:
        return False
    nonzero = [e for e in exponents if e != 0]
    return bool(nonzero) and all(e.denominator != 1 for e in nonzero)


def format_dimension(dim: Dimension) -> str:
    """Canonical text form, readable back by `parse_dimension`.

    >>> format_dimension(M)
    '|kg^-1*kgm|'
    >>> format_dimension(dim_mul(S, S))
    'kg^-2*kgs^2'
    """
    if dim.absolute:
        return f"|{_format_product(dim.exponents)}|"

    plain = list(dim.exponents)
    wrapped = [Fraction(0)] * len(BASES)
    natural = _natural_twist(dim.exponents)
    for i, base in enumerate(UNORIENTED_BASES):
        if natural[i] == dim.twist[i]:
            continue
        j = BASES.index(base)
        if dim.twist[i]:
            # odd plain factor, remainder under the absolute value
            wrapped[j] = plain[j] - 1
            plain[j] = Fraction(1)
        else:
            wrapped[j] = plain[j]
            plain[j] = Fraction(0)

    text = _format_product(tuple(plain))  # type: ignore
    if text != "kg^0" and _parses_absolute(tuple(plain)):  # type: ignore
        text = f"{text}*kg^0"
    if any(w != 0 for w in wrapped):
        text = f"|{_format_product(tuple(wrapped))}|*{text}"  # type: ignore
    return text


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]+)|(?P<op>[*/^|(),\-]))")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            offset = len(text[pos:]) - len(text[pos:].lstrip())
            bad = pos + offset
            raise ParseError(f"Unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        assert kind is not None
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


_NAMED: Final[dict[str, Dimension]] = {
    "kg": KG,
    "kgs": KGS,
    "kgm": KGM,
    "m": M,
    "s": S,
}


class _Parser:
    """Recursive descent over::

        expr     := term (('*' | '/') term)*
        term     := atom ('^' rational)?
        atom     := base | '|' expr '|' | 'root' '(' expr ',' int ')' | '(' expr ')'
        rational := '-'? int ('/' int)?
    """

    def __init__(self, text: str) -> None:
        self._tokens = _tokenize(text)
        self._index = 0

    @property
    def _current(self) -> _Token:
        return self._tokens[self._index]

    def _peek(self, offset: int = 1) -> _Token:
        return self._tokens[min(self._index + offset, len(self._tokens) - 1)]

    def _advance(self) -> _Token:
        token = self._current
        self._index += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self._current
        if token.text != text or token.kind == "end":
            found = token.text or "end of input"
            raise ParseError(f"Expected {text!r} but found {found!r}", token.position)
        return self._advance()

    def parse(self) -> Dimension:
        result = self._expr()
        if self._current.kind != "end":
            raise ParseError(
                f"Unexpected {self._current.text!r}", self._current.position
            )
        return result

    def _expr(self) -> Dimension:
        result = self._term()
        while self._current.text in ("*", "/"):
            op = self._advance().text
            rhs = self._term()
            result = dim_mul(result, rhs) if op == "*" else dim_div(result, rhs)
        return result

    def _term(self) -> Dimension:
        base = self._atom()
        if self._current.text == "^":
            self._advance()
            return dim_pow(base, self._rational())
        return base

    def _integer(self) -> int:
        token = self._current
        if token.kind != "int":
            found = token.text or "end of input"
            raise ParseError(f"Expected an integer but found {found!r}", token.position)
        self._advance()
        return int(token.text)

    def _rational(self) -> Fraction:
        sign = 1
        if self._current.text == "-":
            self._advance()
            sign = -1
        numerator = self._integer()
        if self._current.text == "/" and self._peek().kind == "int":
            self._advance()
            position = self._current.position
            denominator = self._integer()
            if denominator == 0:
                raise ParseError("Zero denominator in exponent", position)
            return Fraction(sign * numerator, denominator)
        return Fraction(sign * numerator)

    def _atom(self) -> Dimension:
        token = self._current
        if token.text == "|":
            self._advance()
            inner = self._expr()
            self._expect("|")
            return dim_abs(inner)
        if token.text == "(":
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        if token.kind == "name":
            self._advance()
            if token.text == "root":
                self._expect("(")
                inner = self._expr()
                self._expect(",")
                position = self._current.position
                n = self._integer()
                if n < 1:
                    raise ParseError("Root index must be at least 1", position)
                self._expect(")")
                return dim_root(inner, n)
            if token.text not in _NAMED:
                raise UnknownBase(f"Unknown base {token.text!r}", token.position)
            return _NAMED[token.text]
        found = token.text or "end of input"
        raise ParseError(f"Unexpected {found!r}", token.position)


def parse_dimension(text: str) -> Dimension:
    """Parse a dimension expression over ``kg``, ``kgs``, ``kgm``, ``m`` and ``s``.

    Raises:
        ParseError: if ``text`` does not follow the grammar.
        UnknownBase: if a name other than a base or ``root`` is used.
    """
    return _Parser(text).parse()
