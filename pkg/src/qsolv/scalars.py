"""Exact arithmetic in the coefficient field of the declared parameters.

A ``ParameterSpace`` fixes an ordered list of commuting parameter names
(e.g. ``q``, ``p_1_2``, ``c``).  Scalars are elements of the field of
rational functions in those parameters with rational coefficients, kept in
a canonical form: numerator and denominator share no polynomial factor,
coefficients are integral with joint content 1, and the denominator's
leading coefficient under a fixed graded-lexicographic monomial order is
positive.  Equality of scalars therefore agrees with field equality.

``GammaMonomial`` values are the units of the parameter ring: a nonzero
rational times a Laurent monomial in the parameters.  They are the only
admissible semicommutation factors and adjoint eigenvalues downstream.

The heavy lifting (multivariate gcd, cancellation) is delegated to
``sympy.polys`` sparse polynomial fields; this module owns the canonical
surface, the unit recognition and the specialization map.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.orderings import grlex

from .errors import DivisionByZero, InadmissiblePoint, ZeroDenominator

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# One sympy field object per name tuple so that elements always interoperate.
_FIELD_CACHE: Dict[Tuple[str, ...], tuple] = {}


def _field_for(names: Tuple[str, ...]):
    cached = _FIELD_CACHE.get(names)
    if cached is None:
        built = _sympy_field(list(names), QQ, order=grlex)
        cached = (built[0], tuple(built[1:]))
        _FIELD_CACHE[names] = cached
    return cached


def _to_qq(value):
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    raise TypeError(f"cannot coerce {value!r} to a rational")


def _coeff_fraction(coeff) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class ParameterSpace:
    """An ordered tuple of distinct parameter names; owns their fraction field."""

    __slots__ = ("names", "_field", "_gens", "_index")

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        seen = set()
        for name in names:
            if not name or not _IDENT.fullmatch(name):
                raise ValueError(f"invalid parameter name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate parameter name {name!r}")
            seen.add(name)
        self.names = names
        self._field, self._gens = _field_for(names)
        self._index = {name: k for k, name in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, ParameterSpace) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"ParameterSpace({list(self.names)!r})"

    def __len__(self):
        return len(self.names)

    # -- scalar constructors ------------------------------------------------

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, self._field.zero)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, self._field.one)

    def scalar(self, value) -> "Scalar":
        """Coerce an int, Fraction, GammaMonomial or Scalar into this field."""
        if isinstance(value, Scalar):
            if value.space != self:
                raise ValueError("scalar belongs to a different parameter space")
            return value
        if isinstance(value, GammaMonomial):
            if value.space != self:
                raise ValueError("unit belongs to a different parameter space")
            return value.to_scalar()
        return Scalar(self, self._field.one * _to_qq(value))

    def param(self, name: str) -> "Scalar":
        if name not in self._index:
            raise KeyError(f"unknown parameter {name!r}")
        return Scalar(self, self._gens[self._index[name]])

    def gamma(self, coeff, exponents: Mapping[str, int] | None = None) -> "GammaMonomial":
        """Build the unit coeff * prod(name^e); coeff must be nonzero."""
        coeff = Fraction(coeff)
        if coeff == 0:
            raise ValueError("unit coefficient must be nonzero")
        exps = [0] * len(self.names)
        for name, e in (exponents or {}).items():
            if name not in self._index:
                raise KeyError(f"unknown parameter {name!r}")
            exps[self._index[name]] = int(e)
        return GammaMonomial(self, coeff, tuple(exps))

    @property
    def gamma_one(self) -> "GammaMonomial":
        return GammaMonomial(self, Fraction(1), (0,) * len(self.names))


class Scalar:
    """A canonical rational function over the parameter space."""

    __slots__ = ("space", "_frac")

    def __init__(self, space: ParameterSpace, frac):
        self.space = space
        self._frac = frac

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._frac

    @property
    def is_one(self) -> bool:
        return self._frac == self.space._field.one

    def numerator_terms(self) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
        """Canonical numerator as ((exponents, coefficient), ...), leading first."""
        return tuple((tuple(m), _coeff_fraction(c)) for m, c in self._frac.numer.terms())

    def denominator_terms(self) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
        return tuple((tuple(m), _coeff_fraction(c)) for m, c in self._frac.denom.terms())

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.space != self.space:
                raise ValueError("scalars from different parameter spaces")
            return other
        if isinstance(other, GammaMonomial):
            if other.space != self.space:
                raise ValueError("unit belongs to a different parameter space")
            return other.to_scalar()
        if isinstance(other, (int, Fraction)):
            return self.space.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.space, self._frac + other._frac)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.space, self._frac - other._frac)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.space, self._frac * other._frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("scalar division by zero")
        return Scalar(self.space, self._frac / other._frac)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Scalar(self.space, -self._frac)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("scalar exponents must be integers")
        if exponent < 0 and self.is_zero:
            raise DivisionByZero("negative power of zero")
        return Scalar(self.space, self._frac ** exponent)

    def __eq__(self, other):
        coerced = self._coerce(other) if isinstance(other, (Scalar, GammaMonomial, int, Fraction)) else None
        if coerced is None:
            return NotImplemented
        return self._frac == coerced._frac

    def __hash__(self):
        return hash((self.space.names, self._frac))

    def __bool__(self):
        return not self.is_zero

    # -- unit recognition and evaluation -------------------------------------

    def as_gamma(self) -> Optional["GammaMonomial"]:
        """Return this scalar as a unit (rational times Laurent monomial), or None."""
        if self.is_zero:
            return None
        num = self._frac.numer.terms()
        den = self._frac.denom.terms()
        if len(num) != 1 or len(den) != 1:
            return None
        (nm, nc), (dm, dc) = num[0], den[0]
        coeff = _coeff_fraction(nc) / _coeff_fraction(dc)
        exps = tuple(a - b for a, b in zip(nm, dm))
        return GammaMonomial(self.space, coeff, exps)

    def specialize(self, assignment: "Assignment") -> Fraction:
        """Evaluate at a nonzero rational point of the parameter space.

        Raises InadmissiblePoint when the canonical denominator vanishes.
        """
        if assignment.space != self.space:
            raise ValueError("assignment belongs to a different parameter space")
        vals = assignment.ordered_values()
        den = _eval_poly(self._frac.denom.terms(), vals)
        if den == 0:
            raise InadmissiblePoint(
                f"denominator {poly_str(self.space, self.denominator_terms())} "
                f"vanishes at {assignment}",
                denominator=poly_str(self.space, self.denominator_terms()),
            )
        num = _eval_poly(self._frac.numer.terms(), vals)
        return num / den

    def __str__(self):
        return scalar_str(self)

    def __repr__(self):
        return f"Scalar({self})"


def _eval_poly(terms, vals) -> Fraction:
    total = Fraction(0)
    for mono, coeff in terms:
        prod = _coeff_fraction(coeff)
        for v, e in zip(vals, mono):
            if e:
                prod *= v ** e
        total += prod
    return total


class GammaMonomial:
    """A unit of the parameter ring: nonzero rational times a Laurent monomial."""

    __slots__ = ("space", "coeff", "exponents")

    def __init__(self, space: ParameterSpace, coeff: Fraction, exponents: Tuple[int, ...]):
        if len(exponents) != len(space.names):
            raise ValueError("exponent vector length mismatch")
        coeff = Fraction(coeff)
        if coeff == 0:
            raise ValueError("unit coefficient must be nonzero")
        self.space = space
        self.coeff = coeff
        self.exponents = tuple(int(e) for e in exponents)

    def to_scalar(self) -> Scalar:
        frac = self.space._field.one * _to_qq(self.coeff)
        for gen, e in zip(self.space._gens, self.exponents):
            if e:
                frac = frac * gen ** e
        return Scalar(self.space, frac)

    def inverse(self) -> "GammaMonomial":
        return GammaMonomial(self.space, 1 / self.coeff, tuple(-e for e in self.exponents))

    def __mul__(self, other):
        if isinstance(other, GammaMonomial):
            if other.space != self.space:
                raise ValueError("units from different parameter spaces")
            return GammaMonomial(
                self.space,
                self.coeff * other.coeff,
                tuple(a + b for a, b in zip(self.exponents, other.exponents)),
            )
        return self.to_scalar() * other

    def __pow__(self, exponent: int):
        return GammaMonomial(
            self.space, self.coeff ** exponent, tuple(e * exponent for e in self.exponents)
        )

    def evaluate(self, assignment: "Assignment") -> Fraction:
        """Value at a nonzero rational point; always nonzero."""
        if assignment.space != self.space:
            raise ValueError("assignment belongs to a different parameter space")
        val = self.coeff
        for name, e in zip(self.space.names, self.exponents):
            if e:
                val *= assignment.values[name] ** e
        return val

    def sort_key(self):
        return (self.exponents, self.coeff)

    def __eq__(self, other):
        if isinstance(other, GammaMonomial):
            return (
                self.space == other.space
                and self.coeff == other.coeff
                and self.exponents == other.exponents
            )
        if isinstance(other, (int, Fraction)):
            return all(e == 0 for e in self.exponents) and self.coeff == other
        return NotImplemented

    def __hash__(self):
        return hash((self.space.names, self.coeff, self.exponents))

    def __str__(self):
        return gamma_str(self)

    def __repr__(self):
        return f"GammaMonomial({self})"


class Assignment:
    """A nonzero rational value for every parameter of a space."""

    __slots__ = ("space", "values")

    def __init__(self, space: ParameterSpace, values: Mapping[str, object]):
        vals = {}
        for name in space.names:
            if name not in values:
                raise ValueError(f"parameter {name!r} is unassigned")
            v = Fraction(values[name])
            if v == 0:
                raise ValueError(f"parameter {name!r} must be assigned a nonzero value")
            vals[name] = v
        extra = set(values) - set(space.names)
        if extra:
            raise ValueError(f"unknown parameters assigned: {sorted(extra)}")
        self.space = space
        self.values = vals

    def ordered_values(self) -> Tuple[Fraction, ...]:
        return tuple(self.values[name] for name in self.space.names)

    def __eq__(self, other):
        return (
            isinstance(other, Assignment)
            and self.space == other.space
            and self.values == other.values
        )

    def __str__(self):
        return "{" + ", ".join(f"{n}={self.values[n]}" for n in self.space.names) + "}"

    def __repr__(self):
        return f"Assignment({self})"


def scalar_normalize(numerator, denominator) -> Scalar:
    """Canonical quotient of two scalars (raw polynomials included).

    Raises ZeroDenominator when the denominator is zero.  Idempotent on
    already-canonical inputs: normalize(s, 1) == s.
    """
    if not isinstance(numerator, Scalar) and not isinstance(denominator, Scalar):
        raise TypeError("at least one operand must be a Scalar")
    space = numerator.space if isinstance(numerator, Scalar) else denominator.space
    num = space.scalar(numerator)
    den = space.scalar(denominator)
    if den.is_zero:
        raise ZeroDenominator("denominator polynomial is zero")
    return num / den


# -- canonical text rendering (the grammar in textio round-trips these) ------


def _frac_coeff_str(coeff: Fraction) -> str:
    if coeff.denominator == 1:
        return str(coeff.numerator)
    return f"{coeff.numerator}/{coeff.denominator}"


def _mono_str(space: ParameterSpace, mono: Tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(space.names, mono):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def poly_str(space: ParameterSpace, terms) -> str:
    """Render ((exponents, coefficient), ...) as a sum in the text grammar."""
    if not terms:
        return "0"
    chunks = []
    for mono, coeff in terms:
        mono_part = _mono_str(space, mono)
        if not mono_part:
            body = _frac_coeff_str(abs(coeff))
        elif abs(coeff) == 1:
            body = mono_part
        else:
            body = f"{_frac_coeff_str(abs(coeff))}*{mono_part}"
        sign = "-" if coeff < 0 else "+"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def _needs_parens_as_factor(terms) -> bool:
    # A polynomial is safe unparenthesized in a product only as a single
    # term that is either a bare integer or a monomial with coefficient 1.
    if len(terms) != 1:
        return True
    mono, coeff = terms[0]
    if all(e == 0 for e in mono):
        return coeff < 0 or coeff.denominator != 1
    return coeff != 1


def scalar_str(s: Scalar) -> str:
    num = s.numerator_terms()
    den = s.denominator_terms()
    num_str = poly_str(s.space, num)
    if len(den) == 1 and den[0][1] == 1 and all(e == 0 for e in den[0][0]):
        return num_str
    den_str = poly_str(s.space, den)
    if len(num) > 1 or num_str.startswith("-"):
        num_str = f"({num_str})"
    if _needs_parens_as_factor(den):
        den_str = f"({den_str})"
    return f"{num_str}/{den_str}"


def gamma_str(g: GammaMonomial) -> str:
    mono = _mono_str(g.space, g.exponents)
    if not mono:
        return _frac_coeff_str(g.coeff)
    if g.coeff == 1:
        return mono
    if g.coeff == -1:
        return f"-{mono}"
    return f"{_frac_coeff_str(g.coeff)}*{mono}"
