"""Presentations of Q-solvable algebras and exact PBW normal-form arithmetic.

A presentation has generators ``x1 .. xn`` with, for every pair ``i < j``, a
unit ``q_ij`` and a tail ``r_ij`` defining the straightening relation

    xi*xj - q_ij*xj*xi = r_ij,

where ``r_ij`` lives in the subalgebra generated by ``x(i+1) .. xn``.
Elements are stored in PBW normal form: finite maps from exponent vectors
``(m1, .., mn)`` to nonzero scalars, the vector standing for the ordered
monomial ``x1^m1 * .. * xn^mn``.  Negative exponents are admitted exactly at
generators flagged invertible.

Multiplication rewrites concatenated monomials with four rules:

  (a) xj*xi          -> q_ij^-1 * (xi*xj - r_ij)             for i < j,
  (b) xi*xi^-1, xi^-1*xi -> 1   (implicit in exponent addition),
  (c) xj^s * xi      -> unit * xi * xj^s                      when the pair
      semicommutes (zero tail), any integer power s,
  (d) xi^-1*xj       -> g^-1 * (xj*xi^-1 - xi^-1*r*xi^-1)     where
      xi*xj = g*xj*xi + r and j < i, for an invertible pivot xi.

Rule applications strictly descend in the lexicographic filtration degree
(e1 > e2 > ... as in the windowed grading), so rewriting terminates; the
strategy below is innermost-leftmost, which makes normal forms reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import StageShapeViolation, ZeroElement
from .scalars import GammaMonomial, ParameterSpace, Scalar, scalar_str

ExponentVector = Tuple[int, ...]
Terms = Dict[ExponentVector, Scalar]


class AlgebraElement:
    """A sparse PBW-normal-form element of a fixed presentation."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: "Presentation", terms: Mapping[ExponentVector, Scalar]):
        self.presentation = presentation
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}

    # -- inspection ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponents: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exponents), self.presentation.params.zero)

    def support(self) -> Tuple[ExponentVector, ...]:
        """Exponent vectors in display order: leading (lex-largest) first."""
        return tuple(sorted(self.terms, reverse=True))

    def min_support_index(self) -> Optional[int]:
        """Smallest 1-based generator index appearing in any term, or None."""
        best = None
        for m in self.terms:
            for k, e in enumerate(m):
                if e != 0:
                    best = k + 1 if best is None else min(best, k + 1)
                    break
        return best

    # -- linear structure ----------------------------------------------------

    def _check_same(self, other: "AlgebraElement"):
        if self.presentation is not other.presentation:
            raise ValueError("elements belong to different presentations")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m)
            new = c if acc is None else acc + c
            if new.is_zero:
                terms.pop(m, None)
            else:
                terms[m] = new
        return AlgebraElement(self.presentation, terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.presentation, {m: -c for m, c in self.terms.items()})

    def scale(self, factor) -> "AlgebraElement":
        factor = self.presentation.params.scalar(factor)
        if factor.is_zero:
            return self.presentation.zero()
        return AlgebraElement(self.presentation, {m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_same(other)
            return self.presentation.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalar * element; element * element goes through __mul__
        return self.scale(other)

    def __pow__(self, exponent: int) -> "AlgebraElement":
        if exponent < 0:
            raise ValueError("element powers must be nonnegative; use inverse monomials")
        result = self.presentation.one()
        for _ in range(exponent):
            result = self.presentation.mul(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.presentation is other.presentation and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.presentation), frozenset((m, c) for m, c in self.terms.items())))

    def __str__(self):
        return element_str(self)

    def __repr__(self):
        return f"AlgebraElement({self})"


@dataclass(frozen=True)
class Word:
    """An unordered product of generator letters times a scalar coefficient.

    Letters are (index, exponent) with exponent +1 or -1; -1 is only legal
    on invertible generators of the target presentation.
    """

    letters: Tuple[Tuple[int, int], ...]
    coefficient: Scalar

    @staticmethod
    def of(letters: Iterable[Tuple[int, int]], coefficient: Scalar) -> "Word":
        return Word(tuple((int(i), int(e)) for i, e in letters), coefficient)


@dataclass(frozen=True)
class PbwCounterexample:
    """A failed overlap: reducing xl*xj*xi two ways gave different results."""

    triple: Tuple[int, int, int]
    resolve_high_first: AlgebraElement
    resolve_low_first: AlgebraElement

    def __str__(self):
        l, j, i = self.triple
        return (
            f"overlap x{l}*x{j}*x{i} is ambiguous: "
            f"(x{l}*x{j})*x{i} = {self.resolve_high_first} but "
            f"x{l}*(x{j}*x{i}) = {self.resolve_low_first}"
        )


class Presentation:
    """A Q-solvable algebra given by its q-matrix and straightening tails."""

    __slots__ = ("params", "n", "qmat", "_tails", "invertible", "pivot", "_lmul_cache")

    def __init__(
        self,
        params: ParameterSpace,
        n: int,
        qmat: Mapping[Tuple[int, int], GammaMonomial],
        relations: Mapping[Tuple[int, int], Mapping[ExponentVector, Scalar]] | None = None,
        invertible: Iterable[int] = (),
        pivot: Optional[int] = None,
    ):
        if n < 1:
            raise ValueError("need at least one generator")
        self.params = params
        self.n = n
        mat: Dict[Tuple[int, int], GammaMonomial] = {}
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                entry = qmat.get((i, j))
                if entry is None:
                    raise ValueError(f"missing q-matrix entry for pair ({i}, {j})")
                if not isinstance(entry, GammaMonomial):
                    raise ValueError(f"q-matrix entry ({i}, {j}) is not a unit monomial")
                if entry.space != params:
                    raise ValueError(f"q-matrix entry ({i}, {j}) uses a different parameter space")
                mat[(i, j)] = entry
        self.qmat = mat
        tails: Dict[Tuple[int, int], Terms] = {}
        for (i, j), raw in (relations or {}).items():
            if not (1 <= i < j <= n):
                raise ValueError(f"relation key ({i}, {j}) is not an ordered pair")
            if isinstance(raw, AlgebraElement):
                raw = raw.terms
            clean: Terms = {}
            for m, c in raw.items():
                m = tuple(int(e) for e in m)
                if len(m) != n:
                    raise ValueError(f"tail r_{i}_{j} has an exponent vector of wrong length")
                c = params.scalar(c)
                if not c.is_zero:
                    clean[m] = c
            if clean:
                tails[(i, j)] = clean
        self._tails = tails
        self.invertible = frozenset(int(k) for k in invertible)
        if not self.invertible <= set(range(1, n + 1)):
            raise ValueError("invertible indices out of range")
        if pivot is not None and not (1 <= pivot <= n):
            raise ValueError("pivot out of range")
        self.pivot = pivot
        self._lmul_cache: Dict[Tuple[int, int], Dict[ExponentVector, Terms]] = {}

    # -- element constructors --------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {(0,) * self.n: self.params.one})

    def monomial(self, exponents: Sequence[int], coefficient=1) -> AlgebraElement:
        m = tuple(int(e) for e in exponents)
        if len(m) != self.n:
            raise ValueError("exponent vector length mismatch")
        for k, e in enumerate(m):
            if e < 0 and (k + 1) not in self.invertible:
                raise ValueError(f"negative exponent at non-invertible generator x{k + 1}")
        return AlgebraElement(self, {m: self.params.scalar(coefficient)})

    def gen(self, i: int, power: int = 1) -> AlgebraElement:
        if not (1 <= i <= self.n):
            raise ValueError(f"generator index {i} out of range")
        exps = [0] * self.n
        exps[i - 1] = power
        return self.monomial(exps)

    def element(self, terms: Mapping[Sequence[int], object]) -> AlgebraElement:
        out: Terms = {}
        for m, c in terms.items():
            mono = self.monomial(m, c)
            for mm, cc in mono.terms.items():
                out[mm] = out.get(mm, self.params.zero) + cc
        return AlgebraElement(self, {m: c for m, c in out.items() if not c.is_zero})

    def adopt(self, other: AlgebraElement) -> AlgebraElement:
        """Reinterpret an element of a same-shaped presentation in this one."""
        if other.presentation.n != self.n or other.presentation.params != self.params:
            raise ValueError("element shape does not match this presentation")
        return self.element(other.terms)

    # -- relation access --------------------------------------------------------

    def q_unit(self, i: int, j: int) -> GammaMonomial:
        """The unit q_ij for any i, j (q_ji = q_ij^-1, q_ii = 1)."""
        if i == j:
            return self.params.gamma_one
        if i < j:
            return self.qmat[(i, j)]
        return self.qmat[(j, i)].inverse()

    def relation_tail(self, i: int, j: int) -> AlgebraElement:
        """The tail r_ij for i < j (zero when the pair semicommutes)."""
        if not (1 <= i < j <= self.n):
            raise ValueError("relation_tail expects i < j")
        return AlgebraElement(self, self._tails.get((i, j), {}))

    def semicommutes(self, i: int, j: int) -> bool:
        if i == j:
            return True
        key = (i, j) if i < j else (j, i)
        return key not in self._tails

    def nonzero_tails(self) -> Tuple[Tuple[int, int], ...]:
        """Ordered pairs (i, j) whose straightening tail is nonzero."""
        return tuple(sorted(self._tails))

    def with_pivot(self, pivot: Optional[int]) -> "Presentation":
        """The same presentation with a different stage pivot marker."""
        return Presentation(self.params, self.n, self.qmat, self._tails, self.invertible, pivot)

    # -- the rewriting engine ----------------------------------------------------

    def _scaled(self, terms: Terms, factor: Scalar) -> Terms:
        if factor.is_zero:
            return {}
        return {m: c * factor for m, c in terms.items()}

    @staticmethod
    def _accumulate(dst: Terms, src: Terms):
        for m, c in src.items():
            acc = dst.get(m)
            new = c if acc is None else acc + c
            if new.is_zero:
                dst.pop(m, None)
            else:
                dst[m] = new

    def _lmul_mono(self, i: int, s: int, mono: ExponentVector) -> Terms:
        """Normal form of xi^s * x^mono (s is +1 or -1), coefficient 1."""
        cache = self._lmul_cache.setdefault((i, s), {})
        hit = cache.get(mono)
        if hit is not None:
            return hit
        j = 0
        for k in range(i - 1):
            if mono[k] != 0:
                j = k + 1
                break
        one = self.params.one
        if j == 0:
            # nothing to the left of position i: merge the exponent
            new = list(mono)
            new[i - 1] += s
            if new[i - 1] < 0 and i not in self.invertible:
                raise ValueError(f"negative exponent at non-invertible generator x{i}")
            result: Terms = {tuple(new): one}
        else:
            mj = mono[j - 1]
            gamma = self.q_unit(j, i).inverse()  # xi*xj = gamma*xj*xi + r
            tail = self._tails.get((j, i), {})
            if not tail:
                rest = mono[: j - 1] + (0,) + mono[j:]
                sub = self._lmul_mono(i, s, rest)
                unit = (gamma ** (s * mj)).to_scalar()
                result = {
                    m[: j - 1] + (m[j - 1] + mj,) + m[j:]: c * unit for m, c in sub.items()
                }
            else:
                # one power of xj at a time; r = -gamma * r_ji
                r = self._scaled(tail, -gamma.to_scalar())
                rest = mono[: j - 1] + (mj - 1,) + mono[j:]
                sub = self._lmul_mono(i, s, rest)
                if s == 1:
                    # xi*xj*rest = gamma*xj*(xi*rest) + r*rest
                    result = {
                        m[: j - 1] + (m[j - 1] + 1,) + m[j:]: c * gamma.to_scalar()
                        for m, c in sub.items()
                    }
                    self._accumulate(result, self._mul_terms(r, {rest: one}))
                else:
                    # xi^-1*xj*rest = gamma^-1*( xj*(xi^-1*rest) - xi^-1*(r*(xi^-1*rest)) )
                    inv = gamma.inverse().to_scalar()
                    result = {
                        m[: j - 1] + (m[j - 1] + 1,) + m[j:]: c * inv for m, c in sub.items()
                    }
                    inner = self._mul_terms(r, sub)
                    correction = self._scaled(self._lmul_terms(i, -1, inner), -inv)
                    self._accumulate(result, correction)
        cache[mono] = result
        return result

    def _lmul_terms(self, i: int, s: int, terms: Terms) -> Terms:
        out: Terms = {}
        for m, c in terms.items():
            self._accumulate(out, self._scaled(self._lmul_mono(i, s, m), c))
        return out

    def _mono_times_terms(self, mono: ExponentVector, terms: Terms) -> Terms:
        acc = terms
        for i in range(self.n, 0, -1):
            e = mono[i - 1]
            if e == 0 or not acc:
                continue
            if all(self._supported_at_or_above(m, i) for m in acc):
                # xi^e merges directly when no factor below xi is present
                acc = {m[: i - 1] + (m[i - 1] + e,) + m[i:]: c for m, c in acc.items()}
                continue
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                acc = self._lmul_terms(i, s, acc)
        return acc

    @staticmethod
    def _supported_at_or_above(mono: ExponentVector, i: int) -> bool:
        return all(e == 0 for e in mono[: i - 1])

    def _mul_terms(self, a: Terms, b: Terms) -> Terms:
        out: Terms = {}
        for m, c in a.items():
            self._accumulate(out, self._scaled(self._mono_times_terms(m, b), c))
        return out

    def mul(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.presentation is not self or b.presentation is not self:
            raise ValueError("operands must belong to this presentation")
        return AlgebraElement(self, self._mul_terms(a.terms, b.terms))

    def normal_form(self, word: Word) -> AlgebraElement:
        """Straighten a word of generator letters into PBW normal form."""
        for i, e in word.letters:
            if not (1 <= i <= self.n):
                raise ValueError(f"letter index {i} out of range")
            if e not in (1, -1):
                raise ValueError("letters must have exponent +1 or -1")
            if e == -1 and i not in self.invertible:
                raise ValueError(f"x{i} is not invertible")
        acc: Terms = {(0,) * self.n: self.params.scalar(word.coefficient)}
        for i, e in reversed(word.letters):
            acc = self._lmul_terms(i, e, acc)
        return AlgebraElement(self, acc)

    # -- filtration, grading, localization ----------------------------------------

    def degree(self, a: AlgebraElement, window: int) -> ExponentVector:
        """Lex-largest truncation to the first ``window`` exponents of the support.

        This is the minimal filtration step containing ``a`` for the
        lexicographic order with e1 > e2 > ... .
        """
        if a.is_zero:
            raise ZeroElement("the zero element has no degree")
        if not (0 <= window <= self.n):
            raise ValueError("window out of range")
        best: Optional[ExponentVector] = None
        for m in a.terms:
            w = m[:window]
            if any(e < 0 for e in w):
                raise ValueError("windowed exponents must be nonnegative")
            if best is None or w > best:
                best = w
        return best

    def associated_graded(self) -> "Presentation":
        """Drop all tails: the twisted polynomial algebra gr(R)."""
        return Presentation(self.params, self.n, self.qmat, {}, self.invertible, self.pivot)

    def localize(self, i: int) -> "Presentation":
        """Invert the pivot generator xi.

        Requires the stage shape: every generator above i is already
        invertible and semicommutes with everything.
        """
        if not (1 <= i <= self.n):
            raise ValueError(f"generator index {i} out of range")
        for k in range(i + 1, self.n + 1):
            if k not in self.invertible:
                raise StageShapeViolation(f"x{k} must be invertible before localizing at x{i}")
        for (a, b) in self._tails:
            if b > i:
                raise StageShapeViolation(
                    f"x{b} does not semicommute with x{a}; cannot localize at x{i}"
                )
            if b == i and i in self.invertible:
                raise StageShapeViolation(f"x{i} is invertible but has a nonzero tail r_{a}_{i}")
        return Presentation(
            self.params, self.n, self.qmat, self._tails, self.invertible | {i}, pivot=i
        )

    # -- validation -----------------------------------------------------------------

    def validate(self) -> List[str]:
        """Diagnostics for the presentation invariants; empty means valid."""
        issues: List[str] = []
        for (i, j), tail in self._tails.items():
            for m in tail:
                bad = next((k + 1 for k, e in enumerate(m) if e != 0 and k + 1 <= i), None)
                if bad is not None:
                    issues.append(f"r_{i}_{j} not in R_{i + 1} (contains x{bad})")
                    break
            for m in tail:
                for k, e in enumerate(m):
                    if e < 0 and (k + 1) not in self.invertible:
                        issues.append(
                            f"r_{i}_{j} has a negative exponent at non-invertible x{k + 1}"
                        )
                        break
        for k in sorted(self.invertible):
            partners = [p for p in range(1, self.n + 1) if p != k and not self.semicommutes(k, p)]
            if partners:
                issues.append(
                    f"invertible x{k} does not semicommute with x{partners[0]}"
                )
        if self.pivot is not None:
            for k in range(self.pivot + 1, self.n + 1):
                if k not in self.invertible:
                    issues.append(f"pivot {self.pivot} is set but x{k} is not invertible")
        return issues

    def check_pbw_consistency(self) -> Optional[PbwCounterexample]:
        """Diamond-lemma overlap check on all generator triples.

        For every i < j < l the word xl*xj*xi is straightened two ways:
        resolving the (l, j) pair first versus the (j, i) pair first.  The
        presentation has a PBW basis for this rule shape iff all agree.
        """
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                for l in range(j + 1, self.n + 1):
                    xl, xj, xi = self.gen(l), self.gen(j), self.gen(i)
                    high_first = self.mul(self.mul(xl, xj), xi)
                    low_first = self.mul(xl, self.mul(xj, xi))
                    if high_first != low_first:
                        return PbwCounterexample((l, j, i), high_first, low_first)
        return None

    def __repr__(self):
        inv = sorted(self.invertible)
        return (
            f"Presentation(n={self.n}, params={list(self.params.names)}, "
            f"tails={len(self._tails)}, invertible={inv}, pivot={self.pivot})"
        )


def element_str(a: AlgebraElement) -> str:
    """Render an element in the text grammar, leading term first."""
    if a.is_zero:
        return "0"
    chunks = []
    for m in sorted(a.terms, reverse=True):
        c = a.terms[m]
        gens = "*".join(
            f"x{k + 1}" if e == 1 else f"x{k + 1}^{e}" for k, e in enumerate(m) if e != 0
        )
        coeff = scalar_str(c)
        if not gens:
            # a bare scalar merges into the sum as-is
            if coeff.startswith("-"):
                chunks.append(("-", coeff[1:]))
            else:
                chunks.append(("+", coeff))
        elif coeff == "1":
            chunks.append(("+", gens))
        elif coeff == "-1":
            chunks.append(("-", gens))
        elif coeff.startswith("-") and _is_product_safe(coeff[1:]):
            chunks.append(("-", f"{coeff[1:]}*{gens}"))
        elif _is_product_safe(coeff):
            chunks.append(("+", f"{coeff}*{gens}"))
        else:
            chunks.append(("+", f"({coeff})*{gens}"))
    sign, body = chunks[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def _is_product_safe(rendered: str) -> bool:
    # Safe to embed in a product without parentheses: no top-level + or -.
    depth = 0
    for idx, ch in enumerate(rendered):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and idx > 0 and rendered[idx - 1] != "^":
            return False
    return True
