"""Builders for the three standard families and their twisted targets.

All three are presented with generators in the fixed PBW order used
throughout: quantum matrices row-major, the quantum Weyl algebra as
(y_1 .. y_n, x_1 .. x_n), and the rank-two enveloping algebra instance in
its convex root order E_1, E_12, E_2 with the q-commutator convention
E_12 = E_1*E_2 - q^-1*E_2*E_1 (so the pairs (1,2) and (2,3) semicommute
and the pair (1,3) has tail E_12; the induced q-matrix is q^(b_i, b_j) on
the hard-coded A_2 pairing).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .algebra import Presentation
from .errors import SpecViolation, UnknownName
from .scalars import GammaMonomial, ParameterSpace, Scalar


@dataclass(frozen=True)
class MultiParamSpec:
    """Compatible multiparameter data: entries p_ij, q_ij and the scale c.

    The upper-triangle entries determine the rest by p_ji = p_ij^-1,
    q_ji = q_ij^-1; the constructor checks p_ij * q_ij = c for i < j (hence
    c^sgn(j-i) in general).
    """

    n: int
    space: ParameterSpace
    p_upper: Dict[Tuple[int, int], GammaMonomial]
    q_upper: Dict[Tuple[int, int], GammaMonomial]
    c: GammaMonomial

    def __post_init__(self):
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                if (i, j) not in self.p_upper or (i, j) not in self.q_upper:
                    raise SpecViolation(f"missing entry for the pair ({i}, {j})")
                if self.p(i, j) * self.q(i, j) != self.c:
                    raise SpecViolation(
                        f"p_{i}{j} * q_{i}{j} != c for the pair ({i}, {j})"
                    )

    def p(self, i: int, j: int) -> GammaMonomial:
        if i == j:
            return self.space.gamma_one
        if i < j:
            return self.p_upper[(i, j)]
        return self.p_upper[(j, i)].inverse()

    def q(self, i: int, j: int) -> GammaMonomial:
        if i == j:
            return self.space.gamma_one
        if i < j:
            return self.q_upper[(i, j)]
        return self.q_upper[(j, i)].inverse()

    @staticmethod
    def symbolic(n: int) -> "MultiParamSpec":
        """Free symbolic data: parameters p_i_j for i < j plus c, with
        q_ij = c * p_ij^-1."""
        names = [f"p_{i}_{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        names.append("c")
        space = ParameterSpace(names)
        p_upper = {}
        q_upper = {}
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                p_upper[(i, j)] = space.gamma(1, {f"p_{i}_{j}": 1})
                q_upper[(i, j)] = space.gamma(1, {"c": 1, f"p_{i}_{j}": -1})
        return MultiParamSpec(
            n=n, space=space, p_upper=p_upper, q_upper=q_upper, c=space.gamma(1, {"c": 1})
        )


def quantum_matrices(spec: MultiParamSpec) -> Presentation:
    """The n x n quantum matrix algebra, generators a_ti numbered row-major.

    Pairs with t < s and i < j carry the only nonzero tails,
    (q_ij^-1 - p_ts) on the ordered monomial a_tj * a_si.
    """
    n = spec.n
    space = spec.space
    total = n * n

    def idx(t: int, i: int) -> int:
        return (t - 1) * n + i

    qmat: Dict[Tuple[int, int], GammaMonomial] = {}
    relations: Dict[Tuple[int, int], Dict[Tuple[int, ...], Scalar]] = {}
    for u in range(1, total + 1):
        t, i = (u - 1) // n + 1, (u - 1) % n + 1
        for v in range(u + 1, total + 1):
            s, j = (v - 1) // n + 1, (v - 1) % n + 1
            if t == s:
                qmat[(u, v)] = spec.q(i, j).inverse()
            elif i == j:
                qmat[(u, v)] = spec.p(t, s).inverse()
            elif i < j:
                qmat[(u, v)] = spec.q(t, s) * spec.q(i, j).inverse()
                mono = [0] * total
                mono[idx(t, j) - 1] += 1
                mono[idx(s, i) - 1] += 1
                coeff = spec.q(i, j).inverse().to_scalar() - spec.p(t, s).to_scalar()
                if not coeff.is_zero:
                    relations[(u, v)] = {tuple(mono): coeff}
            else:
                qmat[(u, v)] = spec.p(t, s).inverse() * spec.q(i, j).inverse()
    return Presentation(space, total, qmat, relations)


def quantum_weyl(n: int, spec: Optional[MultiParamSpec] = None) -> Presentation:
    """The quantum Weyl algebra on generators (y_1 .. y_n, x_1 .. x_n).

    The y_i*x_i relation has unit c^-1 and tail
    1 + (c^-1 - 1) * sum_{a > i} x_a*y_a, the sum written in PBW order by
    the downward recursion for x_a*y_a.
    """
    spec = spec or MultiParamSpec.symbolic(n)
    if spec.n != n:
        raise SpecViolation("spec size does not match the requested rank")
    space = spec.space
    total = 2 * n
    c = spec.c.to_scalar()

    def y_idx(i: int) -> int:
        return i

    def x_idx(i: int) -> int:
        return n + i

    qmat: Dict[Tuple[int, int], GammaMonomial] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            qmat[(y_idx(i), y_idx(j))] = spec.p(i, j)
            qmat[(x_idx(i), x_idx(j))] = spec.q(i, j).inverse()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                qmat[(y_idx(i), x_idx(j))] = spec.p(j, i)
            elif i > j:
                qmat[(y_idx(i), x_idx(j))] = spec.q(i, j)
            else:
                qmat[(y_idx(i), x_idx(i))] = spec.c.inverse()

    # normal form of x_a*y_a, built from the top rank down
    nf_xy: Dict[int, Dict[Tuple[int, ...], Scalar]] = {}
    for a in range(n, 0, -1):
        terms: Dict[Tuple[int, ...], Scalar] = {}
        mono = [0] * total
        mono[y_idx(a) - 1] = 1
        mono[x_idx(a) - 1] = 1
        terms[tuple(mono)] = c
        zero_mono = (0,) * total
        terms[zero_mono] = terms.get(zero_mono, space.zero) - c
        for b in range(a + 1, n + 1):
            for m, coeff in nf_xy[b].items():
                add = coeff * (c - 1)
                acc = terms.get(m, space.zero) + add
                if acc.is_zero:
                    terms.pop(m, None)
                else:
                    terms[m] = acc
        nf_xy[a] = {m: coeff for m, coeff in terms.items() if not coeff.is_zero}

    relations: Dict[Tuple[int, int], Dict[Tuple[int, ...], Scalar]] = {}
    c_inv = spec.c.inverse().to_scalar()
    for i in range(1, n + 1):
        tail: Dict[Tuple[int, ...], Scalar] = {(0,) * total: space.one}
        for a in range(i + 1, n + 1):
            for m, coeff in nf_xy[a].items():
                add = coeff * (c_inv - 1)
                acc = tail.get(m, space.zero) + add
                if acc.is_zero:
                    tail.pop(m, None)
                else:
                    tail[m] = acc
        relations[(y_idx(i), x_idx(i))] = tail
    return Presentation(space, total, qmat, relations)


@dataclass(frozen=True)
class RootDatum3:
    """The A_2 root datum in the convex order b_1 = a_1, b_2 = a_1 + a_2,
    b_3 = a_2, with the symmetric pairing (d_i = 1)."""

    pairing: Tuple[Tuple[int, int, int], ...] = ((2, 1, -1), (1, 2, 1), (-1, 1, 2))

    def __post_init__(self):
        expected = ((2, 1, -1), (1, 2, 1), (-1, 1, 2))
        if self.pairing != expected:
            raise SpecViolation("the rank-two pairing matrix is fixed")


def uq_nplus_sl3() -> Presentation:
    """The positive part of the rank-two quantized enveloping algebra.

    Generators (x1, x2, x3) = (E_1, E_12, E_2) with
    E_12 = E_1*E_2 - q^-1*E_2*E_1; the Serre relations collapse to
    x1*x2 = q*x2*x1, x2*x3 = q*x3*x2 and x1*x3 - q^-1*x3*x1 = x2.
    """
    space = ParameterSpace(["q"])
    q = space.gamma(1, {"q": 1})
    qmat = {(1, 2): q, (1, 3): q.inverse(), (2, 3): q}
    relations = {(1, 3): {(0, 1, 0): space.one}}
    return Presentation(space, 3, qmat, relations)


def expected_twisted(
    name: str, spec: Optional[MultiParamSpec] = None, n: Optional[int] = None
) -> Presentation:
    """The twisted Laurent presentation each family transforms onto."""
    if name == "quantum_weyl":
        source = quantum_weyl(n or (spec.n if spec else 1), spec)
    elif name == "quantum_matrices":
        source = quantum_matrices(spec or MultiParamSpec.symbolic(n or 2))
    elif name == "uq_sl3":
        datum = RootDatum3()
        space = ParameterSpace(["q"])
        qmat = {
            (i, j): space.gamma(1, {"q": datum.pairing[i - 1][j - 1]})
            for i in range(1, 4)
            for j in range(i + 1, 4)
        }
        return Presentation(space, 3, qmat, {}, invertible=range(1, 4))
    else:
        raise UnknownName(f"unknown catalog name {name!r}")
    graded = source.associated_graded()
    return Presentation(
        graded.params, graded.n, graded.qmat, {}, invertible=range(1, graded.n + 1)
    )


CATALOG_NAMES = ("quantum_matrices", "quantum_weyl", "uq_sl3")


def build(name: str, n: Optional[int] = None) -> Presentation:
    """CLI entry: build a catalog presentation by name."""
    if name == "quantum_matrices":
        return quantum_matrices(MultiParamSpec.symbolic(n or 2))
    if name == "quantum_weyl":
        return quantum_weyl(n or 1)
    if name == "uq_sl3":
        return uq_nplus_sl3()
    raise UnknownName(f"unknown catalog name {name!r}")
