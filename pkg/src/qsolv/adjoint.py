"""Finite-adjoint-action machinery around a pivot generator.

Within a stage presentation (pivot ``i``, everything above ``i`` invertible
and semicommuting), the conjugation ``Ad(y) = xi * y * xi^-1`` acts locally
finitely: every element is annihilated by a product of factors
``(Ad - beta)`` whose roots ``beta`` are unit monomials.  The routines here
compute such split annihilators, exact minimal polynomials over the
coefficient field, eigenvector decompositions with their projector
denominators, and — when a repeated eigenvalue shows the action is not
diagonalizable — a Jordan pair certifying an embedded Weyl algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraElement, Presentation
from .errors import (
    FactorizationGap,
    InvalidJordanPair,
    WeylDetected,
    ZeroElement,
    ZeroWitness,
)
from .scalars import GammaMonomial, Scalar


@dataclass(frozen=True)
class SplitPolynomial:
    """A product of linear factors (t - beta) with unit-monomial roots."""

    roots: Tuple[GammaMonomial, ...]

    @property
    def degree(self) -> int:
        return len(self.roots)

    def distinct_roots(self) -> Tuple[GammaMonomial, ...]:
        seen: List[GammaMonomial] = []
        for root in self.roots:
            if root not in seen:
                seen.append(root)
        return tuple(seen)

    @property
    def is_squarefree(self) -> bool:
        return len(self.distinct_roots()) == len(self.roots)

    def coefficients(self) -> Tuple[Scalar, ...]:
        """Expanded coefficients a_0..a_N with f(t) = sum a_s t^s, a_N = 1."""
        space = self.roots[0].space
        coeffs = [space.one]
        for root in self.roots:
            beta = root.to_scalar()
            nxt = [space.zero] * (len(coeffs) + 1)
            for s, a in enumerate(coeffs):
                nxt[s + 1] = nxt[s + 1] + a
                nxt[s] = nxt[s] - a * beta
            coeffs = nxt
        return tuple(coeffs)


@dataclass(frozen=True)
class NonDiagonalizable:
    """A Jordan pair for a repeated eigenvalue: Ad u = a*u, Ad v = u + a*v."""

    u: AlgebraElement
    v: AlgebraElement
    alpha: GammaMonomial


@dataclass(frozen=True)
class EigenComponent:
    eigenvalue: GammaMonomial
    element: AlgebraElement


@dataclass(frozen=True)
class WeylCertificate:
    """Witness that the localized stage contains a Weyl pair.

    With Ad u = alpha*u and Ad v = u + alpha*v, the fraction
    Y = alpha * u^-1 * v * x^-1 satisfies x*Y - Y*x = 1 in the skew field;
    Y itself is never materialized.
    """

    pivot: int
    u: AlgebraElement
    v: AlgebraElement
    alpha: GammaMonomial


@dataclass(frozen=True)
class WeylCriterionWitness:
    """Twelve nonzero elements subject to the five product identities."""

    a: AlgebraElement
    b: AlgebraElement
    c: AlgebraElement
    d: AlgebraElement
    u: AlgebraElement
    v: AlgebraElement
    s: AlgebraElement
    t: AlgebraElement
    z: AlgebraElement
    p: AlgebraElement
    w: AlgebraElement
    q: AlgebraElement

    def elements(self) -> Tuple[AlgebraElement, ...]:
        return (self.a, self.b, self.c, self.d, self.u, self.v,
                self.s, self.t, self.z, self.p, self.w, self.q)


def _localized(p: Presentation, i: int) -> Presentation:
    return p if i in p.invertible else p.localize(i)


def _adopt(p: Presentation, y: AlgebraElement) -> AlgebraElement:
    return y if y.presentation is p else p.adopt(y)


def ad(p: Presentation, i: int, y: AlgebraElement) -> AlgebraElement:
    """Conjugation xi * y * xi^-1 in the localization at the pivot."""
    pl = _localized(p, i)
    y = _adopt(pl, y)
    return pl.mul(pl.mul(pl.gen(i), y), pl.gen(i, -1))


def ore_left_shift(p: Presentation, i: int, y: AlgebraElement) -> Tuple[int, AlgebraElement]:
    """Clear y to the left of the pivot: find N, b1 with xi^N * y = b1 * xi.

    Follows the degree induction: a monomial splits as
    xi*y = beta*y*xi + b with deg(b) < deg(y), the recursion runs on b, and
    term results combine by padding with extra pivot powers.
    """
    y = _adopt(p, y)
    if y.is_zero:
        raise ZeroElement("ore_left_shift needs a nonzero element")
    return _ore_shift_terms(p, i, y)


def _ore_shift_terms(p: Presentation, i: int, y: AlgebraElement) -> Tuple[int, AlgebraElement]:
    parts: List[Tuple[int, AlgebraElement]] = []
    for mono in sorted(y.terms, reverse=True):
        n_m, b_m = _ore_shift_mono(p, i, mono)
        parts.append((n_m, b_m.scale(y.terms[mono])))
    big = max(n for n, _ in parts)
    total = p.zero()
    for n_m, b_m in parts:
        pad = b_m
        for _ in range(big - n_m):
            pad = p.mul(p.gen(i), pad)
        total = total + pad
    return big, total


def _ore_shift_mono(p: Presentation, i: int, mono: Tuple[int, ...]) -> Tuple[int, AlgebraElement]:
    beta, b = _head_split(p, i, mono)
    y = p.monomial(mono)
    if b.is_zero:
        return 1, y.scale(beta)
    l, b_prime = _ore_shift_terms(p, i, b)
    lead = y.scale(beta)
    for _ in range(l):
        lead = p.mul(p.gen(i), lead)
    return l + 1, lead + b_prime


def _head_split(p: Presentation, i: int, mono: Tuple[int, ...]) -> Tuple[Scalar, AlgebraElement]:
    """Split xi * x^mono = beta * (x^mono * xi) + b with deg(b) < deg(x^mono)."""
    left = p.mul(p.gen(i), p.monomial(mono))
    right = p.mul(p.monomial(mono), p.gen(i))
    lead = mono[: i - 1] + (mono[i - 1] + 1,) + mono[i:]
    if len(right.terms) != 1 or lead not in right.terms:
        raise ValueError(
            f"x{i} is not a stage pivot: generators above it do not semicommute"
        )
    beta = left.coefficient(lead) / right.terms[lead]
    return beta, left - right.scale(beta)


def fa_roots(p: Presentation, i: int, y: AlgebraElement) -> SplitPolynomial:
    """A split annihilator of y for the adjoint action of the pivot.

    Built by the head-split recursion: a monomial contributes its
    semicommutation unit once it lives above the pivot window, otherwise
    the unit beta of (4.1)-style splitting plus the roots of the tail.
    The product of (Ad - beta) over the returned roots kills y.
    """
    y = _adopt(p, y)
    if y.is_zero:
        raise ZeroElement("fa_roots needs a nonzero element")
    roots = _fa_roots_terms(p, i, y)
    return SplitPolynomial(tuple(roots))


def _merge_root_lists(lists: Sequence[List[GammaMonomial]]) -> List[GammaMonomial]:
    # least common multiple of split polynomials: max multiplicity per root,
    # first-seen order
    merged: List[GammaMonomial] = []
    for one in lists:
        counts: Dict[GammaMonomial, int] = {}
        for root in one:
            counts[root] = counts.get(root, 0) + 1
        have: Dict[GammaMonomial, int] = {}
        for root in merged:
            have[root] = have.get(root, 0) + 1
        for root, want in counts.items():
            extra = want - have.get(root, 0)
            for _ in range(max(0, extra)):
                merged.append(root)
    return merged


def _fa_roots_terms(p: Presentation, i: int, y: AlgebraElement) -> List[GammaMonomial]:
    return _merge_root_lists(
        [_fa_roots_mono(p, i, mono) for mono in sorted(y.terms, reverse=True)]
    )


def _fa_roots_mono(p: Presentation, i: int, mono: Tuple[int, ...]) -> List[GammaMonomial]:
    if all(e == 0 for e in mono[: i - 1]):
        return [_eigen_unit(p, i, mono)]
    beta, b = _head_split(p, i, mono)
    unit = beta.as_gamma()
    if unit is None:
        raise FactorizationGap(f"head unit of x^{mono} is not a unit monomial")
    if b.is_zero:
        return [unit]
    return [unit] + _fa_roots_terms(p, i, b)


def _eigen_unit(p: Presentation, i: int, mono: Tuple[int, ...]) -> GammaMonomial:
    """Ad-eigenvalue of a monomial supported at the pivot and above."""
    unit = p.params.gamma_one
    for k in range(i + 1, p.n + 1):
        e = mono[k - 1]
        if e:
            unit = unit * (p.q_unit(i, k) ** e)
    return unit


def minimal_ad_polynomial(p: Presentation, i: int, y: AlgebraElement):
    """Distinct roots of the minimal polynomial of Ad on the orbit of y,
    or a NonDiagonalizable Jordan pair when a root repeats.

    The orbit subspace is spanned by the iterated images y, Ad y, Ad^2 y, ..
    so the first linear dependence over the coefficient field yields the
    minimal polynomial; it is then split by trial division against the
    fa_roots candidates (FactorizationGap if one does not divide).
    """
    result = _minimal_data(p, i, y)
    if result.jordan is not None:
        return result.jordan
    return SplitPolynomial(tuple(result.roots))


@dataclass
class _MinimalData:
    images: List[AlgebraElement]
    mu: List[Scalar]
    roots: List[GammaMonomial]  # with multiplicity, discovery order
    jordan: Optional[NonDiagonalizable]


def _minimal_data(p: Presentation, i: int, y: AlgebraElement) -> _MinimalData:
    pl = _localized(p, i)
    y = _adopt(pl, y)
    if y.is_zero:
        raise ZeroElement("minimal_ad_polynomial needs a nonzero element")
    space = pl.params
    images = [y]
    rows: List[Tuple[Tuple[int, ...], Dict, Dict[int, Scalar]]] = []

    def reduce(z: AlgebraElement, k: int) -> Optional[Dict[int, Scalar]]:
        vec = dict(z.terms)
        combo: Dict[int, Scalar] = {k: space.one}
        for pivot_mono, pivot_vec, pivot_combo in rows:
            coeff = vec.get(pivot_mono)
            if coeff is None:
                continue
            for m, c in pivot_vec.items():
                acc = vec.get(m, space.zero) - coeff * c
                if acc.is_zero:
                    vec.pop(m, None)
                else:
                    vec[m] = acc
            for t, c in pivot_combo.items():
                acc = combo.get(t, space.zero) - coeff * c
                if acc.is_zero:
                    combo.pop(t, None)
                else:
                    combo[t] = acc
        if not vec:
            return combo
        lead = max(vec)
        lc = vec[lead]
        rows.append(
            (
                lead,
                {m: c / lc for m, c in vec.items()},
                {t: c / lc for t, c in combo.items()},
            )
        )
        return None

    dependence = reduce(y, 0)
    while dependence is None:
        images.append(ad(pl, i, images[-1]))
        dependence = reduce(images[-1], len(images) - 1)

    degree = max(dependence)
    lead = dependence[degree]
    mu = [space.zero] * (degree + 1)
    for t, c in dependence.items():
        mu[t] = c / lead

    candidates = []
    for root in fa_roots(pl, i, y).roots:
        if root not in candidates:
            candidates.append(root)

    roots: List[GammaMonomial] = []
    work = list(mu)
    for gamma in candidates:
        while len(work) > 1:
            quotient, remainder = _synthetic_divide(work, gamma.to_scalar())
            if not remainder.is_zero:
                break
            roots.append(gamma)
            work = quotient
    if len(work) > 1:
        raise FactorizationGap(
            "minimal polynomial has a root outside the annihilator candidates"
        )

    jordan = None
    repeated = _first_repeated(roots)
    if repeated is not None:
        alpha = repeated.to_scalar()
        g = list(mu)
        g, _ = _synthetic_divide(g, alpha)
        g, _ = _synthetic_divide(g, alpha)
        v = _combine(pl, images, g, 0)
        ad_v = _combine(pl, images, g, 1)
        u = ad_v - v.scale(alpha)
        jordan = NonDiagonalizable(u=u, v=v, alpha=repeated)

    return _MinimalData(images=images, mu=mu, roots=roots, jordan=jordan)


def _first_repeated(roots: Sequence[GammaMonomial]) -> Optional[GammaMonomial]:
    seen = []
    for root in roots:
        if root in seen:
            return root
        seen.append(root)
    return None


def _synthetic_divide(coeffs: List[Scalar], gamma: Scalar) -> Tuple[List[Scalar], Scalar]:
    """Divide sum a_s t^s by (t - gamma): quotient coefficients and remainder."""
    space = gamma.space
    quotient = [space.zero] * (len(coeffs) - 1)
    carry = space.zero
    for s in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[s] + carry
        quotient[s - 1] = carry
        carry = carry * gamma
    remainder = coeffs[0] + carry
    return quotient, remainder


def _combine(pl: Presentation, images: Sequence[AlgebraElement], coeffs: Sequence[Scalar], shift: int) -> AlgebraElement:
    """sum coeffs[s] * images[s + shift]."""
    total = pl.zero()
    for s, c in enumerate(coeffs):
        if not c.is_zero:
            total = total + images[s + shift].scale(c)
    return total


def eigen_decompose(p: Presentation, i: int, y: AlgebraElement) -> List[EigenComponent]:
    """Split y into Ad-eigenvectors via the projector formula.

    Component m is mu_m(Ad) y divided by prod_{k != m} (gamma_m - gamma_k),
    with mu_m the minimal polynomial with the m-th factor deleted.  The sum
    of the components reproduces y and every eigen-equation is re-verified
    by exact arithmetic.  A repeated eigenvalue raises WeylDetected with a
    verified Jordan certificate.
    """
    pl = _localized(p, i)
    y = _adopt(pl, y)
    data = _minimal_data(pl, i, y)
    if data.jordan is not None:
        certificate = weyl_certificate(
            pl, i, data.jordan.u, data.jordan.v, data.jordan.alpha
        )
        raise WeylDetected(
            f"Ad at pivot x{i} has repeated eigenvalue {data.jordan.alpha}",
            certificate,
        )
    components: List[EigenComponent] = []
    total = pl.zero()
    for m, gamma_m in enumerate(data.roots):
        mu_m, remainder = _synthetic_divide(list(data.mu), gamma_m.to_scalar())
        assert remainder.is_zero
        denom = pl.params.one
        for k, gamma_k in enumerate(data.roots):
            if k != m:
                denom = denom * (gamma_m.to_scalar() - gamma_k.to_scalar())
        numerator = _combine(pl, data.images, mu_m, 0)
        component = numerator.scale(pl.params.one / denom)
        image = _combine(pl, data.images, mu_m, 1).scale(pl.params.one / denom)
        if image != component.scale(gamma_m.to_scalar()):
            raise FactorizationGap(
                f"projected component at {gamma_m} fails its eigen-equation"
            )
        components.append(EigenComponent(eigenvalue=gamma_m, element=component))
        total = total + component
    if total != y:
        raise FactorizationGap("eigen components do not sum back to the element")
    return components


def weyl_certificate(
    p: Presentation, i: int, u: AlgebraElement, v: AlgebraElement, alpha: GammaMonomial
) -> WeylCertificate:
    """Re-verify a Jordan pair and package it as a certificate."""
    pl = _localized(p, i)
    u = _adopt(pl, u)
    v = _adopt(pl, v)
    if u.is_zero or v.is_zero:
        raise InvalidJordanPair("certificate elements must be nonzero")
    if ad(pl, i, u) != u.scale(alpha.to_scalar()):
        raise InvalidJordanPair("Ad u = alpha*u fails")
    if ad(pl, i, v) != u + v.scale(alpha.to_scalar()):
        raise InvalidJordanPair("Ad v = u + alpha*v fails")
    return WeylCertificate(pivot=i, u=u, v=v, alpha=alpha)


def check_weyl_criterion(p: Presentation, witness: WeylCriterionWitness) -> bool:
    """Evaluate the five product identities of the embedded-Weyl criterion:
    av = sd, ub = ct, zu = ps, vq = tw, pabw - zcdq = zuvq.
    """
    elements = [_adopt(p, e) for e in witness.elements()]
    if any(e.is_zero for e in elements):
        raise ZeroWitness("all twelve witness elements must be nonzero")
    a, b, c, d, u, v, s, t, z, pp, w, q = elements
    mul = p.mul
    if mul(a, v) != mul(s, d):
        return False
    if mul(u, b) != mul(c, t):
        return False
    if mul(z, u) != mul(pp, s):
        return False
    if mul(v, q) != mul(t, w):
        return False
    pabw = mul(mul(mul(pp, a), b), w)
    zcdq = mul(mul(mul(z, c), d), q)
    zuvq = mul(mul(mul(z, u), v), q)
    return pabw - zcdq == zuvq
