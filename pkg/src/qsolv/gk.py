"""The twisted-Laurent transform: iterated pivot localization and
simultaneous eigen-replacement of the lower generators.

Each step takes a stage presentation (pivot ``i``, everything above ``i``
already invertible and semicommuting), inverts the pivot, splits every
lower generator into adjoint eigenvectors and keeps the component whose
eigenvalue is the q-matrix unit of the pair.  The kept components, together
with the pivot and the previously inverted generators, generate the same
fraction field; their straightening tails are recomputed by exact
arithmetic in the old localized algebra and rewritten in the new
generators by descending triangular substitution.  Iterating from pivot n
down to 1 ends in a twisted Laurent presentation with the original
q-matrix, and the trace records every projector denominator so that
specialization points can be tested for admissibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .adjoint import eigen_decompose
from .algebra import AlgebraElement, Presentation
from .errors import (
    InadmissiblePoint,
    Inconsistent,
    RebaseFailure,
    ValidationFailed,
)
from .scalars import Assignment, GammaMonomial, ParameterSpace, Scalar

_REBASE_LIMIT = 20000


@dataclass(frozen=True)
class Denominator:
    """A projector denominator gamma - gamma' recorded in the trace."""

    value: Scalar
    gamma: Optional[GammaMonomial] = None
    gamma_prime: Optional[GammaMonomial] = None

    def vanishes_at(self, assignment: Assignment) -> bool:
        return self.value.specialize(assignment) == 0

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class StageTrace:
    pivot: int
    eigenvalues: Dict[int, Tuple[GammaMonomial, ...]]
    denominators: Tuple[Denominator, ...]


@dataclass(frozen=True)
class GkTrace:
    stages: Tuple[StageTrace, ...]

    def all_denominators(self) -> Tuple[Denominator, ...]:
        out: List[Denominator] = []
        for stage in self.stages:
            out.extend(stage.denominators)
        return tuple(out)


@dataclass(frozen=True)
class GkStage:
    """One executed step: the new presentation plus its provenance.

    ``expressions[j]`` is the new generator ``xj`` written as an element of
    ``localized_previous`` (the previous presentation with the pivot
    inverted); substituting them into the previous stage's arithmetic
    reproduces the new relations exactly.
    """

    index: int
    pivot: int
    input_presentation: Presentation
    localized_previous: Presentation
    presentation: Presentation
    expressions: Dict[int, AlgebraElement]
    eigenvalues: Dict[int, Tuple[GammaMonomial, ...]]
    denominators: Tuple[Denominator, ...]


@dataclass(frozen=True)
class GkResult:
    final: Presentation
    stages: Tuple[GkStage, ...]
    trace: GkTrace


@dataclass
class VerifyReport:
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(self.failures)


def _seed_stage(p: Presentation) -> GkStage:
    seeded = p.with_pivot(p.n)
    return GkStage(
        index=0,
        pivot=0,
        input_presentation=p,
        localized_previous=p,
        presentation=seeded,
        expressions={},
        eigenvalues={},
        denominators=(),
    )


def gk_step(stage: GkStage) -> GkStage:
    """Run one localization-and-replacement step at the current pivot."""
    p = stage.presentation
    i = p.pivot
    if i is None or i < 1:
        raise ValueError("stage presentation has no pivot to process")
    pl = p.localize(i)

    expressions: Dict[int, AlgebraElement] = {}
    eigenvalues: Dict[int, Tuple[GammaMonomial, ...]] = {}
    denominators: List[Denominator] = []

    for j in range(1, i):
        components = eigen_decompose(pl, i, pl.gen(j))
        gamma0 = p.q_unit(i, j)
        chosen = next((c for c in components if c.eigenvalue == gamma0), None)
        if chosen is None:
            raise Inconsistent(
                f"no eigencomponent of x{j} has the relation unit {gamma0} at pivot x{i}"
            )
        for other in components:
            if other is chosen:
                continue
            low = other.element.min_support_index()
            if low is not None and low <= j:
                raise Inconsistent(
                    f"higher eigencomponent of x{j} is not confined above index {j}"
                )
        expressions[j] = chosen.element
        evs = tuple(c.eigenvalue for c in components)
        eigenvalues[j] = evs
        for m, ev_m in enumerate(evs):
            for k, ev_k in enumerate(evs):
                if m != k:
                    denominators.append(
                        Denominator(
                            value=ev_m.to_scalar() - ev_k.to_scalar(),
                            gamma=ev_m,
                            gamma_prime=ev_k,
                        )
                    )
    for j in range(i, p.n + 1):
        expressions[j] = pl.gen(j)

    new_relations: Dict[Tuple[int, int], Dict[Tuple[int, ...], Scalar]] = {}
    for j in range(1, i):
        for l in range(j + 1, i):
            tail = pl.mul(expressions[j], expressions[l]) - pl.mul(
                expressions[l], expressions[j]
            ).scale(p.q_unit(j, l).to_scalar())
            if tail.is_zero:
                continue
            low = tail.min_support_index()
            if low is not None and low <= j:
                raise Inconsistent(
                    f"new tail for the pair ({j}, {l}) is not supported above index {j}"
                )
            new_relations[(j, l)] = _rebase(pl, expressions, tail, low=j, pivot=i)

    new_presentation = Presentation(
        p.params,
        p.n,
        p.qmat,
        new_relations,
        p.invertible | {i},
        pivot=(i - 1) if i > 1 else None,
    )
    counterexample = new_presentation.check_pbw_consistency()
    if counterexample is not None:
        raise Inconsistent("stage output fails the overlap check", counterexample)
    failures = _stage_replay_failures(pl, expressions, new_presentation)
    if failures:
        raise Inconsistent("stage expressions do not reproduce the new relations: "
                           + failures[0])

    return GkStage(
        index=stage.index + 1,
        pivot=i,
        input_presentation=p,
        localized_previous=pl,
        presentation=new_presentation,
        expressions=expressions,
        eigenvalues=eigenvalues,
        denominators=tuple(denominators),
    )


def _rebase(
    pl: Presentation,
    expressions: Dict[int, AlgebraElement],
    element: AlgebraElement,
    low: int,
    pivot: int,
) -> Dict[Tuple[int, ...], Scalar]:
    """Rewrite an old-coordinates element as a polynomial in the new generators.

    Processes the leading monomial (window-lexicographic, the window being
    the indices below the pivot) and subtracts its expression until nothing
    remains; cross terms introduced by a subtraction are strictly smaller
    in the window, so the loop terminates.
    """
    remaining = element
    out: Dict[Tuple[int, ...], Scalar] = {}
    power_cache: Dict[Tuple[int, int], AlgebraElement] = {}
    steps = 0
    while not remaining.is_zero:
        steps += 1
        if steps > _REBASE_LIMIT:
            raise RebaseFailure(
                f"triangular substitution exceeded {_REBASE_LIMIT} steps"
            )
        mono = max(remaining.terms, key=lambda m: (m[: pivot - 1], m))
        if any(mono[k] != 0 for k in range(low)):
            raise Inconsistent(
                f"rebased element escapes the subalgebra above index {low}"
            )
        coeff = remaining.terms[mono]
        out[mono] = out.get(mono, pl.params.zero) + coeff
        expanded = _eval_monomial(pl, expressions, mono, power_cache)
        remaining = remaining - expanded.scale(coeff)
    return {m: c for m, c in out.items() if not c.is_zero}


def _eval_monomial(
    pl: Presentation,
    expressions: Dict[int, AlgebraElement],
    mono: Tuple[int, ...],
    power_cache: Dict[Tuple[int, int], AlgebraElement],
) -> AlgebraElement:
    """Value of a new-coordinates monomial inside the old localized algebra."""
    total = pl.one()
    for k in range(1, pl.n + 1):
        e = mono[k - 1]
        if e == 0:
            continue
        total = pl.mul(total, _expression_power(pl, expressions, k, e, power_cache))
    return total


def _expression_power(
    pl: Presentation,
    expressions: Dict[int, AlgebraElement],
    k: int,
    e: int,
    cache: Dict[Tuple[int, int], AlgebraElement],
) -> AlgebraElement:
    key = (k, e)
    hit = cache.get(key)
    if hit is not None:
        return hit
    expr = expressions[k]
    if e >= 0:
        value = pl.one()
        for _ in range(e):
            value = pl.mul(value, expr)
    else:
        terms = list(expr.terms.items())
        if len(terms) != 1:
            raise RebaseFailure(f"negative power of a non-monomial expression for x{k}")
        mono, coeff = terms[0]
        inverse_mono = pl.monomial(tuple(-x for x in mono))
        unit = pl.mul(expr, inverse_mono).coefficient((0,) * pl.n)
        inverse = inverse_mono.scale(pl.params.one / unit)
        value = pl.one()
        for _ in range(-e):
            value = pl.mul(value, inverse)
    cache[key] = value
    return value


def _stage_replay_failures(
    pl: Presentation,
    expressions: Dict[int, AlgebraElement],
    new_presentation: Presentation,
) -> List[str]:
    """Check that substituting the stage expressions reproduces every relation."""
    failures: List[str] = []
    power_cache: Dict[Tuple[int, int], AlgebraElement] = {}
    for j in range(1, new_presentation.n + 1):
        for l in range(j + 1, new_presentation.n + 1):
            lhs = pl.mul(expressions[j], expressions[l]) - pl.mul(
                expressions[l], expressions[j]
            ).scale(new_presentation.q_unit(j, l).to_scalar())
            tail = new_presentation.relation_tail(j, l)
            rhs = pl.zero()
            for mono, coeff in tail.terms.items():
                rhs = rhs + _eval_monomial(pl, expressions, mono, power_cache).scale(coeff)
            if lhs != rhs:
                failures.append(
                    f"relation ({j}, {l}) is not reproduced by the stage expressions"
                )
    return failures


def gk_transform(p: Presentation) -> GkResult:
    """Iterate gk_step from pivot n down to 1.

    The input must validate, pass the overlap check and have no invertible
    generators; the output presentation is twisted Laurent (all generators
    invertible, all tails zero) with the input's q-matrix.
    """
    diagnostics = p.validate()
    if diagnostics:
        raise ValidationFailed(diagnostics)
    if p.invertible:
        raise ValidationFailed(["the transform expects no generator to start invertible"])
    counterexample = p.check_pbw_consistency()
    if counterexample is not None:
        raise Inconsistent("input presentation fails the overlap check", counterexample)

    stage = _seed_stage(p)
    stages: List[GkStage] = []
    while stage.presentation.pivot is not None:
        stage = gk_step(stage)
        stages.append(stage)

    final = stage.presentation
    trace = GkTrace(
        tuple(
            StageTrace(
                pivot=s.pivot, eigenvalues=s.eigenvalues, denominators=s.denominators
            )
            for s in stages
        )
    )
    return GkResult(final=final, stages=tuple(stages), trace=trace)


def verify_twisted(result: GkResult, original: Presentation) -> VerifyReport:
    """Re-check the transform output against the original presentation.

    (a) the final presentation is twisted Laurent (zero tails, all
    generators invertible); (b) its q-matrix equals the associated graded
    q-matrix of the original; (c) every stage's expressions replay the
    stage's relations inside the previous localized algebra.
    """
    report = VerifyReport()
    final = result.final
    for i in range(1, final.n + 1):
        for j in range(i + 1, final.n + 1):
            if not final.relation_tail(i, j).is_zero:
                report.failures.append(f"(a) final tail r_{i}_{j} is nonzero")
    missing = [k for k in range(1, final.n + 1) if k not in final.invertible]
    if missing:
        report.failures.append(f"(a) final generators {missing} are not invertible")

    graded = original.associated_graded()
    if final.n != graded.n or final.params != graded.params:
        report.failures.append("(b) final presentation has a different shape")
    else:
        for key, unit in graded.qmat.items():
            if final.qmat[key] != unit:
                report.failures.append(
                    f"(b) final q-matrix entry {key} is {final.qmat[key]}, expected {unit}"
                )

    for stage in result.stages:
        for message in _stage_replay_failures(
            stage.localized_previous, stage.expressions, stage.presentation
        ):
            report.failures.append(f"(c) stage {stage.index} (pivot x{stage.pivot}): {message}")
    return report


def admissible(trace: GkTrace, assignment: Assignment) -> bool:
    """True iff no recorded projector denominator vanishes at the point."""
    return first_vanishing_denominator(trace, assignment) is None


def first_vanishing_denominator(
    trace: GkTrace, assignment: Assignment
) -> Optional[Denominator]:
    for denominator in trace.all_denominators():
        if denominator.vanishes_at(assignment):
            return denominator
    return None


def specialize_presentation(obj, assignment: Assignment):
    """Evaluate every coefficient at a nonzero rational point.

    Accepts a Presentation or a GkResult.  For a GkResult the point must be
    admissible for the trace; the specialized stages are re-verified by
    replaying their expressions.
    """
    if isinstance(obj, Presentation):
        return _specialize_pres(obj, assignment)
    if isinstance(obj, GkResult):
        return _specialize_result(obj, assignment)
    raise TypeError("expected a Presentation or a GkResult")


def _specialize_pres(p: Presentation, assignment: Assignment) -> Presentation:
    space = ParameterSpace(())
    qmat = {
        key: space.gamma(unit.evaluate(assignment)) for key, unit in p.qmat.items()
    }
    relations: Dict[Tuple[int, int], Dict[Tuple[int, ...], Scalar]] = {}
    for (i, j) in p.nonzero_tails():
        tail = p.relation_tail(i, j)
        terms = {}
        for mono, coeff in tail.terms.items():
            value = coeff.specialize(assignment)
            if value != 0:
                terms[mono] = space.scalar(value)
        if terms:
            relations[(i, j)] = terms
    return Presentation(space, p.n, qmat, relations, p.invertible, p.pivot)


def _specialize_element(
    target: Presentation, element: AlgebraElement, assignment: Assignment
) -> AlgebraElement:
    terms = {}
    for mono, coeff in element.terms.items():
        value = coeff.specialize(assignment)
        if value != 0:
            terms[mono] = target.params.scalar(value)
    return AlgebraElement(target, terms)


def _specialize_result(result: GkResult, assignment: Assignment) -> GkResult:
    blocking = first_vanishing_denominator(result.trace, assignment)
    if blocking is not None:
        raise InadmissiblePoint(
            f"denominator {blocking} vanishes at {assignment}",
            denominator=str(blocking),
        )
    space = ParameterSpace(())
    stages: List[GkStage] = []
    for stage in result.stages:
        input_pres = _specialize_pres(stage.input_presentation, assignment)
        localized = _specialize_pres(stage.localized_previous, assignment)
        presentation = _specialize_pres(stage.presentation, assignment)
        expressions = {
            j: _specialize_element(localized, expr, assignment)
            for j, expr in stage.expressions.items()
        }
        eigenvalues = {
            j: tuple(space.gamma(ev.evaluate(assignment)) for ev in evs)
            for j, evs in stage.eigenvalues.items()
        }
        denominators = tuple(
            Denominator(
                value=space.scalar(d.value.specialize(assignment)),
                gamma=space.gamma(d.gamma.evaluate(assignment)) if d.gamma else None,
                gamma_prime=(
                    space.gamma(d.gamma_prime.evaluate(assignment))
                    if d.gamma_prime
                    else None
                ),
            )
            for d in stage.denominators
        )
        failures = _stage_replay_failures(localized, expressions, presentation)
        if failures:
            raise Inconsistent(
                f"specialized stage {stage.index} fails replay: {failures[0]}"
            )
        stages.append(
            GkStage(
                index=stage.index,
                pivot=stage.pivot,
                input_presentation=input_pres,
                localized_previous=localized,
                presentation=presentation,
                expressions=expressions,
                eigenvalues=eigenvalues,
                denominators=denominators,
            )
        )
    final = _specialize_pres(result.final, assignment)
    trace = GkTrace(
        tuple(
            StageTrace(
                pivot=s.pivot, eigenvalues=s.eigenvalues, denominators=s.denominators
            )
            for s in stages
        )
    )
    return GkResult(final=final, stages=tuple(stages), trace=trace)
