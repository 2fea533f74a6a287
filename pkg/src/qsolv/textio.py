"""Text grammar for scalars and elements, plus the structured file formats.

Grammar (shared by scalars and elements)::

    expr    :=  ['-'] term (('+' | '-') term)*
    term    :=  factor (('*' | '/')? factor)*      # adjacency multiplies
    factor  :=  atom ['^' ['-'] INT]
    atom    :=  INT | NAME | '(' expr ')'

Names resolve to generators ``x1 .. xn`` in element context (that pattern
wins over a parameter of the same name) and to parameters otherwise.
Division requires a scalar-valued divisor; a negative exponent requires an
invertible monomial base.  Parse errors carry line and column.

Presentation files are JSON with fields ``params``, ``n``, ``q``,
``relations``, ``invertible`` (and ``pivot`` for pipeline snapshots);
relation tails must already be written as sums of ordered PBW monomials.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import AlgebraElement, Presentation, element_str
from .errors import ParseError
from .scalars import GammaMonomial, ParameterSpace, Scalar, gamma_str, scalar_str

_GEN_NAME = re.compile(r"x([0-9]+)$")


@dataclass(frozen=True)
class _Token:
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("OP", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("END", "", line, col))
    return tokens


class _Parser:
    """Evaluating recursive-descent parser over a scalar or element context.

    In ``ordered`` mode generator products must be written in nondecreasing
    index order and are combined without consulting the straightening
    relations; this is how relation tails are read while the presentation
    is still being constructed.
    """

    def __init__(
        self,
        text: str,
        space: ParameterSpace,
        presentation: Optional[Presentation],
        ordered: bool = False,
    ):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.space = space
        self.presentation = presentation
        self.ordered = ordered

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    # values are Scalar or AlgebraElement; scalars stay scalars until mixed

    def _promote(self, value) -> AlgebraElement:
        if isinstance(value, AlgebraElement):
            return value
        if self.presentation is None:
            raise AssertionError("element value in scalar context")
        return self.presentation.one().scale(value)

    def _add(self, a, b, subtract=False):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a - b if subtract else a + b
        a, b = self._promote(a), self._promote(b)
        return a - b if subtract else a + b

    def _mul(self, a, b, tok):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar):
            return self._promote(b).scale(a)
        if isinstance(b, Scalar):
            return a.scale(b)
        if self.ordered:
            return self._ordered_product(a, b, tok)
        return self.presentation.mul(a, b)

    @staticmethod
    def _max_index(mono) -> int:
        return max((k + 1 for k, e in enumerate(mono) if e != 0), default=0)

    @staticmethod
    def _min_index(mono) -> int:
        return next((k + 1 for k, e in enumerate(mono) if e != 0), 10 ** 9)

    def _ordered_product(self, a: AlgebraElement, b: AlgebraElement, tok):
        terms = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                if self._max_index(ma) > self._min_index(mb):
                    self.fail("relation tails must use generators in increasing order", tok)
                m = tuple(x + y for x, y in zip(ma, mb))
                c = ca * cb
                acc = terms.get(m)
                new = c if acc is None else acc + c
                if new.is_zero:
                    terms.pop(m, None)
                else:
                    terms[m] = new
        return AlgebraElement(self.presentation, terms)

    def _div(self, a, b, tok):
        if not isinstance(b, Scalar):
            self.fail("division requires a scalar divisor", tok)
        if b.is_zero:
            self.fail("division by zero", tok)
        if isinstance(a, Scalar):
            return a / b
        return a.scale(self.space.one / b)

    def _pow(self, base, exponent: int, tok):
        if isinstance(base, Scalar):
            if exponent < 0 and base.is_zero:
                self.fail("negative power of zero", tok)
            return base ** exponent
        p = base.presentation
        if len(base.terms) == 1:
            ((m, c),) = base.terms.items()
            if sum(1 for e in m if e != 0) <= 1:
                # a power of a single generator never needs straightening
                scaled = tuple(e * exponent for e in m)
                try:
                    return p.monomial(scaled, c ** exponent)
                except ValueError:
                    self.fail("negative exponent on a non-invertible generator", tok)
        if self.ordered:
            self.fail("relation tails may only exponentiate single generators", tok)
        if exponent >= 0:
            return base ** exponent
        if len(base.terms) != 1:
            self.fail("cannot invert a sum of monomials", tok)
        ((m, c),) = base.terms.items()
        try:
            candidate = p.monomial(tuple(-e for e in m))
        except ValueError:
            self.fail("negative exponent on a non-invertible generator", tok)
        unit = p.mul(base, candidate).coefficient((0,) * p.n)
        inverse = candidate.scale(self.space.one / unit)
        return self._pow(inverse, -exponent, tok)

    # grammar

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            self.fail(f"unexpected token {tok.text!r}")
        return value

    def expr(self):
        negate = False
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.next()
            negate = True
        value = self.term()
        if negate:
            value = -value if isinstance(value, Scalar) else value.scale(-1)
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.next()
            rhs = self.term()
            value = self._add(value, rhs, subtract=(op.text == "-"))
        return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in "*/":
                self.next()
                rhs = self.factor()
                value = self._mul(value, rhs, tok) if tok.text == "*" else self._div(value, rhs, tok)
            elif tok.kind in ("INT", "NAME") or (tok.kind == "OP" and tok.text == "("):
                rhs = self.factor()
                value = self._mul(value, rhs, tok)
            else:
                return value

    def factor(self):
        value = self.atom()
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "^":
            self.next()
            sign = 1
            if self.peek().kind == "OP" and self.peek().text == "-":
                self.next()
                sign = -1
            num = self.peek()
            if num.kind != "INT":
                self.fail("exponent must be an integer", num)
            self.next()
            value = self._pow(value, sign * int(num.text), tok)
        return value

    def atom(self):
        tok = self.next()
        if tok.kind == "INT":
            return self.space.scalar(int(tok.text))
        if tok.kind == "NAME":
            if self.presentation is not None:
                match = _GEN_NAME.fullmatch(tok.text)
                if match and 1 <= int(match.group(1)) <= self.presentation.n:
                    return self.presentation.gen(int(match.group(1)))
            if tok.text in self.space.names:
                return self.space.param(tok.text)
            self.fail(f"unknown name {tok.text!r}", tok)
        if tok.kind == "OP" and tok.text == "(":
            value = self.expr()
            closing = self.next()
            if closing.kind != "OP" or closing.text != ")":
                self.fail("expected ')'", closing)
            return value
        self.fail(f"unexpected token {tok.text!r}", tok)


def parse_scalar(text: str, space: ParameterSpace) -> Scalar:
    value = _Parser(text, space, None).parse()
    assert isinstance(value, Scalar)
    return value


def parse_gamma(text: str, space: ParameterSpace) -> GammaMonomial:
    gamma = parse_scalar(text, space).as_gamma()
    if gamma is None:
        raise ParseError(f"{text!r} is not a unit monomial of the parameter ring")
    return gamma


def parse_element(text: str, presentation: Presentation) -> AlgebraElement:
    value = _Parser(text, presentation.params, presentation).parse()
    if isinstance(value, Scalar):
        return presentation.one().scale(value)
    return value


# -- presentation files -------------------------------------------------------


def presentation_to_dict(p: Presentation) -> dict:
    data = {
        "params": list(p.params.names),
        "n": p.n,
        "q": [
            {"i": i, "j": j, "gamma": gamma_str(p.qmat[(i, j)])}
            for i in range(1, p.n + 1)
            for j in range(i + 1, p.n + 1)
        ],
        "relations": [
            {"i": i, "j": j, "element": element_str(p.relation_tail(i, j))}
            for (i, j) in p.nonzero_tails()
        ],
        "invertible": sorted(p.invertible),
    }
    if p.pivot is not None:
        data["pivot"] = p.pivot
    return data


def presentation_from_dict(data: dict) -> Presentation:
    try:
        names = data["params"]
        n = int(data["n"])
        qrows = data["q"]
        relrows = data.get("relations", [])
        invertible = [int(k) for k in data.get("invertible", [])]
        pivot = data.get("pivot")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed presentation object: {exc}") from None
    space = ParameterSpace(names)
    qmat = {}
    for row in qrows:
        qmat[(int(row["i"]), int(row["j"]))] = parse_gamma(row["gamma"], space)
    skeleton = Presentation(space, n, qmat, {}, invertible, pivot)
    relations = {}
    for row in relrows:
        i, j = int(row["i"]), int(row["j"])
        element = _parse_ordered_tail(row["element"], skeleton)
        relations[(i, j)] = element
    return Presentation(space, n, qmat, relations, invertible, pivot)


def _parse_ordered_tail(text: str, skeleton: Presentation) -> Dict[Tuple[int, ...], Scalar]:
    """Parse a relation tail, requiring ordered PBW monomials.

    Tails cannot be straightened while the presentation is still being
    read, so products must already be written in generator order.
    """
    value = _Parser(text, skeleton.params, skeleton, ordered=True).parse()
    if isinstance(value, Scalar):
        return {(0,) * skeleton.n: value} if not value.is_zero else {}
    return dict(value.terms)


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def load_presentation(path: str) -> Presentation:
    return presentation_from_dict(load_json(path))


def dump_presentation(p: Presentation, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(presentation_to_dict(p), handle, indent=2)
        handle.write("\n")


# -- transform result files ----------------------------------------------------

RESULT_SCHEMA = "qsolv.gk-result/1"


def result_to_dict(result) -> dict:
    stages = []
    for stage in result.stages:
        generators = []
        for j in range(1, stage.presentation.n + 1):
            evs = stage.eigenvalues.get(j)
            generators.append(
                {
                    "name": f"x{j}",
                    "expression": element_str(stage.expressions[j]),
                    "eigenvalue": gamma_str(evs[0]) if evs else None,
                }
            )
        stages.append(
            {
                "pivot": stage.pivot,
                "presentation": presentation_to_dict(stage.presentation),
                "generators": generators,
                "eigenvalue_lists": [
                    {"generator": j, "values": [gamma_str(ev) for ev in evs]}
                    for j, evs in sorted(stage.eigenvalues.items())
                ],
                "denominators": [str(d.value) for d in stage.denominators],
            }
        )
    return {
        "schema": RESULT_SCHEMA,
        "original": presentation_to_dict(result.stages[0].input_presentation),
        "final": presentation_to_dict(result.final),
        "stages": stages,
    }


def result_from_dict(data: dict):
    from .gk import Denominator, GkResult, GkStage, GkTrace, StageTrace

    if data.get("schema") != RESULT_SCHEMA:
        raise ParseError(f"not a transform result file (schema {data.get('schema')!r})")
    original = presentation_from_dict(data["original"])
    space = original.params
    previous = original.with_pivot(original.n)
    stages = []
    for index, record in enumerate(data["stages"], start=1):
        pivot = int(record["pivot"])
        localized = previous.localize(pivot)
        expressions = {}
        for entry in record["generators"]:
            j = int(entry["name"].lstrip("x"))
            expressions[j] = parse_element(entry["expression"], localized)
        eigenvalues = {
            int(row["generator"]): tuple(parse_gamma(v, space) for v in row["values"])
            for row in record.get("eigenvalue_lists", [])
        }
        denominators = tuple(
            _denominator_from_string(text, space) for text in record["denominators"]
        )
        presentation = presentation_from_dict(record["presentation"])
        stages.append(
            GkStage(
                index=index,
                pivot=pivot,
                input_presentation=previous,
                localized_previous=localized,
                presentation=presentation,
                expressions=expressions,
                eigenvalues=eigenvalues,
                denominators=denominators,
            )
        )
        previous = presentation
    final = presentation_from_dict(data["final"])
    trace = GkTrace(
        tuple(
            StageTrace(pivot=s.pivot, eigenvalues=s.eigenvalues, denominators=s.denominators)
            for s in stages
        )
    )
    return GkResult(final=final, stages=tuple(stages), trace=trace)


def _denominator_from_string(text: str, space: ParameterSpace):
    from .gk import Denominator

    value = parse_scalar(text, space)
    gamma = gamma_prime = None
    num = value.numerator_terms()
    den = value.denominator_terms()
    if len(num) == 2 and len(den) == 1 and den[0][1] == 1 and all(
        e == 0 for e in den[0][0]
    ):
        (m1, c1), (m2, c2) = num
        gamma = GammaMonomial(space, c1, m1)
        gamma_prime = GammaMonomial(space, -c2, m2)
    return Denominator(value=value, gamma=gamma, gamma_prime=gamma_prime)


def load_result(path: str):
    return result_from_dict(load_json(path))


def dump_result(result, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(result_to_dict(result), handle, indent=2)
        handle.write("\n")
