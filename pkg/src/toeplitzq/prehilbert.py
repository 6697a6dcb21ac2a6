"""Weight functions, the weighted inner product, and the axiom auditor.

The inner product on the algebra pairs basis monomials by

    <eps(k,l,m), eps(r,s,t)> = w(l+t) delta(k,r) delta(l+t, m+s)

for a strictly positive weight function w on the nonnegative integers.  It is
positive definite on the quantum plane P (where it is the diagonal Gram form
w(j)) but is degenerate on the full algebra, and the compatibility identities
tying it to the involution fail here; ``audit_axioms`` hunts for explicit
witnesses of those failures instead of assuming them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import Scalar
from .suq2 import AlgebraElement, NormalMonomial, is_in_P, star


class UnknownPresetError(ValueError):
    """Weight preset name not recognized."""


class DomainError(ValueError):
    """An argument lies outside the required subalgebra."""


class WeightFunction:
    """Exact weights l -> w(l) with first-class ratio queries.

    ``ratio(l, lp)`` returns w(l)/w(lp) for l >= lp and must satisfy
    value(lp) * ratio(l, lp) == value(l) exactly.  Ratios are primary
    because every operator coefficient in the engine is a ratio with the
    larger index on top, which stays polynomial even when a generic
    quotient of values would not.
    """

    def __init__(self, name: str, value_fn: Callable[[int], Scalar],
                 ratio_fn: Callable[[int, int], Scalar] | None = None):
        self.name = name
        self._value_fn = value_fn
        self._ratio_fn = ratio_fn
        self._value_cache: dict[int, Scalar] = {}

    def value(self, l: int) -> Scalar:
        if l < 0:
            raise ValueError("weights are indexed by nonnegative integers")
        cached = self._value_cache.get(l)
        if cached is None:
            cached = self._value_fn(l)
            self._value_cache[l] = cached
        return cached

    def ratio(self, l: int, lp: int) -> Scalar:
        if lp > l:
            raise ValueError(f"ratio requires l >= l', got {l} < {lp}")
        if lp < 0:
            raise ValueError("weights are indexed by nonnegative integers")
        if l == lp:
            return Scalar.one()
        if self._ratio_fn is not None:
            return self._ratio_fn(l, lp)
        return self.value(l).exact_div(self.value(lp))

    def eval_positive_at(self, q0: Fraction, upto: int) -> bool:
        """Numeric spot-check of strict positivity for l = 0..upto."""
        return all(self.value(l).eval(q0) > 0 for l in range(upto + 1))

    def __repr__(self) -> str:
        return f"WeightFunction({self.name})"


def q_bracket(j: int) -> Scalar:
    """[j]_q = 1 + q + ... + q^(j-1)."""
    return Scalar({(e, 0): 1 for e in range(j)})


def _factorial_scalar(l: int) -> Scalar:
    out = Fraction(1)
    for j in range(2, l + 1):
        out *= j
    return Scalar.of(out)


def _q_factorial(l: int) -> Scalar:
    out = Scalar.one()
    for j in range(1, l + 1):
        out = out * q_bracket(j)
    return out


def _q_factorial_ratio(l: int, lp: int) -> Scalar:
    out = Scalar.one()
    for j in range(lp + 1, l + 1):
        out = out * q_bracket(j)
    return out


def preset(name: str) -> WeightFunction:
    """Shipped weight presets.  All take w(0) = 1.

    unit         w(l) = 1
    factorial    w(l) = l!
    q_factorial  w(l) = [l]_q!  (makes the c-sector q-commutator the identity)
    """
    key = name.replace("-", "_")
    if key == "unit":
        return WeightFunction("unit", lambda l: Scalar.one(), lambda l, lp: Scalar.one())
    if key == "factorial":
        return WeightFunction(
            "factorial", _factorial_scalar,
            lambda l, lp: _factorial_scalar(l).exact_div(_factorial_scalar(lp)))
    if key == "q_factorial":
        return WeightFunction("q_factorial", _q_factorial, _q_factorial_ratio)
    raise UnknownPresetError(f"unknown weight preset: {name!r}")


def from_table(values: Sequence[Scalar], ratios: Mapping[tuple[int, int], Scalar] | None = None,
               name: str = "table") -> WeightFunction:
    """User-defined weights from a finite value table plus optional ratio table.

    Positivity is only checked at numeric evaluation points, never symbolically.
    """
    values = list(values)
    ratios = dict(ratios or {})

    def value_fn(l: int) -> Scalar:
        if l >= len(values):
            raise ValueError(f"weight table has no entry for l = {l} (size {len(values)})")
        return values[l]

    def ratio_fn(l: int, lp: int) -> Scalar:
        hit = ratios.get((l, lp))
        if hit is not None:
            return hit
        return value_fn(l).exact_div(value_fn(lp))

    return WeightFunction(name, value_fn, ratio_fn)


@dataclass(frozen=True)
class AuditWitness:
    identity: str            # "2.3" or "2.2"
    triple_index: int
    orientation: str         # "g" for the identity as stated, "g*" for the starred instance
    lhs: Scalar
    rhs: Scalar


@dataclass(frozen=True)
class TripleAudit:
    f1: AlgebraElement
    f2: AlgebraElement
    g: AlgebraElement
    holds_23: bool
    holds_22: bool


@dataclass
class AxiomAuditReport:
    entries: list[TripleAudit] = field(default_factory=list)
    witnesses: list[AuditWitness] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return not self.witnesses

    def witnesses_for(self, identity: str) -> list[AuditWitness]:
        return [w for w in self.witnesses if w.identity == identity]


class InnerProduct:
    """The weighted sesquilinear form on the algebra.

    The first slot is conjugated; conjugation is the identity on these
    scalars, so the form is plainly bilinear here, but the contract is kept
    visible for a future complex coefficient field.
    """

    def __init__(self, weights: WeightFunction):
        self.weights = weights

    def inner(self, f: AlgebraElement, g: AlgebraElement) -> Scalar:
        acc = Scalar.zero()
        for (k, l, m), cf in f.terms():
            for (r, s, t), cg in g.terms():
                if k == r and l + t == m + s:
                    acc = acc + cf.conjugate() * cg * self.weights.value(l + t)
        return acc

    def inner_p_row(self, i: int, j: int, f: AlgebraElement) -> Scalar:
        """<eps(i,j,0), f>, the pairing against an unnormalized P basis row."""
        acc = Scalar.zero()
        for (k, l, m), coeff in f.terms():
            if k == i and l - m == j:
                acc = acc + coeff * self.weights.value(l)
        return acc

    def check_condition3(self, f: AlgebraElement) -> set[tuple[int, int]]:
        """The finite set of basis indices (i,j) pairing nontrivially with f.

        Each basis term eps(k,l,m) can meet at most the single index
        (k, l-m), so candidates come straight off the terms; cancellation
        across terms is then filtered by an exact inner product.
        """
        candidates = {
            (k, l - m)
            for (k, l, m), _ in f.terms()
            if k >= 0 and l >= m
        }
        return {(i, j) for (i, j) in candidates if self.inner_p_row(i, j, f)}

    def audit_axioms(self, triples: Iterable[tuple[AlgebraElement, AlgebraElement, AlgebraElement]],
                     ) -> AxiomAuditReport:
        """Check the conjugation compatibility identities on sample triples.

        For each (f1, f2, g) with f1, f2 in P this tests the identity
        <f1, f2 g> = <f1 g*, f2> both as stated and with g replaced by g*
        (both are instances of the same universally quantified identity),
        plus the anti-unitarity check <f1, f2> = <f1*, f2*>.  Failures are
        returned as witnesses carrying both sides as exact scalars.
        """
        report = AxiomAuditReport()
        for index, (f1, f2, g) in enumerate(triples):
            if not is_in_P(f1) or not is_in_P(f2):
                raise DomainError("audit triples need f1 and f2 in the quantum plane P")
            gstar = star(g)
            pairs = (
                ("g", self.inner(f1, f2 * g), self.inner(f1 * gstar, f2)),
                ("g*", self.inner(f1, f2 * gstar), self.inner(f1 * g, f2)),
            )
            holds_23 = True
            for orientation, lhs, rhs in pairs:
                if lhs != rhs:
                    holds_23 = False
                    report.witnesses.append(AuditWitness("2.3", index, orientation, lhs, rhs))
            lhs22 = self.inner(f1, f2).conjugate()
            rhs22 = self.inner(star(f1), star(f2))
            holds_22 = lhs22 == rhs22
            if not holds_22:
                report.witnesses.append(AuditWitness("2.2", index, "-", lhs22, rhs22))
            report.entries.append(TripleAudit(f1, f2, g, holds_23, holds_22))
        return report
