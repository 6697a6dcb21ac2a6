"""Free algebra over operator generators, relation checking, and deformation.

Words in formal generators evaluate to compositions of Toeplitz operators
(leftmost generator applied last, matching operator-product notation).  A
relation candidate is an element of the free algebra; membership in the
relation ideal is verified on finite windows only: a nonzero image refutes,
a pass certifies nothing beyond the window.

Relations split into homogeneous components by word length.  The top
component is the classical part; reweighting component d by h^(n-d), with
h the formal square root of Planck's constant, produces the deformed
relation whose h = 1 slice is the original and whose h = 0 slice is the
classical part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .prehilbert import DomainError
from .scalars import Scalar
from .suq2 import AlgebraElement, Generator, is_in_P, is_in_Pstar, star
from .toeplitz import (AdjointOp, ComposeOp, PElement, PMonomial, Quantization, ScaleOp,
                       SumOp, SymbolOp, ToeplitzOperator, identity_op)


class HbarUnboundError(ValueError):
    """A relation carries h but no numeric value of hbar was supplied."""


class ZeroElementError(ValueError):
    """The zero element has no degree decomposition."""


class AlreadyDeformedError(ValueError):
    """Deformation applies to h-free relations only."""


@dataclass(frozen=True)
class FreeGenerator:
    """A generator of the free algebra, labeled by an operator.

    ``kind`` is "symbol" for the Toeplitz operator of the payload (which
    must lie in P or P* and not be a multiple of the unit) or "adjoint" for
    the Gram adjoint of the payload's creation operator.  Adjoint
    generators extend the plain symbol alphabet and are flagged as such.
    """

    label: str
    kind: str
    payload: AlgebraElement

    def __post_init__(self):
        if self.kind not in ("symbol", "adjoint"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.payload.is_zero() or set(self.payload.monomials()) == {(0, 0, 0)}:
            raise DomainError("generator payloads may not be scalar multiples of the unit")
        if self.kind == "adjoint":
            if not is_in_P(self.payload):
                raise DomainError("adjoint generators take payloads in the quantum plane P")
        elif not (is_in_P(self.payload) or is_in_Pstar(self.payload)):
            raise DomainError("generator payloads must lie in P or P*")

    @property
    def extended(self) -> bool:
        return self.kind == "adjoint"

    def operator(self) -> ToeplitzOperator:
        base = SymbolOp(self.payload)
        return AdjointOp(base) if self.kind == "adjoint" else base

    def __repr__(self) -> str:
        return f"[{self.label}]"


def gen_a() -> FreeGenerator:
    return FreeGenerator("a", "symbol", AlgebraElement.generator(Generator.A))


def gen_c() -> FreeGenerator:
    return FreeGenerator("c", "symbol", AlgebraElement.generator(Generator.C))


def gen_astar() -> FreeGenerator:
    return FreeGenerator("a*", "symbol", AlgebraElement.generator(Generator.ASTAR))


def gen_cstar() -> FreeGenerator:
    return FreeGenerator("c*", "symbol", AlgebraElement.generator(Generator.CSTAR))


def gen_adjoint(payload: AlgebraElement, label: str) -> FreeGenerator:
    return FreeGenerator(label, "adjoint", payload)


def gen_symbol(payload: AlgebraElement, label: str) -> FreeGenerator:
    return FreeGenerator(label, "symbol", payload)


Word = tuple[FreeGenerator, ...]


class FreeElement:
    """Finite Scalar combination of words in free generators."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        canonical: dict[Word, Scalar] = {}
        if terms:
            for word, coeff in terms.items():
                word = tuple(word)
                if coeff:
                    acc = canonical.get(word)
                    acc = coeff if acc is None else acc + coeff
                    if acc:
                        canonical[word] = acc
                    else:
                        canonical.pop(word, None)
        self._terms = canonical

    @staticmethod
    def zero() -> "FreeElement":
        return FreeElement()

    @staticmethod
    def one() -> "FreeElement":
        return FreeElement({(): Scalar.one()})

    @staticmethod
    def word(*gens: FreeGenerator) -> "FreeElement":
        return FreeElement({tuple(gens): Scalar.one()})

    @staticmethod
    def scalar(s: Scalar) -> "FreeElement":
        return FreeElement({(): s})

    def terms(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        merged = dict(self._terms)
        for word, coeff in other._terms.items():
            acc = merged.get(word)
            acc = coeff if acc is None else acc + coeff
            if acc:
                merged[word] = acc
            else:
                merged.pop(word, None)
        out = FreeElement()
        out._terms = merged
        return out

    def __neg__(self) -> "FreeElement":
        out = FreeElement()
        out._terms = {word: -coeff for word, coeff in self._terms.items()}
        return out

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        product: dict[Word, Scalar] = {}
        for wx, cx in self._terms.items():
            for wy, cy in other._terms.items():
                word = wx + wy
                coeff = cx * cy
                acc = product.get(word)
                acc = coeff if acc is None else acc + coeff
                if acc:
                    product[word] = acc
                else:
                    product.pop(word, None)
        out = FreeElement()
        out._terms = product
        return out

    def scale(self, scalar: Scalar) -> "FreeElement":
        if not scalar:
            return FreeElement.zero()
        out = FreeElement()
        out._terms = {word: coeff * scalar for word, coeff in self._terms.items()}
        return out

    def has_h(self) -> bool:
        return any(coeff.has_h() for coeff in self._terms.values())

    def max_degree(self) -> int:
        if not self._terms:
            raise ZeroElementError("the zero element has no degree")
        return max(len(word) for word in self._terms)

    def substitute_h(self, hbar0: Fraction | int) -> "FreeElement":
        out = FreeElement()
        terms = {}
        for word, coeff in self._terms.items():
            new = coeff.substitute_h(hbar0)
            if new:
                terms[word] = new
        out._terms = terms
        return out

    def __repr__(self) -> str:
        if not self._terms:
            return "FreeElement(0)"
        bits = []
        for word, coeff in sorted(self._terms.items(), key=lambda kv: (len(kv[0]), [g.label for g in kv[0]])):
            body = "*".join(repr(g) for g in word) if word else "1"
            bits.append(f"({coeff}) {body}")
        return "FreeElement(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# Evaluation through the quantization morphism
# ---------------------------------------------------------------------------

def to_operator(element: FreeElement) -> ToeplitzOperator:
    """The operator a free element evaluates to: words become compositions
    of the generators' operators, leftmost applied last."""
    parts: list[ToeplitzOperator] = []
    for word, coeff in element.terms():
        if word:
            composed: ToeplitzOperator = ComposeOp(tuple(g.operator() for g in word))
        else:
            composed = identity_op()
        parts.append(ScaleOp(coeff, composed) if not coeff.is_one() else composed)
    if not parts:
        return ScaleOp(Scalar.zero(), identity_op())
    if len(parts) == 1:
        return parts[0]
    return SumOp(tuple(parts))


def pi_apply(relation: FreeElement, psi: PElement, quant: Quantization,
             q0: Fraction | None = None,
             hbar0: Fraction | None = None) -> PElement:
    """Evaluate the image of psi under the operator of ``relation``.

    Coefficients carrying h require a numeric hbar (the operator calculus
    lives over the q-ring); with numeric q0 the result's coefficients are
    evaluated to rationals as well.
    """
    if relation.has_h() and hbar0 is None:
        raise HbarUnboundError("relation carries h; supply a numeric hbar")
    out = PElement.zero()
    for word, coeff in relation.terms():
        image = psi
        for gen in reversed(word):
            image = quant.apply(gen.operator(), image)
        if hbar0 is not None:
            coeff = coeff.substitute_h(hbar0)
        out = out + image.scale(coeff)
    if q0 is not None:
        out = out.map_coefficients(lambda s: Scalar.of(s.eval(q0)))
    return out


@dataclass
class WindowCheck:
    verdict: bool
    window: tuple[int, int]
    witness_source: PMonomial | None
    witness_image: PElement | None


def is_relation_on_window(relation: FreeElement, window_i: int, window_j: int,
                          quant: Quantization,
                          q0: Fraction | None = None,
                          hbar0: Fraction | None = None) -> WindowCheck:
    """Necessary-condition check for membership in the relation ideal.

    Scans the window in lexicographic order and reports the first basis
    monomial with a nonzero image, if any.  A pass is exact on the window
    and claims nothing beyond it.
    """
    for i in range(window_i + 1):
        for j in range(window_j + 1):
            image = pi_apply(relation, PElement.basis(i, j), quant, q0, hbar0)
            if image:
                return WindowCheck(False, (window_i, window_j), PMonomial(i, j), image)
    return WindowCheck(True, (window_i, window_j), None, None)


# ---------------------------------------------------------------------------
# Grading, classical parts, deformation
# ---------------------------------------------------------------------------

def degree_decompose(relation: FreeElement) -> list[FreeElement]:
    """Homogeneous components [R_0, ..., R_n] by word length, R_n nonzero."""
    if relation.is_zero():
        raise ZeroElementError("cannot decompose the zero element")
    n = relation.max_degree()
    components = [FreeElement.zero() for _ in range(n + 1)]
    for word, coeff in relation.terms():
        components[len(word)] = components[len(word)] + FreeElement({word: coeff})
    return components


def classical_part(relation: FreeElement) -> FreeElement:
    """The top-degree homogeneous component."""
    return degree_decompose(relation)[-1]


def is_classical(relation: FreeElement) -> bool:
    """Homogeneous elements are classical relations (the zero element
    vacuously so)."""
    lengths = {len(word) for word, _ in relation.terms()}
    return len(lengths) <= 1


def is_quantum(relation: FreeElement) -> bool:
    return not is_classical(relation)


def hbar_deform(relation: FreeElement) -> FreeElement:
    """Weight component d of an h-free relation by h^(n-d).

    Substituting h = 1 recovers the input; h = 0 keeps only the classical
    part, which is why this grading of the deformation is the one that
    admits the classical limit.
    """
    if relation.is_zero():
        raise ZeroElementError("cannot deform the zero element")
    if relation.has_h():
        raise AlreadyDeformedError("relation already carries h")
    components = degree_decompose(relation)
    n = len(components) - 1
    out = FreeElement.zero()
    for d, part in enumerate(components):
        if part.is_zero():
            continue
        out = out + (part.scale(Scalar.h(n - d)) if d < n else part)
    return out
