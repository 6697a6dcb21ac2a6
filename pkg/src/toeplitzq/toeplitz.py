"""The quantum plane as pre-Hilbert space and the Toeplitz operator calculus.

All exact computation happens on the unnormalized monomial basis a^i c^j of
the quantum plane; the orthonormal basis differs from it by w(j)^(-1/2) and
its square-root coefficients appear only in the numeric reporting layer of
operator matrices.

Operators are lazy expression trees evaluated against one basis vector at a
time: a symbol leaf is "multiply on the right, then project", and the other
nodes are sums, compositions, scalings, and the Gram adjoint.  Matrices on
finite windows are derived views of that evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from .prehilbert import DomainError, InnerProduct, WeightFunction
from .scalars import Scalar
from .suq2 import AlgebraElement, NormalMonomial, is_in_P, star


class NotBandedError(ValueError):
    """The degree-shift bound of an operator could not be determined."""


class PMonomial(NamedTuple):
    """Basis monomial a^i c^j of the quantum plane."""

    i: int
    j: int

    def embed_key(self) -> NormalMonomial:
        return NormalMonomial(self.i, self.j, 0)

    def text(self) -> str:
        return self.embed_key().text()


class PElement:
    """Finite Scalar combination of quantum-plane monomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[PMonomial, Scalar] | None = None):
        canonical: dict[PMonomial, Scalar] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(mono, PMonomial):
                    mono = PMonomial(*mono)
                if mono.i < 0 or mono.j < 0:
                    raise ValueError("quantum-plane exponents must be nonnegative")
                if coeff:
                    acc = canonical.get(mono)
                    acc = coeff if acc is None else acc + coeff
                    if acc:
                        canonical[mono] = acc
                    else:
                        canonical.pop(mono, None)
        self._terms = canonical

    @staticmethod
    def zero() -> "PElement":
        return PElement()

    @staticmethod
    def basis(i: int, j: int) -> "PElement":
        return PElement({PMonomial(i, j): Scalar.one()})

    @staticmethod
    def from_algebra(x: AlgebraElement) -> "PElement":
        if not is_in_P(x):
            raise DomainError("element does not lie in the quantum plane P")
        return PElement({PMonomial(mono.k, mono.l): coeff for mono, coeff in x.terms()})

    def embed(self) -> AlgebraElement:
        return AlgebraElement({mono.embed_key(): coeff for mono, coeff in self._terms.items()})

    def terms(self) -> Iterator[tuple[PMonomial, Scalar]]:
        return iter(self._terms.items())

    def coefficient(self, mono: PMonomial) -> Scalar:
        return self._terms.get(mono, Scalar.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "PElement") -> "PElement":
        if not isinstance(other, PElement):
            return NotImplemented
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc = merged.get(mono)
            acc = coeff if acc is None else acc + coeff
            if acc:
                merged[mono] = acc
            else:
                merged.pop(mono, None)
        out = PElement()
        out._terms = merged
        return out

    def __neg__(self) -> "PElement":
        out = PElement()
        out._terms = {mono: -coeff for mono, coeff in self._terms.items()}
        return out

    def __sub__(self, other: "PElement") -> "PElement":
        if not isinstance(other, PElement):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar: Scalar) -> "PElement":
        if not scalar:
            return PElement.zero()
        out = PElement()
        out._terms = {mono: coeff * scalar for mono, coeff in self._terms.items()}
        return out

    def map_coefficients(self, fn) -> "PElement":
        out_terms = {}
        for mono, coeff in self._terms.items():
            new = fn(coeff)
            if new:
                out_terms[mono] = new
        out = PElement()
        out._terms = out_terms
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "PElement(0)"
        bits = [f"({coeff}) {mono.text()}" for mono, coeff in sorted(self._terms.items())]
        return "PElement(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# Operator expression trees
# ---------------------------------------------------------------------------

class ToeplitzOperator:
    """Base class for lazy operator expressions on the quantum plane."""

    def compose(self, other: "ToeplitzOperator") -> "ToeplitzOperator":
        """self applied after other."""
        return ComposeOp((self, other))

    def __add__(self, other: "ToeplitzOperator") -> "ToeplitzOperator":
        return SumOp((self, other))

    def scale(self, scalar: Scalar) -> "ToeplitzOperator":
        return ScaleOp(scalar, self)

    def adjoint(self) -> "ToeplitzOperator":
        return AdjointOp(self)


@dataclass(frozen=True)
class SymbolOp(ToeplitzOperator):
    symbol: AlgebraElement


@dataclass(frozen=True)
class ComposeOp(ToeplitzOperator):
    factors: tuple[ToeplitzOperator, ...]  # leftmost factor applied last


@dataclass(frozen=True)
class SumOp(ToeplitzOperator):
    parts: tuple[ToeplitzOperator, ...]


@dataclass(frozen=True)
class ScaleOp(ToeplitzOperator):
    scalar: Scalar
    op: ToeplitzOperator


@dataclass(frozen=True)
class AdjointOp(ToeplitzOperator):
    """Gram adjoint with respect to <a^i c^j, a^i c^j> = w(j).

    This extends the symbol calculus: the adjoint of a creation operator is
    not itself a Toeplitz operator of a starred symbol in general.
    """

    op: ToeplitzOperator


def toeplitz(symbol: AlgebraElement) -> SymbolOp:
    return SymbolOp(symbol)


def identity_op() -> SymbolOp:
    return SymbolOp(AlgebraElement.one())


def creation(g: PElement) -> ToeplitzOperator:
    """The creation operator of g: right multiplication by g, compressed
    back to the plane (on which it acts as plain multiplication)."""
    return SymbolOp(g.embed())


def annihilation(g: PElement) -> ToeplitzOperator:
    """The annihilation operator of g: the Toeplitz operator of g*."""
    return SymbolOp(star(g.embed()))


def q_commutator(left: ToeplitzOperator, right: ToeplitzOperator, lam: Scalar) -> ToeplitzOperator:
    """left . right - lam * (right . left) as an expression tree."""
    return SumOp((ComposeOp((left, right)), ScaleOp(-lam, ComposeOp((right, left)))))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

Entry = Union[Scalar, float]


@dataclass
class OperatorMatrix:
    """Sparse window matrix of an operator.

    ``entries`` maps (target, source) index pairs to the coefficient of the
    target monomial in the image of the source monomial.  Targets outside
    the window are retained when the operator shifts degrees upward, so the
    matrix is rectangular over the full image support.
    """

    window: tuple[int, int]
    basis: str  # "unnormalized" | "normalized-numeric"
    entries: dict[tuple[PMonomial, PMonomial], Entry] = field(default_factory=dict)
    q0: Fraction | None = None

    def entry(self, target: tuple[int, int], source: tuple[int, int]) -> Entry:
        value = self.entries.get((PMonomial(*target), PMonomial(*source)))
        if value is None:
            return Scalar.zero() if self.basis == "unnormalized" else 0.0
        return value

    def column(self, source: tuple[int, int]) -> PElement:
        if self.basis != "unnormalized":
            raise ValueError("columns as PElements exist only for the unnormalized basis")
        src = PMonomial(*source)
        return PElement({tgt: val for (tgt, s), val in self.entries.items() if s == src})

    def rows(self) -> list[tuple[PMonomial, PMonomial, Entry]]:
        return [(tgt, src, val) for (tgt, src), val in sorted(self.entries.items())]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowWitness:
    source: PMonomial
    image: PElement


@dataclass
class CommutatorReport:
    """Exact behavior of a q-commutator on a finite window.

    ``diagonal`` carries the eigenvalue per c-degree j when every nonzero
    image is a multiple of its source monomial.  The boundary column i = 0
    is singled out because the a-sector relation of the symbol calculus
    holds on the interior yet picks up a defect there.
    """

    window: tuple[int, int]
    zero_on_window: bool
    witnesses: list[WindowWitness]
    is_diagonal: bool
    diagonal: dict[int, Scalar] | None
    zero_on_interior: bool          # columns with i >= 1
    boundary_witnesses: list[WindowWitness]  # nonzero images on the i = 0 column


@dataclass
class BasisIndependenceCase:
    sample: AlgebraElement
    standard: PElement
    rotated: PElement
    agrees: bool


@dataclass
class BasisIndependenceReport:
    cases: list[BasisIndependenceCase]

    @property
    def all_agree(self) -> bool:
        return all(case.agrees for case in self.cases)


# ---------------------------------------------------------------------------
# The quantization engine
# ---------------------------------------------------------------------------

class Quantization:
    """Projection and Toeplitz calculus for one choice of weights."""

    def __init__(self, weights: WeightFunction):
        self.weights = weights
        self.inner_product = InnerProduct(weights)

    # -- projection ---------------------------------------------------------

    def project(self, f: AlgebraElement) -> PElement:
        """Closed form of the reproducing projection onto the plane:
        eps(k,l,m) goes to ratio(l, l-m) a^k c^(l-m) when k >= 0 and l >= m,
        and to zero otherwise."""
        out = PElement.zero()
        for (k, l, m), coeff in f.terms():
            if k >= 0 and l >= m:
                scaled = coeff * self.weights.ratio(l, l - m) if m else coeff
                out = out + PElement({PMonomial(k, l - m): scaled})
        return out

    def project_basis_sum(self, f: AlgebraElement) -> PElement:
        """Independent evaluation of the projection as the basis-paired sum:
        over the finite support the form detects, add <phi_ij, f> phi_ij,
        i.e. divide each row pairing exactly by the Gram entry w(j)."""
        out = PElement.zero()
        for (i, j) in sorted(self.inner_product.check_condition3(f)):
            pairing = self.inner_product.inner_p_row(i, j, f)
            out = out + PElement({PMonomial(i, j): pairing.exact_div(self.weights.value(j))})
        return out

    # -- operator evaluation --------------------------------------------------

    def toeplitz_apply(self, g: AlgebraElement, psi: PElement) -> PElement:
        """Right multiplication by the symbol, then projection."""
        return self.project(psi.embed() * g)

    def apply(self, op: ToeplitzOperator, psi: PElement) -> PElement:
        if isinstance(op, SymbolOp):
            return self.toeplitz_apply(op.symbol, psi)
        if isinstance(op, ComposeOp):
            out = psi
            for factor in reversed(op.factors):
                out = self.apply(factor, out)
            return out
        if isinstance(op, SumOp):
            out = PElement.zero()
            for part in op.parts:
                out = out + self.apply(part, psi)
            return out
        if isinstance(op, ScaleOp):
            return self.apply(op.op, psi).scale(op.scalar)
        if isinstance(op, AdjointOp):
            out = PElement.zero()
            for mono, coeff in psi.terms():
                out = out + self._adjoint_on_basis(op.op, mono).scale(coeff)
            return out
        raise NotBandedError(f"cannot evaluate operator node {type(op).__name__}")

    def _adjoint_on_basis(self, base: ToeplitzOperator, target: PMonomial) -> PElement:
        """Apply the Gram adjoint of ``base`` to one basis vector.

        The candidate sources are the window monomials the base operator can
        map onto ``target``, read off its degree-shift set; the adjoint
        coefficient rescales the transposed entry by w(j_target)/w(j_source).
        """
        sources = set()
        for di, dj in operator_shifts(base):
            i, j = target.i - di, target.j - dj
            if i >= 0 and j >= 0:
                sources.add(PMonomial(i, j))
        out = PElement.zero()
        for src in sources:
            coeff = self.apply(base, PElement.basis(src.i, src.j)).coefficient(target)
            if coeff:
                out = out + PElement({src: self._reweight(coeff, target.j, src.j)})
        return out

    def _reweight(self, coeff: Scalar, j_num: int, j_den: int) -> Scalar:
        # coeff * w(j_num) / w(j_den), staying inside the ring
        if j_num >= j_den:
            return coeff * self.weights.ratio(j_num, j_den)
        return coeff.exact_div(self.weights.ratio(j_den, j_num))

    # -- matrices -------------------------------------------------------------

    def operator_matrix(self, op: ToeplitzOperator, window_i: int, window_j: int,
                        basis: str = "unnormalized",
                        q0: Fraction | None = None) -> OperatorMatrix:
        """Columns are the images of every window monomial.

        The normalized-numeric basis multiplies each entry by the float
        square root of w(j_target)/w(j_source) at a numeric q; it exists
        purely as a reporting layer.
        """
        if basis not in ("unnormalized", "normalized-numeric"):
            raise ValueError(f"unknown basis flag {basis!r}")
        if basis == "normalized-numeric" and q0 is None:
            raise ValueError("normalized-numeric matrices need a numeric q")
        matrix = OperatorMatrix((window_i, window_j), basis, {}, q0)
        for i in range(window_i + 1):
            for j in range(window_j + 1):
                src = PMonomial(i, j)
                image = self.apply(op, PElement.basis(i, j))
                for tgt, coeff in image.terms():
                    if basis == "unnormalized":
                        matrix.entries[(tgt, src)] = coeff
                    else:
                        matrix.entries[(tgt, src)] = self._normalized_entry(coeff, tgt.j, src.j, q0)
        return matrix

    def _normalized_entry(self, coeff: Scalar, j_target: int, j_source: int,
                          q0: Fraction) -> float:
        value = float(coeff.eval(q0))
        if j_target >= j_source:
            rescale = math.sqrt(float(self.weights.ratio(j_target, j_source).eval(q0)))
        else:
            rescale = 1.0 / math.sqrt(float(self.weights.ratio(j_source, j_target).eval(q0)))
        return value * rescale

    def adjoint_on_window(self, op: ToeplitzOperator, window_i: int, window_j: int) -> OperatorMatrix:
        """Matrix of the Gram adjoint on a window.

        Sources are scanned over the window enlarged by the operator's shift
        bound so every adjoint column inside the window is complete.
        """
        shifts = operator_shifts(op)
        bound = max((max(abs(di), abs(dj)) for di, dj in shifts), default=0)
        base = self.operator_matrix(op, window_i + bound, window_j + bound)
        adj = OperatorMatrix((window_i, window_j), "unnormalized")
        for (tgt, src), coeff in base.entries.items():
            # transposed position: the adjoint maps tgt back onto src
            if tgt.i <= window_i and tgt.j <= window_j:
                adj.entries[(src, tgt)] = self._reweight(coeff, tgt.j, src.j)
        return adj

    # -- window checks ----------------------------------------------------------

    def window_images(self, op: ToeplitzOperator, window_i: int, window_j: int,
                      ) -> Iterator[tuple[PMonomial, PElement]]:
        for i in range(window_i + 1):
            for j in range(window_j + 1):
                yield PMonomial(i, j), self.apply(op, PElement.basis(i, j))

    def is_zero_on_window(self, op: ToeplitzOperator, window_i: int, window_j: int,
                          ) -> tuple[bool, WindowWitness | None]:
        for src, image in self.window_images(op, window_i, window_j):
            if image:
                return False, WindowWitness(src, image)
        return True, None

    def commutator_report(self, left: ToeplitzOperator, right: ToeplitzOperator,
                          lam: Scalar, window_i: int, window_j: int) -> CommutatorReport:
        op = q_commutator(left, right, lam)
        witnesses: list[WindowWitness] = []
        boundary: list[WindowWitness] = []
        diagonal: dict[int, Scalar] = {}
        is_diagonal = True
        zero_interior = True
        for src, image in self.window_images(op, window_i, window_j):
            if image:
                witness = WindowWitness(src, image)
                witnesses.append(witness)
                if src.i == 0:
                    boundary.append(witness)
                else:
                    zero_interior = False
            terms = dict(image.terms())
            if not terms:
                eigen = Scalar.zero()
            elif set(terms) == {src}:
                eigen = terms[src]
            else:
                is_diagonal = False
                continue
            # diagonal means: multiple of the source everywhere, with the
            # eigenvalue depending only on the c-degree j
            seen = diagonal.get(src.j)
            if seen is None:
                diagonal[src.j] = eigen
            elif seen != eigen:
                is_diagonal = False
        return CommutatorReport(
            window=(window_i, window_j),
            zero_on_window=not witnesses,
            witnesses=witnesses,
            is_diagonal=is_diagonal,
            diagonal=diagonal if is_diagonal else None,
            zero_on_interior=zero_interior,
            boundary_witnesses=boundary,
        )

    # -- basis independence -------------------------------------------------------

    def project_rotated_basis(self, f: AlgebraElement) -> PElement:
        """Projection through an alternative orthonormal Hamel basis.

        Every index the pairing can reach is teamed with its right neighbor
        (same c-degree, next a-degree) and the pair is replaced by the exact
        rational rotation (3/5, 4/5; -4/5, 3/5) of the corresponding
        normalized basis vectors; untouched indices keep their standard
        vector.  Independence of the projection from the basis choice means
        this must reproduce the standard projection exactly.
        """
        candidates = sorted({
            (k, l - m) for (k, l, m), _ in f.terms() if k >= 0 and l >= m
        })
        ip = self.inner_product
        c3, c4 = Scalar.of(Fraction(3, 5)), Scalar.of(Fraction(4, 5))
        out = PElement.zero()
        handled: set[tuple[int, int]] = set()
        for (i, j) in candidates:
            if (i, j) in handled:
                continue
            partner = (i + 1, j)
            handled.add((i, j))
            handled.add(partner)
            u = ip.inner_p_row(i, j, f)
            v = ip.inner_p_row(partner[0], partner[1], f)
            # pairings of f against the rotated orthonormal pair
            #   psi1 = 3/5 phi1 + 4/5 phi2,  psi2 = -4/5 phi1 + 3/5 phi2
            a1 = c3 * u + c4 * v
            a2 = c3 * v - c4 * u
            w_j = self.weights.value(j)
            coeff_first = (c3 * a1 - c4 * a2).exact_div(w_j)
            coeff_second = (c4 * a1 + c3 * a2).exact_div(w_j)
            out = out + PElement({
                PMonomial(i, j): coeff_first,
                PMonomial(*partner): coeff_second,
            })
        return out

    def check_basis_independence(self, samples: Iterable[AlgebraElement]) -> BasisIndependenceReport:
        cases = []
        for sample in samples:
            standard = self.project(sample)
            rotated = self.project_rotated_basis(sample)
            cases.append(BasisIndependenceCase(sample, standard, rotated, standard == rotated))
        return BasisIndependenceReport(cases)


def operator_shifts(op: ToeplitzOperator) -> set[tuple[int, int]]:
    """Finite set bounding the (a-degree, c-degree) moves of an operator.

    Symbol leaves shift by (k, l - m) per symbol term; compositions add
    shifts, sums and scalings keep them, adjoints negate them.  Every
    expression tree is banded, so this always succeeds on known nodes.
    """
    if isinstance(op, SymbolOp):
        return {(k, l - m) for (k, l, m), _ in op.symbol.terms()}
    if isinstance(op, ComposeOp):
        shifts = {(0, 0)}
        for factor in op.factors:
            inner = operator_shifts(factor)
            shifts = {(a + c, b + d) for (a, b) in shifts for (c, d) in inner}
        return shifts
    if isinstance(op, SumOp):
        out: set[tuple[int, int]] = set()
        for part in op.parts:
            out |= operator_shifts(part)
        return out
    if isinstance(op, ScaleOp):
        return operator_shifts(op.op)
    if isinstance(op, AdjointOp):
        return {(-a, -b) for (a, b) in operator_shifts(op.op)}
    raise NotBandedError(f"no shift bound for operator node {type(op).__name__}")
