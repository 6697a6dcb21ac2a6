"""The *-algebra SU_q(2) as a normal-ordering rewrite engine.

Generators a, a*, c, c* obey

    ac = qca        ac* = qc*a        cc* = c*c
    a*a + c*c = 1   aa* + q^2 c*c = 1

with q real and invertible.  Every element is stored on the normal basis
eps(k,l,m), meaning a^k c^l (c*)^m for k >= 0 and (a*)^(-k) c^l (c*)^m for
k < 0.  Products are rewritten onto that basis by the two-letter exchange
rules (the starred companions of the defining relations commute letters at
the cost of a power of q) and by eliminating mixed a/a* blocks through
aa* = 1 - q^2 c*c and a*a = 1 - c*c.
"""

from __future__ import annotations

import enum
import threading
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .scalars import Scalar


class Generator(enum.Enum):
    A = "a"
    ASTAR = "a*"
    C = "c"
    CSTAR = "c*"

    @property
    def starred(self) -> "Generator":
        return _STAR_MAP[self]


_STAR_MAP = {
    Generator.A: Generator.ASTAR,
    Generator.ASTAR: Generator.A,
    Generator.C: Generator.CSTAR,
    Generator.CSTAR: Generator.C,
}


class Letter(NamedTuple):
    generator: Generator
    power: int


class Word:
    """A product of generator powers, the input form for normal ordering.

    The empty word is the unit.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[Generator, int] | Letter] = ()):
        cleaned = []
        for gen, power in letters:
            if power < 1:
                raise ValueError("letter powers must be >= 1")
            cleaned.append(Letter(gen, power))
        self.letters = tuple(cleaned)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __repr__(self) -> str:
        if not self.letters:
            return "Word(1)"
        body = " ".join(f"{g.value}^{p}" if p != 1 else g.value for g, p in self.letters)
        return f"Word({body})"

    def starred(self) -> "Word":
        """Reverse the word and star each letter."""
        return Word([(g.starred, p) for g, p in reversed(self.letters)])


class NormalMonomial(NamedTuple):
    """Basis monomial eps(k,l,m); k may be negative (a* powers), l,m >= 0."""

    k: int
    l: int
    m: int

    def validate(self) -> "NormalMonomial":
        if self.l < 0 or self.m < 0:
            raise ValueError("c and c* powers must be nonnegative")
        return self

    def text(self) -> str:
        parts = []
        if self.k > 0:
            parts.append("a" if self.k == 1 else f"a^{self.k}")
        elif self.k < 0:
            parts.append(f"a*^{-self.k}")
        if self.l > 0:
            parts.append("c" if self.l == 1 else f"c^{self.l}")
        if self.m > 0:
            parts.append("c*" if self.m == 1 else f"c*^{self.m}")
        return " ".join(parts) if parts else "1"


UNIT = NormalMonomial(0, 0, 0)


class AlgebraElement:
    """Finite Scalar combination of NormalMonomials, canonically stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[NormalMonomial, Scalar] | None = None):
        canonical: dict[NormalMonomial, Scalar] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(mono, NormalMonomial):
                    mono = NormalMonomial(*mono)
                mono.validate()
                if coeff:
                    acc = canonical.get(mono)
                    acc = coeff if acc is None else acc + coeff
                    if acc:
                        canonical[mono] = acc
                    else:
                        canonical.pop(mono, None)
        self._terms = canonical

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "AlgebraElement":
        return AlgebraElement()

    @staticmethod
    def one() -> "AlgebraElement":
        return AlgebraElement({UNIT: Scalar.one()})

    @staticmethod
    def monomial(k: int, l: int, m: int, coeff: Scalar | None = None) -> "AlgebraElement":
        return AlgebraElement({NormalMonomial(k, l, m): Scalar.one() if coeff is None else coeff})

    @staticmethod
    def generator(gen: Generator) -> "AlgebraElement":
        return AlgebraElement({_GENERATOR_MONOMIAL[gen]: Scalar.one()})

    # -- access ------------------------------------------------------------

    def terms(self) -> Iterator[tuple[NormalMonomial, Scalar]]:
        return iter(self._terms.items())

    def coefficient(self, mono: NormalMonomial) -> Scalar:
        return self._terms.get(mono, Scalar.zero())

    def monomials(self) -> list[NormalMonomial]:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "AlgebraElement(0)"
        bits = [f"({coeff}) {mono.text()}" for mono, coeff in sorted(self._terms.items())]
        return "AlgebraElement(" + " + ".join(bits) + ")"

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc = merged.get(mono)
            acc = coeff if acc is None else acc + coeff
            if acc:
                merged[mono] = acc
            else:
                merged.pop(mono, None)
        out = AlgebraElement()
        out._terms = merged
        return out

    def __neg__(self) -> "AlgebraElement":
        out = AlgebraElement()
        out._terms = {mono: -coeff for mono, coeff in self._terms.items()}
        return out

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar: Scalar) -> "AlgebraElement":
        if not scalar:
            return AlgebraElement.zero()
        out = AlgebraElement()
        out._terms = {mono: coeff * scalar for mono, coeff in self._terms.items()}
        return out

    # -- multiplication ------------------------------------------------------

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        total = AlgebraElement.zero()
        for mx, cx in self._terms.items():
            for my, cy in other._terms.items():
                total = total + monomial_mul(mx, my).scale(cx * cy)
        return total

    def star(self) -> "AlgebraElement":
        return star(self)


_GENERATOR_MONOMIAL = {
    Generator.A: NormalMonomial(1, 0, 0),
    Generator.ASTAR: NormalMonomial(-1, 0, 0),
    Generator.C: NormalMonomial(0, 1, 0),
    Generator.CSTAR: NormalMonomial(0, 0, 1),
}


def _shift_cl(element: AlgebraElement, dl: int, dm: int) -> AlgebraElement:
    # right-multiply by c^dl (c*)^dm: c and c* commute with each other and
    # append to the tail of every normal monomial with no q cost
    out = AlgebraElement()
    out._terms = {
        NormalMonomial(mono.k, mono.l + dl, mono.m + dm): coeff
        for mono, coeff in element._terms.items()
    }
    return out


# Memo tables for the mixed-block eliminations.  CPython dict get/set are
# atomic under the GIL; a duplicated insert is harmless, so no lock is held
# while computing entries.
_A_ASTAR_MEMO: dict[tuple[int, int], AlgebraElement] = {}
_ASTAR_A_MEMO: dict[tuple[int, int], AlgebraElement] = {}
_memo_lock = threading.Lock()


def _reduce_a_astar(p: int, r: int) -> AlgebraElement:
    """Normal form of a^p (a*)^r."""
    if p == 0:
        return AlgebraElement.monomial(-r, 0, 0)
    if r == 0:
        return AlgebraElement.monomial(p, 0, 0)
    cached = _A_ASTAR_MEMO.get((p, r))
    if cached is not None:
        return cached
    # a^p a*^r = a^(p-1) (1 - q^2 c*c) a*^(r-1)
    #          = a^(p-1) a*^(r-1) - q^(2r) a^(p-1) a*^(r-1) c* c
    inner = _reduce_a_astar(p - 1, r - 1)
    result = inner - _shift_cl(inner, 1, 1).scale(Scalar.q(2 * r))
    with _memo_lock:
        _A_ASTAR_MEMO[(p, r)] = result
    return result


def _reduce_astar_a(r: int, p: int) -> AlgebraElement:
    """Normal form of (a*)^r a^p."""
    if r == 0:
        return AlgebraElement.monomial(p, 0, 0)
    if p == 0:
        return AlgebraElement.monomial(-r, 0, 0)
    cached = _ASTAR_A_MEMO.get((r, p))
    if cached is not None:
        return cached
    # a*^r a^p = a*^(r-1) (1 - c*c) a^(p-1)
    #          = a*^(r-1) a^(p-1) - q^(-2(p-1)) a*^(r-1) a^(p-1) c* c
    inner = _reduce_astar_a(r - 1, p - 1)
    result = inner - _shift_cl(inner, 1, 1).scale(Scalar.q(-2 * (p - 1)))
    with _memo_lock:
        _ASTAR_A_MEMO[(r, p)] = result
    return result


def monomial_mul(x: NormalMonomial, y: NormalMonomial) -> AlgebraElement:
    """Product eps_x * eps_y expanded on the normal basis.

    Moving y's a-block left through x's c^l (c*)^m tail costs q^(-y.k (l+m));
    the two a-blocks then merge directly (same sign) or are eliminated
    through the mixed-block recursions.
    """
    coeff = Scalar.q(-y.k * (x.l + x.m))
    l, m = x.l + y.l, x.m + y.m
    if x.k >= 0 and y.k <= 0 and x.k and y.k:
        blocks = _reduce_a_astar(x.k, -y.k)
    elif x.k <= 0 and y.k >= 0 and x.k and y.k:
        blocks = _reduce_astar_a(-x.k, y.k)
    else:
        return AlgebraElement.monomial(x.k + y.k, l, m, coeff)
    return _shift_cl(blocks, l, m).scale(coeff)


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def normal_order(word: Word) -> AlgebraElement:
    """Rewrite a word in the generators onto the normal basis."""
    result = AlgebraElement.one()
    for gen, power in word:
        mono = _GENERATOR_MONOMIAL[gen]
        step = AlgebraElement.monomial(mono.k * power, mono.l * power, mono.m * power)
        result = result * step
    return result


def star(x: AlgebraElement) -> AlgebraElement:
    """The involution.  On the basis, eps(k,l,m)* = q^(k(l+m)) eps(-k,m,l);
    scalar conjugation is the identity since q is real and coefficients are
    rational."""
    out = AlgebraElement.zero()
    for mono, coeff in x.terms():
        twist = mono.k * (mono.l + mono.m)
        scal = coeff.conjugate()
        if twist:
            scal = scal * Scalar.q(twist)
        out = out + AlgebraElement.monomial(-mono.k, mono.m, mono.l, scal)
    return out


def is_in_P(x: AlgebraElement) -> bool:
    """True iff x lies in the quantum plane P generated by a and c."""
    return all(mono.m == 0 and mono.k >= 0 for mono, _ in x.terms())


def is_in_Pstar(x: AlgebraElement) -> bool:
    """True iff x lies in P*, generated by a* and c*."""
    return all(mono.l == 0 and mono.k <= 0 for mono, _ in x.terms())


def parse_word(letters: Sequence[Generator]) -> Word:
    """Convenience: a word with all powers 1."""
    return Word([(g, 1) for g in letters])
