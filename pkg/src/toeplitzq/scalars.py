"""Exact coefficient arithmetic for the whole engine.

A :class:`Scalar` is a Laurent polynomial in the deformation parameter ``q``
over the rationals, optionally extended by a formal symbol ``h`` whose square
plays the role of Planck's constant.  ``q`` is invertible, ``h`` is not.

Scalars are stored canonically as a map ``(qexp, hexp) -> Fraction`` with no
zero coefficients, so equality of maps is equality in the ring.  All values
are immutable; every operation returns a fresh Scalar.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union


class DivisionByZeroError(ZeroDivisionError):
    """Division of a Scalar by the zero Scalar."""


class NotDivisibleError(ArithmeticError):
    """Exact division was requested but the quotient is not in the ring."""


class ZeroQError(ValueError):
    """Numeric evaluation at q = 0, which is outside the Laurent ring."""


RationalLike = Union[int, Fraction]

# term key: (exponent of q, exponent of h); h exponents are never negative
Key = tuple[int, int]


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Scalar:
    """An element of Q[q, q^-1][h] in canonical form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, RationalLike] | None = None):
        canonical: dict[Key, Fraction] = {}
        if terms:
            for (qexp, hexp), coeff in terms.items():
                if hexp < 0:
                    raise ValueError("h exponent must be nonnegative")
                coeff = _as_fraction(coeff)
                if coeff:
                    acc = canonical.get((qexp, hexp), Fraction(0)) + coeff
                    if acc:
                        canonical[(qexp, hexp)] = acc
                    else:
                        canonical.pop((qexp, hexp), None)
        self._terms = canonical

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return Scalar()

    @staticmethod
    def one() -> "Scalar":
        return Scalar({(0, 0): 1})

    @staticmethod
    def of(value: RationalLike) -> "Scalar":
        """Embed a rational number."""
        return Scalar({(0, 0): _as_fraction(value)})

    @staticmethod
    def q(exp: int = 1) -> "Scalar":
        return Scalar({(exp, 0): 1})

    @staticmethod
    def h(exp: int = 1) -> "Scalar":
        return Scalar({(0, exp): 1})

    @staticmethod
    def term(coeff: RationalLike, qexp: int = 0, hexp: int = 0) -> "Scalar":
        return Scalar({(qexp, hexp): coeff})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_one(self) -> bool:
        return self._terms == {(0, 0): Fraction(1)}

    def has_h(self) -> bool:
        return any(hexp for _, hexp in self._terms)

    def terms(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            acc = merged.get(key, Fraction(0)) + coeff
            if acc:
                merged[key] = acc
            else:
                merged.pop(key, None)
        result = Scalar()
        result._terms = merged
        return result

    def __neg__(self) -> "Scalar":
        result = Scalar()
        result._terms = {key: -coeff for key, coeff in self._terms.items()}
        return result

    def __sub__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        product: dict[Key, Fraction] = {}
        for (q1, h1), c1 in self._terms.items():
            for (q2, h2), c2 in other._terms.items():
                key = (q1 + q2, h1 + h2)
                acc = product.get(key, Fraction(0)) + c1 * c2
                if acc:
                    product[key] = acc
                else:
                    product.pop(key, None)
        result = Scalar()
        result._terms = product
        return result

    def __pow__(self, exp: int) -> "Scalar":
        if exp < 0:
            raise ValueError("use exact_div for inverses; negative powers are not generic")
        result = Scalar.one()
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugation; the identity here since q is real and all
        coefficients are rational.  Exposed so the sesquilinear contracts in
        the inner-product layer are visible at the call sites."""
        return self

    def exact_div(self, other: "Scalar") -> "Scalar":
        """Return z with z * other == self, or raise NotDivisibleError.

        q is a unit, so q-exponents of the quotient may be negative; h is a
        formal (non-invertible) symbol, so its exponents may not.
        """
        if other.is_zero():
            raise DivisionByZeroError("division by the zero Scalar")
        if self.is_zero():
            return Scalar.zero()

        min_q_x = min(q for q, _ in self._terms)
        min_h_x = min(h for _, h in self._terms)
        min_q_y = min(q for q, _ in other._terms)
        min_h_y = min(h for _, h in other._terms)
        h_shift = min_h_x - min_h_y
        if h_shift < 0:
            raise NotDivisibleError("divisor carries a higher power of h than the dividend")
        q_shift = min_q_x - min_q_y

        # Normalized copies with nonnegative exponents and valuation 0 in
        # both variables; then greedy single-divisor division in deglex order
        # terminates, and any non-divisible leading term proves the quotient
        # is not in the ring.
        num = {(q - min_q_x, h - min_h_x): c for (q, h), c in self._terms.items()}
        den = {(q - min_q_y, h - min_h_y): c for (q, h), c in other._terms.items()}

        def deglex(key: Key) -> tuple[int, int, int]:
            q, h = key
            return (q + h, h, q)

        lt_den = max(den, key=deglex)
        lc_den = den[lt_den]
        quotient: dict[Key, Fraction] = {}
        remainder = dict(num)
        while remainder:
            lt_rem = max(remainder, key=deglex)
            dq = lt_rem[0] - lt_den[0]
            dh = lt_rem[1] - lt_den[1]
            if dq < 0 or dh < 0:
                raise NotDivisibleError("quotient is not a polynomial in the ring")
            coeff = remainder[lt_rem] / lc_den
            quotient[(dq, dh)] = coeff
            for (q, h), c in den.items():
                key = (q + dq, h + dh)
                acc = remainder.get(key, Fraction(0)) - coeff * c
                if acc:
                    remainder[key] = acc
                else:
                    remainder.pop(key, None)
        return Scalar({(q + q_shift, h + h_shift): c for (q, h), c in quotient.items()})

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.exact_div(other)

    # -- evaluation --------------------------------------------------------

    def eval(self, q0: RationalLike, hbar0: RationalLike = 0) -> Union[Fraction, float]:
        """Evaluate at numeric q0 and hbar0 (with h = sqrt(hbar0)).

        Returns an exact Fraction when every h-exponent is even; otherwise a
        float obtained through one floating square root per odd power.
        """
        q0 = _as_fraction(q0)
        hbar0 = _as_fraction(hbar0)
        if q0 == 0:
            raise ZeroQError("q must be evaluated at a nonzero rational")
        if hbar0 < 0:
            raise ValueError("hbar must be nonnegative")
        even = Fraction(0)
        odd = Fraction(0)
        for (qexp, hexp), coeff in self._terms.items():
            value = coeff * q0 ** qexp * hbar0 ** (hexp // 2)
            if hexp % 2:
                odd += value
            else:
                even += value
        if odd == 0:
            return even
        return float(even) + float(odd) * math.sqrt(hbar0)

    def substitute_h(self, hbar0: RationalLike) -> "Scalar":
        """Substitute h^2 = hbar0, staying in the ring.

        Even powers of h always substitute exactly.  Odd powers need
        sqrt(hbar0) rational, i.e. hbar0 a perfect square of a rational;
        otherwise NotDivisibleError is raised rather than losing exactness.
        """
        hbar0 = _as_fraction(hbar0)
        if hbar0 < 0:
            raise ValueError("hbar must be nonnegative")
        root: Fraction | None = None
        if any(hexp % 2 for _, hexp in self._terms):
            num_root = math.isqrt(hbar0.numerator)
            den_root = math.isqrt(hbar0.denominator)
            if num_root * num_root != hbar0.numerator or den_root * den_root != hbar0.denominator:
                raise NotDivisibleError(
                    "odd power of h needs sqrt(hbar) rational; "
                    f"{hbar0} is not a perfect square"
                )
            root = Fraction(num_root, den_root)
        out: dict[Key, Fraction] = {}
        for (qexp, hexp), coeff in self._terms.items():
            value = coeff * hbar0 ** (hexp // 2)
            if hexp % 2:
                value *= root  # type: ignore[operator]
            key = (qexp, 0)
            acc = out.get(key, Fraction(0)) + value
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        result = Scalar()
        result._terms = out
        return result

    # -- equality / hashing ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- text and JSON forms -----------------------------------------------

    def to_text(self) -> str:
        """Canonical text form, terms sorted by (h-exponent, q-exponent)."""
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for (qexp, hexp) in sorted(self._terms, key=lambda k: (k[1], k[0])):
            coeff = self._terms[(qexp, hexp)]
            body = _term_text(abs(coeff), qexp, hexp)
            if not pieces:
                pieces.append(body if coeff > 0 else "-" + body)
            else:
                pieces.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()})"

    def __str__(self) -> str:
        return self.to_text()

    def to_json(self) -> list[dict]:
        return [
            {"qexp": qexp, "hexp": hexp, "num": c.numerator, "den": c.denominator}
            for (qexp, hexp), c in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]

    @staticmethod
    def from_json(data: Iterable[Mapping]) -> "Scalar":
        terms: dict[Key, Fraction] = {}
        for entry in data:
            key = (int(entry["qexp"]), int(entry["hexp"]))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(int(entry["num"]), int(entry["den"]))
        return Scalar(terms)


def _term_text(coeff: Fraction, qexp: int, hexp: int) -> str:
    parts: list[str] = []
    if qexp == 1:
        parts.append("q")
    elif qexp != 0:
        parts.append(f"q^{qexp}")
    if hexp == 1:
        parts.append("h")
    elif hexp != 0:
        parts.append(f"h^{hexp}")
    if not parts or coeff != 1:
        parts.insert(0, str(coeff))
    return "*".join(parts)


ZERO = Scalar.zero()
ONE = Scalar.one()
Q = Scalar.q()
