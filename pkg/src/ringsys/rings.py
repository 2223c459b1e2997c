"""Exact scalar arithmetic for the supported coefficient rings.

Four ring families sit behind one descriptor interface: the rationals,
prime fields GF(p), the integers, and quotients Q[x1,...,xk]/(g) of a
rational polynomial ring by a single relation.  Values are immutable
and kept canonical, so equality of elements is equality of payloads:
fractions are reduced with positive denominator, residues lie in
[0, p), and quotient-ring polynomials carry no monomial divisible by
the relation's leading monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DescriptorMismatch, ElementSyntaxError

Monomial = tuple[int, ...]


def grlex_key(monomial: Monomial) -> tuple:
    """Sort key realising the graded-lex order.

    Monomials compare by total degree first; ties are broken
    lexicographically with later-declared variables taking precedence.
    Under this order z^2 is the leading monomial of x^2+y^2+z^2-1 over
    variables (x, y, z).
    """
    return (sum(monomial), monomial[::-1])


@dataclass(frozen=True)
class Poly:
    """Multivariate polynomial with rational coefficients.

    Terms are stored sorted in descending graded-lex order with zero
    coefficients dropped, which makes structural equality semantic
    equality.
    """

    nvars: int
    terms: tuple[tuple[Monomial, Fraction], ...]

    @staticmethod
    def from_dict(nvars: int, coeffs: dict[Monomial, Fraction]) -> "Poly":
        terms = tuple(
            (m, Fraction(c))
            for m, c in sorted(coeffs.items(), key=lambda t: grlex_key(t[0]), reverse=True)
            if c != 0
        )
        return Poly(nvars, terms)

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, ())

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        return Poly.from_dict(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(index: int, nvars: int) -> "Poly":
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return Poly.from_dict(nvars, {mono: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m, _ in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self.terms[0][1]

    def leading(self) -> tuple[Monomial, Fraction]:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def __add__(self, other: "Poly") -> "Poly":
        coeffs = dict(self.terms)
        for m, c in other.terms:
            s = coeffs.get(m, Fraction(0)) + c
            if s:
                coeffs[m] = s
            else:
                coeffs.pop(m, None)
        return Poly.from_dict(self.nvars, coeffs)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        coeffs: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                s = coeffs.get(m, Fraction(0)) + c1 * c2
                if s:
                    coeffs[m] = s
                else:
                    coeffs.pop(m, None)
        return Poly.from_dict(self.nvars, coeffs)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, tuple((m, coef * c) for m, coef in self.terms))


def _monomial_divides(d: Monomial, m: Monomial) -> bool:
    return all(a <= b for a, b in zip(d, m))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
_INT_LIT = re.compile(r"[+-]?\d+\Z")
_RAT_LIT = re.compile(r"([+-]?\d+)(?:/(\d+))?\Z")


class RingDescriptor:
    """Common interface of all supported rings.

    Payloads are plain Python values (Fraction, int, or Poly); the
    descriptor supplies the operations.  All methods are pure and
    descriptors are immutable, so instances may be shared freely.
    """

    kind: str

    @property
    def is_field(self) -> bool:
        return False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_one(self, a) -> bool:
        return a == self.one()

    def try_invert_payload(self, a):
        """Inverse payload, or None when no inverse is certified."""
        raise NotImplementedError

    def div(self, a, b):
        """Exact division, only available over fields."""
        inv = self.try_invert_payload(b)
        if inv is None:
            raise ZeroDivisionError(f"{self.format_payload(b)} is not a unit in {self}")
        return self.mul(a, inv)

    def from_int(self, n: int):
        raise NotImplementedError

    def parse_payload(self, text: str):
        raise NotImplementedError

    def format_payload(self, a) -> str:
        raise NotImplementedError

    def element(self, value) -> "RingElement":
        """Wrap a payload, an int, or a literal string as an element."""
        if isinstance(value, RingElement):
            if value.ring != self:
                raise DescriptorMismatch(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, str):
            return RingElement(self, self.parse_payload(value))
        if isinstance(value, int):
            return RingElement(self, self.from_int(value))
        return RingElement(self, self.canonical_payload(value))

    def canonical_payload(self, value):
        return value

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Rationals(RingDescriptor):
    kind: str = "Q"

    @property
    def is_field(self) -> bool:
        return True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def try_invert_payload(self, a):
        if a == 0:
            return None
        return 1 / Fraction(a)

    def from_int(self, n: int):
        return Fraction(n)

    def canonical_payload(self, value):
        return Fraction(value)

    def parse_payload(self, text: str):
        m = _RAT_LIT.match(text.strip())
        if not m:
            raise ElementSyntaxError(f"bad rational literal {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ElementSyntaxError(f"zero denominator in {text!r}")
        return Fraction(num, den)

    def format_payload(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class Integers(RingDescriptor):
    kind: str = "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def try_invert_payload(self, a):
        if a in (1, -1):
            return a
        return None

    def from_int(self, n: int):
        return n

    def parse_payload(self, text: str):
        if not _INT_LIT.match(text.strip()):
            raise ElementSyntaxError(f"bad integer literal {text!r}")
        return int(text)

    def format_payload(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class PrimeField(RingDescriptor):
    p: int
    kind: str = "GF"

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return True

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def try_invert_payload(self, a):
        if a % self.p == 0:
            return None
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def canonical_payload(self, value):
        return int(value) % self.p

    def parse_payload(self, text: str):
        if not _INT_LIT.match(text.strip()):
            raise ElementSyntaxError(f"bad residue literal {text!r}")
        return int(text) % self.p

    def format_payload(self, a) -> str:
        return str(a % self.p)

    def __str__(self) -> str:
        return f"GF({self.p})"


_POLY_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^]))"
)


@dataclass(frozen=True)
class PolyQuotient(RingDescriptor):
    """Q[x1,...,xk]/(g) with a fixed graded-lex monomial order.

    Variables are declared in increasing precedence: the last name is
    the largest, so the order (and hence every normal form) is pinned
    by the descriptor itself.  Unit detection is sound but incomplete:
    only nonzero constants are certified invertible.  Invertibility of
    anything else must be witnessed by an explicit inverse.
    """

    variables: tuple[str, ...]
    relation: Poly
    kind: str = "poly_quotient"

    def __post_init__(self):
        if not self.variables:
            raise ValueError("quotient ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for name in self.variables:
            if not _IDENT.match(name):
                raise ValueError(f"bad variable name {name!r}")
        if self.relation.nvars != len(self.variables):
            raise ValueError("relation arity does not match the variable list")
        if self.relation.is_zero or self.relation.is_constant:
            raise ValueError("relation must be nonzero and non-constant")
        # Leading coefficient is a nonzero rational, hence invertible.

    def zero(self):
        return Poly.zero(len(self.variables))

    def one(self):
        return Poly.const(len(self.variables), 1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return a.is_zero

    def reduce(self, p: Poly) -> Poly:
        """Normal form of p modulo the relation.

        Division by a single polynomial is confluent, so the result
        does not depend on the reduction strategy; reduce is idempotent
        and a ring homomorphism.
        """
        if p.nvars != len(self.variables):
            raise ValueError("polynomial arity does not match the ring")
        lead_m, lead_c = self.relation.leading()
        tail = Poly(p.nvars, self.relation.terms[1:])
        coeffs = dict(p.terms)
        while True:
            target = None
            for m in sorted(coeffs, key=grlex_key, reverse=True):
                if _monomial_divides(lead_m, m):
                    target = m
                    break
            if target is None:
                break
            c = coeffs.pop(target)
            shift = tuple(a - b for a, b in zip(target, lead_m))
            # target  ->  -(tail / lead_c) shifted by the quotient monomial
            for m, tc in tail.terms:
                mm = tuple(a + b for a, b in zip(m, shift))
                s = coeffs.get(mm, Fraction(0)) - c * tc / lead_c
                if s:
                    coeffs[mm] = s
                else:
                    coeffs.pop(mm, None)
        return Poly.from_dict(p.nvars, coeffs)

    def try_invert_payload(self, a):
        if a.is_zero:
            return None
        if a.is_constant:
            return Poly.const(a.nvars, 1 / a.constant_value())
        return None

    def from_int(self, n: int):
        return Poly.const(len(self.variables), n)

    def canonical_payload(self, value):
        if isinstance(value, Poly):
            return self.reduce(value)
        return Poly.const(len(self.variables), Fraction(value))

    def var(self, name: str) -> Poly:
        return Poly.variable(self.variables.index(name), len(self.variables))

    def parse_payload(self, text: str):
        return self.reduce(parse_polynomial(text, self.variables))

    def format_payload(self, a) -> str:
        return format_polynomial(a, self.variables)

    def __str__(self) -> str:
        rel = format_polynomial(self.relation, self.variables)
        return f"Q[{','.join(self.variables)}]/({rel})"


@dataclass(frozen=True)
class RingElement:
    """A scalar tagged with its ring.

    Arithmetic between elements of different rings raises
    DescriptorMismatch rather than coercing.
    """

    ring: RingDescriptor
    value: object

    def _check(self, other: "RingElement") -> None:
        if not isinstance(other, RingElement):
            raise TypeError("expected a RingElement")
        if other.ring != self.ring:
            raise DescriptorMismatch(f"cannot mix {self.ring} with {other.ring}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, self.ring.neg(self.value))

    @property
    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __str__(self) -> str:
        return self.ring.format_payload(self.value)


def try_invert(a: RingElement) -> Optional[RingElement]:
    """Inverse of a, or None when the ring cannot certify a unit."""
    inv = a.ring.try_invert_payload(a.value)
    if inv is None:
        return None
    return RingElement(a.ring, inv)


def parse_polynomial(text: str, variables: tuple[str, ...]) -> Poly:
    """Parse an expanded polynomial like ``x^2*y - 3/2*z + 1``.

    Unknown variables, malformed exponents, and stray tokens are
    rejected.  No parentheses: input must already be a sum of terms.
    """
    nvars = len(variables)
    index = {name: i for i, name in enumerate(variables)}
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ElementSyntaxError(f"unexpected character at {text[pos:].strip()[:10]!r}")
            break
        pos = m.end()
        for group in ("num", "name", "op"):
            if m.group(group) is not None:
                tokens.append((group, m.group(group)))
                break
    if not tokens:
        raise ElementSyntaxError("empty polynomial literal")

    coeffs: dict[Monomial, Fraction] = {}
    i = 0

    def take_rational(j: int) -> tuple[Fraction, int]:
        num = int(tokens[j][1])
        j += 1
        if j + 1 < len(tokens) and tokens[j] == ("op", "/") and tokens[j + 1][0] == "num":
            den = int(tokens[j + 1][1])
            if den == 0:
                raise ElementSyntaxError("zero denominator")
            return Fraction(num, den), j + 2
        return Fraction(num), j

    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ElementSyntaxError("dangling sign")
        coeff = Fraction(sign)
        expo = [0] * nvars
        expect_factor = True
        while expect_factor:
            kind, tok = tokens[i]
            if kind == "num":
                value, i = take_rational(i)
                coeff *= value
            elif kind == "name":
                if tok not in index:
                    raise ElementSyntaxError(f"unknown variable {tok!r}")
                power = 1
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "num":
                        raise ElementSyntaxError("malformed exponent")
                    power = int(tokens[i][1])
                    i += 1
                expo[index[tok]] += power
            else:
                raise ElementSyntaxError(f"unexpected operator {tok!r}")
            expect_factor = False
            if i < len(tokens) and tokens[i] == ("op", "*"):
                i += 1
                if i >= len(tokens):
                    raise ElementSyntaxError("dangling '*'")
                expect_factor = True
        if i < len(tokens) and tokens[i] not in (("op", "+"), ("op", "-")):
            raise ElementSyntaxError(f"expected '+', '-' or end, found {tokens[i][1]!r}")
        mono = tuple(expo)
        s = coeffs.get(mono, Fraction(0)) + coeff
        if s:
            coeffs[mono] = s
        else:
            coeffs.pop(mono, None)
    return Poly.from_dict(nvars, coeffs)


def format_polynomial(p: Poly, variables: tuple[str, ...]) -> str:
    """Canonical text form, descending graded-lex, e.g. ``z^2 - x*y + 1``."""
    if p.is_zero:
        return "0"
    pieces = []
    for n, (mono, coeff) in enumerate(p.terms):
        factors = []
        for name, e in zip(variables, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        if factors and mag == 1:
            body = "*".join(factors)
        elif factors:
            body = "*".join([str(mag)] + factors)
        else:
            body = str(mag)
        if n == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"{' - ' if coeff < 0 else ' + '}{body}")
    return "".join(pieces)


def descriptor_to_dict(ring: RingDescriptor) -> dict:
    """JSON-able form of a descriptor; inverse of descriptor_from_dict."""
    if isinstance(ring, Rationals):
        return {"kind": "Q"}
    if isinstance(ring, Integers):
        return {"kind": "Z"}
    if isinstance(ring, PrimeField):
        return {"kind": "GF", "p": ring.p}
    if isinstance(ring, PolyQuotient):
        return {
            "kind": "poly_quotient",
            "vars": list(ring.variables),
            "relation": format_polynomial(ring.relation, ring.variables),
        }
    raise TypeError(f"unknown descriptor {ring!r}")


def descriptor_from_dict(data: dict) -> RingDescriptor:
    kind = data.get("kind")
    if kind == "Q":
        return Rationals()
    if kind == "Z":
        return Integers()
    if kind == "GF":
        return PrimeField(int(data["p"]))
    if kind == "poly_quotient":
        variables = tuple(data["vars"])
        relation = parse_polynomial(data["relation"], variables)
        return PolyQuotient(variables, relation)
    raise ElementSyntaxError(f"unknown ring kind {kind!r}")
