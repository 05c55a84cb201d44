"""Exact arithmetic in the supported Euclidean domains.

Three rings are available: the integers, F_p[t] for a prime p, and Q[t].
Integers are plain Python ints; polynomials are immutable :class:`Poly`
values.  Ring objects carry the operations that need to know which ring
an element lives in (unit normalization, Euclidean norm, parsing).
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union


class RingMismatchError(TypeError):
    """Raised when elements of different rings are combined."""


class ElementParseError(ValueError):
    """Raised when an element literal cannot be parsed."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Poly:
    """Dense univariate polynomial, coefficients stored low degree first.

    ``p`` is the characteristic: a prime for F_p[t], 0 for Q[t].
    """

    __slots__ = ("coeffs", "p", "_hash")

    def __init__(self, coeffs: Iterable = (), p: int = 0):
        if p:
            cs = [int(c) % p for c in coeffs]
        else:
            cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.p = p
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list, p: int) -> "Poly":
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.p = p
        obj._hash = None
        return obj

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise RingMismatchError("polynomials over different coefficient fields")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return Poly((other,), self.p)
        if isinstance(other, Fraction) and not self.p:
            return Poly((other,), 0)
        raise RingMismatchError(f"cannot combine polynomial with {type(other).__name__}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                return not self.coeffs
            return self.coeffs == Poly((other,), self.p).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.coeffs))
        return self._hash

    def __neg__(self) -> "Poly":
        if self.p:
            return Poly._raw([(-c) % self.p for c in self.coeffs], self.p)
        return Poly._raw([-c for c in self.coeffs], 0)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        if self.p:
            out = [c % self.p for c in out]
        return Poly._raw(out, self.p)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([], self.p)
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            c = b[0]
            return Poly._raw([x * c % p for x in a] if p else [x * c for x in a], p)
        if p and len(b) > 6:
            return Poly._raw(_kronecker_mul(a, b, p), p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        if self.p:
            out = [c % self.p for c in out]
        return Poly._raw(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly((1,), self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _inv_coeff(self, c):
        if self.p:
            return pow(c, -1, self.p)
        return 1 / c

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly._raw([], self.p), self
        inv = self._inv_coeff(other.lc)
        quot = [0] * (len(rem) - db)
        b = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv
            if self.p:
                c %= self.p
            quot[k] = c
            if c:
                for j, y in enumerate(b):
                    rem[k + j] -= c * y
                if self.p:
                    for j in range(len(b)):
                        rem[k + j] %= self.p
        return Poly._raw(quot, self.p), Poly._raw(rem[:db], self.p)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, p={self.p})"

    def __str__(self) -> str:
        return format_poly(self)


def _kronecker_mul(a: tuple, b: tuple, p: int) -> list:
    """Product over F_p by packing coefficients into one big integer."""
    slot = (2 * (p - 1).bit_length() + len(b).bit_length() + 7) // 8
    A = int.from_bytes(b"".join(c.to_bytes(slot, "little") for c in a), "little")
    B = int.from_bytes(b"".join(c.to_bytes(slot, "little") for c in b), "little")
    n = len(a) + len(b) - 1
    raw = (A * B).to_bytes(n * slot, "little")
    return [int.from_bytes(raw[i * slot:(i + 1) * slot], "little") % p for i in range(n)]


Element = Union[int, Poly]


def _format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_poly(f: Poly, var: str = "t") -> str:
    if not f.coeffs:
        return "0"
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if not c:
            continue
        neg = (not f.p) and c < 0
        mag = -c if neg else c
        if k == 0:
            body = _format_coeff(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        if not terms:
            terms.append(f"-{body}" if neg else body)
        else:
            terms.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(terms)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?:(?P<var>[a-zA-Z])(?:\s*\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


class RingKind(enum.Enum):
    INTEGERS = "Integers"
    POLY_PRIME_FIELD = "PolyOverPrimeField"
    POLY_RATIONALS = "PolyOverRationals"


class Ring:
    """A supported Euclidean domain.  Use :func:`integers` or :func:`poly_ring`."""

    kind: RingKind

    # -- element construction -------------------------------------------------
    def zero(self) -> Element:
        return self.from_int(0)

    def one(self) -> Element:
        return self.from_int(1)

    def from_int(self, n: int) -> Element:
        raise NotImplementedError

    def check(self, *elements) -> None:
        for a in elements:
            if not self.contains(a):
                raise RingMismatchError(f"{a!r} is not an element of {self}")

    def contains(self, a) -> bool:
        raise NotImplementedError

    # -- Euclidean structure --------------------------------------------------
    def norm(self, a: Element) -> int:
        """Euclidean size used for pivoting; zero has norm -1."""
        raise NotImplementedError

    def unit_part(self, a: Element):
        """The unit u with a = u * normalize(a); 1 for zero."""
        raise NotImplementedError

    def unit_inverse(self, u) -> Element:
        raise NotImplementedError

    def normalize(self, a: Element) -> Element:
        return a * self.unit_inverse(self.unit_part(a))

    def is_unit(self, a: Element) -> bool:
        raise NotImplementedError

    def divides(self, a: Element, b: Element) -> bool:
        """True iff a | b."""
        if not a:
            return not b
        return not (b % a)

    def exact_div(self, a: Element, b: Element) -> Element:
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{self.format(b)} does not divide {self.format(a)}")
        return q

    def gcdex(self, a: Element, b: Element) -> tuple[Element, Element, Element]:
        """Extended gcd: returns (g, u, v) with g = u*a + v*b and g unit-normalized."""
        self.check(a, b)
        r0, r1 = a, b
        s0, s1 = self.one(), self.zero()
        t0, t1 = self.zero(), self.one()
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        inv = self.unit_inverse(self.unit_part(r0))
        return r0 * inv, s0 * inv, t0 * inv

    def gcd(self, *elements: Element) -> Element:
        return reduce(lambda x, y: self.gcdex(x, y)[0], elements, self.zero())

    def lcm(self, a: Element, b: Element) -> Element:
        if not a or not b:
            return self.zero()
        return self.normalize(a * b // self.gcd(a, b))

    def part_split(self, d: Element, g: Element) -> tuple[Element, Element]:
        """Split d = a*b with every prime of a dividing g and b coprime to g.

        Both parts are unit-normalized, so d = unit * a * b.
        """
        self.check(d, g)
        if not d or not g:
            raise ValueError("part_split needs nonzero arguments")
        a, b = self.one(), self.normalize(d)
        while True:
            c = self.gcd(b, g)
            if self.is_unit(c):
                return self.normalize(a), b
            while True:
                # strip every power of c before recomputing the gcd
                q, r = divmod(b, c)
                if r:
                    break
                b, a = q, a * c
            b = self.normalize(b)

    def g_part(self, d: Element, g: Element) -> Element:
        """The g-primary part of d, with the limiting cases g = 0 (everything) and g a unit (1)."""
        if not g:
            return self.normalize(d)
        if not d:
            return self.zero()
        return self.part_split(d, g)[0]

    def coprime_part(self, d: Element, g: Element) -> Element:
        if not g:
            return self.one()
        if not d:
            return self.zero()
        return self.part_split(d, g)[1]

    def radical_compare(self, a: Element, b: Element) -> "RadicalRelation":
        """Compare prime supports of a and b by gcd exhaustion (no factoring)."""
        self.check(a, b)
        if not a or not b:
            raise ValueError("radical_compare needs nonzero arguments")
        a_in_b = self.is_unit(self.part_split(a, b)[1])
        b_in_a = self.is_unit(self.part_split(b, a)[1])
        if a_in_b and b_in_a:
            return RadicalRelation.EQUAL
        if a_in_b:
            return RadicalRelation.SUPPORT_OF_A_IN_B
        if b_in_a:
            return RadicalRelation.SUPPORT_OF_B_IN_A
        return RadicalRelation.INCOMPARABLE

    def same_radical(self, a: Element, b: Element) -> bool:
        """Radical equality including the degenerate elements 0 and units."""
        if not a or not b:
            return not a and not b
        if self.is_unit(a) or self.is_unit(b):
            return self.is_unit(a) and self.is_unit(b)
        return self.radical_compare(a, b) is RadicalRelation.EQUAL

    def radical_exponent(self, x: Element, g: Element) -> int | None:
        """Smallest k >= 0 with g | x^k, or None when x is not in Rad(g)."""
        self.check(x, g)
        if self.is_unit(g):
            return 0
        if not g:
            return 1 if not x else None
        if not x:
            return 1
        if not self.is_unit(self.part_split(g, x)[1]):
            return None
        k, power = 1, x
        while not self.divides(g, power):
            k += 1
            power = power * x
        return k

    def adic_length(self, d: Element, x: Element) -> int:
        """Smallest k >= 0 with (x-part of d) | x^k; d and x must be nonzero."""
        if not d or not x:
            raise ValueError("adic_length needs nonzero arguments")
        a = self.g_part(d, x)
        k, power = 0, self.one()
        while not self.divides(a, power):
            k += 1
            power = power * x
        return k

    # -- literals ------------------------------------------------------------
    def parse(self, text) -> Element:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        raise NotImplementedError

    def random_element(self, rng, size: int) -> Element:
        raise NotImplementedError


class RadicalRelation(enum.Enum):
    EQUAL = "Equal"
    SUPPORT_OF_A_IN_B = "SupportOfAInB"
    SUPPORT_OF_B_IN_A = "SupportOfBInA"
    INCOMPARABLE = "Incomparable"


class IntegerRing(Ring):
    kind = RingKind.INTEGERS

    def from_int(self, n: int) -> int:
        return int(n)

    def contains(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool)

    def norm(self, a: int) -> int:
        return abs(a) if a else -1

    def unit_part(self, a: int) -> int:
        return -1 if a < 0 else 1

    def unit_inverse(self, u: int) -> int:
        return u

    def normalize(self, a: int) -> int:
        return abs(a)

    def is_unit(self, a: int) -> bool:
        return a in (1, -1)

    def parse(self, text) -> int:
        if isinstance(text, int) and not isinstance(text, bool):
            return text
        s = str(text).strip()
        if not re.fullmatch(r"[+-]?\s*\d+", s):
            raise ElementParseError(f"invalid integer literal {text!r}")
        return int(s.replace(" ", ""))

    def format(self, a: int) -> str:
        return str(a)

    def random_element(self, rng, size: int) -> int:
        return rng.randint(-size, size)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash("Z")

    def __str__(self) -> str:
        return "Z"

    __repr__ = __str__


class PolyRing(Ring):
    """F_p[t] for prime p, or Q[t] when p == 0."""

    def __init__(self, p: int = 0):
        if p and not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("characteristic must be below 2^31")
        self.p = p
        self.kind = RingKind.POLY_PRIME_FIELD if p else RingKind.POLY_RATIONALS

    def from_int(self, n: int) -> Poly:
        return Poly((n,), self.p)

    def contains(self, a) -> bool:
        return isinstance(a, Poly) and a.p == self.p

    def t(self) -> Poly:
        return Poly((0, 1), self.p)

    def norm(self, a: Poly) -> int:
        return a.degree

    def unit_part(self, a: Poly) -> Poly:
        return Poly((a.lc if a else 1,), self.p)

    def unit_inverse(self, u: Poly) -> Poly:
        if u.degree != 0:
            raise ArithmeticError(f"{u} is not a unit")
        return Poly((u._inv_coeff(u.coeffs[0]),), self.p)

    def is_unit(self, a: Poly) -> bool:
        return a.degree == 0

    def parse(self, text) -> Poly:
        if isinstance(text, Poly):
            self.check(text)
            return text
        if isinstance(text, int) and not isinstance(text, bool):
            return self.from_int(text)
        s = str(text).strip()
        if not s:
            raise ElementParseError("empty polynomial literal")
        coeffs: dict[int, Fraction] = {}
        var = None
        pos = 0
        first = True
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos:
                raise ElementParseError(f"cannot parse {s!r} at column {pos + 1}")
            if m.group("sign") is None and not first:
                raise ElementParseError(f"missing operator in {s!r} at column {pos + 1}")
            if m.group("coef") is None and m.group("var") is None:
                raise ElementParseError(f"dangling sign in {s!r} at column {pos + 1}")
            if m.group("star") and m.group("var") is None:
                raise ElementParseError(f"'*' without variable in {s!r}")
            if m.group("var"):
                if var is None:
                    var = m.group("var")
                elif m.group("var") != var:
                    raise ElementParseError(f"mixed variables in {s!r}")
                exp = int(m.group("exp")) if m.group("exp") else 1
            else:
                if m.group("exp"):
                    raise ElementParseError(f"exponent without variable in {s!r}")
                exp = 0
            coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
            if m.group("sign") == "-":
                coef = -coef
            coeffs[exp] = coeffs.get(exp, Fraction(0)) + coef
            first = False
            pos = m.end()
        top = max(coeffs)
        dense = [coeffs.get(k, Fraction(0)) for k in range(top + 1)]
        if self.p:
            out = []
            for c in dense:
                if c.denominator % self.p == 0:
                    raise ElementParseError(f"denominator divisible by {self.p} in {s!r}")
                out.append(c.numerator * pow(c.denominator, -1, self.p))
            return Poly(out, self.p)
        return Poly(dense, 0)

    def format(self, a: Poly) -> str:
        return format_poly(a)

    def random_element(self, rng, size: int) -> Poly:
        deg = rng.randint(0, size)
        if self.p:
            return Poly([rng.randrange(self.p) for _ in range(deg + 1)], self.p)
        return Poly([rng.randint(-3, 3) for _ in range(deg + 1)], 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("poly", self.p))

    def __str__(self) -> str:
        return f"F{self.p}[t]" if self.p else "Q[t]"

    __repr__ = __str__


ZZ = IntegerRing()


def integers() -> IntegerRing:
    return ZZ


def poly_ring(p: int = 0) -> PolyRing:
    return PolyRing(p)


def parse_ring(spec: str) -> Ring:
    """Parse ``Z``, ``Q[t]``, ``F5[t]`` or ``GF(5)[t]``."""
    s = spec.strip().replace(" ", "")
    if s in ("Z", "ZZ", "Integers"):
        return ZZ
    if s in ("Q[t]", "QQ[t]"):
        return PolyRing(0)
    m = re.fullmatch(r"(?:F|GF\()(\d+)\)?\[t\]", s)
    if m:
        return PolyRing(int(m.group(1)))
    raise ValueError(f"unknown ring kind {spec!r}")


def euclid_gcd(ring: Ring, a: Element, b: Element) -> tuple[Element, Element, Element]:
    return ring.gcdex(a, b)


def product(ring: Ring, elements: Sequence[Element]) -> Element:
    return reduce(lambda x, y: x * y, elements, ring.one())
