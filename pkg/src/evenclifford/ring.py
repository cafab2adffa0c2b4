"""Exact coefficient rings.

Elements are plain Python values already in canonical form:

* ``z``         -- ``int``
* ``q``         -- ``fractions.Fraction``
* ``fp:p``      -- ``int`` in ``range(p)``
* ``zmod:p^k``  -- ``int`` in ``range(p**k)``
* ``dual:p``    -- :class:`Dual` ``(a, b)`` meaning ``a + b*eps`` with ``eps**2 = 0``

A :class:`Ring` object carries the arithmetic.  Two ring objects compare equal
iff their descriptor strings agree.
"""

from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import DescriptorError, InfiniteRing, NoCanonicalHom, NonUnit

MAX_PRIME = 97


class Dual(NamedTuple):
    a: int
    b: int


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


class Ring:
    """Common interface.  Subclasses fill in the arithmetic."""

    descriptor: str
    is_finite = False
    is_field = False
    characteristic = 0

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Ring) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"Ring({self.descriptor!r})"

    def __reduce__(self):
        return (parse_ring, (self.descriptor,))

    # -- derived arithmetic -------------------------------------------------
    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def is_zero(self, x) -> bool:
        return x == self.zero

    def inv(self, x):
        ok, inverse = self.is_unit(x)
        if not ok:
            raise NonUnit(f"{self.format(x)} is not a unit of {self.descriptor}")
        return inverse

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def sum(self, xs):
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def sort_key(self, x):
        return x

    def format(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        text = text.strip()
        try:
            if "/" in text:
                return self(Fraction(text))
            return self(int(text))
        except (ValueError, ZeroDivisionError, NonUnit) as exc:
            raise DescriptorError(f"bad element {text!r} for {self.descriptor}") from exc

    # -- enumeration --------------------------------------------------------
    def elements(self) -> Iterator:
        raise InfiniteRing(f"{self.descriptor} is infinite")

    @property
    def size(self) -> int:
        raise InfiniteRing(f"{self.descriptor} is infinite")

    def units(self) -> list:
        return [x for x in self.elements() if self.is_unit(x)[0]]

    def unit_square_roots(self, x) -> list:
        if not self.is_unit(x)[0]:
            raise NonUnit(f"{self.format(x)} is not a unit of {self.descriptor}")
        return [y for y in self.elements() if self.mul(y, y) == x]


class IntegerRing(Ring):
    descriptor = "z"

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise DescriptorError(f"{x} is not an integer")
            return int(x.numerator)
        if isinstance(x, str):
            return self.parse(x)
        return int(x)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        if x in (1, -1):
            return True, x
        return False, None

    def unit_square_roots(self, x):
        if not self.is_unit(x)[0]:
            raise NonUnit(f"{x} is not a unit of z")
        return [-1, 1] if x == 1 else []

    def random(self, rng: random.Random, bound: int = 9):
        return rng.randint(-bound, bound)


class RationalField(Ring):
    descriptor = "q"
    is_field = True

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        if x == 0:
            return False, None
        return True, 1 / x

    def sort_key(self, x):
        return (x.numerator, x.denominator)

    def unit_square_roots(self, x):
        if x == 0:
            raise NonUnit("0 is not a unit of q")
        if x < 0:
            return []
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn != x.numerator or rd * rd != x.denominator:
            return []
        r = Fraction(rn, rd)
        return [-r, r]

    def random(self, rng: random.Random, bound: int = 9):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 4))


class ResidueRing(Ring):
    """``Z/p^k``; the prime field ``fp:p`` is the ``k = 1`` case with its own descriptor."""

    is_finite = True

    def __init__(self, p: int, k: int = 1, prime_field: bool = False):
        if not _is_prime(p) or p > MAX_PRIME:
            raise DescriptorError(f"p must be a prime <= {MAX_PRIME}, got {p}")
        if k < 1 or k > 4 or (k > 2 and p > 5):
            raise DescriptorError(f"exponent k={k} not allowed for p={p}")
        if prime_field and k != 1:
            raise DescriptorError("prime fields have k = 1")
        self.p = p
        self.k = k
        self.n = p**k
        self.characteristic = self.n
        self.is_field = k == 1
        self.descriptor = f"fp:{p}" if prime_field else f"zmod:{p}^{k}"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.n, x.denominator % self.n)
        return int(x) % self.n

    def add(self, x, y):
        return (x + y) % self.n

    def sub(self, x, y):
        return (x - y) % self.n

    def neg(self, x):
        return -x % self.n

    def mul(self, x, y):
        return x * y % self.n

    def is_unit(self, x):
        if x % self.p == 0:
            return False, None
        return True, pow(x, -1, self.n)

    def elements(self):
        return iter(range(self.n))

    @property
    def size(self):
        return self.n

    def random(self, rng: random.Random):
        return rng.randrange(self.n)


class DualNumbers(Ring):
    """``F_p[eps]/(eps^2)``."""

    is_finite = True

    def __init__(self, p: int):
        if not _is_prime(p) or p > MAX_PRIME:
            raise DescriptorError(f"p must be a prime <= {MAX_PRIME}, got {p}")
        self.p = p
        self.characteristic = p
        self.descriptor = f"dual:{p}"

    def __call__(self, x):
        p = self.p
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, tuple):
            return Dual(int(x[0]) % p, int(x[1]) % p)
        if isinstance(x, Fraction):
            return self.div(self(x.numerator), self(x.denominator))
        return Dual(int(x) % p, 0)

    def add(self, x, y):
        p = self.p
        return Dual((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def neg(self, x):
        p = self.p
        return Dual(-x[0] % p, -x[1] % p)

    def mul(self, x, y):
        p = self.p
        return Dual(x[0] * y[0] % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def is_unit(self, x):
        a, b = x
        if a % self.p == 0:
            return False, None
        ai = pow(a, -1, self.p)
        return True, Dual(ai, -b * ai * ai % self.p)

    def format(self, x):
        a, b = x
        if b == 0:
            return str(a)
        return f"{a}+{b}e"

    _DUAL_RE = re.compile(r"^\s*(?:(-?\d+)\s*([+-])\s*)?(\d*)\s*e\s*$")

    def parse(self, text: str):
        if "e" not in text:
            return super().parse(text)
        m = self._DUAL_RE.match(text)
        if not m:
            raise DescriptorError(f"bad dual number {text!r}")
        a = int(m.group(1) or 0)
        b = int(m.group(3) or 1)
        if m.group(2) == "-":
            b = -b
        return self((a, b))

    def elements(self):
        p = self.p
        return (Dual(a, b) for a in range(p) for b in range(p))

    @property
    def size(self):
        return self.p * self.p

    def random(self, rng: random.Random):
        return Dual(rng.randrange(self.p), rng.randrange(self.p))


ZZ = IntegerRing()
QQ = RationalField()

_DESCRIPTOR_RE = re.compile(r"^(fp|dual):(\d+)$|^zmod:(\d+)(?:\^(\d+))?$")


def parse_ring(text: str) -> Ring:
    """Parse ``z``, ``q``, ``fp:<p>``, ``zmod:<p>^<k>`` or ``dual:<p>``."""
    text = text.strip()
    if text == "z":
        return ZZ
    if text == "q":
        return QQ
    m = _DESCRIPTOR_RE.match(text)
    if not m:
        raise DescriptorError(f"unknown ring descriptor {text!r}")
    if m.group(1) == "fp":
        return ResidueRing(int(m.group(2)), 1, prime_field=True)
    if m.group(1) == "dual":
        return DualNumbers(int(m.group(2)))
    return ResidueRing(int(m.group(3)), int(m.group(4) or 1))


def prime_field(p: int) -> ResidueRing:
    return ResidueRing(p, 1, prime_field=True)


def is_unit(ring: Ring, x):
    """Return ``(True, inverse)`` or ``(False, None)``."""
    return ring.is_unit(x)


def unit_square_roots(ring: Ring, x) -> list:
    """All square roots of the unit ``x``, in canonical element order."""
    return sorted(ring.unit_square_roots(x), key=ring.sort_key)


def ring_hom_apply(src: Ring, dst: Ring, x):
    """Image of ``x`` under the canonical homomorphism ``src -> dst``."""
    if src == dst:
        return x
    if isinstance(src, IntegerRing):
        return dst(x)
    if isinstance(src, ResidueRing) and isinstance(dst, ResidueRing):
        if src.p == dst.p and dst.k <= src.k:
            return x % dst.n
    if isinstance(src, DualNumbers) and isinstance(dst, ResidueRing):
        if dst.p == src.p and dst.k == 1:
            return x[0]
    raise NoCanonicalHom(f"no canonical homomorphism {src.descriptor} -> {dst.descriptor}")
