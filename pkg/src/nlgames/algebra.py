"""Finite Abelian groups, their characters, and small finite fields.

Answers in a linear game live in a finite Abelian group, and the spectral
bound on the quantum value needs the group's characters.  Two structures
cover everything in scope: direct products of cyclic groups, whose
characters are products of roots of unity, and additive groups of fields
GF(p^r), whose characters go through the field trace.  Everything here is
immutable after construction and safe for concurrent use.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import lcm, prod

import numpy as np

__all__ = [
    "Group",
    "GroupElement",
    "FiniteAbelianGroup",
    "FieldElement",
    "FiniteField",
    "FieldAdditiveGroup",
    "is_prime",
]

# Desk-scale caps: keep exhaustive irreducibility searches and full element
# enumerations trivially cheap.
MAX_EXTENSION_DEGREE = 4
MAX_ORDER = 4096


def is_prime(n: int) -> bool:
    """Trial-division primality test; adequate for desk-scale orders."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class GroupElement:
    """Element of a product of cyclic groups, as a reduced coordinate tuple.

    Construct through :meth:`FiniteAbelianGroup.element`, which reduces each
    coordinate modulo its cyclic order.
    """

    coords: tuple[int, ...]


class Group:
    """Finite Abelian group presented through an indexed element list.

    Subclasses fix a canonical element order (`elements`, identity first)
    and a character indexing `character(a, x)` for a, x in the group.  The
    index of an element in `elements` is its canonical position, used for
    tables, boxes, and tie-breaking.
    """

    order: int
    elements: tuple

    @property
    def identity(self):
        return self.elements[0]

    def element(self, value):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def character(self, a, x) -> complex:
        raise NotImplementedError

    def describe(self) -> dict:
        """JSON-compatible descriptor of the group."""
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise ValueError(f"{x!r} is not an element of {self!r}") from None

    def addition_table(self) -> np.ndarray:
        """Index table T[i, j] = index(elements[i] + elements[j])."""
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                table[i, j] = self.index(self.add(x, y))
        return table

    def subtraction_table(self) -> np.ndarray:
        """Index table T[i, j] = index(elements[i] - elements[j])."""
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                table[i, j] = self.index(self.sub(x, y))
        return table

    def negation_table(self) -> np.ndarray:
        return np.array([self.index(self.neg(x)) for x in self.elements], dtype=np.int64)

    def character_table(self) -> np.ndarray:
        """Matrix X[i, j] = character of elements[i] evaluated at elements[j].

        Rebuilt from exact integer exponents on every call; nothing is cached.
        """
        n = self.order
        table = np.empty((n, n), dtype=np.complex128)
        for i, a in enumerate(self.elements):
            for j, x in enumerate(self.elements):
                table[i, j] = self.character(a, x)
        return table


class FiniteAbelianGroup(Group):
    """Direct product Z_{n_1} x ... x Z_{n_k} with componentwise addition.

    Elements are coordinate tuples in lexicographic order (last coordinate
    fastest), so the all-zero identity has index 0.  The character indexed
    by a is chi_a(x) = prod_j exp(2*pi*i * a_j*x_j / n_j); this fixes one
    isomorphism between the group and its dual.  The spectral bound summed
    over all nontrivial characters does not depend on that choice.
    """

    def __init__(self, factors):
        factors = tuple(int(n) for n in factors)
        if not factors:
            raise ValueError("a finite Abelian group needs at least one cyclic factor")
        if any(n < 2 for n in factors):
            raise ValueError(f"cyclic factors must all be >= 2, got {factors}")
        order = prod(factors)
        if order > MAX_ORDER:
            raise ValueError(f"group order {order} exceeds the supported cap {MAX_ORDER}")
        self.factors = factors
        self.order = order
        self.elements = tuple(
            GroupElement(coords) for coords in itertools.product(*(range(n) for n in factors))
        )
        self._index = {el: i for i, el in enumerate(self.elements)}
        self._exponent = lcm(*factors)

    def __repr__(self) -> str:
        return "x".join(f"Z{n}" for n in self.factors)

    def element(self, value) -> GroupElement:
        """Coerce an element, an int index, or a coordinate sequence."""
        if isinstance(value, GroupElement):
            coords = value.coords
        elif isinstance(value, (int, np.integer)):
            if not 0 <= int(value) < self.order:
                raise ValueError(f"element index {value} out of range for {self!r}")
            return self.elements[int(value)]
        else:
            coords = tuple(int(c) for c in value)
        if len(coords) != len(self.factors):
            raise ValueError(
                f"coordinate tuple {coords} does not match factor list {self.factors}"
            )
        return GroupElement(tuple(c % n for c, n in zip(coords, self.factors)))

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check_dims(x)
        self._check_dims(y)
        return GroupElement(
            tuple((a + b) % n for a, b, n in zip(x.coords, y.coords, self.factors))
        )

    def neg(self, x: GroupElement) -> GroupElement:
        self._check_dims(x)
        return GroupElement(tuple((-a) % n for a, n in zip(x.coords, self.factors)))

    def character(self, a: GroupElement, x: GroupElement) -> complex:
        # Exact integer exponent m of the primitive root exp(2*pi*i/N).
        self.index(a)
        self.index(x)
        big_n = self._exponent
        m = 0
        for aj, xj, nj in zip(a.coords, x.coords, self.factors):
            m += aj * xj * (big_n // nj)
        m %= big_n
        return cmath.exp(2j * cmath.pi * m / big_n)

    def describe(self) -> dict:
        return {"factors": list(self.factors)}

    def _check_dims(self, x: GroupElement) -> None:
        if len(x.coords) != len(self.factors):
            raise ValueError(
                f"element {x.coords} does not match factor list {self.factors}"
            )


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Polynomial residue of degree < r over Z_p; construct via the field."""

    field: "FiniteField"
    coeffs: tuple[int, ...]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field.signature == other.field.signature and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.signature, self.coeffs))

    def __int__(self) -> int:
        """Canonical integer encoding sum_i c_i * p^i."""
        p = self.field.p
        value = 0
        for c in reversed(self.coeffs):
            value = value * p + c
        return value

    def __repr__(self) -> str:
        return f"FieldElement{self.coeffs}"


def _poly_mul_mod(a, b, modulus, p):
    """Product of little-endian coefficient tuples, reduced mod (modulus, p)."""
    r = len(modulus) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    for i in range(len(out) - 1, r - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(r):
                out[i - r + j] = (out[i - r + j] - c * modulus[j]) % p
    out = out[:r] + [0] * max(0, r - len(out))
    return tuple(out)


def _poly_rem(a, b, p):
    """Remainder of a by monic b, both little-endian tuples over Z_p."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(db):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return tuple(a[:db])


def _is_irreducible(poly, p) -> bool:
    """Irreducibility over Z_p by root checking plus trial division.

    Valid for degrees up to 5: a reducible polynomial of degree <= 5 with no
    roots must have a monic quadratic factor.
    """
    r = len(poly) - 1
    if r < 1 or poly[-1] != 1:
        return False
    if r == 1:
        return True
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if r >= 4:
        for tail in itertools.product(range(p), repeat=2):
            quad = tail + (1,)
            if not any(_poly_rem(poly, quad, p)):
                return False
    return True


def _smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over Z_p.

    Candidates are ordered by the base-p integer encoding of their non-leading
    coefficients, most significant digit first, so the result is the same on
    every platform.
    """
    for m in range(p**r):
        tail = []
        value = m
        for _ in range(r):
            tail.append(value % p)
            value //= p
        poly = tuple(tail) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise ArithmeticError(f"no irreducible polynomial of degree {r} over Z_{p}")


class FiniteField:
    """GF(p^r) as polynomial residues modulo a fixed irreducible polynomial.

    The modulus defaults to the lexicographically smallest monic irreducible
    polynomial of degree r over Z_p, so fields are reproducible across runs.
    Elements are enumerated by their integer encoding sum_i c_i * p^i, with
    0 first and the multiplicative unit at index 1.
    """

    def __init__(self, p: int, r: int = 1, modulus=None):
        p = int(p)
        r = int(r)
        if not is_prime(p):
            raise ValueError(f"field characteristic must be prime, got {p}")
        if not 1 <= r <= MAX_EXTENSION_DEGREE:
            raise ValueError(
                f"extension degree must be in [1, {MAX_EXTENSION_DEGREE}], got {r}"
            )
        if p**r > MAX_ORDER:
            raise ValueError(f"field size {p**r} exceeds the supported cap {MAX_ORDER}")
        if modulus is None:
            modulus = _smallest_irreducible(p, r)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != r + 1 or modulus[-1] != 1:
                raise ValueError(
                    f"modulus must be monic of degree {r}, got coefficients {modulus}"
                )
            if not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over Z_{p}")
        self.p = p
        self.r = r
        self.modulus = modulus
        self.size = p**r
        self.signature = (p, r, modulus)
        self.elements = tuple(self._from_int_raw(m) for m in range(self.size))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"

    @property
    def zero(self) -> FieldElement:
        return self.elements[0]

    @property
    def one(self) -> FieldElement:
        return self.elements[1]

    def _from_int_raw(self, m: int) -> FieldElement:
        coeffs = []
        for _ in range(self.r):
            coeffs.append(m % self.p)
            m //= self.p
        return FieldElement(self, tuple(coeffs))

    def from_int(self, m: int) -> FieldElement:
        if not 0 <= int(m) < self.size:
            raise ValueError(f"integer encoding {m} out of range for {self!r}")
        return self.elements[int(m)]

    def element(self, value) -> FieldElement:
        """Coerce a field element, an integer encoding, or a coefficient list."""
        if isinstance(value, FieldElement):
            self._check_member(value)
            return value
        if isinstance(value, (int, np.integer)):
            return self.from_int(int(value))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.r:
            raise ValueError(f"coefficient list {coeffs} longer than degree {self.r}")
        coeffs = coeffs + (0,) * (self.r - len(coeffs))
        return self.elements[self._encode(coeffs)]

    def _encode(self, coeffs) -> int:
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + c
        return value

    def _check_member(self, a: FieldElement) -> None:
        if not isinstance(a, FieldElement) or a.field.signature != self.signature:
            raise ValueError(f"field mismatch: {a!r} does not belong to {self!r}")

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check_member(a)
        self._check_member(b)
        coeffs = tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs))
        return self.elements[self._encode(coeffs)]

    def neg(self, a: FieldElement) -> FieldElement:
        self._check_member(a)
        coeffs = tuple((-x) % self.p for x in a.coeffs)
        return self.elements[self._encode(coeffs)]

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check_member(a)
        self._check_member(b)
        coeffs = _poly_mul_mod(a.coeffs, b.coeffs, self.modulus, self.p)
        return self.elements[self._encode(coeffs)]

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        self._check_member(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: FieldElement) -> FieldElement:
        self._check_member(a)
        if a == self.zero:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.pow(a, self.size - 2)

    def trace(self, a: FieldElement) -> int:
        """Field trace a + a^p + ... + a^(p^(r-1)), mapped to Z_p."""
        self._check_member(a)
        acc = a
        power = a
        for _ in range(self.r - 1):
            power = self.pow(power, self.p)
            acc = self.add(acc, power)
        if any(acc.coeffs[1:]):
            raise ArithmeticError(f"trace of {a!r} landed outside the prime subfield")
        return acc.coeffs[0]

    def additive_character(self, k: FieldElement, a: FieldElement) -> complex:
        """chi_k(a) = exp(2*pi*i * Tr(k*a) / p); trivial exactly when k = 0."""
        t = self.trace(self.mul(k, a))
        return cmath.exp(2j * cmath.pi * t / self.p)

    def additive_group(self) -> "FieldAdditiveGroup":
        return FieldAdditiveGroup(self)


class FieldAdditiveGroup(Group):
    """Additive group of GF(p^r) with trace-based characters.

    Used as the answer group of field-multiplication games: the character
    indexing follows the field elements themselves rather than coordinate
    tuples, which is what the closed-form norm computations assume.
    """

    def __init__(self, field: FiniteField):
        self.field = field
        self.order = field.size
        self.elements = field.elements
        self._index = {el: i for i, el in enumerate(self.elements)}

    def __repr__(self) -> str:
        return f"{self.field!r}+"

    def element(self, value) -> FieldElement:
        return self.field.element(value)

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.field.add(x, y)

    def neg(self, x: FieldElement) -> FieldElement:
        return self.field.neg(x)

    def character(self, a: FieldElement, x: FieldElement) -> complex:
        return self.field.additive_character(a, x)

    def describe(self) -> dict:
        return {"field": {"p": self.field.p, "r": self.field.r}}
