"""
Finite commutative local rings: Z/p^k, GF(p^d) and dual numbers GF(q)[e]/(e^2).

Every ring is a free Z/m-module with a fixed basis whose first vector is 1,
described by a structure tensor T (basis_a * basis_b = sum_k T[a, b, k] basis_k).
Elements are coordinate tuples; matrices over R are stored through the
regular representation as integer matrices over Z/m, so group arithmetic is
plain modular integer arithmetic.
"""

import itertools
import logging
import re
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from models.enums import RingKind, RootFamily
from services.errors import MissingUnit, NoIrreducible, NonUnitInverse, NotPrime, ParseError, RingMismatch

logger = logging.getLogger(__name__)

_X, _E = sympy.symbols("x e")
_TRANSFORMATIONS = standard_transformations + (convert_xor, implicit_multiplication_application)


def _prime_power(q: int) -> Tuple[int, int]:
    """Split q = p^k, raising NotPrime otherwise."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise NotPrime(f"{q} is not a prime power")
    (p, k), = factors.items()
    return int(p), int(k)


@lru_cache(maxsize=None)
def least_irreducible(p: int, d: int) -> Tuple[int, ...]:
    """
    Least lexicographic monic irreducible polynomial of degree d over GF(p).

    Returns:
        Coefficients (f_0, ..., f_{d-1}) of x^d + f_{d-1} x^{d-1} + ... + f_0
    """
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    for high_first in itertools.product(range(p), repeat=d):
        coeffs = tuple(reversed(high_first))
        poly = sympy.Poly(_X ** d + sum(c * _X ** i for i, c in enumerate(coeffs)), _X, modulus=p)
        if poly.is_irreducible:
            return coeffs
    raise NoIrreducible(f"No irreducible polynomial of degree {d} over GF({p})")


class RingElement:
    """An element of a LocalRing in canonical coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: "LocalRing", coords: Tuple[int, ...]):
        self.ring = ring
        self.coords = coords

    def _other(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        return self.ring.element(other)

    def __add__(self, other):
        other = self._other(other)
        m = self.ring.modulus
        return RingElement(self.ring, tuple((a + b) % m for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        m = self.ring.modulus
        return RingElement(self.ring, tuple((-a) % m for a in self.coords))

    def __mul__(self, other):
        other = self._other(other)
        return RingElement(self.ring, self.ring._mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def inverse(self) -> "RingElement":
        return self.ring.inverse(self)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def in_radical(self) -> bool:
        return not self.ring.is_unit(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.element(other)
        return isinstance(other, RingElement) and other.ring == self.ring and other.coords == self.coords

    def __hash__(self):
        return hash((self.ring.descriptor, self.coords))

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"{self.ring.descriptor}({self})"


class LocalRing:
    """
    A finite commutative local ring.

    Attributes:
        kind: RingKind
        p: residue characteristic
        modulus: m, the coordinates live in Z/m
        dim: number of coordinates
        degree: degree d of the residue field over GF(p)
    """

    def __init__(self, kind: RingKind, q: int):
        self.kind = kind
        p, k = _prime_power(q)
        self.p = p
        if kind is RingKind.ZMOD:
            self.modulus, self.dim, self.degree = q, 1, 1
            self.poly: Tuple[int, ...] = (0,)
        else:
            self.modulus, self.degree = p, k
            self.poly = least_irreducible(p, k)
            self.dim = k if kind is RingKind.GF else 2 * k
        self.descriptor = f"{kind.value}:{q}"
        self.size = self.modulus ** self.dim
        self.tensor = self._structure_tensor()
        self._terms = [
            (a, b, c, int(self.tensor[a, b, c]))
            for a, b, c in zip(*np.nonzero(self.tensor))
        ]

    # Construction helpers

    def _x_powers(self, count: int) -> List[List[int]]:
        """Coordinates of x^0 .. x^(count-1) in GF(p)[x]/(f)."""
        d, p = self.degree, self.p
        powers = []
        current = [1] + [0] * (d - 1)
        for _ in range(count):
            powers.append(current)
            top = current[-1]
            shifted = [0] + current[:-1]
            current = [(shifted[i] - top * self.poly[i]) % p for i in range(d)]
        return powers

    def _structure_tensor(self) -> np.ndarray:
        n = self.dim
        T = np.zeros((n, n, n), dtype=np.int64)
        if self.kind is RingKind.ZMOD:
            T[0, 0, 0] = 1
            return T
        d = self.degree
        powers = self._x_powers(2 * d)
        for a in range(n):
            for b in range(n):
                ia, ja = a % d, a // d
                ib, jb = b % d, b // d
                if ja + jb >= 2:
                    continue
                offset = (ja + jb) * d
                for i, c in enumerate(powers[ia + ib]):
                    T[a, b, offset + i] = c
        return T

    def _mul_coords(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        out = [0] * self.dim
        for a, b, c, t in self._terms:
            if x[a] and y[b]:
                out[c] += t * x[a] * y[b]
        m = self.modulus
        return tuple(v % m for v in out)

    # Elements

    def element(self, value) -> RingElement:
        """Coerce an int, coordinate sequence, literal or element into this ring."""
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatch(f"{value!r} is not in {self.descriptor}")
            return value
        if isinstance(value, (int, np.integer)):
            coords = [0] * self.dim
            coords[0] = int(value) % (self.modulus if self.kind is RingKind.ZMOD else self.p)
            return RingElement(self, tuple(coords))
        if isinstance(value, str):
            return self.parse(value)
        coords = tuple(int(c) % self.modulus for c in value)
        if len(coords) != self.dim:
            raise RingMismatch(f"Expected {self.dim} coordinates, got {len(coords)}")
        return RingElement(self, coords)

    __call__ = element

    @cached_property
    def zero(self) -> RingElement:
        return RingElement(self, (0,) * self.dim)

    @cached_property
    def one(self) -> RingElement:
        return self.element(1)

    def from_index(self, index: int) -> RingElement:
        m = self.modulus
        return RingElement(self, tuple((index // m ** i) % m for i in range(self.dim)))

    def index_of(self, a: RingElement) -> int:
        m = self.modulus
        return sum(c * m ** i for i, c in enumerate(a.coords))

    @cached_property
    def _elements(self) -> Tuple[RingElement, ...]:
        return tuple(self.from_index(i) for i in range(self.size))

    def elements(self) -> List[RingElement]:
        """All elements in canonical order (by index)."""
        return list(self._elements)

    def units(self) -> List[RingElement]:
        return [a for a in self._elements if self.is_unit(a)]

    def radical(self) -> List[RingElement]:
        return [a for a in self._elements if not self.is_unit(a)]

    def additive_generators(self) -> List[RingElement]:
        """The coordinate basis; it generates (R, +)."""
        return [RingElement(self, tuple(1 if k == i else 0 for k in range(self.dim)))
                for i in range(self.dim)]

    # Units and radical

    def is_unit(self, a: RingElement) -> bool:
        if self.kind is RingKind.ZMOD:
            return a.coords[0] % self.p != 0
        return any(a.coords[:self.degree])

    def in_radical(self, a: RingElement) -> bool:
        return not self.is_unit(a)

    @cached_property
    def _inverses(self) -> Dict[Tuple[int, ...], RingElement]:
        units = [a for a in self._elements if self.is_unit(a)]
        table = {}
        for a in units:
            for b in units:
                if (a * b).coords == self.one.coords:
                    table[a.coords] = b
                    break
        return table

    def inverse(self, a: RingElement) -> RingElement:
        try:
            return self._inverses[a.coords]
        except KeyError:
            raise NonUnitInverse(f"{a} is not a unit in {self.descriptor}")

    def has_unit(self, k: int) -> bool:
        """Whether the integer k is a unit in the ring."""
        return self.is_unit(self.element(k))

    def is_field(self) -> bool:
        return self.kind is RingKind.GF or (self.kind is RingKind.ZMOD and self.modulus == self.p)

    # Residue field

    @cached_property
    def residue_field(self) -> "LocalRing":
        if self.is_field():
            return self
        return make_ring(f"gf:{self.p ** self.degree}")

    def residue_coords(self, coords: np.ndarray) -> np.ndarray:
        """Apply the residue map along the last axis of a coordinate array."""
        if self.is_field():
            return coords
        if self.kind is RingKind.ZMOD:
            return coords % self.p
        return coords[..., :self.degree]

    def residue(self, a: RingElement) -> RingElement:
        k = self.residue_field
        return RingElement(k, tuple(int(c) for c in self.residue_coords(np.asarray(a.coords))))

    def lift(self, abar: RingElement) -> RingElement:
        """Section of the residue map: representatives with zero radical part."""
        if abar.ring != self.residue_field:
            raise RingMismatch(f"{abar!r} is not in the residue field of {self.descriptor}")
        coords = list(abar.coords) + [0] * (self.dim - len(abar.coords))
        return RingElement(self, tuple(coords))

    def frobenius(self, a: RingElement) -> RingElement:
        return a ** self.p

    # Regular representation

    def regular(self, a: RingElement) -> np.ndarray:
        """Matrix of multiplication by a over Z/m; column b holds a * basis_b."""
        x = np.asarray(a.coords, dtype=np.int64)
        return np.einsum("a,abk->kb", x, self.tensor) % self.modulus

    @cached_property
    def basis_regular(self) -> np.ndarray:
        return np.stack([self.regular(e) for e in self.additive_generators()])

    def blocks_from_coords(self, coords: np.ndarray) -> np.ndarray:
        """(..., N, N, n) coordinates to (..., N n, N n) integer block matrices."""
        n = self.dim
        *batch, N, _, _ = coords.shape
        blocks = np.einsum("...ija,auv->...iujv", coords, self.basis_regular)
        return blocks.reshape(*batch, N * n, N * n) % self.modulus

    def coords_from_blocks(self, blocks: np.ndarray) -> np.ndarray:
        """Inverse of blocks_from_coords: read the first column of every block."""
        n = self.dim
        *batch, size, _ = blocks.shape
        N = size // n
        first = blocks[..., :, ::n].reshape(*batch, N, n, N)
        return np.swapaxes(first, -1, -2)

    # Literals

    def format(self, a: RingElement) -> str:
        if self.kind is RingKind.ZMOD or (self.kind is RingKind.GF and self.degree == 1):
            return str(a.coords[0])
        terms = []
        for index, c in enumerate(a.coords):
            if not c:
                continue
            i, j = index % self.degree, index // self.degree
            monomial = []
            if i:
                monomial.append("x" if i == 1 else f"x^{i}")
            if j:
                monomial.append("e")
            if not monomial:
                terms.append(str(c))
            elif c == 1:
                terms.append("*".join(monomial))
            else:
                terms.append("*".join([str(c)] + monomial))
        return "+".join(terms) if terms else "0"

    def parse(self, literal: str) -> RingElement:
        """
        Parse a ring literal.

        Integers for Z/p^k and prime fields; polynomials in x for GF(p^d);
        polynomials in x and e for dual numbers, e.g. "1+2*e" or "x+x*e".
        """
        if not re.fullmatch(r"[\sxe0-9+\-*^()]*", literal or "") or not literal.strip():
            raise ParseError(f"Invalid ring literal: {literal!r}")
        try:
            expr = parse_expr(literal, local_dict={"x": _X, "e": _E}, transformations=_TRANSFORMATIONS)
            poly = sympy.Poly(expr, _X, _E)
        except Exception as exc:
            raise ParseError(f"Invalid ring literal: {literal!r}") from exc
        result = self.zero
        x = self._generator_x()
        e = self._generator_e()
        for (i, j), coeff in poly.terms():
            if not coeff.is_integer:
                raise ParseError(f"Non-integer coefficient in {literal!r}")
            if (i and x is None) or (j and e is None):
                raise ParseError(f"Literal {literal!r} uses a generator absent from {self.descriptor}")
            term = self.element(int(coeff))
            if i:
                term = term * x ** int(i)
            if j:
                term = term * e ** int(j)
            result = result + term
        return result

    def _generator_x(self) -> Optional[RingElement]:
        if self.kind is RingKind.ZMOD or self.degree == 1:
            return None
        return self.additive_generators()[1]

    def _generator_e(self) -> Optional[RingElement]:
        if self.kind is not RingKind.DUAL:
            return None
        return self.additive_generators()[self.degree]

    def __eq__(self, other):
        return isinstance(other, LocalRing) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"LocalRing({self.descriptor})"


@lru_cache(maxsize=None)
def _make(kind: RingKind, q: int) -> LocalRing:
    ring = LocalRing(kind, q)
    logger.debug("Constructed %s of order %d", ring.descriptor, ring.size)
    return ring


def make_ring(descriptor: Union[str, Tuple[str, int]]) -> LocalRing:
    """
    Construct a local ring from a descriptor such as "zmod:4", "gf:4" or "dual:2".

    Args:
        descriptor: "kind:integer" or a (kind, integer) pair

    Returns:
        The (cached) LocalRing
    """
    if isinstance(descriptor, str):
        match = re.fullmatch(r"\s*([a-z]+)\s*:\s*(\d+)\s*", descriptor)
        if not match:
            raise ParseError(f"Invalid ring descriptor: {descriptor!r}")
        kind_name, q = match.group(1), int(match.group(2))
    else:
        kind_name, q = descriptor
    try:
        kind = RingKind(str(getattr(kind_name, "value", kind_name)))
    except ValueError:
        raise ParseError(f"Unknown ring kind: {kind_name!r}")
    _prime_power(int(q))
    return _make(kind, int(q))


def check_required_units(ring: LocalRing, system) -> bool:
    """2 must be a unit for B, C, F, G; 3 must be a unit for G_2."""
    family = system.family
    if family in (RootFamily.B, RootFamily.C, RootFamily.F, RootFamily.G) and not ring.has_unit(2):
        return False
    if family is RootFamily.G and not ring.has_unit(3):
        return False
    return True


def missing_units(ring: LocalRing, system) -> List[int]:
    """Integers among {2, 3} that the system needs but the ring does not invert."""
    needed = []
    if system.family in (RootFamily.B, RootFamily.C, RootFamily.F, RootFamily.G):
        needed.append(2)
    if system.family is RootFamily.G:
        needed.append(3)
    return [k for k in needed if not ring.has_unit(k)]


def require_units(ring: LocalRing, system) -> None:
    """
    Raises:
        MissingUnit: if the ring does not invert 2 or 3 where the system needs it
    """
    missing = missing_units(ring, system)
    if missing:
        names = " and ".join(f"1/{k}" for k in missing)
        raise MissingUnit(f"{system.label} over {ring.descriptor} needs {names}")
