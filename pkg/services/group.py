"""
Elementary adjoint Chevalley groups E_ad(Phi, R) over finite local rings.

Elements are (|Phi| + l)-square matrices over R stored in the regular
representation of R, so every group operation is integer matrix arithmetic
mod m. FiniteGroupTable enumerates a group by breadth-first closure and
supports the exact set computations (centralizers, classes, normal
closures, congruence kernel) the definability checks need.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from models.enums import RootFamily
from services.errors import GroupTooLarge, NonUnitInverse, ParseError, RingMismatch, WidthCapExceeded
from services.lie import (
    StructureConstants,
    adjoint_generator,
    commutator_constants,
    compute_structure_constants,
    torus_generator,
)
from services.rings import LocalRing, RingElement
from services.roots import Root, RootSystem, parse_root

logger = logging.getLogger(__name__)

DEFAULT_CAP = 2_000_000
# Rows per batch when a product runs over a whole table.
CHUNK = 4096

# Degrees of the basic invariants of the exceptional Weyl groups.
_EXCEPTIONAL_DEGREES = {
    (RootFamily.E, 6): (2, 5, 6, 8, 9, 12),
    (RootFamily.E, 7): (2, 6, 8, 10, 12, 14, 18),
    (RootFamily.E, 8): (2, 8, 12, 14, 18, 20, 24, 30),
    (RootFamily.F, 4): (2, 6, 8, 12),
    (RootFamily.G, 2): (2, 6),
}


def storage_dtype(modulus: int) -> np.dtype:
    """Smallest unsigned dtype holding residues mod `modulus`."""
    for dtype in (np.uint8, np.uint16, np.uint32):
        if modulus - 1 <= np.iinfo(dtype).max:
            return np.dtype(dtype)
    return np.dtype(np.int64)


@dataclass(frozen=True)
class GeneratorToken:
    """One factor of a generator word: kind is "x", "w" or "h"."""
    kind: str
    root: Root
    value: RingElement

    def __str__(self) -> str:
        return f"{self.kind}{list(self.root.coeffs)}({self.value})".replace(" ", "")


def _batch_inverse(stack: np.ndarray, modulus: int, p: int) -> np.ndarray:
    """
    Gauss-Jordan inversion of a stack of matrices over Z/modulus.

    Z/modulus is local with maximal ideal (p), so an invertible matrix always
    has a unit pivot below the diagonal.
    """
    A = stack.astype(np.int64) % modulus
    B, D, _ = A.shape
    inv = np.broadcast_to(np.eye(D, dtype=np.int64), (B, D, D)).copy()
    inverse_table = np.zeros(modulus, dtype=np.int64)
    for a in range(modulus):
        if a % p:
            inverse_table[a] = pow(a, -1, modulus)
    rows = np.arange(B)
    for col in range(D):
        candidates = A[:, col:, col] % p != 0
        if not candidates.any(axis=1).all():
            raise NonUnitInverse("Matrix is not invertible over the ring")
        pivot = col + np.argmax(candidates, axis=1)
        for M in (A, inv):
            top = M[rows, col].copy()
            M[rows, col] = M[rows, pivot]
            M[rows, pivot] = top
        scale = inverse_table[A[rows, col, col]]
        A[rows, col] = A[rows, col] * scale[:, None] % modulus
        inv[rows, col] = inv[rows, col] * scale[:, None] % modulus
        factors = A[:, :, col].copy()
        factors[:, col] = 0
        A = (A - factors[:, :, None] * A[:, col][:, None, :]) % modulus
        inv = (inv - factors[:, :, None] * inv[:, col][:, None, :]) % modulus
    return inv


class GroupElement:
    """
    An element of E_ad(Phi, R).

    Equality is matrix equality; the optional word records how the element
    was produced and is carried through multiplication.
    """

    __slots__ = ("group", "matrix", "word")

    def __init__(self, group: "ChevalleyGroup", matrix: np.ndarray,
                 word: Optional[Tuple[GeneratorToken, ...]] = None):
        self.group = group
        self.matrix = matrix
        self.word = word

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise RingMismatch(f"Elements of different groups: {self.group} vs {getattr(other, 'group', None)}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        word = self.word + other.word if self.word is not None and other.word is not None else None
        return GroupElement(self.group, self.matrix @ other.matrix % self.group.ring.modulus, word)

    def inverse(self) -> "GroupElement":
        matrix = _batch_inverse(self.matrix[None], self.group.ring.modulus, self.group.ring.p)[0]
        return GroupElement(self.group, matrix)

    def commutator(self, other: "GroupElement") -> "GroupElement":
        """[a, b] = a b a^-1 b^-1."""
        return self * other * self.inverse() * other.inverse()

    def conjugate(self, by: "GroupElement") -> "GroupElement":
        """by * self * by^-1."""
        return by * self * by.inverse()

    def commutes_with(self, other: "GroupElement") -> bool:
        return self * other == other * self

    @property
    def key(self) -> bytes:
        return self.group.key(self.matrix)

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, self.group.identity().matrix)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupElement) and other.group == self.group
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        word = " * ".join(str(t) for t in self.word) if self.word else "?"
        return f"GroupElement({self.group.label}: {word})"


class ChevalleyGroup:
    """
    E_ad(Phi, R) in the adjoint representation.

    Attributes:
        system: RootSystem
        ring: LocalRing
        consts: StructureConstants with the extraspecial sign convention
        dim: |Phi| + rank, the size of matrices over R
        size: dim * ring.dim, the size of the integer block matrices
    """

    def __init__(self, system: RootSystem, ring: LocalRing, verify: bool = True):
        self.system = system
        self.ring = ring
        self.consts: StructureConstants = compute_structure_constants(system, verify=verify)
        self.dim = self.consts.dim
        self.size = self.dim * ring.dim
        self.label = f"E_ad({system.label}, {ring.descriptor})"
        self.dtype = storage_dtype(ring.modulus)
        self._templates = {}
        self._cache: Dict[Tuple[str, Root, Tuple[int, ...]], np.ndarray] = {}

    def __eq__(self, other) -> bool:
        return isinstance(other, ChevalleyGroup) and other.system is self.system and other.ring == self.ring

    def __hash__(self) -> int:
        return hash((self.system.label, self.ring.descriptor))

    def __repr__(self) -> str:
        return self.label

    def key(self, matrix: np.ndarray) -> bytes:
        """Coordinates of all entries; the first column of each block determines it."""
        return matrix[..., ::self.ring.dim].astype(self.dtype).tobytes()

    # Generators

    def template(self, alpha: Root):
        if alpha not in self._templates:
            self._templates[alpha] = adjoint_generator(self.system, self.consts, alpha)
        return self._templates[alpha]

    def identity(self) -> GroupElement:
        return GroupElement(self, np.eye(self.size, dtype=np.int64), ())

    def x(self, alpha, t) -> GroupElement:
        """Root unipotent x_alpha(t)."""
        alpha = self.system.coerce(alpha)
        t = self.ring.element(t)
        cache_key = ("x", alpha, t.coords)
        if cache_key not in self._cache:
            self._cache[cache_key] = self.template(alpha).evaluate(self.ring, t)
        return GroupElement(self, self._cache[cache_key], (GeneratorToken("x", alpha, t),))

    def h(self, alpha, t) -> GroupElement:
        """
        Torus element h_alpha(t).

        Raises:
            NonUnitInverse: if t is not a unit
        """
        alpha = self.system.coerce(alpha)
        t = self.ring.element(t)
        cache_key = ("h", alpha, t.coords)
        if cache_key not in self._cache:
            self._cache[cache_key] = torus_generator(self.system, alpha, t, self.ring)
        return GroupElement(self, self._cache[cache_key], (GeneratorToken("h", alpha, t),))

    def w(self, alpha, t) -> GroupElement:
        """Weyl element w_alpha(t) = x_alpha(t) x_-alpha(-1/t) x_alpha(t)."""
        alpha = self.system.coerce(alpha)
        t = self.ring.element(t)
        product = self.x(alpha, t) * self.x(-alpha, -t.inverse()) * self.x(alpha, t)
        return GroupElement(self, product.matrix, (GeneratorToken("w", alpha, t),))

    def from_token(self, token: GeneratorToken) -> GroupElement:
        return {"x": self.x, "w": self.w, "h": self.h}[token.kind](token.root, token.value)

    def from_word(self, tokens: Sequence[GeneratorToken]) -> GroupElement:
        result = self.identity()
        for token in tokens:
            result = result * self.from_token(token)
        return result

    def parse_word(self, text: str) -> GroupElement:
        """
        Evaluate a generator word such as "x[1,0](2) * h[0,1](3) * x[-1,-1](1)".

        An empty word is the identity.

        Raises:
            ParseError: on malformed words, unknown roots or bad ring literals
            NonUnitInverse: on a torus or Weyl parameter that is not a unit
        """
        return self.from_word(parse_word(text, self.system, self.ring))

    def generators(self, adjoint_torus: bool = False) -> List[GroupElement]:
        """
        x_{+-a_i}(b) for simple roots a_i and additive generators b of R.

        With adjoint_torus, also h_{a_i}(u) for every unit u, which generates
        G_ad over the elementary subgroup.
        """
        gens = []
        for alpha in self.system.simple_roots:
            for sign in (alpha, -alpha):
                for b in self.ring.additive_generators():
                    gens.append(self.x(sign, b))
        if adjoint_torus:
            for alpha in self.system.simple_roots:
                for u in self.ring.units():
                    if u != self.ring.one:
                        gens.append(self.h(alpha, u))
        return gens

    def random_element(self, rng: np.random.Generator, length: int = 12) -> GroupElement:
        """Product of `length` random root unipotents, with word provenance."""
        result = self.identity()
        for _ in range(length):
            alpha = self.system.roots[int(rng.integers(len(self.system.roots)))]
            t = self.ring.from_index(int(rng.integers(self.ring.size)))
            result = result * self.x(alpha, t)
        return result

    # Coordinates

    def entries(self, g: GroupElement) -> np.ndarray:
        """(dim, dim, ring.dim) coordinates of the matrix entries."""
        return self.ring.coords_from_blocks(g.matrix)

    def from_entries(self, coords: np.ndarray) -> GroupElement:
        return GroupElement(self, self.ring.blocks_from_coords(coords))

    def entry(self, g: GroupElement, row: int, col: int) -> RingElement:
        return self.ring.element(self.entries(g)[row, col])

    @property
    def residue_group(self) -> "ChevalleyGroup":
        return chevalley_group(self.system, self.ring.residue_field)


@lru_cache(maxsize=None)
def chevalley_group(system: RootSystem, ring: LocalRing) -> ChevalleyGroup:
    """Cached ChevalleyGroup per (system, ring)."""
    return ChevalleyGroup(system, ring)


_TOKEN = re.compile(r"\s*([xwh])\s*\[([^\]]*)\]\s*\(")


def parse_word(text: str, system: RootSystem, ring: LocalRing) -> List[GeneratorToken]:
    """Tokenize a generator word; literals may contain '*' and nested parentheses."""
    tokens: List[GeneratorToken] = []
    text = text or ""
    pos = 0
    if not text.strip():
        return tokens
    while True:
        match = _TOKEN.match(text, pos)
        if not match:
            raise ParseError(f"Expected a generator at position {pos} of {text!r}")
        kind, root_text = match.group(1), match.group(2)
        depth, end = 1, match.end()
        while end < len(text) and depth:
            depth += {"(": 1, ")": -1}.get(text[end], 0)
            end += 1
        if depth:
            raise ParseError(f"Unbalanced parentheses in {text!r}")
        root = system.coerce(parse_root(f"[{root_text}]", system.rank))
        value = ring.parse(text[match.end():end - 1])
        if kind in ("h", "w") and not value.is_unit():
            raise NonUnitInverse(f"{kind}[{root_text}] parameter {value} is not a unit")
        tokens.append(GeneratorToken(kind, root, value))
        rest = re.match(r"\s*(\*)?", text[end:])
        pos = end + rest.end()
        if pos >= len(text):
            if rest.group(1):
                raise ParseError(f"Dangling '*' at the end of {text!r}")
            return tokens
        if not rest.group(1):
            raise ParseError(f"Expected '*' after position {end} of {text!r}")


# Homomorphisms

def reduce_mod_radical(g: GroupElement) -> GroupElement:
    """Entrywise residue map E(Phi, R) -> E(Phi, R/J)."""
    group = g.group
    ring = group.ring
    target = group.residue_group
    coords = ring.residue_coords(group.entries(g))
    word = None
    if g.word is not None:
        word = tuple(GeneratorToken(t.kind, t.root, ring.residue(t.value)) for t in g.word)
    return GroupElement(target, target.ring.blocks_from_coords(coords), word)


def apply_ring_automorphism(g: GroupElement, sigma: Callable[[RingElement], RingElement]) -> GroupElement:
    """Apply a ring automorphism entrywise, e.g. LocalRing.frobenius."""
    group = g.group
    ring = group.ring
    coords = group.entries(g)
    powers = ring.modulus ** np.arange(ring.dim)
    images = np.array([sigma(a).coords for a in ring.elements()], dtype=np.int64)
    mapped = images[(coords * powers).sum(axis=-1)]
    word = None
    if g.word is not None:
        word = tuple(GeneratorToken(t.kind, t.root, sigma(t.value)) for t in g.word)
    return GroupElement(group, ring.blocks_from_coords(mapped), word)


# Relation checks

def sl2_identity_check(group: ChevalleyGroup, gamma, s) -> bool:
    """
    x_g(1) x_-g(s) x_g(1)^-1 == h_g(1/(1-s)) x_g(s^2-s) x_-g(s/(1-s)).

    Raises:
        NonUnitInverse: if 1 - s is not a unit
    """
    gamma = group.system.coerce(gamma)
    s = group.ring.element(s)
    u = (1 - s).inverse()
    one = group.ring.one
    lhs = group.x(gamma, one) * group.x(-gamma, s) * group.x(gamma, -one)
    rhs = group.h(gamma, u) * group.x(gamma, s * s - s) * group.x(-gamma, s * u)
    return lhs == rhs


@dataclass
class RelationWitness:
    relation: str
    detail: str


def check_additivity(group: ChevalleyGroup, pairs: Iterable[Tuple[RingElement, RingElement]]) -> Optional[RelationWitness]:
    """x_a(s) x_a(t) == x_a(s + t) for every root and every given pair."""
    pairs = list(pairs)
    for alpha in group.system.roots:
        for s, t in pairs:
            if group.x(alpha, s) * group.x(alpha, t) != group.x(alpha, s + t):
                return RelationWitness("additivity", f"x{alpha}({s}) x{alpha}({t})")
    return None


def check_torus_relation(group: ChevalleyGroup, units: Sequence[RingElement],
                         values: Sequence[RingElement]) -> Optional[RelationWitness]:
    """h_a(t) x_b(s) h_a(t)^-1 == x_b(t^<b,a> s)."""
    system = group.system
    for alpha in system.roots:
        for t in units:
            h = group.h(alpha, t)
            h_inv = group.h(alpha, t.inverse())
            for beta in system.roots:
                e = system.pairing(beta, alpha)
                for s in values:
                    if h * group.x(beta, s) * h_inv != group.x(beta, t ** e * s):
                        return RelationWitness("torus", f"h{alpha}({t}) x{beta}({s})")
    return None


def check_commutator_formula(group: ChevalleyGroup,
                             pairs: Sequence[Tuple[RingElement, RingElement]]) -> Optional[RelationWitness]:
    """Chevalley commutator formula for every non-proportional pair of roots."""
    system = group.system
    for alpha in system.roots:
        for beta in system.roots:
            if beta == alpha or beta == -alpha:
                continue
            terms = commutator_constants(system, group.consts, alpha, beta)
            for s, t in pairs:
                lhs = group.x(alpha, s) * group.x(beta, t) * group.x(alpha, -s) * group.x(beta, -t)
                rhs = group.identity()
                for term in terms:
                    rhs = rhs * group.x(term.root, s ** term.i * t ** term.j * term.constant)
                if lhs != rhs:
                    return RelationWitness("commutator", f"[x{alpha}({s}), x{beta}({t})]")
    return None


# Enumeration

class FiniteGroupTable:
    """
    A finite group enumerated by breadth-first closure of its generators.

    Element 0 is the identity. Element order is deterministic given the
    generator order. parent[i] = (j, k) means element i = element j * generator k.

    Matrices are stored in the group's compact dtype; `wide` widens rows
    to int64 before any product.

    Args:
        group: The ambient ChevalleyGroup
        generators: Generating elements, in BFS order
        cap: Largest order enumerated
        order_bound: Known upper bound on the order; above `cap` it fails
            before any element is stored
    """

    def __init__(self, group: ChevalleyGroup, generators: Sequence[GroupElement], cap: int = DEFAULT_CAP,
                 order_bound: Optional[int] = None):
        self.group = group
        self.generators = list(generators)
        self.cap = cap
        if order_bound is not None and order_bound > cap:
            raise GroupTooLarge(f"{group.label} has order up to {order_bound}, above the enumeration cap {cap}")
        m = group.ring.modulus
        size = group.size
        storage = np.empty((min(cap, 1024), size, size), dtype=group.dtype)
        storage[0] = group.identity().matrix
        count = 1
        self.index_of: Dict[bytes, int] = {group.key(storage[0]): 0}
        self.parent: List[Tuple[int, int]] = [(-1, -1)]
        logger.info("Enumerating %s from %d generators (cap %d)", group.label, len(self.generators), cap)
        frontier = [0]
        while frontier:
            fresh = []
            for start in range(0, len(frontier), CHUNK):
                rows = frontier[start:start + CHUNK]
                block = storage[rows].astype(np.int64)
                for k, gen in enumerate(self.generators):
                    products = block @ gen.matrix % m
                    for row, key in enumerate(self._keys(products)):
                        if key in self.index_of:
                            continue
                        if count >= cap:
                            raise GroupTooLarge(f"{group.label} exceeds the enumeration cap {cap}")
                        if count == len(storage):
                            grown = np.empty((min(cap, 2 * count), size, size), dtype=group.dtype)
                            grown[:count] = storage
                            storage = grown
                        self.index_of[key] = count
                        self.parent.append((rows[row], k))
                        storage[count] = products[row]
                        fresh.append(count)
                        count += 1
            frontier = fresh
        self.matrices = storage[:count].copy()
        self._inverse: Optional[np.ndarray] = None
        self._class_of: Optional[np.ndarray] = None
        self._classes: Optional[List[np.ndarray]] = None
        logger.info("Enumerated %s: order %d", group.label, len(self))

    def _keys(self, stack: np.ndarray) -> List[bytes]:
        coords = stack[:, :, ::self.group.ring.dim].astype(self.group.dtype)
        return [row.tobytes() for row in coords]

    def wide(self, indices) -> np.ndarray:
        """Stored matrices as int64, ready for products mod m."""
        return self.matrices[indices].astype(np.int64)

    def __len__(self) -> int:
        return len(self.matrices)

    @property
    def order(self) -> int:
        return len(self.matrices)

    def element(self, i: int) -> GroupElement:
        return GroupElement(self.group, self.wide(i), self.word(i))

    def index(self, g: GroupElement) -> int:
        """
        Raises:
            KeyError: if g is not in the table
        """
        return self.index_of[g.key]

    def __contains__(self, g: GroupElement) -> bool:
        return g.key in self.index_of

    def indices_of(self, stack: np.ndarray) -> np.ndarray:
        return np.array([self.index_of[k] for k in self._keys(stack)], dtype=np.int64)

    def word(self, i: int) -> Tuple[GeneratorToken, ...]:
        """Generator word re-evaluating to element i."""
        tokens = []
        while i > 0:
            i, k = self.parent[i]
            tokens.extend(reversed(self.generators[k].word or ()))
        return tuple(reversed(tokens))

    # Arithmetic on indices

    @property
    def inverses(self) -> np.ndarray:
        if self._inverse is None:
            ring = self.group.ring
            self._inverse = np.concatenate([
                self.indices_of(_batch_inverse(self.wide(slice(s, s + CHUNK)), ring.modulus, ring.p))
                for s in range(0, len(self), CHUNK)
            ])
        return self._inverse

    def multiply(self, i: int, j: int) -> int:
        return self.index_of[self.group.key(self.wide(i) @ self.wide(j) % self.group.ring.modulus)]

    def products(self, left: Iterable[int], right: Iterable[int]) -> Set[int]:
        """{a * b : a in left, b in right} as indices."""
        left = np.fromiter(left, dtype=np.int64)
        result: Set[int] = set()
        if not len(left):
            return result
        block = self.wide(left)
        m = self.group.ring.modulus
        for j in right:
            result.update(self.indices_of(block @ self.wide(j) % m).tolist())
        return result

    def conjugates(self, indices: Sequence[int], by: int) -> np.ndarray:
        """by * g * by^-1 for each g."""
        m = self.group.ring.modulus
        h = self.wide(by)
        h_inv = self.wide(self.inverses[by])
        return self.indices_of(h @ self.wide(np.asarray(indices)) % m @ h_inv % m)

    # Centralizers

    def centralizer_mask(self, g) -> np.ndarray:
        """Boolean mask over the table of elements commuting with g."""
        matrix = g.matrix if isinstance(g, GroupElement) else self.wide(g)
        m = self.group.ring.modulus
        mask = np.empty(len(self), dtype=bool)
        for start in range(0, len(self), CHUNK):
            block = self.wide(slice(start, start + CHUNK))
            mask[start:start + len(block)] = (block @ matrix % m == matrix @ block % m).all(axis=(1, 2))
        return mask

    def diagonal_mask(self) -> np.ndarray:
        """Elements acting diagonally on the Chevalley basis."""
        ring = self.group.ring
        off = ~np.eye(self.group.dim, dtype=bool)
        mask = np.empty(len(self), dtype=bool)
        for start in range(0, len(self), CHUNK):
            coords = ring.coords_from_blocks(self.matrices[start:start + CHUNK])
            mask[start:start + len(coords)] = ~coords[:, off].any(axis=(1, 2))
        return mask

    def centralizer(self, g) -> np.ndarray:
        return np.nonzero(self.centralizer_mask(g))[0]

    def common_centralizer_mask(self, elements: Iterable) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        for g in elements:
            mask &= self.centralizer_mask(g)
        return mask

    def center(self) -> np.ndarray:
        """Elements commuting with every generator."""
        return np.nonzero(self.common_centralizer_mask(self.generators))[0]

    # Subgroups

    def subgroup_closure(self, generators: Iterable[int], limit: Optional[int] = None) -> Optional[Set[int]]:
        """
        Subgroup generated by the given indices.

        Returns None as soon as the closure exceeds `limit` elements.
        """
        gens = sorted(set(int(g) for g in generators) - {0})
        members = {0}
        frontier = [0]
        m = self.group.ring.modulus
        while frontier:
            block = self.wide(np.asarray(frontier))
            fresh = []
            for g in gens:
                for i in self.indices_of(block @ self.wide(g) % m).tolist():
                    if i not in members:
                        members.add(i)
                        fresh.append(i)
            if limit is not None and len(members) > limit:
                return None
            frontier = fresh
        return members

    def generating_subset(self, indices: Iterable[int]) -> List[int]:
        """Greedy subset of `indices` generating the same subgroup as all of them."""
        gens: List[int] = []
        members = {0}
        for i in indices:
            i = int(i)
            if i not in members:
                gens.append(i)
                members = self.subgroup_closure(gens)
        return gens

    def normal_closure(self, indices: Iterable[int], limit: Optional[int] = None) -> Optional[Set[int]]:
        """
        Smallest normal subgroup containing the given elements.

        Conjugates of the current generators by the group generators are
        added until the subgroup is stable. Returns None once the closure
        exceeds `limit` elements.
        """
        gens = sorted(set(int(i) for i in indices) - {0})
        members = self.subgroup_closure(gens, limit)
        if members is None:
            return None
        generator_indices = [self.index(g) for g in self.generators]
        changed = True
        while changed:
            changed = False
            for s in generator_indices:
                for c in self.conjugates(gens, s).tolist() if gens else []:
                    if c not in members:
                        gens.append(c)
                        members = self.subgroup_closure(gens, limit)
                        if members is None:
                            return None
                        changed = True
        return members

    def is_normal(self, members: Set[int]) -> bool:
        subset = sorted(members)
        for g in self.generators:
            if not set(self.conjugates(subset, self.index(g)).tolist()) <= members:
                return False
        return True

    # Conjugacy classes

    def conjugacy_class(self, i: int) -> np.ndarray:
        if self._class_of is not None:
            return self._classes[self._class_of[i]]
        orbit = {int(i)}
        frontier = [int(i)]
        generator_indices = [self.index(g) for g in self.generators]
        while frontier:
            fresh = []
            for s in generator_indices:
                for c in self.conjugates(frontier, s).tolist():
                    if c not in orbit:
                        orbit.add(c)
                        fresh.append(c)
            frontier = fresh
        return np.array(sorted(orbit), dtype=np.int64)

    def classes(self) -> List[np.ndarray]:
        """All conjugacy classes, ordered by their least index."""
        if self._classes is None:
            class_of = np.full(len(self), -1, dtype=np.int64)
            classes = []
            for i in range(len(self)):
                if class_of[i] >= 0:
                    continue
                orbit = self.conjugacy_class(i)
                class_of[orbit] = len(classes)
                classes.append(orbit)
            self._classes, self._class_of = classes, class_of
            logger.info("%s has %d conjugacy classes", self.group.label, len(classes))
        return self._classes

    def class_index(self, i: int) -> int:
        self.classes()
        return int(self._class_of[i])

    # Congruence kernel

    def residue_keys(self) -> List[bytes]:
        ring = self.group.ring
        coords = ring.residue_coords(ring.coords_from_blocks(self.matrices))
        return [row.astype(np.uint16).tobytes() for row in coords]

    def congruence_kernel(self) -> np.ndarray:
        """Indices of elements reducing to the identity mod the radical."""
        keys = self.residue_keys()
        return np.array([i for i, k in enumerate(keys) if k == keys[0]], dtype=np.int64)


def _invariant_degrees(system: RootSystem) -> Tuple[int, ...]:
    family, l = system.family, system.rank
    if family is RootFamily.A:
        return tuple(range(2, l + 2))
    if family in (RootFamily.B, RootFamily.C):
        return tuple(range(2, 2 * l + 1, 2))
    if family is RootFamily.D:
        return tuple(range(2, 2 * l - 1, 2)) + (l,)
    return _EXCEPTIONAL_DEGREES[(family, l)]


def _fundamental_group(system: RootSystem) -> Tuple[int, ...]:
    """Cyclic factors of the weight lattice modulo the root lattice."""
    family, l = system.family, system.rank
    if family is RootFamily.A:
        return (l + 1,)
    if family in (RootFamily.B, RootFamily.C) or (family, l) == (RootFamily.E, 7):
        return (2,)
    if family is RootFamily.D:
        return (2, 2) if l % 2 == 0 else (4,)
    if (family, l) == (RootFamily.E, 6):
        return (3,)
    return ()


def center_order(system: RootSystem, ring: LocalRing) -> int:
    """|Hom(fundamental group, R*)|, the center of the simply connected group over R."""
    units = ring.units()
    order = 1
    for d in _fundamental_group(system):
        order *= sum(1 for u in units if u ** d == ring.one)
    return order


def simply_connected_order(system: RootSystem, ring: LocalRing) -> int:
    """|G_sc(R)| = |G_sc(k)| * |J|^dim for the residue field k of order q and radical J."""
    q = ring.residue_field.size
    order = q ** system.n_positive
    for d in _invariant_degrees(system):
        order *= q ** d - 1
    return order * (ring.size // q) ** (len(system.roots) + system.rank)


def elementary_order(system: RootSystem, ring: LocalRing) -> int:
    """
    |E_ad(Phi, R)| from the order formula.

    Over a local ring E_sc(R) = G_sc(R), and E_ad(R) is its image modulo
    the center.
    """
    return simply_connected_order(system, ring) // center_order(system, ring)


def enumerate_group(group: ChevalleyGroup, generators: Optional[Sequence[GroupElement]] = None,
                    cap: int = DEFAULT_CAP, order_bound: Optional[int] = None) -> FiniteGroupTable:
    """
    Breadth-first closure of `generators` (default: the elementary generators).

    For the default generators the order formula is checked against `cap`
    before enumeration starts.

    Raises:
        GroupTooLarge: if the closure, or the known order, exceeds `cap` elements
    """
    if generators is None:
        generators = group.generators()
        order_bound = elementary_order(group.system, group.ring)
    return FiniteGroupTable(group, generators, cap, order_bound)


@dataclass
class CommutantReport:
    order_e: int
    order_g: int
    e_equals_commutant: bool
    width: int
    commutator_set_size: int


def check_commutant(group: ChevalleyGroup, width_cap: int = 4, cap: int = DEFAULT_CAP,
                    e_table: Optional[FiniteGroupTable] = None) -> CommutantReport:
    """
    Verify E = [G, G] for G = G_ad and measure the commutator width.

    The commutator set is {[r, h]} over class representatives r and all h,
    closed under conjugation; width w is the least w with products of at
    most w commutators covering [G, G].

    Raises:
        GroupTooLarge: if E or G exceed the cap
        WidthCapExceeded: if width_cap commutators do not suffice
    """
    e_table = e_table or enumerate_group(group, cap=cap)
    g_table = enumerate_group(group, group.generators(adjoint_torus=True), cap=cap,
                              order_bound=simply_connected_order(group.system, group.ring))
    m = group.ring.modulus
    gen_idx = [g_table.index(g) for g in g_table.generators]
    commutator_gens = set()
    for a in gen_idx:
        for b in gen_idx:
            commutator_gens.add(g_table.multiply(
                g_table.multiply(a, b), g_table.multiply(int(g_table.inverses[a]), int(g_table.inverses[b]))))
    derived = g_table.normal_closure(commutator_gens)
    e_in_g = {g_table.index_of[k] for k in e_table._keys(e_table.matrices)}
    equal = derived == e_in_g

    inv = g_table.inverses
    commutators: Set[int] = set()
    for orbit in g_table.classes():
        r = int(orbit[0])
        for start in range(0, len(g_table), CHUNK):
            rows = np.arange(start, min(start + CHUNK, len(g_table)))
            left = g_table.wide(r) @ g_table.wide(rows) % m
            right = g_table.wide(inv[r]) @ g_table.wide(inv[rows]) % m
            commutators.update(g_table.indices_of(left @ right % m).tolist())
    for c in list(commutators):
        commutators.update(g_table.conjugacy_class(c).tolist())
    logger.info("%s: %d commutators, |[G,G]| = %d", group.label, len(commutators), len(derived))

    reached = set(commutators)
    width = 1
    while reached != derived:
        if width >= width_cap:
            raise WidthCapExceeded(f"{width_cap} commutators do not cover [G,G] in {group.label}")
        reached = g_table.products(sorted(reached), sorted(commutators)) | reached
        width += 1
    return CommutantReport(len(e_table), len(g_table), equal, width, len(commutators))
