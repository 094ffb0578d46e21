"""
Gauss decomposition g = u t v u' over finite local rings.

u and u' are products of positive root unipotents, t a torus element and v
a product of negative root unipotents, all in the fixed positive-root
order. Codes are the concatenated parameter vectors; equality and
multiplication of codes are evaluated in ring arithmetic.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from services.errors import DecompositionFailed, NonUnitInverse, NotInBigCell, RingMismatch
from services.group import ChevalleyGroup, GroupElement, chevalley_group, reduce_mod_radical
from services.rings import LocalRing, RingElement
from services.roots import Root, RootSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussForm:
    """
    Parameters of u t v u'.

    Attributes:
        u: one value per positive root, for prod x_a(u_a)
        h: one unit per simple root, for prod h_{a_j}(h_j)
        v: one value per positive root, for prod x_-a(v_a)
        u2: one value per positive root, for prod x_a(u2_a)
    """
    u: Tuple[RingElement, ...]
    h: Tuple[RingElement, ...]
    v: Tuple[RingElement, ...]
    u2: Tuple[RingElement, ...]

    def to_code(self) -> Tuple[RingElement, ...]:
        return self.u + self.h + self.v + self.u2

    @classmethod
    def from_code(cls, system: RootSystem, code: Sequence[RingElement]) -> "GaussForm":
        n, l = system.n_positive, system.rank
        if len(code) != code_arity(system):
            raise ValueError(f"A code for {system.label} has {code_arity(system)} entries, got {len(code)}")
        code = tuple(code)
        return cls(code[:n], code[n:n + l], code[n + l:2 * n + l], code[2 * n + l:])

    def to_json(self) -> Dict[str, List[str]]:
        return {key: [str(a) for a in getattr(self, key)] for key in ("u", "h", "v", "u2")}

    @classmethod
    def from_json(cls, ring: LocalRing, data: Dict[str, List[str]]) -> "GaussForm":
        return cls(*(tuple(ring.parse(str(a)) for a in data[key]) for key in ("u", "h", "v", "u2")))


def code_arity(system: RootSystem) -> int:
    """3n + l ring values per code."""
    return 3 * system.n_positive + system.rank


def eq_arity(system: RootSystem) -> int:
    """6n + 2l arguments of the equality predicate."""
    return 2 * code_arity(system)


def mul_arity(system: RootSystem) -> int:
    """9n + 3l arguments of the multiplication predicate."""
    return 3 * code_arity(system)


class GaussDecomposer:
    """Big-cell factorisation and Gauss decomposition for one group."""

    def __init__(self, group: ChevalleyGroup):
        self.group = group
        self.system = group.system
        self.ring = group.ring
        system = self.system
        n_pos = system.n_positive
        # Height-descending order: U upper, V lower unitriangular.
        self.graded = (list(reversed(range(n_pos)))
                       + [group.consts.h_index(k) for k in range(system.rank)]
                       + list(range(n_pos, 2 * n_pos)))
        self._torus_table: Optional[Dict[bytes, Tuple[RingElement, ...]]] = None

    # Ring arithmetic on coordinate arrays

    def _mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("...a,b,abc->...c", x, y, self.ring.tensor) % self.ring.modulus

    def _outer(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("ia,jb,abc->ijc", x, y, self.ring.tensor) % self.ring.modulus

    def _eliminate(self, g: GroupElement) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """
        Bottom-right elimination g -> E g F = D in the graded basis.

        Returns (D diagonal coordinates, E coordinates) in the original basis,
        or None if some pivot is not a unit.
        """
        ring = self.ring
        m = ring.modulus
        perm = np.asarray(self.graded)
        size = len(perm)
        A = self.group.entries(g)[np.ix_(perm, perm)].astype(np.int64)
        E = np.zeros((size, size, ring.dim), dtype=np.int64)
        E[np.arange(size), np.arange(size), 0] = 1
        for k in reversed(range(size)):
            pivot = ring.element(A[k, k])
            if not pivot.is_unit():
                return None
            inv = np.asarray(pivot.inverse().coords, dtype=np.int64)
            if k:
                f = self._mul(A[:k, k], inv)
                A[:k] = (A[:k] - self._outer(f, A[k])) % m
                E[:k] = (E[:k] - self._outer(f, E[k])) % m
                col = self._mul(A[k, :k], inv)
                A[:, :k] = (A[:, :k] - self._outer(A[:, k], col)) % m
        diagonal = np.zeros((size, ring.dim), dtype=np.int64)
        diagonal[perm] = A[np.arange(size), np.arange(size)]
        E_orig = np.zeros_like(E)
        E_orig[np.ix_(perm, perm)] = E
        return diagonal, E_orig

    def in_big_cell(self, g: GroupElement) -> bool:
        return self._eliminate(g) is not None

    # Torus

    def torus(self, params: Sequence[RingElement]) -> GroupElement:
        result = self.group.identity()
        for alpha, xi in zip(self.system.simple_roots, params):
            result = result * self.group.h(alpha, xi)
        return result

    @property
    def torus_table(self) -> Dict[bytes, Tuple[RingElement, ...]]:
        """Diagonal of prod h_{a_j}(xi_j) -> first xi in lexicographic order over units^l."""
        if self._torus_table is None:
            table = {}
            for xi in itertools.product(self.ring.units(), repeat=self.system.rank):
                diagonal = np.diagonal(self.group.entries(self.torus(xi)), axis1=0, axis2=1).T
                table.setdefault(diagonal.astype(np.uint16).tobytes(), tuple(xi))
            self._torus_table = table
            logger.debug("%s: %d distinct torus elements", self.group.label, len(table))
        return self._torus_table

    # Unipotent parts

    def _reading(self, gamma: Root) -> Tuple[int, RingElement]:
        system = self.system
        options = sorted(
            (abs(system.pairing(gamma, a)), k) for k, a in enumerate(system.simple_roots)
            if system.pairing(gamma, a) and self.ring.has_unit(system.pairing(gamma, a))
        )
        if not options:
            raise NotInBigCell(f"No unit pairing to read the parameter of {gamma}")
        k = options[0][1]
        return k, self.ring.element(system.pairing(gamma, system.simple_roots[k]))

    def unipotent(self, params: Sequence[RingElement], sign: int = 1) -> GroupElement:
        result = self.group.identity()
        for beta, t in zip(self.system.positive_roots, params):
            result = result * self.group.x(beta.scale(sign), t)
        return result

    def peel(self, g: GroupElement, sign: int = 1) -> Tuple[RingElement, ...]:
        """
        Parameters of g as prod x_{sign*b}(t_b) in positive-root order.

        The leftmost remaining factor is read from the (e_gamma, h_k) entry,
        which equals -t <gamma, a_k>, then divided off on the left.

        Raises:
            NotInBigCell: if g is not such a product
        """
        group = self.group
        params = []
        rest = g
        for beta in self.system.positive_roots:
            gamma = beta.scale(sign)
            k, pairing = self._reading(gamma)
            entry = group.entry(rest, self.system.index(gamma), group.consts.h_index(k))
            t = -entry / pairing
            params.append(t)
            rest = group.x(gamma, -t) * rest
        if not rest.is_identity():
            raise NotInBigCell("Not a product of root unipotents of one sign")
        return tuple(params)

    # Decomposition

    def big_cell_factor(self, g: GroupElement) -> GaussForm:
        """
        Unique g = u t v with u in U, t in T, v in V.

        Raises:
            NotInBigCell: if some pivot is not a unit or g has no such factorisation
        """
        eliminated = self._eliminate(g)
        if eliminated is None:
            raise NotInBigCell("Non-unit pivot")
        diagonal, E = eliminated
        xi = self.torus_table.get(diagonal.astype(np.uint16).tobytes())
        if xi is None:
            raise NotInBigCell("Diagonal part is not a torus element")
        t = self.torus(xi)
        t_inv = self.torus([a.inverse() for a in xi])
        E_element = self.group.from_entries(E)
        v = self.peel(t_inv * E_element * g, sign=-1)
        v_element = self.unipotent(v, sign=-1)
        u = self.peel(g * (t * v_element).inverse(), sign=1)
        zero = tuple(self.ring.zero for _ in u)
        form = GaussForm(u, tuple(xi), v, zero)
        if self.decode(form) != g:
            raise NotInBigCell("Recomposition differs from the input")
        return form

    def decode(self, form: GaussForm) -> GroupElement:
        """u t v u' as a group element."""
        for a in form.h:
            if not a.is_unit():
                raise NonUnitInverse(f"Torus parameter {a} is not a unit")
        return (self.unipotent(form.u) * self.torus(form.h)
                * self.unipotent(form.v, sign=-1) * self.unipotent(form.u2))

    def gauss_decompose(self, g: GroupElement) -> GaussForm:
        """
        Search u'bar over U(k) lexicographically until g u'^-1 lies in the big cell.

        Membership is decided over the residue field; the lifted u' then
        works over R because pivots are units iff their residues are nonzero.

        Raises:
            DecompositionFailed: if no u' works or the recomposition differs
        """
        if g.group != self.group:
            raise RingMismatch(f"{g.group} is not {self.group}")
        ring = self.ring
        field = ring.residue_field
        residue = decomposer(chevalley_group(self.system, field))
        gbar = reduce_mod_radical(g) if not ring.is_field() else g
        for tried, params in enumerate(itertools.product(field.elements(), repeat=self.system.n_positive)):
            candidate = gbar * GroupElement(residue.group, residue._inverse_unipotent(params))
            if not residue.in_big_cell(candidate):
                continue
            lifted = tuple(ring.lift(a) if not ring.is_field() else a for a in params)
            try:
                form = self.big_cell_factor(g * GroupElement(self.group, self._inverse_unipotent(lifted)))
            except NotInBigCell as exc:
                raise DecompositionFailed(f"Lifted u' leaves the big cell over {ring.descriptor}") from exc
            form = GaussForm(form.u, form.h, form.v, lifted)
            if self.decode(form) != g:
                raise DecompositionFailed("Recomposition differs from the input")
            logger.debug("Gauss decomposition found after %d candidates", tried + 1)
            return form
        raise DecompositionFailed(f"No u' over {field.descriptor} puts the element in the big cell")

    def _inverse_unipotent(self, params: Sequence[RingElement]) -> np.ndarray:
        """Matrix of (prod x_a(s_a))^-1 = prod over reversed order of x_a(-s_a)."""
        result = self.group.identity()
        for beta, s in reversed(list(zip(self.system.positive_roots, params))):
            result = result * self.group.x(beta, -s)
        return result.matrix

    # Codes

    def encode(self, g: GroupElement) -> Tuple[RingElement, ...]:
        return self.gauss_decompose(g).to_code()

    def decode_code(self, code: Sequence[RingElement]) -> GroupElement:
        return self.decode(GaussForm.from_code(self.system, code))

    def code_eq(self, c1: Sequence[RingElement], c2: Sequence[RingElement]) -> bool:
        """True iff both codes decode to the same element."""
        return self.decode_code(c1) == self.decode_code(c2)

    def code_mul(self, c1: Sequence[RingElement], c2: Sequence[RingElement]) -> Tuple[RingElement, ...]:
        return self.encode(self.decode_code(c1) * self.decode_code(c2))

    def code_mul_predicate(self, c1, c2, c3) -> bool:
        """psi(c1, c2, c3): c3 codes the product of c1 and c2."""
        return self.code_eq(self.code_mul(c1, c2), c3)

    # Uniqueness on the big cell

    def big_cell_count(self) -> Tuple[int, int]:
        """
        Distinct products u t v over all of U, T, V, against |U| |T| |V|.

        Equal counts mean every big-cell element has exactly one factorisation.
        """
        group = self.group
        m = self.ring.modulus
        values = self.ring.elements()
        n = self.system.n_positive
        U = np.stack([self.unipotent(p).matrix for p in itertools.product(values, repeat=n)])
        V = np.stack([self.unipotent(p, sign=-1).matrix for p in itertools.product(values, repeat=n)])
        T = np.stack([self.torus(xi).matrix for xi in self.torus_table.values()])
        keys = set()
        for t in T:
            UT = U @ t % m
            for v in V:
                products = UT @ v % m
                keys.update(row.tobytes() for row in products[:, :, ::self.ring.dim].astype(np.uint16))
        logger.info("%s: %d distinct big-cell products", group.label, len(keys))
        return len(keys), len(U) * len(T) * len(V)


@lru_cache(maxsize=None)
def decomposer(group: ChevalleyGroup) -> GaussDecomposer:
    return GaussDecomposer(group)


def big_cell_factor(g: GroupElement) -> GaussForm:
    return decomposer(g.group).big_cell_factor(g)


def gauss_decompose(g: GroupElement) -> GaussForm:
    return decomposer(g.group).gauss_decompose(g)


def code_eq(group: ChevalleyGroup, c1, c2) -> bool:
    return decomposer(group).code_eq(c1, c2)


def code_mul(group: ChevalleyGroup, c1, c2) -> Tuple[RingElement, ...]:
    return decomposer(group).code_mul(c1, c2)
