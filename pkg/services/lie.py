"""
Chevalley basis of the simple Lie algebra of a root system.

Structure constants are fixed by giving every extraspecial pair the sign +1;
the remaining constants follow from the standard identities between N's.
The adjoint generators x_alpha(t) = exp(t ad e_alpha) are computed once over
the integers as matrix polynomials in t and evaluated per ring afterwards.

Basis order: e_alpha for alpha in RootSystem.roots, then h_1 .. h_l.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from services.errors import NonIntegralEntry, SignInconsistency
from services.roots import Root, RootSystem

logger = logging.getLogger(__name__)


class StructureConstants:
    """
    Constants N_{alpha,beta} of [e_alpha, e_beta] = N_{alpha,beta} e_{alpha+beta}.

    Also carries the adjoint matrices of the basis, used for the Jacobi check
    and for the generator templates.
    """

    def __init__(self, system: RootSystem):
        self.system = system
        self.dim = len(system.roots) + system.rank
        self._memo: Dict[Tuple[Root, Root], int] = {}
        self.N: Dict[Tuple[Root, Root], int] = {}
        for alpha in system.roots:
            for beta in system.roots:
                if system.is_root(alpha + beta):
                    self.N[(alpha, beta)] = self._n(alpha, beta)
        self.ad = self._adjoint_matrices()

    def cartan_action(self, alpha: Root, beta: Root) -> int:
        """Eigenvalue of ad h_alpha on e_beta, i.e. <beta, alpha>."""
        return self.system.pairing(beta, alpha)

    def h_index(self, k: int) -> int:
        return len(self.system.roots) + k

    # Sign bookkeeping

    def _p(self, alpha: Root, beta: Root) -> int:
        return self.system.root_string(alpha, beta)[0]

    def _extraspecial(self, xi: Root) -> Tuple[Root, Root]:
        for a in self.system.positive_roots:
            rest = xi - a
            if rest.is_positive and self.system.is_root(rest):
                return a, rest
        raise SignInconsistency(f"No extraspecial pair for {xi}")

    def _n(self, r: Root, s: Root) -> int:
        system = self.system
        if not system.is_root(r + s):
            return 0
        if (r, s) in self._memo:
            return self._memo[(r, s)]
        if r.is_positive and s.is_positive:
            a, b = self._extraspecial(r + s)
            if (r, s) == (a, b):
                value = Fraction(self._p(a, b) + 1)
            elif (s, r) == (a, b):
                value = Fraction(-(self._p(a, b) + 1))
            elif system.index(r) > system.index(s):
                value = Fraction(-self._n(s, r))
            else:
                total = Fraction(0)
                if system.is_root(s - a):
                    total += Fraction(self._n(s, -a) * self._n(r, -b), system.norm(s - a))
                if system.is_root(r - a):
                    total += Fraction(self._n(-a, r) * self._n(s, -b), system.norm(r - a))
                n_neg = Fraction(-(self._p(a, b) + 1) ** 2, self._p(a, b) + 1)
                value = -system.norm(r + s) * total / n_neg
        elif not r.is_positive and not s.is_positive:
            value = Fraction(-(self._p(r, s) + 1) ** 2, self._n(-r, -s))
        else:
            t = -(r + s)
            if s.is_positive == t.is_positive:
                value = Fraction(system.norm(t) * self._n(s, t), system.norm(r))
            else:
                value = Fraction(system.norm(t) * self._n(t, r), system.norm(s))
        if value.denominator != 1 or abs(value) != self._p(r, s) + 1:
            raise SignInconsistency(f"N({r},{s}) = {value}")
        self._memo[(r, s)] = int(value)
        return int(value)

    # Adjoint representation

    def bracket(self, i: int, j: int) -> np.ndarray:
        """Coordinates of [b_i, b_j] for basis vectors b_i, b_j."""
        system = self.system
        n_roots = len(system.roots)
        out = np.zeros(self.dim, dtype=np.int64)
        if i < n_roots and j < n_roots:
            alpha, beta = system.roots[i], system.roots[j]
            total = alpha + beta
            if total.is_zero:
                for k, c in enumerate(system.coroot_coeffs(alpha)):
                    out[n_roots + k] = c
            elif system.is_root(total):
                out[system.index(total)] = self.N[(alpha, beta)]
        elif i < n_roots:
            alpha = system.roots[i]
            out[i] = -system.pairing(alpha, system.simple_roots[j - n_roots])
        elif j < n_roots:
            beta = system.roots[j]
            out[j] = system.pairing(beta, system.simple_roots[i - n_roots])
        return out

    def _adjoint_matrices(self) -> np.ndarray:
        ad = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for i in range(self.dim):
            for j in range(self.dim):
                ad[i, :, j] = self.bracket(i, j)
        return ad

    def verify_jacobi(self) -> None:
        """ad [b_i, b_j] = [ad b_i, ad b_j] for every pair of basis vectors."""
        ad = self.ad
        for i in range(self.dim):
            lhs = np.einsum("kj,kab->jab", ad[i], ad)
            rhs = np.matmul(ad[i], ad) - np.matmul(ad, ad[i])
            if not np.array_equal(lhs, rhs):
                j = int(np.nonzero((lhs != rhs).any(axis=(1, 2)))[0][0])
                raise SignInconsistency(f"Jacobi identity fails for basis pair ({i}, {j})")


@lru_cache(maxsize=None)
def _constants(system: RootSystem, verify: bool) -> StructureConstants:
    logger.info("Computing structure constants for %s", system.label)
    consts = StructureConstants(system)
    if verify:
        consts.verify_jacobi()
        logger.info("Jacobi identity verified on %d basis vectors", consts.dim)
    return consts


def compute_structure_constants(system: RootSystem, verify: bool = True) -> StructureConstants:
    """
    Chevalley-basis structure constants with the extraspecial sign convention.

    Args:
        system: Root system
        verify: Run the exhaustive Jacobi check before returning

    Returns:
        StructureConstants
    """
    return _constants(system, verify)


@dataclass(eq=False)
class GeneratorTemplate:
    """
    x_alpha(t) as an integer matrix polynomial: sum_k coefficients[k] t^k.
    """
    root: Root
    coefficients: List[np.ndarray] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate_integer(self, t: int) -> np.ndarray:
        return sum(c * t ** k for k, c in enumerate(self.coefficients))

    def evaluate(self, ring, t) -> np.ndarray:
        """Block matrix of x_alpha(t) over `ring` (regular representation)."""
        t = ring.element(t)
        m = ring.modulus
        power = ring.one
        total = None
        for c in self.coefficients:
            term = np.kron(c % m, ring.regular(power))
            total = term if total is None else total + term
            power = power * t
        return total % m

    def as_sympy(self, symbol: Optional[sympy.Symbol] = None) -> sympy.Matrix:
        t = symbol if symbol is not None else sympy.Symbol("t")
        size = self.coefficients[0].shape[0]
        matrix = sympy.zeros(size, size)
        for k, c in enumerate(self.coefficients):
            matrix += sympy.Matrix(c.tolist()) * t ** k
        return matrix

    def to_json(self) -> List[List[List[int]]]:
        """Matrix whose entries are coefficient lists, lowest degree first."""
        stacked = np.stack(self.coefficients, axis=-1)
        return stacked.tolist()


def adjoint_generator(system: RootSystem, consts: StructureConstants, alpha: Root) -> GeneratorTemplate:
    """
    exp(t ad e_alpha) with integrality of every coefficient asserted.

    Raises:
        NonIntegralEntry: if some (ad e_alpha)^k / k! is not integral
    """
    ad = consts.ad[system.index(alpha)]
    power = np.eye(consts.dim, dtype=np.int64)
    coefficients = [power.copy()]
    k = 0
    while True:
        power = power @ ad
        k += 1
        if not power.any():
            break
        if np.any(power % factorial(k)):
            raise NonIntegralEntry(f"(ad e_{alpha})^{k}/{k}! is not integral")
        coefficients.append(power // factorial(k))
    return GeneratorTemplate(alpha, coefficients)


def torus_exponents(system: RootSystem, alpha: Root) -> List[int]:
    """Exponent of t on each basis vector under h_alpha(t)."""
    return [system.pairing(beta, alpha) for beta in system.roots] + [0] * system.rank


def torus_generator(system: RootSystem, alpha: Root, t, ring) -> np.ndarray:
    """
    Block matrix of h_alpha(t): e_beta -> t^<beta,alpha> e_beta, identity on the Cartan part.

    Raises:
        NonUnitInverse: if t is not a unit
    """
    t = ring.element(t)
    inverse = t.inverse()
    exponents = torus_exponents(system, alpha)
    size = len(exponents)
    coords = np.zeros((size, size, ring.dim), dtype=np.int64)
    for i, e in enumerate(exponents):
        value = t ** e if e >= 0 else inverse ** (-e)
        coords[i, i] = value.coords
    return ring.blocks_from_coords(coords)


@dataclass(frozen=True)
class CommutatorTerm:
    """One factor x_{i alpha + j beta}(C s^i t^j) of a Chevalley commutator."""
    i: int
    j: int
    root: Root
    constant: int


def reading_column(system: RootSystem, gamma: Root) -> Tuple[int, int]:
    """
    Simple coroot index k and pairing <gamma, a_k> used to read x_gamma's parameter.

    The (e_gamma, h_k) entry of x_gamma(c) is -c <gamma, a_k>. The k with the
    smallest nonzero |pairing| is chosen.
    """
    options = [(abs(system.pairing(gamma, a)), k) for k, a in enumerate(system.simple_roots)
               if system.pairing(gamma, a)]
    _, k = min(options)
    return k, system.pairing(gamma, system.simple_roots[k])


def commutator_constants(system: RootSystem, consts: StructureConstants,
                         alpha: Root, beta: Root) -> List[CommutatorTerm]:
    """
    Integer constants C_ij with

        x_alpha(s) x_beta(t) x_alpha(-s) x_beta(-t) = prod x_{i alpha + j beta}(C_ij s^i t^j)

    the product taken by increasing i + j, then increasing i. Extracted at
    s = t = 1 over the integers by peeling factors off from the left.
    """
    combos = sorted(
        ((i, j) for i in range(1, 4) for j in range(1, 4)
         if system.is_root(alpha.scale(i) + beta.scale(j))),
        key=lambda ij: (ij[0] + ij[1], ij[0]),
    )
    xa = adjoint_generator(system, consts, alpha)
    xb = adjoint_generator(system, consts, beta)
    M = xa.evaluate_integer(1) @ xb.evaluate_integer(1) @ xa.evaluate_integer(-1) @ xb.evaluate_integer(-1)
    terms = []
    for i, j in combos:
        gamma = alpha.scale(i) + beta.scale(j)
        k, pairing = reading_column(system, gamma)
        entry = int(M[system.index(gamma), consts.h_index(k)])
        if entry % pairing:
            raise SignInconsistency(f"Unreadable commutator component on {gamma}")
        c = -entry // pairing
        terms.append(CommutatorTerm(i, j, gamma, c))
        M = adjoint_generator(system, consts, gamma).evaluate_integer(-c) @ M
    if not np.array_equal(M, np.eye(consts.dim, dtype=np.int64)):
        raise SignInconsistency(f"Commutator of {alpha} and {beta} is not a product over iα+jβ")
    return terms
