"""
Interpretations between a local ring R and the group E_ad(Phi, R).

Ring inside the group: the carrier is a root subgroup X_delta with the
group operation as addition; multiplication is read off a commutator of
transported copies of the carrier elements. Group inside the ring: Gauss
codes over R with code_eq / code_mul. theta composes the two, and the
parameter formula checks a tuple {x_alpha(1)} semantically.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from services.errors import ChevalleyError, IsomorphismFailure, NoA2Subsystem
from services.gauss import GaussForm, decomposer
from services.group import (
    ChevalleyGroup,
    FiniteGroupTable,
    GroupElement,
    _batch_inverse,
    chevalley_group,
)
from services.lie import GeneratorTemplate, commutator_constants, torus_exponents
from services.rings import LocalRing, RingElement
from services.roots import Root, RootSystem

logger = logging.getLogger(__name__)

DEFAULT_CODE_LIMIT = 5_000_000
THETA_PAIRS = 10_000


class TableRing:
    """
    A finite ring given by addition and multiplication tables on 0..size-1.
    """

    def __init__(self, add: np.ndarray, mul: np.ndarray, zero: int, one: int,
                 labels: Optional[List[str]] = None):
        self.add = add
        self.mul = mul
        self.zero = zero
        self.one = one
        self.size = len(add)
        self.labels = labels or [str(i) for i in range(self.size)]
        self.neg = np.array([int(np.nonzero(add[a] == zero)[0][0]) for a in range(self.size)])
        multiples = [zero]
        while True:
            nxt = int(add[multiples[-1], one])
            if nxt == zero:
                break
            multiples.append(nxt)
        self.multiples = np.array(multiples)
        self.characteristic = len(multiples)

    @classmethod
    def from_local_ring(cls, ring: LocalRing) -> "TableRing":
        elements = ring.elements()
        add = np.array([[ring.index_of(a + b) for b in elements] for a in elements])
        mul = np.array([[ring.index_of(a * b) for b in elements] for a in elements])
        return cls(add, mul, ring.index_of(ring.zero), ring.index_of(ring.one),
                   [str(a) for a in elements])

    def from_int(self, n) -> np.ndarray:
        return self.multiples[np.asarray(n) % self.characteristic]

    def is_unit(self, a: int) -> bool:
        return bool((self.mul[a] == self.one).any())

    def inverse(self, a: int) -> int:
        hits = np.nonzero(self.mul[a] == self.one)[0]
        if not len(hits):
            raise IsomorphismFailure(f"{self.labels[a]} has no inverse")
        return int(hits[0])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inverse(a), -e
        result = self.one
        for _ in range(e):
            result = int(self.mul[result, a])
        return result

    def units(self) -> List[int]:
        return [a for a in range(self.size) if self.is_unit(a)]

    def check_axioms(self) -> Optional[str]:
        """Name of the first commutative-ring axiom that fails, or None."""
        add, mul = self.add, self.mul
        a, b, c = np.meshgrid(*(np.arange(self.size),) * 3, indexing="ij")
        checks = [
            ("additive associativity", add[add[a, b], c], add[a, add[b, c]]),
            ("multiplicative associativity", mul[mul[a, b], c], mul[a, mul[b, c]]),
            ("distributivity", mul[a, add[b, c]], add[mul[a, b], mul[a, c]]),
        ]
        for name, lhs, rhs in checks:
            if not np.array_equal(lhs, rhs):
                return name
        if not np.array_equal(add, add.T):
            return "additive commutativity"
        if not np.array_equal(mul, mul.T):
            return "multiplicative commutativity"
        r = np.arange(self.size)
        if not (np.array_equal(add[r, self.zero], r) and np.array_equal(mul[r, self.one], r)):
            return "identities"
        if self.one == self.zero:
            return "nontriviality"
        return None

    def is_local(self) -> bool:
        """Non-units are closed under addition."""
        non_units = [a for a in range(self.size) if not self.is_unit(a)]
        return not any(self.is_unit(int(self.add[a, b])) for a in non_units for b in non_units)


def find_isomorphism(ring: LocalRing, target: TableRing) -> Optional[Dict[int, int]]:
    """
    A ring isomorphism R -> target as a map of indices, or None.

    The map is fixed by the images of the generators x and e of R; every
    choice is tried and extended through the canonical polynomial form.
    """
    if ring.size != target.size:
        return None
    gens = [g for g in (ring._generator_x(), ring._generator_e()) if g is not None]
    elements = ring.elements()
    for images in itertools.product(range(target.size), repeat=len(gens)):
        image_of = {}
        for a in elements:
            total = target.zero
            for index, c in enumerate(a.coords):
                if not c:
                    continue
                i, j = index % ring.degree, index // ring.degree
                term = int(target.from_int(c))
                if i:
                    term = int(target.mul[term, target.power(images[0], i)])
                if j:
                    term = int(target.mul[term, images[-1]])
                total = int(target.add[total, term])
            image_of[ring.index_of(a)] = total
        if len(set(image_of.values())) != ring.size:
            continue
        if all(image_of[ring.index_of(a + b)] == target.add[image_of[ring.index_of(a)], image_of[ring.index_of(b)]]
               and image_of[ring.index_of(a * b)] == target.mul[image_of[ring.index_of(a)], image_of[ring.index_of(b)]]
               for a in elements for b in elements):
            return image_of
    return None


# Ring frame

@dataclass(frozen=True)
class RingFrame:
    """
    Roots used to build the ring: delta = a + b.

    kind "a2": a, b span an A_2 subsystem. kind "b2": a is the short and b
    the long simple root of B_2 = C_2, and `extra` = 2a + b.
    """
    kind: str
    a: Root
    b: Root
    delta: Root
    extra: Optional[Root] = None


def ring_frame(system: RootSystem) -> RingFrame:
    """
    Raises:
        NoA2Subsystem: if neither frame applies
    """
    pair = system.a2_pair()
    if pair is not None:
        a, b = pair
        return RingFrame("a2", a, b, a + b)
    if system.rank == 2:
        short = min(system.simple_roots, key=system.norm)
        long = max(system.simple_roots, key=system.norm)
        if system.is_root(short.scale(2) + long):
            return RingFrame("b2", short, long, short + long, short.scale(2) + long)
    raise NoA2Subsystem(f"{system.label} has no frame for the ring construction")


def _weyl(x_of: Callable[[Root], GroupElement], beta: Root) -> GroupElement:
    """w_beta(1) = x_beta(1) x_-beta(1)^-1 x_beta(1), from the given one-parameter elements."""
    x = x_of(beta)
    return x * x_of(-beta).inverse() * x


def transports(frame: RingFrame, x_of: Callable[[Root], GroupElement]
               ) -> Tuple[Callable[[GroupElement], GroupElement], Callable[[GroupElement], GroupElement]]:
    """Maps X_delta -> X_a and X_delta -> X_b built from the elements x_of(root)."""
    if frame.kind == "a2":
        w_a, w_b = _weyl(x_of, frame.a), _weyl(x_of, frame.b)
        return (lambda g: g.conjugate(w_b)), (lambda g: g.conjugate(w_a))
    w_short, w_long = _weyl(x_of, frame.a), _weyl(x_of, frame.b)
    x_short = x_of(frame.a)
    return (lambda g: g.conjugate(w_long)), (lambda g: x_short.commutator(g).conjugate(w_short))


class InterpretedRing:
    """
    (carrier, +, *) with carrier a set of group elements.

    Addition is the group operation. For carrier elements p, q let
    raw(p, q) be the carrier component of [phi_a(p), phi_b(q)]; then
    p * q = L^-1(raw(p, q)) with L = raw(., one).
    """

    def __init__(self, group: ChevalleyGroup, carrier: Sequence[GroupElement], one: int,
                 frame: RingFrame, x_of: Callable[[Root], GroupElement], others: Set[bytes]):
        self.group = group
        self.frame = frame
        self.carrier = list(carrier)
        self.index_of: Dict[bytes, int] = {g.key: i for i, g in enumerate(self.carrier)}
        if len(self.index_of) != len(self.carrier):
            raise IsomorphismFailure("Carrier elements are not distinct")
        self.one = one
        self.zero = self.index_of.get(group.identity().key)
        if self.zero is None:
            raise IsomorphismFailure("Carrier does not contain the identity")
        m = group.ring.modulus
        stack = np.stack([g.matrix for g in self.carrier])
        self._inverse_stack = _batch_inverse(stack, m, group.ring.p)
        self._others = others
        size = len(self.carrier)

        add = np.empty((size, size), dtype=np.int64)
        for i in range(size):
            add[i] = [self._lookup(row) for row in stack[i] @ stack % m]

        phi_a, phi_b = transports(frame, x_of)
        left = np.stack([phi_a(g).matrix for g in self.carrier])
        right = np.stack([phi_b(g).matrix for g in self.carrier])
        left_inv = _batch_inverse(left, m, group.ring.p)
        right_inv = _batch_inverse(right, m, group.ring.p)
        raw = np.empty((size, size), dtype=np.int64)
        for i in range(size):
            commutators = (left[i] @ right % m) @ left_inv[i] % m @ right_inv % m
            raw[i] = [self._component(P) for P in commutators]
        scale = {int(raw[i, one]): i for i in range(size)}
        if len(scale) != size:
            raise IsomorphismFailure("raw(., one) is not a bijection of the carrier")
        mul = np.vectorize(lambda r: scale[int(r)])(raw)
        self.ring = TableRing(add, mul, self.zero, one)
        logger.debug("Interpreted ring on %d carrier elements built (%s frame)", size, frame.kind)

    def _lookup(self, matrix: np.ndarray) -> int:
        key = self.group.key(matrix)
        if key not in self.index_of:
            raise IsomorphismFailure("Carrier is not closed under the group operation")
        return self.index_of[key]

    def _component(self, P: np.ndarray) -> int:
        """The z in the carrier with z^-1 P in the product of the other root subgroups."""
        m = self.group.ring.modulus
        candidates = self._inverse_stack @ P % m
        for i, Q in enumerate(candidates):
            if self.group.key(Q) in self._others:
                return i
        raise IsomorphismFailure("Commutator has no carrier component")

    def __len__(self) -> int:
        return len(self.carrier)

    def element(self, i: int) -> GroupElement:
        return self.carrier[i]

    def index(self, g: GroupElement) -> int:
        return self.index_of[g.key]

    def add(self, p: GroupElement, q: GroupElement) -> GroupElement:
        return self.carrier[int(self.ring.add[self.index(p), self.index(q)])]

    def mul(self, p: GroupElement, q: GroupElement) -> GroupElement:
        return self.carrier[int(self.ring.mul[self.index(p), self.index(q)])]


def _unipotent_x_of(group: ChevalleyGroup) -> Callable[[Root], GroupElement]:
    return lambda root: group.x(root, 1)


def ring_from_group(table: Optional[FiniteGroupTable], system: RootSystem, ring: LocalRing,
                    group: Optional[ChevalleyGroup] = None) -> InterpretedRing:
    """
    X_delta with the group operation and the commutator product.

    The group is the table's when one is given, else `group`, else the
    cached E_ad(system, ring).

    Raises:
        NoA2Subsystem: if no frame exists
        IsomorphismFailure: if the ring axioms fail
    """
    if table is not None:
        group = table.group
    elif group is None:
        group = chevalley_group(system, ring)
    if group.system.label != system.label or group.ring != ring:
        raise IsomorphismFailure(f"{group.label} is not built on {system.label}/{ring.descriptor}")
    frame = ring_frame(system)
    carrier = [group.x(frame.delta, t) for t in ring.elements()]
    if table is not None and not all(g in table for g in carrier):
        raise IsomorphismFailure("Carrier is not inside the enumerated group")
    if frame.kind == "a2":
        others = {group.identity().key}
    else:
        others = {group.x(frame.extra, t).key for t in ring.elements()}
    interpreted = InterpretedRing(group, carrier, ring.index_of(ring.one), frame,
                                  _unipotent_x_of(group), others)
    failure = interpreted.ring.check_axioms()
    if failure:
        raise IsomorphismFailure(f"Interpreted ring fails {failure}")
    return interpreted


@dataclass
class RoundTripReport:
    instance: str
    direction: str
    exhaustive: bool
    checked: int
    passed: bool
    failures: List[str] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)


def delta_code(system: RootSystem, ring: LocalRing, delta: Root, t: RingElement) -> GaussForm:
    """The code of x_delta(t): t in the u slot of delta, trivial elsewhere."""
    u = tuple(t if beta == delta else ring.zero for beta in system.positive_roots)
    zeros = (ring.zero,) * system.n_positive
    return GaussForm(u, (ring.one,) * system.rank, zeros, zeros)


def round_trip_ring(system: RootSystem, ring: LocalRing, samples: int = 200, seed: int = 0) -> RoundTripReport:
    """
    R -> coded group over R -> ring interpreted in that group, composed.

    t goes to the code of x_delta(t), which is decoded and located in the
    carrier of the ring interpreted in E(system, R). The composite must be
    a ring isomorphism, checked on every pair. The coded group is sampled
    with `samples` random codes, all of which must decode into the group.
    """
    group = chevalley_group(system, ring)
    coded = group_from_ring(system, ring, limit=0, samples=samples, seed=seed)
    interpreted = ring_from_group(None, system, ring, group=group)
    target = interpreted.ring
    gauss = decomposer(group)
    elements = ring.elements()
    failures = []
    image: Dict[int, int] = {}
    for t in elements:
        decoded = gauss.decode(delta_code(system, ring, interpreted.frame.delta, t))
        if decoded.key not in interpreted.index_of:
            failures.append(f"the code of x_delta({t}) decodes outside the carrier")
            continue
        image[ring.index_of(t)] = interpreted.index(decoded)
    if len(set(image.values())) != len(elements):
        failures.append(f"{len(set(image.values()))} carrier elements reached from {len(elements)} ring elements")
    if not failures:
        if image[ring.index_of(ring.zero)] != interpreted.zero:
            failures.append("0 does not map to the identity")
        if image[ring.index_of(ring.one)] != interpreted.one:
            failures.append("1 does not map to x_delta(1)")
        for a in elements:
            for b in elements:
                i, j = image[ring.index_of(a)], image[ring.index_of(b)]
                if target.add[i, j] != image[ring.index_of(a + b)]:
                    failures.append(f"additivity at ({a}, {b})")
                if target.mul[i, j] != image[ring.index_of(a * b)]:
                    failures.append(f"multiplicativity at ({a}, {b})")
        for u in ring.units():
            if not target.is_unit(image[ring.index_of(u)]):
                failures.append(f"unit {u} has no inverse in the carrier")
    if not target.is_local():
        failures.append("interpreted ring is not local")
    label = f"{system.label}/{ring.descriptor}"
    logger.info("Ring round trip on %s: %d failures", label, len(failures))
    return RoundTripReport(label, "ring", True, len(elements) ** 2, not failures, failures[:10],
                           {"frame": interpreted.frame.kind, "delta": str(interpreted.frame.delta),
                            "codes_decoded": coded.decoded, "code_classes": coded.classes})


# Group inside the ring

class TableChevalleyGroup:
    """
    E_ad(Phi, T) for a table ring T: matrices of element indices.

    Generator matrices come from the integer templates, evaluated with the
    table arithmetic.
    """

    def __init__(self, system: RootSystem, ring: TableRing, templates: Dict[Root, GeneratorTemplate]):
        self.system = system
        self.ring = ring
        self.templates = templates
        self.dim = len(system.roots) + system.rank

    def identity(self) -> np.ndarray:
        out = np.full((self.dim, self.dim), self.ring.zero, dtype=np.int64)
        np.fill_diagonal(out, self.ring.one)
        return out

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        products = self.ring.mul[A[:, :, None], B[None, :, :]]
        acc = products[:, 0, :]
        for k in range(1, self.dim):
            acc = self.ring.add[acc, products[:, k, :]]
        return acc

    def x(self, alpha: Root, t: int) -> np.ndarray:
        acc = np.full((self.dim, self.dim), self.ring.zero, dtype=np.int64)
        power = self.ring.one
        for C in self.templates[alpha].coefficients:
            acc = self.ring.add[acc, self.ring.mul[self.ring.from_int(C), power]]
            power = int(self.ring.mul[power, t])
        return acc

    def h(self, alpha: Root, xi: int) -> np.ndarray:
        out = np.full((self.dim, self.dim), self.ring.zero, dtype=np.int64)
        for i, e in enumerate(torus_exponents(self.system, alpha)):
            out[i, i] = self.ring.power(xi, e)
        return out

    def decode(self, code: Sequence[int]) -> np.ndarray:
        n, l = self.system.n_positive, self.system.rank
        u, h, v, u2 = code[:n], code[n:n + l], code[n + l:2 * n + l], code[2 * n + l:]
        result = self.identity()
        for beta, t in zip(self.system.positive_roots, u):
            result = self.matmul(result, self.x(beta, t))
        for alpha, xi in zip(self.system.simple_roots, h):
            result = self.matmul(result, self.h(alpha, xi))
        for beta, t in zip(self.system.positive_roots, v):
            result = self.matmul(result, self.x(-beta, t))
        for beta, t in zip(self.system.positive_roots, u2):
            result = self.matmul(result, self.x(beta, t))
        return result

    @staticmethod
    def key(matrix: np.ndarray) -> bytes:
        return matrix.astype(np.uint16).tobytes()


@dataclass
class CodedGroupReport:
    instance: str
    code_space: int
    decoded: int
    classes: int
    group_order: Optional[int]
    surjective: Optional[bool]
    sampled: bool


def group_from_ring(system: RootSystem, ring: LocalRing, table: Optional[FiniteGroupTable] = None,
                    limit: int = DEFAULT_CODE_LIMIT, samples: int = 1000, seed: int = 0) -> CodedGroupReport:
    """
    Decode the code space u t v u' and count code_eq classes.

    The whole space is decoded in batches when it has at most `limit`
    codes; otherwise `samples` seeded random codes are decoded and only
    membership in the table is checked.
    """
    group = table.group if table is not None else chevalley_group(system, ring)
    gauss = decomposer(group)
    m = ring.modulus
    n, l = system.n_positive, system.rank
    units = ring.units()
    elements = ring.elements()
    code_space = ring.size ** (3 * n) * len(units) ** l
    label = f"{system.label}/{ring.descriptor}"
    table_keys = set(table.index_of) if table is not None else None
    keys: Set[bytes] = set()
    if code_space <= limit:
        U = np.stack([gauss.unipotent(p).matrix for p in itertools.product(elements, repeat=n)])
        V = np.stack([gauss.unipotent(p, sign=-1).matrix for p in itertools.product(elements, repeat=n)])
        T = np.stack([gauss.torus(xi).matrix for xi in itertools.product(units, repeat=l)])
        VU = (V[:, None] @ U[None, :] % m).reshape(-1, group.size, group.size)
        for u in U:
            for t in T:
                products = (u @ t % m) @ VU % m
                keys.update(group.key(P) for P in products)
        decoded, sampled = code_space, False
    else:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            form = GaussForm(
                tuple(ring.from_index(int(i)) for i in rng.integers(ring.size, size=n)),
                tuple(units[int(i)] for i in rng.integers(len(units), size=l)),
                tuple(ring.from_index(int(i)) for i in rng.integers(ring.size, size=n)),
                tuple(ring.from_index(int(i)) for i in rng.integers(ring.size, size=n)),
            )
            keys.add(gauss.decode(form).key)
        decoded, sampled = samples, True
    surjective = None
    order = None
    if table_keys is not None:
        order = len(table)
        if not keys <= table_keys:
            raise IsomorphismFailure("A code decodes outside the enumerated group")
        surjective = len(keys) == order if not sampled else None
    logger.info("Coded group on %s: %d codes, %d classes", label, decoded, len(keys))
    return CodedGroupReport(label, code_space, decoded, len(keys), order, surjective, sampled)


class Theta:
    """
    g -> Gauss code of g with coordinates moved into the interpreted ring,
    decoded in the group over that ring.

    With a table, images are cached by table index; without one, `map`
    works on any element of the group.
    """

    def __init__(self, table: Optional[FiniteGroupTable], interpreted: InterpretedRing):
        self.table = table
        self.group = interpreted.group
        self.system = self.group.system
        self.interpreted = interpreted
        templates = {alpha: self.group.template(alpha) for alpha in self.system.roots}
        self.target = TableChevalleyGroup(self.system, interpreted.ring, templates)
        self._forms: Dict[int, GaussForm] = {}
        self._images: Dict[int, np.ndarray] = {}

    def transport(self, t: RingElement) -> int:
        return self.interpreted.index(self.group.x(self.interpreted.frame.delta, t))

    def map(self, g: GroupElement) -> np.ndarray:
        form = decomposer(self.group).gauss_decompose(g)
        return self.target.decode([self.transport(c) for c in form.to_code()])

    def form(self, i: int) -> GaussForm:
        if i not in self._forms:
            self._forms[i] = decomposer(self.group).gauss_decompose(self.table.element(i))
        return self._forms[i]

    def image(self, i: int) -> np.ndarray:
        if i not in self._images:
            self._images[i] = self.target.decode([self.transport(c) for c in self.form(i).to_code()])
        return self._images[i]

    def __call__(self, g: GroupElement) -> np.ndarray:
        if self.table is None:
            return self.map(g)
        return self.image(self.table.index(g))


def theta_isomorphism(table: FiniteGroupTable, pairs: Optional[int] = THETA_PAIRS, seed: int = 0) -> RoundTripReport:
    """
    theta is a bijective homomorphism E(R) -> E(R').

    Images are computed for every element. The homomorphism property is
    checked on all pairs when `pairs` is None, otherwise on seeded random pairs.
    """
    group = table.group
    system, ring = group.system, group.ring
    theta = Theta(table, ring_from_group(table, system, ring))
    images = {}
    for i in range(len(table)):
        images.setdefault(TableChevalleyGroup.key(theta.image(i)), i)
    failures = []
    if len(images) != len(table):
        failures.append(f"theta has {len(images)} distinct images on {len(table)} elements")
    if not np.array_equal(theta.image(0), theta.target.identity()):
        failures.append("theta(identity) is not the identity")
    if pairs is None:
        pair_list = [(i, j) for i in range(len(table)) for j in range(len(table))]
    else:
        rng = np.random.default_rng(seed)
        pair_list = [tuple(int(k) for k in rng.integers(len(table), size=2)) for _ in range(pairs)]
    for i, j in pair_list:
        product = table.multiply(i, j)
        if not np.array_equal(theta.target.matmul(theta.image(i), theta.image(j)), theta.image(product)):
            failures.append(f"theta(g h) != theta(g) theta(h) for {table.word(i)}, {table.word(j)}")
            break
    label = f"{system.label}/{ring.descriptor}"
    logger.info("theta on %s: %d images, %d pairs", label, len(images), len(pair_list))
    return RoundTripReport(label, "group", pairs is None, len(pair_list), not failures, failures,
                           {"order": len(table), "images": len(images)})


def theta_sampled(group: ChevalleyGroup, pairs: int = THETA_PAIRS, seed: int = 0) -> RoundTripReport:
    """
    theta on seeded random words, for groups too large to enumerate.

    Checks theta(g h) = theta(g) theta(h) on `pairs` pairs, and that
    distinct sampled elements have distinct images.
    """
    system, ring = group.system, group.ring
    theta = Theta(None, ring_from_group(None, system, ring, group=group))
    rng = np.random.default_rng(seed)
    failures = []
    if not np.array_equal(theta(group.identity()), theta.target.identity()):
        failures.append("theta(identity) is not the identity")
    images: Dict[bytes, bytes] = {}
    for _ in range(pairs):
        g, h = group.random_element(rng), group.random_element(rng)
        theta_g, theta_h = theta(g), theta(h)
        for element, image in ((g, theta_g), (h, theta_h)):
            if images.setdefault(TableChevalleyGroup.key(image), element.key) != element.key:
                failures.append(f"theta identifies {element!r} with another sampled element")
        if not np.array_equal(theta.target.matmul(theta_g, theta_h), theta(g * h)):
            failures.append(f"theta(g h) != theta(g) theta(h) for {g!r}, {h!r}")
        if failures:
            break
    label = f"{system.label}/{ring.descriptor}"
    logger.info("theta on %s: %d sampled pairs, %d distinct images", label, pairs, len(images))
    return RoundTripReport(label, "group", False, pairs, not failures, failures[:10],
                           {"images": len(images), "sampled": True})


# Parameter formula

@dataclass
class ParameterTuple:
    """One group element per root, standing for x_alpha(1)."""
    elements: Dict[Root, GroupElement]

    @classmethod
    def standard(cls, group: ChevalleyGroup) -> "ParameterTuple":
        return cls({alpha: group.x(alpha, 1) for alpha in group.system.roots})

    def replace(self, alpha: Root, g: GroupElement) -> "ParameterTuple":
        elements = dict(self.elements)
        elements[alpha] = g
        return ParameterTuple(elements)

    def map(self, fn: Callable[[GroupElement], GroupElement]) -> "ParameterTuple":
        return ParameterTuple({alpha: fn(g) for alpha, g in self.elements.items()})

    def __getitem__(self, alpha: Root) -> GroupElement:
        return self.elements[alpha]


@dataclass
class ParameterReport:
    conjugacy: bool
    commutators: bool
    local_rings: bool
    gauss_factors: bool
    witnesses: Dict[str, str] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.conjugacy and self.commutators and self.local_rings and self.gauss_factors


def _power(g: GroupElement, k: int) -> GroupElement:
    base = g if k >= 0 else g.inverse()
    result = g.group.identity()
    for _ in range(abs(k)):
        result = result * base
    return result


def _check_conjugacy(table: FiniteGroupTable, candidate: ParameterTuple, report: ParameterReport) -> None:
    system = table.group.system
    weyl = []
    for beta in system.simple_roots:
        w = _weyl(candidate.__getitem__, beta)
        weyl += [table.index(w), int(table.inverses[table.index(w)])]
    for norm in sorted({system.norm(r) for r in system.roots}):
        same = [r for r in system.roots if system.norm(r) == norm]
        start = table.index(candidate[same[0]])
        reached = {start}
        frontier = [start]
        for _ in range(2 * len(system.roots)):
            fresh = []
            for w in weyl:
                for c in table.conjugates(frontier, w).tolist():
                    if c not in reached:
                        reached.add(c)
                        fresh.append(c)
            if not fresh:
                break
            frontier = fresh
        for gamma in same:
            i = table.index(candidate[gamma])
            if i not in reached and int(table.inverses[i]) not in reached:
                report.conjugacy = False
                report.witnesses["conjugacy"] = f"{gamma} is not reached from {same[0]}"
                return


def _check_commutators(group: ChevalleyGroup, candidate: ParameterTuple, report: ParameterReport) -> None:
    system = group.system
    for alpha in system.roots:
        for beta in system.roots:
            if beta == alpha or beta == -alpha:
                continue
            lhs = candidate[alpha].commutator(candidate[beta])
            rhs = group.identity()
            for term in commutator_constants(system, group.consts, alpha, beta):
                rhs = rhs * _power(candidate[term.root], term.constant)
            if lhs != rhs:
                report.commutators = False
                report.witnesses["commutators"] = f"[{alpha}, {beta}]"
                return


def _carrier(table: FiniteGroupTable, g: GroupElement) -> List[int]:
    """Z(C(g)) as sorted table indices."""
    mask = table.centralizer_mask(g)
    generators = table.generating_subset(np.nonzero(mask)[0])
    return np.nonzero(mask & table.common_centralizer_mask(generators))[0].tolist()


def parameter_report(table: FiniteGroupTable, candidate: ParameterTuple,
                     forms: Optional[Dict[int, GaussForm]] = None) -> ParameterReport:
    """
    The four properties of a parameter tuple, evaluated on the table.

    1. candidates of equal-length roots are conjugate (up to inversion) by
       words of length at most 2|Phi| in the Weyl elements they define;
    2. the Chevalley commutator relations hold among the candidates;
    3. each Z(C(candidate)) has the same order, and the ring built on the
       carrier of delta is a commutative local ring;
    4. the Gauss factors of every element lie in these carriers and the
       torus factor normalizes each of them.
    """
    group = table.group
    system = group.system
    report = ParameterReport(True, True, True, True)
    if any(candidate[alpha] not in table for alpha in system.roots):
        report.conjugacy = report.commutators = report.local_rings = report.gauss_factors = False
        report.witnesses["membership"] = "candidate outside the group"
        return report
    _check_conjugacy(table, candidate, report)
    _check_commutators(group, candidate, report)

    carriers = {alpha: _carrier(table, candidate[alpha]) for alpha in system.roots}
    sizes = {len(c) for c in carriers.values()}
    ring_frame(system)  # NoA2Subsystem propagates
    if len(sizes) != 1:
        report.local_rings = False
        report.witnesses["local_rings"] = f"carrier orders {sorted(sizes)}"
    else:
        try:
            interpreted = _interpreted(table, candidate, carriers)
            failure = interpreted.ring.check_axioms()
            if failure or not interpreted.ring.is_local():
                report.local_rings = False
                report.witnesses["local_rings"] = failure or "not local"
        except (ChevalleyError, ValueError) as exc:
            report.local_rings = False
            report.witnesses["local_rings"] = str(exc)

    carrier_keys = {alpha: {table.element(i).key for i in c} for alpha, c in carriers.items()}
    gauss = decomposer(group)
    normalizes: Dict[Tuple[int, ...], bool] = {}
    for i in range(len(table)):
        form = forms[i] if forms is not None else gauss.gauss_decompose(table.element(i))
        factors = [(beta, t) for params in (form.u, form.u2) for beta, t in zip(system.positive_roots, params)]
        factors += [(-beta, t) for beta, t in zip(system.positive_roots, form.v)]
        if any(group.x(root, t).key not in carrier_keys[root] for root, t in factors):
            report.gauss_factors = False
            report.witnesses["gauss_factors"] = f"factor of {table.word(i)} outside its carrier"
            break
        torus_key = tuple(a.coords for a in form.h)
        if torus_key not in normalizes:
            t = gauss.torus(form.h)
            normalizes[torus_key] = all(
                {table.index(table.element(j).conjugate(t)) for j in c} == set(c) for c in carriers.values())
        if not normalizes[torus_key]:
            report.gauss_factors = False
            report.witnesses["gauss_factors"] = f"torus of {table.word(i)} moves a carrier"
            break
    return report


def verify_parameter_formula(table: FiniteGroupTable, candidate: ParameterTuple,
                             forms: Optional[Dict[int, GaussForm]] = None) -> bool:
    """Conjunction of the four parameter properties."""
    return parameter_report(table, candidate, forms).accepted


def gauss_forms(table: FiniteGroupTable) -> Dict[int, GaussForm]:
    """Gauss forms of every table element, for reuse across candidate tuples."""
    gauss = decomposer(table.group)
    return {i: gauss.gauss_decompose(table.element(i)) for i in range(len(table))}


def _interpreted(table: FiniteGroupTable, candidate: ParameterTuple,
                 carriers: Optional[Dict[Root, List[int]]] = None) -> InterpretedRing:
    group = table.group
    frame = ring_frame(group.system)
    carrier_of = carriers.__getitem__ if carriers is not None else (lambda root: _carrier(table, candidate[root]))
    members = carrier_of(frame.delta)
    carrier = [table.element(i) for i in members]
    one = members.index(table.index(candidate[frame.delta]))
    if frame.kind == "a2":
        others = {group.identity().key}
    else:
        others = {table.element(i).key for i in carrier_of(frame.extra)}
    return InterpretedRing(group, carrier, one, frame, candidate.__getitem__, others)


def interpreted_ring_for(table: FiniteGroupTable, candidate: ParameterTuple) -> TableRing:
    """The ring an accepted tuple defines on the carrier of delta."""
    return _interpreted(table, candidate).ring
