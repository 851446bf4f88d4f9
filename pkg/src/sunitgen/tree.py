"""The (p+1)-regular tree of rank-2 lattice classes and the quaternion action.

Vertices are homothety classes of rank-2 lattices over the p-adic integers,
stored in a unique integer normal form: the class of the lattice spanned by
the columns (p^a, 0) and (c, p^b) with 0 <= c < p^a and not all of a >= 1,
b >= 1, p | c (primitivity).  Distance to the base class (0, 0, 0) is a + b.

Quaternions act through the matrix splitting at p by left multiplication on
lattice bases.  Rational scalar factors act trivially, so the action of any
nonzero quaternion is computed from a primitive integer multiple; all the
p-adic arithmetic happens on integer residues with certified valuations, and
the normal form is exact.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from math import gcd

from .enumeration import elements_of_norm, generating_set
from .errors import VerificationError
from .padic import (
    DEFAULT_PRECISION,
    PAdicMatrix2,
    PrecisionError,
    SingularMatrixError,
    SplittingData,
    splitting_data,
)
from .quaternion import HurwitzElement, RatQuaternion, SPlaceSet, is_odd_prime

__all__ = [
    "TreeVertex",
    "ProductVertex",
    "base_vertex",
    "canonicalize",
    "neighbors",
    "act",
    "distance",
    "ball",
    "ball_size",
    "NeighborCoverageReport",
    "neighbor_coverage",
    "TransitivityReport",
    "product_transitivity",
    "tree_precision",
]

_INF = math.inf


@dataclass(frozen=True, order=True)
class TreeVertex:
    """Normal form (a, b, c) of a lattice class at the odd prime p."""

    p: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        if self.a < 0 or self.b < 0:
            raise ValueError("exponents must be non-negative")
        if not 0 <= self.c < self.p ** self.a:
            raise ValueError(f"offset {self.c} outside [0, p^{self.a})")
        if self.a >= 1 and self.b >= 1 and self.c % self.p == 0:
            raise ValueError("non-primitive normal form")

    @property
    def distance_to_base(self) -> int:
        return self.a + self.b

    def basis_matrix(self) -> tuple[int, int, int, int]:
        """Row-major integer basis ((p^a, c), (0, p^b))."""
        return (self.p ** self.a, self.c, 0, self.p ** self.b)

    def key(self) -> str:
        return f"{self.p}:({self.a},{self.b},{self.c})"


def base_vertex(p: int) -> TreeVertex:
    return TreeVertex(p, 0, 0, 0)


def _vp_residue(x: int, p: int, cap):
    """Valuation of a residue known mod p^cap; cap (or inf) when x == 0."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v if cap is None or v < cap else cap


def _canonical_triple(m: tuple[int, int, int, int], p: int, mod_exp=None,
                      det_val=None) -> tuple[int, int, int]:
    """Normal form of the lattice spanned by the columns of a 2x2 matrix.

    `m` is row major.  With mod_exp=None the entries are exact integers;
    otherwise they are residues modulo p^mod_exp and every certification
    failure raises PrecisionError.  det_val, when given, is the exact
    valuation of the true determinant and spares computing it from residues.
    """
    m11, m12, m21, m22 = m
    cap = _INF if mod_exp is None else mod_exp
    vals = [_vp_residue(x, p, cap) for x in (m11, m12, m21, m22)]
    e1 = min(vals)
    if e1 >= cap:
        if mod_exp is None:
            raise SingularMatrixError("zero matrix spans no lattice")
        raise PrecisionError("all entries vanish at working precision")

    scale = p ** e1
    m11, m12, m21, m22 = m11 // scale, m12 // scale, m21 // scale, m22 // scale
    cap2 = cap - e1  # residues now known mod p^cap2

    if det_val is not None:
        vdet = det_val - 2 * e1
    else:
        det = m11 * m22 - m12 * m21
        if mod_exp is not None:
            det %= p ** cap2
        vdet = _vp_residue(det, p, _INF if mod_exp is None else cap2)
        if vdet >= cap2 and mod_exp is not None:
            raise PrecisionError("determinant vanishes at working precision")
        if det == 0 and mod_exp is None:
            raise SingularMatrixError("singular lattice basis")
    if vdet < 0:
        raise ValueError("scaled matrix has negative determinant valuation")

    v21 = _vp_residue(m21, p, cap2)
    v22 = _vp_residue(m22, p, cap2)
    b = min(v21, v22)
    if b >= cap2:
        # the true bottom valuations cannot both exceed vdet < cap2
        raise PrecisionError("bottom row vanishes at working precision")
    a = vdet - b
    assert a >= 0
    if mod_exp is not None and cap2 - b < a:
        raise PrecisionError(f"need {a + b} certified digits, have {cap2 - b}")
    if a == 0:
        return 0, vdet, 0
    # pivot column: minimal bottom valuation; its unit-normalized top entry
    # is the offset modulo p^a
    if v22 <= v21:
        top, bottom = m12, m22
    else:
        top, bottom = m11, m21
    mod_a = p ** a
    unit = (bottom // p ** b) % mod_a
    c = top * pow(unit, -1, mod_a) % mod_a
    if a >= 1 and b >= 1:
        assert c % p != 0, "primitive class produced a non-primitive form"
    return a, b, c


def canonicalize(m: PAdicMatrix2) -> TreeVertex:
    """Normal form of the lattice class spanned by a p-adic basis matrix."""
    p = m.p
    e1 = m.min_valuation()
    det = m.det()
    if det.is_exact_zero:
        raise SingularMatrixError("singular lattice basis")
    det_val = det.valuation()  # PrecisionError if indistinguishable from zero
    abs_prec = min(e.abs_prec for e in m.entries)
    if abs_prec == _INF:
        raise PrecisionError("exact zero entries carry no residue modulus")
    mod_exp = int(abs_prec - e1)
    if mod_exp < 1:
        raise PrecisionError("entries carry no certified digits after scaling")
    residues = []
    for entry in m.entries:
        if entry.is_zeroish:
            residues.append(0)
        else:
            residues.append(entry.unit * p ** (entry.val - e1) % p ** mod_exp)
    # the residues describe the basis scaled by p^-e1, whose determinant
    # valuation drops by 2*e1
    a, b, c = _canonical_triple(tuple(residues), p, mod_exp=mod_exp,
                                det_val=det_val - 2 * e1)
    return TreeVertex(p, a, b, c)


def _mul2(x: tuple[int, int, int, int], y: tuple[int, int, int, int], mod=None):
    a11, a12, a21, a22 = x
    b11, b12, b21, b22 = y
    out = (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22,
           a21 * b11 + a22 * b21, a21 * b12 + a22 * b22)
    if mod is None:
        return out
    return tuple(v % mod for v in out)


def neighbors(v: TreeVertex) -> list[TreeVertex]:
    """The p+1 classes at distance 1: the index-p sublattices of any rep."""
    p = v.p
    basis = v.basis_matrix()
    out = set()
    for j in range(p):
        a, b, c = _canonical_triple(_mul2(basis, (p, j, 0, 1)), p)
        out.add(TreeVertex(p, a, b, c))
    a, b, c = _canonical_triple(_mul2(basis, (1, 0, 0, p)), p)
    out.add(TreeVertex(p, a, b, c))
    assert len(out) == p + 1
    return sorted(out)


def distance(v1: TreeVertex, v2: TreeVertex) -> int:
    """Tree distance: gap of the divisors of the change-of-basis matrix."""
    if v1.p != v2.p:
        raise ValueError("vertices live on different trees")
    p = v1.p
    a11, a12, a21, a22 = v1.basis_matrix()
    adjugate = (a22, -a12, -a21, a11)
    rel = _mul2(adjugate, v2.basis_matrix())
    vdet = _vp_residue(rel[0] * rel[3] - rel[1] * rel[2], p, _INF)
    e1 = min(_vp_residue(x, p, _INF) for x in rel)
    return vdet - 2 * e1


def _primitive_int_coords(q: RatQuaternion) -> tuple[int, int, int, int]:
    """Integer coordinates of a positive rational multiple of q, gcd 1."""
    den = math.lcm(*(c.denominator for c in q.coordinates()))
    nums = [int(c * den) for c in q.coordinates()]
    g = gcd(*nums)
    return tuple(n // g for n in nums)


def _act_residues(image: tuple[int, int, int, int], norm_val: int,
                  v: TreeVertex, mod_exp: int) -> TreeVertex:
    """Apply a precomputed integral splitting image to a vertex."""
    p = v.p
    mod = p ** mod_exp
    product = _mul2(image, v.basis_matrix(), mod)
    a, b, c = _canonical_triple(product, p, mod_exp=mod_exp,
                                det_val=norm_val + v.a + v.b)
    return TreeVertex(p, a, b, c)


def act(q: RatQuaternion, v: TreeVertex, split: SplittingData) -> TreeVertex:
    """Class of the lattice rho(q) * L; scalar multiples of q act identically."""
    if q.is_zero():
        raise ValueError("zero does not act on the tree")
    if split.p != v.p:
        raise ValueError("splitting prime differs from the vertex prime")
    w, x, y, z = _primitive_int_coords(q)
    norm = w * w + x * x + y * y + z * z
    norm_val = _vp_residue(norm, v.p, _INF)
    image = split.integer_image(w, x, y, z)
    return _act_residues(image, norm_val, v, split.prec)


def ball(p: int, radius: int) -> set[TreeVertex]:
    """All vertices within the given distance of the base, by edge search."""
    seen = {base_vertex(p)}
    frontier = [base_vertex(p)]
    for _ in range(radius):
        new = []
        for v in frontier:
            for w in neighbors(v):
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    return seen


def ball_size(p: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + (p + 1) * (p ** radius - 1) // (p - 1)


def tree_precision(radius: int) -> int:
    """Residue digits for a radius-R verification: 2R plus safety margin."""
    return 2 * radius + 8


@dataclass(frozen=True)
class NeighborCoverageReport:
    p: int
    norm_class_size: int
    neighbor_count: int
    witness_per_neighbor: dict[TreeVertex, HurwitzElement]


def neighbor_coverage(p: int, prec: int = DEFAULT_PRECISION) -> NeighborCoverageReport:
    """Check that the norm-p classes move the base vertex onto every neighbor.

    Together with connectivity this gives vertex transitivity on the single
    tree.  Raises VerificationError if any neighbor is missed or any norm-p
    element fails to move the base by exactly 1.
    """
    split = splitting_data(p, prec)
    base = base_vertex(p)
    gens = elements_of_norm(p)
    hits: dict[TreeVertex, HurwitzElement] = {}
    for g in gens:
        vert = act(g.to_quaternion(), base, split)
        if distance(base, vert) != 1:
            raise VerificationError(f"norm-{p} element {g} moved base by != 1")
        hits.setdefault(vert, g)
    expected = set(neighbors(base))
    if set(hits) != expected:
        missing = sorted(expected - set(hits))
        raise VerificationError(f"neighbors not covered at p={p}: {missing}")
    return NeighborCoverageReport(p=p, norm_class_size=len(gens),
                                  neighbor_count=len(expected),
                                  witness_per_neighbor=dict(sorted(hits.items())))


@dataclass(frozen=True, order=True)
class ProductVertex:
    """One vertex per tree, in increasing prime order."""

    components: tuple[TreeVertex, ...]

    def key(self) -> str:
        return ";".join(v.key() for v in self.components)


@dataclass(frozen=True)
class TransitivityReport:
    primes: tuple[int, ...]
    radius: int
    expected: int
    reached: int
    generator_count: int
    precision: int
    witnesses: dict[ProductVertex, RatQuaternion] = field(repr=False)


def _signed_representatives(gens) -> list[HurwitzElement]:
    """One of {g, -g} per generator; -1 is central so the actions agree."""
    reps = {max(g, -g) for g in gens}
    return sorted(reps)


def product_transitivity(places: SPlaceSet, radius: int,
                         prec: int | None = None) -> TransitivityReport:
    """Reach every product vertex with components in the radius ball.

    Breadth-first search over group elements: the frontier stores an explicit
    quaternion witness per vertex, so each reached vertex comes with an
    S-unit mapping the base point onto it.  Raises VerificationError if any
    vertex of the product ball is not reached.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    primes = places.primes
    prec = tree_precision(radius) if prec is None else prec
    splits = {p: splitting_data(p, prec) for p in primes}
    gens = _signed_representatives(generating_set(places))

    # per-generator integral splitting data, one image per prime
    prepared = []
    for g in gens:
        coords = (g.a, g.b, g.c, g.d)  # doubled coordinates are 2g, same class
        gg = gcd(*coords)
        coords = tuple(v // gg for v in coords)
        norm4 = sum(v * v for v in coords)
        images = {}
        for p in primes:
            images[p] = (splits[p].integer_image(*coords),
                         _vp_residue(norm4, p, _INF))
        prepared.append((g, images))

    balls = {p: ball(p, radius) for p in primes}
    expected = 1
    for p in primes:
        expected *= len(balls[p])

    start = ProductVertex(tuple(base_vertex(p) for p in primes))
    one = RatQuaternion(1, 0, 0, 0)
    witnesses: dict[ProductVertex, RatQuaternion] = {start: one}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for g, images in prepared:
            comps = []
            inside = True
            for idx, p in enumerate(primes):
                image, nval = images[p]
                moved = _act_residues(image, nval, current.components[idx], prec)
                if moved.distance_to_base > radius:
                    inside = False
                    break
                comps.append(moved)
            if not inside:
                continue
            nxt = ProductVertex(tuple(comps))
            if nxt not in witnesses:
                witnesses[nxt] = g.to_quaternion() * witnesses[current]
                queue.append(nxt)

    if len(witnesses) != expected:
        reached = {pv for pv in witnesses}
        sample = []
        from itertools import product as iproduct
        for combo in iproduct(*(sorted(balls[p]) for p in primes)):
            pv = ProductVertex(tuple(combo))
            if pv not in reached:
                sample.append(pv)
                if len(sample) >= 5:
                    break
        raise VerificationError(
            f"ball not covered: reached {len(witnesses)} of {expected}; "
            f"first missing {[pv.key() for pv in sample]}")

    # audit: every witness really maps the base point to its vertex
    for pv, wit in witnesses.items():
        for idx, p in enumerate(primes):
            if act(wit, base_vertex(p), splits[p]) != pv.components[idx]:
                raise VerificationError(f"witness {wit} fails at {pv.key()}")

    return TransitivityReport(primes=primes, radius=radius, expected=expected,
                              reached=len(witnesses), generator_count=len(gens),
                              precision=prec, witnesses=witnesses)
