"""Root-system combinatorics: roots, heights, Weyl group, exponents, dot action.

Conventions used throughout the package:

* Weights are stored in fundamental-weight coordinates for the simply
  connected lattice, so every pairing with a coroot is an exact integer.
* Roots are stored in simple-root coordinates (integer vectors).
* The deterministic root order is: positive roots by height, ties broken by
  preferring mass on lower-index simple roots; negative roots mirror the
  positive order.  All downstream basis orderings derive from this one.

The standard apartment and the affine roots are not modelled as types; the
only point of the building the package ever uses is the alcove barycenter
normalisation alpha(x) = 1/h for simple alpha, which padicgroups hardcodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import EnumerationLimitError

VALID_RANKS = {
    "A": range(1, 9),
    "B": range(2, 9),
    "C": range(3, 9),
    "D": range(4, 9),
    "E": range(6, 9),
    "F": range(4, 5),
    "G": range(2, 3),
}

WEYL_ENUMERATION_MAX_RANK = 4


def cartan_matrix(cartan_type: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix C with C[i][j] = <alpha_i^vee, alpha_j>, Bourbaki numbering."""
    if cartan_type not in VALID_RANKS or rank not in VALID_RANKS[cartan_type]:
        raise ValueError(f"invalid Dynkin type {cartan_type}{rank}; "
                         f"supported: A1-A8, B2-B8, C3-C8, D4-D8, E6-E8, F4, G2")
    n = rank
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2

    def chain(i, j):
        C[i][j] = -1
        C[j][i] = -1

    if cartan_type == "A":
        for i in range(n - 1):
            chain(i, i + 1)
    elif cartan_type == "B":
        # alpha_n short: <alpha_n^vee, alpha_{n-1}> = -2
        for i in range(n - 2):
            chain(i, i + 1)
        C[n - 2][n - 1] = -1
        C[n - 1][n - 2] = -2
    elif cartan_type == "C":
        # alpha_n long: <alpha_{n-1}^vee, alpha_n> = -2
        for i in range(n - 2):
            chain(i, i + 1)
        C[n - 2][n - 1] = -2
        C[n - 1][n - 2] = -1
    elif cartan_type == "D":
        for i in range(n - 3):
            chain(i, i + 1)
        chain(n - 3, n - 2)
        chain(n - 3, n - 1)
    elif cartan_type == "E":
        # Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to node 4.
        chain(0, 2)
        chain(2, 3)
        chain(3, 4)
        chain(4, 5)
        if n >= 7:
            chain(5, 6)
        if n >= 8:
            chain(6, 7)
        chain(1, 3)
    elif cartan_type == "F":
        chain(0, 1)
        C[1][2] = -1
        C[2][1] = -2
        chain(2, 3)
    elif cartan_type == "G":
        C[0][1] = -3
        C[1][0] = -1
    return tuple(tuple(row) for row in C)


@dataclass(frozen=True, order=True)
class Weight:
    """An element of X*(T) in fundamental-weight coordinates."""

    coords: tuple[int, ...]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "Weight":
        return Weight(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    @staticmethod
    def zero(rank: int) -> "Weight":
        return Weight((0,) * rank)


@dataclass(frozen=True)
class Root:
    """A root in simple-root coordinates, with its height and sign."""

    coords: tuple[int, ...]
    height: int
    sign: int  # +1 or -1

    @property
    def is_positive(self) -> bool:
        return self.sign > 0


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: its permutation of the full root list, the
    integer matrix acting on fundamental-weight coordinates, and its length."""

    root_permutation: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    length: int

    def apply(self, w: Weight) -> Weight:
        return Weight(tuple(sum(row[j] * w.coords[j] for j in range(len(row)))
                            for row in self.matrix))


def _root_sort_key(coords: tuple[int, ...]) -> tuple:
    # Height first; ties prefer roots supported on lower-index simple roots.
    return (sum(coords), tuple(-c for c in coords))


@dataclass(frozen=True)
class RootSystem:
    cartan_type: str
    rank: int
    simple_roots: tuple[Weight, ...]          # fw coordinates of the alpha_i
    positive_roots: tuple[Root, ...]          # deterministic order
    cartan_matrix: tuple[tuple[int, ...], ...]
    coxeter_number: int
    exponents: tuple[int, ...]
    roots: tuple[Root, ...] = field(repr=False)            # positives then negatives
    root_index: dict = field(repr=False, hash=False, compare=False)
    length2: tuple[Fraction, ...] = field(repr=False)      # (alpha,alpha) per root
    inverse_cartan: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    def root_weight(self, r: Root) -> Weight:
        """Fundamental-weight coordinates of a root."""
        C = self.cartan_matrix
        return Weight(tuple(sum(C[i][j] * r.coords[j] for j in range(self.rank))
                            for i in range(self.rank)))

    def weight_to_root_coords(self, w: Weight) -> tuple[Fraction, ...]:
        """Simple-root coordinates of a weight (rational in general)."""
        inv = self.inverse_cartan
        return tuple(sum(inv[j][i] * w.coords[i] for i in range(self.rank))
                     for j in range(self.rank))

    def index_of(self, coords: tuple[int, ...]) -> int:
        return self.root_index[coords]

    def negative(self, idx: int) -> int:
        r = self.roots[idx]
        return self.root_index[tuple(-c for c in r.coords)]

    def coroot_pairing(self, simple_i: int, r: Root) -> int:
        """<alpha_i^vee, beta> for a root beta."""
        C = self.cartan_matrix
        return sum(C[simple_i][j] * r.coords[j] for j in range(self.rank))

    def coroot_coords(self, r: Root) -> tuple[int, ...]:
        """Coordinates of beta^vee in the simple-coroot basis (integers)."""
        d = [self.length2[self.root_index[
            tuple(1 if j == i else 0 for j in range(self.rank))]] / 2
            for i in range(self.rank)]
        da = self.length2[self.root_index[r.coords]] / 2
        out = []
        for i in range(self.rank):
            c = Fraction(r.coords[i]) * d[i] / da
            if c.denominator != 1:
                raise ArithmeticError("non-integral coroot coordinate")
            out.append(int(c))
        return tuple(out)

    def highest_root(self) -> Root:
        return self.positive_roots[-1]


def _simple_reflection_on_coords(C, i, coords):
    pairing = sum(C[i][j] * coords[j] for j in range(len(coords)))
    out = list(coords)
    out[i] -= pairing
    return tuple(out)


def _symmetrizer(C) -> list[Fraction]:
    """d_i with d_i*C[i][j] = d_j*C[j][i]; short roots normalised to (a,a)=2."""
    n = len(C)
    d = [None] * n
    d[0] = Fraction(1)
    # propagate along the Dynkin graph
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i != j and C[i][j] != 0:
                    if d[i] is not None and d[j] is None:
                        d[j] = d[i] * C[i][j] / C[j][i]
                        changed = True
    if any(x is None for x in d):
        raise ValueError("disconnected Cartan matrix")
    m = min(d)
    return [x / m for x in d]


def _invert_rational(C) -> tuple[tuple[Fraction, ...], ...]:
    n = len(C)
    A = [[Fraction(C[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return tuple(tuple(A[i][n + j] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def build_root_system(cartan_type: str, rank: int) -> RootSystem:
    """Build a root system by closure of the simple roots under simple reflections.

    Exponents are computed from the height counts (the multiset of heights of
    positive roots is dual, as a partition, to the exponent multiset); the
    invariant-degree route in coinvariants re-derives them independently and
    fails loudly on mismatch.
    """
    C = cartan_matrix(cartan_type, rank)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(rank):
                im = _simple_reflection_on_coords(C, i, c)
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    positives = sorted((c for c in seen if sum(c) > 0), key=_root_sort_key)
    if any(any(x < 0 for x in c) for c in positives):
        raise ArithmeticError("mixed-sign root generated; invalid Cartan data")

    pos_roots = tuple(Root(c, sum(c), +1) for c in positives)
    neg_roots = tuple(Root(tuple(-x for x in c), -sum(c), -1) for c in positives)
    roots = pos_roots + neg_roots
    root_index = {r.coords: i for i, r in enumerate(roots)}

    h = pos_roots[-1].height + 1
    # exponent multiset = dual partition of the height counts
    counts = [0] * h
    for r in pos_roots:
        counts[r.height] += 1
    exps = []
    j = 1
    while True:
        m = sum(1 for i in range(1, h) if counts[i] >= j)
        if m == 0:
            break
        exps.append(m)
        j += 1
    exponents = tuple(sorted(exps))

    d = _symmetrizer(C)
    length2 = []
    for r in roots:
        val = Fraction(0)
        for i in range(rank):
            for j in range(rank):
                # (alpha_i, alpha_j) = d_i * C[i][j]
                val += r.coords[i] * r.coords[j] * d[i] * C[i][j]
        length2.append(val)

    rs = RootSystem(
        cartan_type=cartan_type,
        rank=rank,
        simple_roots=tuple(Weight(tuple(C[i][j] for i in range(rank)))
                           for j in range(rank)),
        positive_roots=pos_roots,
        cartan_matrix=C,
        coxeter_number=h,
        exponents=exponents,
        roots=roots,
        root_index=root_index,
        length2=tuple(length2),
        inverse_cartan=_invert_rational(C),
    )
    _validate(rs)
    return rs


def _validate(rs: RootSystem) -> None:
    r, h = rs.rank, rs.coxeter_number
    if 2 * len(rs.positive_roots) != r * h:
        raise ArithmeticError("|Phi+| != rank*h/2")
    if len(rs.exponents) != r or rs.exponents[0] != 1 or rs.exponents[-1] != h - 1:
        raise ArithmeticError(f"bad exponents {rs.exponents} for {rs.cartan_type}{r}")
    pos = {rt.coords for rt in rs.positive_roots}
    for a, b in itertools.combinations(rs.positive_roots, 2):
        s = tuple(x + y for x, y in zip(a.coords, b.coords))
        if s in rs.root_index and sum(s) > 0 and s not in pos:
            raise ArithmeticError("positive roots not closed")


def _simple_reflection_element(rs: RootSystem, i: int) -> WeylElement:
    n = rs.rank
    C = rs.cartan_matrix
    mat = [[int(a == b) for b in range(n)] for a in range(n)]
    for a in range(n):
        mat[a][i] -= C[a][i]
    perm = tuple(rs.root_index[_simple_reflection_on_coords(C, i, r.coords)]
                 for r in rs.roots)
    length = _length_from_perm(rs, perm)
    return WeylElement(perm, tuple(tuple(row) for row in mat), length)


def _length_from_perm(rs: RootSystem, perm: tuple[int, ...]) -> int:
    np_ = rs.num_positive
    return sum(1 for i in range(np_) if perm[i] >= np_)


def _compose(rs: RootSystem, a: WeylElement, b: WeylElement) -> WeylElement:
    # (a*b) acts by a after b
    perm = tuple(a.root_permutation[b.root_permutation[i]] for i in range(len(rs.roots)))
    n = rs.rank
    mat = tuple(tuple(sum(a.matrix[i][k] * b.matrix[k][j] for k in range(n))
                      for j in range(n)) for i in range(n))
    return WeylElement(perm, mat, _length_from_perm(rs, perm))


def simple_reflections(rs: RootSystem) -> tuple[WeylElement, ...]:
    """The rank generators of the Weyl group; available at any rank."""
    return tuple(_simple_reflection_element(rs, i) for i in range(rs.rank))


@lru_cache(maxsize=None)
def weyl_group(rs: RootSystem) -> tuple[WeylElement, ...]:
    """All Weyl group elements, enumerated by closure under the simple reflections."""
    if rs.rank > WEYL_ENUMERATION_MAX_RANK:
        raise EnumerationLimitError(
            f"Weyl group enumeration limited to rank <= {WEYL_ENUMERATION_MAX_RANK}; "
            f"got {rs.cartan_type}{rs.rank}")
    gens = [_simple_reflection_element(rs, i) for i in range(rs.rank)]
    ident = WeylElement(tuple(range(len(rs.roots))),
                        tuple(tuple(int(a == b) for b in range(rs.rank))
                              for a in range(rs.rank)), 0)
    elements = {ident.root_permutation: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = _compose(rs, w, s)
                if ws.root_permutation not in elements:
                    elements[ws.root_permutation] = ws
                    nxt.append(ws)
        frontier = nxt
    return tuple(sorted(elements.values(),
                        key=lambda w: (w.length, w.root_permutation)))


def dot_action(rs: RootSystem, w: WeylElement, lam: Weight) -> Weight:
    """The dot action w . lambda = w(lambda + rho) - rho."""
    return w.apply(lam + rs.rho) - rs.rho


def inversion_set(rs: RootSystem, w: WeylElement) -> tuple[Root, ...]:
    """Positive roots alpha with w^{-1}(alpha) negative; w.0 = -sum of these."""
    np_ = rs.num_positive
    inv = []
    # w^{-1}(alpha) < 0  <=>  alpha = w(beta) for some negative beta
    for i in range(np_, 2 * np_):
        j = w.root_permutation[i]
        if j < np_:
            inv.append(rs.roots[j])
    return tuple(inv)


def length_polynomial(rs: RootSystem) -> list[int]:
    """Coefficients of sum_w t^{l(w)}."""
    W = weyl_group(rs)
    out = [0] * (rs.num_positive + 1)
    for w in W:
        out[w.length] += 1
    return out


def expected_length_polynomial(rs: RootSystem) -> list[int]:
    """Coefficients of prod_i (1 + t + ... + t^{m_i})."""
    poly = [1]
    for m in rs.exponents:
        nxt = [0] * (len(poly) + m)
        for i, c in enumerate(poly):
            for j in range(m + 1):
                nxt[i + j] += c
        poly = nxt
    return poly


# ---------------------------------------------------------------------------
# Weight lemma: tuples of exterior-power weights summing into n*X*(T)

WEIGHT_LEMMA_MAX_RANK = 3
WEIGHT_LEMMA_MAX_F = 2
WEIGHT_LEMMA_BUDGET = 10_000_000


@dataclass
class WeightLemmaReport:
    ok: bool
    hypothesis_ok: bool
    witnesses: list
    num_weights: int


def exterior_weight_set(rs: RootSystem) -> list[tuple[int, ...]]:
    """Distinct weights of the full exterior algebra of g, i.e. all subset sums
    of the roots, in fundamental-weight coordinates."""
    sums = {(0,) * rs.rank}
    for r in rs.roots:
        w = rs.root_weight(r).coords
        sums |= {tuple(a + b for a, b in zip(s, w)) for s in sums}
    return sorted(sums)


def check_weight_lemma(rs: RootSystem, p: int, f: int, n: int) -> WeightLemmaReport:
    """Check that every f-tuple of exterior-algebra weights whose p-twisted sum
    lies in n*X*(T) actually sums to zero.  Returns any violations found."""
    if rs.rank > WEIGHT_LEMMA_MAX_RANK or f > WEIGHT_LEMMA_MAX_F:
        raise EnumerationLimitError(
            f"weight lemma enumeration limited to rank <= {WEIGHT_LEMMA_MAX_RANK}, "
            f"f <= {WEIGHT_LEMMA_MAX_F}")
    hypothesis_ok = n > rs.coxeter_number * sum(p ** i for i in range(f))
    weights = exterior_weight_set(rs)
    if len(weights) ** f > WEIGHT_LEMMA_BUDGET:
        raise EnumerationLimitError("weight lemma enumeration budget exceeded")
    witnesses = []
    for tup in itertools.product(weights, repeat=f):
        lam = tuple(sum(tup[i][j] * p ** i for i in range(f)) for j in range(rs.rank))
        if all(c % n == 0 for c in lam) and any(c != 0 for c in lam):
            witnesses.append({"tuple": tup, "sum": lam})
    return WeightLemmaReport(ok=not witnesses, hypothesis_ok=hypothesis_ok,
                             witnesses=witnesses, num_weights=len(weights))
