"""Chevalley basis with explicit integer structure constants.

Basis labels are ("X", root_index) for root vectors, ("H", i) for the simple
coroot generators, and ("Z",) for an optional central element.  All structure
constants are computed and stored over Z; reduction mod p happens on demand.

Sign convention: N is fixed to +(r+1) on the extraspecial pairs (the pair
(alpha, gamma - alpha) with alpha minimal in the deterministic root order,
for each non-simple positive gamma), and every other constant is propagated
from those through the standard quadruple and triple relations with exact
rational root lengths.  The results are exhaustively Jacobi-checked for
rank <= 3 and sample-checked at rank 4.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .rootsys import Root, RootSystem, Weight, build_root_system

Label = tuple


def _add_coords(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg_coords(a):
    return tuple(-x for x in a)


class StructLie:
    """A Lie algebra over Z given by a basis, a bracket table, and a weight
    per basis element."""

    def __init__(self, rs: RootSystem, with_center: bool = False):
        self.rs = rs
        self.with_center = with_center
        self.labels: list[Label] = (
            [("X", i) for i in range(len(rs.roots))]
            + [("H", i) for i in range(rs.rank)]
            + ([("Z",)] if with_center else [])
        )
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        zero = Weight.zero(rs.rank)
        self.weights: list[Weight] = [
            rs.root_weight(rs.roots[i]) if lab[0] == "X" else zero
            for i, lab in ((self.index[l], l) for l in self.labels)
        ]
        # brackets[(i, j)] for i < j only; access through bracket_basis()
        self.brackets: dict[tuple[int, int], dict[int, int]] = {}
        self._fill_table()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def weight_of(self, label: Label) -> Weight:
        return self.weights[self.index[label]]

    # -- table construction ---------------------------------------------------

    def _fill_table(self):
        rs = self.rs
        nroots = len(rs.roots)
        posN = _positive_constants(rs)

        def put(i, j, terms: dict[int, int]):
            terms = {k: v for k, v in terms.items() if v}
            if not terms:
                return
            if i < j:
                self.brackets[(i, j)] = terms
            else:
                self.brackets[(j, i)] = {k: -v for k, v in terms.items()}

        # [X_a, X_b]
        for a in range(nroots):
            ra = rs.roots[a]
            for b in range(a + 1, nroots):
                rb = rs.roots[b]
                s = _add_coords(ra.coords, rb.coords)
                if all(x == 0 for x in s):
                    # [X_alpha, X_{-alpha}] = H_alpha (alpha the positive one)
                    pos = ra if ra.is_positive else rb
                    sign = 1 if ra.is_positive else -1
                    cc = rs.coroot_coords(pos)
                    put(a, b, {self.index[("H", i)]: sign * cc[i]
                               for i in range(rs.rank)})
                elif s in rs.root_index:
                    n = _n_any(rs, posN, a, b)
                    put(a, b, {self.index[("X", rs.root_index[s])]: n})

        # [H_i, X_b] = <alpha_i^vee, beta> X_b
        for i in range(rs.rank):
            hi = self.index[("H", i)]
            for b in range(nroots):
                pairing = rs.coroot_pairing(i, rs.roots[b])
                put(hi, self.index[("X", b)], {self.index[("X", b)]: pairing})

    # -- bracket evaluation ---------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> dict[int, int]:
        """[e_i, e_j] as a sparse integer vector over the basis."""
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: -v for k, v in self.brackets.get((j, i), {}).items()}

    def bracket(self, x, y, p: int | None = None):
        """Bilinear extension of the table to coordinate vectors over Z,
        or over F_p when p is given."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += xi * yj * c
        if p is not None:
            out = [v % p for v in out]
        return out

    def jacobi_defect(self, i: int, j: int, k: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in self.bracket_basis(a, b).items():
                for n, w in self.bracket_basis(m, c).items():
                    out[n] = out.get(n, 0) + v * w
        return {n: v for n, v in out.items() if v}

    def check_jacobi(self, sample: int | None = None, seed: int = 0) -> None:
        """Exhaustive Jacobi check, or a seeded sample of triples."""
        d = self.dim
        if sample is None:
            triples = itertools.combinations(range(d), 3)
        else:
            rng = random.Random(seed)
            triples = (tuple(sorted(rng.sample(range(d), 3))) for _ in range(sample))
        for (i, j, k) in triples:
            defect = self.jacobi_defect(i, j, k)
            if defect:
                raise ArithmeticError(
                    f"Jacobi fails on basis triple {self.labels[i]},"
                    f" {self.labels[j]}, {self.labels[k]}: {defect}")

    def structure_constant(self, a: Root, b: Root) -> int:
        """N for a pair of non-proportional roots with a+b a root."""
        i = self.index[("X", self.rs.root_index[a.coords])]
        j = self.index[("X", self.rs.root_index[b.coords])]
        terms = self.bracket_basis(i, j)
        s = _add_coords(a.coords, b.coords)
        k = self.index[("X", self.rs.root_index[s])]
        return terms.get(k, 0)

    def to_json(self) -> str:
        data = {
            "type": f"{self.rs.cartan_type}{self.rs.rank}",
            "with_center": self.with_center,
            "basis": [list(l) for l in self.labels],
            "weights": [list(w.coords) for w in self.weights],
            "brackets": sorted(
                [[i, j, sorted([[k, v] for k, v in t.items()])]
                 for (i, j), t in self.brackets.items()]),
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Subalgebra:
    parent: StructLie
    member_labels: tuple[Label, ...]

    def __post_init__(self):
        members = set(self.parent.index[l] for l in self.member_labels)
        for i in members:
            for j in members:
                for k in self.parent.bracket_basis(i, j):
                    if k not in members:
                        raise ArithmeticError("subset not closed under bracket")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(self.parent.index[l] for l in self.member_labels)


# ---------------------------------------------------------------------------
# Structure constants


def chain_down(rs: RootSystem, a: tuple, b: tuple) -> int:
    """Largest r with b - r*a a root (the alpha-chain through beta, downward)."""
    r = 0
    cur = b
    while True:
        cur = tuple(x - y for x, y in zip(cur, a))
        if cur in rs.root_index:
            r += 1
        else:
            return r


def _len2(rs: RootSystem, coords) -> Fraction:
    return rs.length2[rs.root_index[coords]]


@lru_cache(maxsize=None)
def _positive_constants(rs: RootSystem) -> dict[tuple[int, int], int]:
    """N on pairs of positive roots keyed by (index_min, index_max) in root order."""
    np_ = rs.num_positive
    table: dict[tuple[int, int], int] = {}

    def tbl(a: int, b: int) -> int:
        # a, b positive indices with root(a)+root(b) a positive root
        if a < b:
            return table[(a, b)]
        return -table[(b, a)]

    def n_mixed_posneg(x: int, yneg_of: int) -> int:
        # N(root x > 0, -root y) with x - y a root; both x, y positive indices
        rx, ry = rs.positive_roots[x], rs.positive_roots[yneg_of]
        z = tuple(p - q for p, q in zip(rx.coords, ry.coords))
        if z not in rs.root_index:
            return 0
        if sum(z) > 0:
            # N_{x,-y} = -(|z|^2/|x|^2) * N(y, z)   [triple x + (-y) + (-z) = 0]
            zi = rs.root_index[z]
            val = Fraction(_len2(rs, z), _len2(rs, rx.coords)) * tbl(yneg_of, zi)
            return -_as_int(val)
        # z < 0: N_{x,-y} = N(y, -x) by double negation + antisymmetry
        return n_mixed_posneg(yneg_of, x)

    for gi, gamma in enumerate(rs.positive_roots):
        if gamma.height == 1:
            continue
        pairs = []
        for ai in range(np_):
            alpha = rs.positive_roots[ai]
            rest = tuple(x - y for x, y in zip(gamma.coords, alpha.coords))
            if sum(rest) > 0 and rest in rs.root_index:
                bi = rs.root_index[rest]
                if ai < bi:
                    pairs.append((ai, bi))
        pairs.sort()
        a1, b1 = pairs[0]  # extraspecial: minimal first member
        r = chain_down(rs, rs.positive_roots[a1].coords, rs.positive_roots[b1].coords)
        table[(a1, b1)] = r + 1
        for (ai, bi) in pairs[1:]:
            # quadruple (alpha1, beta1, -alpha, -beta) summing to zero
            ra, rb = rs.positive_roots[ai], rs.positive_roots[bi]
            ra1, rb1 = rs.positive_roots[a1], rs.positive_roots[b1]
            term1 = Fraction(0)
            d1 = tuple(x - y for x, y in zip(rb1.coords, ra.coords))
            if d1 in rs.root_index:
                term1 = Fraction(n_mixed_posneg(b1, ai) * n_mixed_posneg(a1, bi),
                                 _len2(rs, d1))
            term2 = Fraction(0)
            d2 = tuple(x - y for x, y in zip(ra1.coords, ra.coords))
            if d2 in rs.root_index:
                term2 = Fraction(-n_mixed_posneg(a1, ai) * n_mixed_posneg(b1, bi),
                                 _len2(rs, d2))
            val = _len2(rs, gamma.coords) * (term1 + term2) / table[(a1, b1)]
            n = _as_int(val)
            rr = chain_down(rs, ra.coords, rb.coords)
            if abs(n) != rr + 1:
                raise ArithmeticError(
                    f"structure constant |N|={abs(n)} != r+1={rr + 1} "
                    f"for pair {ra.coords}, {rb.coords}")
            table[(ai, bi)] = n
    return table


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"expected integer, got {x}")
    return int(x)


def _n_any(rs: RootSystem, posN: dict, a: int, b: int) -> int:
    """N for arbitrary root indices a, b (in rs.roots) with sum a root."""
    np_ = rs.num_positive
    ra, rb = rs.roots[a], rs.roots[b]

    def tbl(i: int, j: int) -> int:
        if i < j:
            return posN[(i, j)]
        return -posN[(j, i)]

    if ra.is_positive and rb.is_positive:
        return tbl(a, b)
    if not ra.is_positive and not rb.is_positive:
        return -_n_any(rs, posN, a - np_, b - np_)
    # mixed signs; reduce to (positive, negative)
    if not ra.is_positive:
        return -_n_any(rs, posN, b, a)
    x, y = a, b - np_  # N(root x, -root y)
    rx, ry = rs.positive_roots[x], rs.positive_roots[y]
    z = tuple(p - q for p, q in zip(rx.coords, ry.coords))
    if sum(z) > 0:
        zi = rs.root_index[z]
        val = Fraction(_len2(rs, z), _len2(rs, rx.coords)) * tbl(y, zi)
        return -_as_int(val)
    # x - y < 0: N(x, -y) = N(y, -x), which lands in the branch above
    return _n_any(rs, posN, y, x + np_)


@lru_cache(maxsize=None)
def build_chevalley(rs: RootSystem, with_center: bool = False) -> StructLie:
    """The split Lie algebra of rs over Z in a Chevalley basis, optionally
    extended by one central element."""
    if rs.rank > 4:
        # table construction is fine, but the validation policy stops here
        raise ValueError("Chevalley construction limited to rank <= 4")
    L = StructLie(rs, with_center=with_center)
    if rs.rank <= 3:
        L.check_jacobi()
    else:
        L.check_jacobi(sample=20000, seed=1)
    return L


@dataclass(frozen=True)
class Triangular:
    n_minus: Subalgebra
    t: Subalgebra
    n: Subalgebra
    b: Subalgebra
    b_minus: Subalgebra


def triangular(L: StructLie) -> Triangular:
    """Triangular decomposition; the center (if any) is housed in t."""
    rs = L.rs
    np_ = rs.num_positive
    xpos = tuple(("X", i) for i in range(np_))
    xneg = tuple(("X", i) for i in range(np_, 2 * np_))
    torus = tuple(("H", i) for i in range(rs.rank)) + \
        ((("Z",),) if L.with_center else ())
    return Triangular(
        n_minus=Subalgebra(L, xneg),
        t=Subalgebra(L, torus),
        n=Subalgebra(L, xpos),
        b=Subalgebra(L, torus + xpos),
        b_minus=Subalgebra(L, torus + xneg),
    )


def bracket(L: StructLie, x, y, p: int | None = None):
    """Module-level alias matching the operation map."""
    return L.bracket(x, y, p)
