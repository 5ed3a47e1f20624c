"""Symmetric algebra on the dual torus over F_p, Weyl-invariant generators,
the coinvariant algebra, Koszul complexes, and the small dg algebra whose
homology reproduces the predicted exterior algebra.

The variables x_1..x_r are the basis of t^dual dual to the simple coroots,
i.e. the fundamental weights mod p, so the Weyl action on polynomials is by
substitution through the WeylElement matrices.  Invariant generators are not
canonical; the degree-by-degree solver returns the reduced-echelon choice,
and every consumer depends only on quotient data.

Quotient bases are computed by Gaussian elimination on the ideal's graded
pieces, never by Groebner bases: all degrees in play are at most a couple of
Coxeter numbers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cohomology import CohomologyTable
from .errors import HypothesisViolation, InvariantSearchError
from .linfp import _rank_dense_prime, _rref_dense_prime
from .rootsys import RootSystem, simple_reflections, weyl_group

Mono = tuple  # exponent tuple


class GradedPoly:
    """A polynomial over F_p as a map from exponent tuples to coefficients."""

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms=None):
        self.nvars = nvars
        self.p = p
        self.terms: dict[Mono, int] = {}
        for m, c in (terms or {}).items():
            c %= p
            if c:
                self.terms[m] = c

    @staticmethod
    def variable(i: int, nvars: int, p: int) -> "GradedPoly":
        m = tuple(1 if j == i else 0 for j in range(nvars))
        return GradedPoly(nvars, p, {m: 1})

    def copy(self) -> "GradedPoly":
        return GradedPoly(self.nvars, self.p, dict(self.terms))

    def add(self, other: "GradedPoly") -> "GradedPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return GradedPoly(self.nvars, self.p, out)

    def scale(self, k: int) -> "GradedPoly":
        return GradedPoly(self.nvars, self.p,
                          {m: c * k for m, c in self.terms.items()})

    def mul(self, other: "GradedPoly") -> "GradedPoly":
        out: dict[Mono, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % self.p
        return GradedPoly(self.nvars, self.p, out)

    def mul_var(self, i: int) -> "GradedPoly":
        return GradedPoly(self.nvars, self.p,
                          {tuple(e + (1 if j == i else 0) for j, e in enumerate(m)): c
                           for m, c in self.terms.items()})

    def degree(self) -> int:
        if not self.terms:
            return 0
        degs = {sum(m) for m in self.terms}
        if len(degs) > 1:
            raise ValueError("not homogeneous")
        return degs.pop()

    def substitute(self, images: list["GradedPoly"]) -> "GradedPoly":
        """Substitute x_i -> images[i]."""
        out = GradedPoly(self.nvars, self.p)
        for m, c in self.terms.items():
            term = GradedPoly(self.nvars, self.p, {(0,) * self.nvars: c})
            for i, e in enumerate(m):
                for _ in range(e):
                    term = term.mul(images[i])
            out = out.add(term)
        return out

    def apply_weyl(self, matrix) -> "GradedPoly":
        """Substitute through an integer matrix acting on weight coordinates:
        x_j -> sum_i matrix[i][j] x_i."""
        n = self.nvars
        images = []
        for j in range(n):
            images.append(GradedPoly(n, self.p, {
                tuple(1 if a == i else 0 for a in range(n)): matrix[i][j]
                for i in range(n) if matrix[i][j] % self.p}))
        return self.substitute(images)

    def vector(self, monomials: list[Mono]) -> list[int]:
        return [self.terms.get(m, 0) for m in monomials]

    def __eq__(self, other):
        return (self.nvars, self.p, self.terms) == (other.nvars, other.p, other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                            for i, e in enumerate(m) if e)
            parts.append(f"{self.terms[m]}{'*' + mono if mono else ''}")
        return " + ".join(parts)


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Mono, ...]:
    """Exponent tuples of total degree `degree`, in a fixed deterministic order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


def _poly_from_vector(vec, monos, nvars, p) -> GradedPoly:
    return GradedPoly(nvars, p, {m: int(c) for m, c in zip(monos, vec) if c % p})


@lru_cache(maxsize=None)
def fundamental_invariants(rs: RootSystem, p: int) -> tuple[GradedPoly, ...]:
    """Homogeneous generators of the Weyl-invariant polynomials over F_p.

    Solved degree by degree: the invariants of degree d are the joint kernel
    of (s - 1) over the simple reflections s; new generators are echelon
    vectors extending the span of products of the generators already found.
    The degrees found must be the exponents + 1, or the search fails loudly.
    """
    h = rs.coxeter_number
    if p <= h:
        raise HypothesisViolation(f"invariant theory route needs p > h = {h}, got p = {p}")
    r = rs.rank
    refl = [w.matrix for w in simple_reflections(rs)]
    gens: list[GradedPoly] = []
    for d in range(2, h + 1):
        monos = monomials(r, d)
        nm = len(monos)
        rows = []
        for M in refl:
            # (s - 1) acting on the degree-d monomial space
            block = np.zeros((nm, nm), dtype=np.int64)
            for j, m in enumerate(monos):
                poly = GradedPoly(r, p, {m: 1}).apply_weyl(M)
                for m2, c in poly.terms.items():
                    block[monos.index(m2), j] = c
            block[np.arange(nm), np.arange(nm)] -= 1
            rows.append(block % p)
        stacked = np.vstack(rows) % p
        R, pivots = _rref_dense_prime(stacked, p)
        pivset = set(pivots)
        inv_vectors = []
        for free in range(nm):
            if free in pivset:
                continue
            v = np.zeros(nm, dtype=np.int64)
            v[free] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-R[i][free]) % p
            inv_vectors.append(v % p)
        if not inv_vectors:
            continue
        # span of products of existing generators in degree d
        old_rows = []
        for combo in _exponent_combos([g.degree() for g in gens], d):
            poly = GradedPoly(r, p, {(0,) * r: 1})
            for gi, e in enumerate(combo):
                for _ in range(e):
                    poly = poly.mul(gens[gi])
            old_rows.append(poly.vector(monos))
        base_rank = _rank_dense_prime(np.array(old_rows, dtype=np.int64), p) \
            if old_rows else 0
        current = old_rows[:]
        cur_rank = base_rank
        for v in inv_vectors:
            cand = current + [list(v)]
            rk = _rank_dense_prime(np.array(cand, dtype=np.int64), p)
            if rk > cur_rank:
                gens.append(_poly_from_vector(v, monos, r, p))
                current = cand
                cur_rank = rk
        if len(gens) > r:
            raise InvariantSearchError("more generators than the rank allows")
    degrees = sorted(g.degree() for g in gens)
    expected = [m + 1 for m in rs.exponents]
    if degrees != expected:
        raise InvariantSearchError(
            f"invariant search failed: found degrees {degrees}, expected {expected} "
            f"(likely torsion at p = {p})")
    return tuple(sorted(gens, key=lambda g: g.degree()))


def _exponent_combos(degrees: list[int], target: int):
    """Exponent vectors e with sum e_i * degrees[i] = target and sum e_i >= 1."""
    if not degrees:
        return []
    out = []

    def rec(i, remaining, acc):
        if i == len(degrees):
            if remaining == 0 and any(acc):
                out.append(tuple(acc))
            return
        maxe = remaining // degrees[i]
        for e in range(maxe + 1):
            rec(i + 1, remaining - e * degrees[i], acc + [e])

    rec(0, target, [])
    return out


@dataclass
class QuotientAlgebra:
    """F_p[x_1..x_r] modulo the fundamental invariants, with per-degree
    monomial bases computed by elimination."""

    nvars: int
    p: int
    gens: tuple
    dims: list[int]
    basis_monomials: list[list[Mono]] = field(repr=False)
    _ideal_rref: list = field(repr=False)      # per degree: (R, pivots, monos)
    regular: bool = True
    koszul_report: dict = field(default_factory=dict, repr=False)

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def total_dim(self) -> int:
        return sum(self.dims)

    def reduce(self, poly: GradedPoly) -> list[int]:
        """Coordinates of a homogeneous polynomial on the quotient basis."""
        d = poly.degree() if poly.terms else 0
        if d > self.top_degree:
            return []
        R, pivots, monos = self._ideal_rref[d]
        vec = np.array(poly.vector(list(monos)), dtype=np.int64)
        for i, pc in enumerate(pivots):
            c = vec[pc] % self.p
            if c:
                vec = (vec - c * R[i]) % self.p
        basis_idx = [monos.index(m) for m in self.basis_monomials[d]]
        return [int(vec[i] % self.p) for i in basis_idx]

    def basis_poly(self, degree: int, i: int) -> GradedPoly:
        return GradedPoly(self.nvars, self.p, {self.basis_monomials[degree][i]: 1})

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p, "nvars": self.nvars,
            "generator_degrees": [g.degree() for g in self.gens],
            "dims": self.dims, "total": self.total_dim(),
            "regular_sequence": self.regular,
        }, sort_keys=True, separators=(",", ":"))


def coinvariant_algebra(rs: RootSystem, p: int) -> QuotientAlgebra:
    """The quotient of Sym t^dual by the fundamental invariants, with the
    regular-sequence certificate."""
    gens = fundamental_invariants(rs, p)
    r = rs.rank
    gen_degs = [g.degree() for g in gens]
    dims = []
    basis_per_degree = []
    rrefs = []
    d = 0
    bound = sum(rs.exponents) + 2
    while True:
        monos = monomials(r, d)
        rows = []
        for gi, g in enumerate(gens):
            dg = gen_degs[gi]
            if dg > d:
                continue
            for m in monomials(r, d - dg):
                rows.append(GradedPoly(r, p, {m: 1}).mul(g).vector(list(monos)))
        if rows:
            R, pivots = _rref_dense_prime(np.array(rows, dtype=np.int64), p)
        else:
            R, pivots = np.zeros((0, len(monos)), dtype=np.int64), []
        pivset = set(pivots)
        basis = [m for i, m in enumerate(monos) if i not in pivset]
        dims.append(len(basis))
        basis_per_degree.append(basis)
        rrefs.append((R, list(pivots), monos))
        if len(basis) == 0:
            break
        d += 1
        if d > bound:
            raise InvariantSearchError("quotient does not terminate; "
                                       "sequence cannot be regular")
    # dims without the terminating zero; rref/basis tables keep the extra
    # degree so reduce() still works one degree above the socle
    Q = QuotientAlgebra(nvars=r, p=p, gens=gens, dims=dims[:-1],
                        basis_monomials=basis_per_degree, _ideal_rref=rrefs)
    # regular-sequence certificate by Koszul homology concentration
    K = KoszulComplex(r, p, list(gens))
    window = len(dims) - 1 + max(gen_degs)
    report = koszul_homology(K, max_internal=window)
    concentrated = all(j == 0 for (t, j), dim in report.items() if dim)
    matches = all(report.get((t, 0), 0) == (dims[t] if t < len(dims) else 0)
                  for t in range(window + 1))
    Q.regular = concentrated and matches
    Q.koszul_report = {"concentrated": concentrated, "matches_quotient": matches}
    if not Q.regular:
        first_bad = min((k for k, v in report.items() if v and k[1] > 0),
                        default=None)
        raise InvariantSearchError(
            f"fundamental invariants are not a regular sequence; "
            f"first higher Koszul homology at (internal, exterior) = {first_bad}")
    return Q


# ---------------------------------------------------------------------------
# Koszul complexes


@dataclass
class KoszulComplex:
    """Sym(x_1..x_nvars) tensor wedge(V) with d(v_i) = F_i, over F_p."""

    nvars: int
    p: int
    forms: list

    def __post_init__(self):
        self.degrees = [f.degree() for f in self.forms]


def koszul_homology(K: KoszulComplex, max_internal: int | None = None) -> dict:
    """Homology dimensions per (internal degree, exterior degree).

    The differential lowers exterior degree by one and preserves internal
    degree (each generator v_i carries internal degree deg F_i).  For a
    regular sequence the homology is concentrated in exterior degree zero and
    equals the quotient ring there.
    """
    p, r = K.p, K.nvars
    nf = len(K.forms)
    if max_internal is None:
        max_internal = sum(K.degrees) + max(K.degrees, default=0)

    def basis(t, j):
        out = []
        for S in itertools.combinations(range(nf), j):
            rem = t - sum(K.degrees[i] for i in S)
            if rem < 0:
                continue
            for m in monomials(r, rem):
                out.append((m, S))
        return out

    out: dict[tuple[int, int], int] = {}
    for t in range(max_internal + 1):
        bases = [basis(t, j) for j in range(nf + 1)]
        index = [{b: i for i, b in enumerate(lst)} for lst in bases]
        mats = []
        for j in range(1, nf + 1):
            rows = len(bases[j - 1])
            A = np.zeros((rows, len(bases[j])), dtype=np.int64)
            for col, (m, S) in enumerate(bases[j]):
                for k, i in enumerate(S):
                    target_S = S[:k] + S[k + 1:]
                    prod = GradedPoly(r, p, {m: 1}).mul(K.forms[i])
                    for m2, c in prod.terms.items():
                        row = index[j - 1][(m2, target_S)]
                        A[row, col] = (A[row, col] + (-1) ** k * c) % p
            mats.append(A)
        ranks = [_rank_dense_prime(A, p) if A.size else 0 for A in mats]
        for j in range(nf + 1):
            dim = len(bases[j])
            r_out = ranks[j - 1] if j >= 1 else 0     # d: degree j -> j-1
            r_in = ranks[j] if j < nf else 0          # d: degree j+1 -> j
            h = dim - r_out - r_in
            if h:
                out[(t, j)] = h
    return out


# ---------------------------------------------------------------------------
# The recognized dg algebra and the cross-check


def e1_dga_homology(rs: RootSystem, p: int) -> CohomologyTable:
    """Homology of the coinvariant algebra with doubled degrees tensored with
    the exterior algebra on t^dual in degree one, the differential sending the
    degree-one generators to the degree-one quotient classes.

    The resulting Poincare polynomial is the prediction prod (1 + t^(2m_i+1)).
    """
    Q = coinvariant_algebra(rs, p)
    r = rs.rank

    # basis per total degree: (quotient degree a, basis index, xi-subset S)
    by_total: dict[int, list] = {}
    for a in range(len(Q.dims)):
        for i in range(Q.dims[a]):
            for j in range(r + 1):
                for S in itertools.combinations(range(r), j):
                    by_total.setdefault(2 * a + j, []).append((a, i, S))
    top = max(by_total) if by_total else 0
    index = {t: {b: i for i, b in enumerate(lst)} for t, lst in by_total.items()}

    mults: dict[tuple[int, int, int], list[int]] = {}

    def mult_by_var(a, i, v):
        key = (a, i, v)
        if key not in mults:
            mults[key] = Q.reduce(Q.basis_poly(a, i).mul_var(v))
        return mults[key]

    mats = []
    for t in range(top + 1):
        dom = by_total.get(t, [])
        cod = by_total.get(t + 1, [])
        A = np.zeros((len(cod), len(dom)), dtype=np.int64)
        for col, (a, i, S) in enumerate(dom):
            for k, v in enumerate(S):
                red = mult_by_var(a, i, v)
                tS = S[:k] + S[k + 1:]
                for i2, c in enumerate(red):
                    if c:
                        row = index[t + 1][(a + 1, i2, tS)]
                        A[row, col] = (A[row, col] + (-1) ** k * c) % p
        mats.append(A)
    dims = {}
    for t in range(top + 1):
        dim = len(by_total.get(t, []))
        r_out = _rank_dense_prime(mats[t], p) if mats[t].size else 0
        r_in = _rank_dense_prime(mats[t - 1], p) if t > 0 and mats[t - 1].size else 0
        h = dim - r_out - r_in
        if h:
            dims[(t, (0,) * r)] = h
    return CohomologyTable(dims, {"p": p, "route": "koszul-coinvariants",
                                  "type": f"{rs.cartan_type}{rs.rank}",
                                  "filter": "zero"})


@dataclass
class CrossValidation:
    ok: bool | None          # None when the hypothesis is violated
    hypothesis_ok: bool
    ce_poincare: list | None
    dga_poincare: list | None
    detail: str = ""


def cross_validate(rs: RootSystem, p: int) -> CrossValidation:
    """Compare the cochain route (weight-zero cohomology of the nilpotent
    quotient algebra) against the Koszul/coinvariant route, degree by degree."""
    from .chevalley import build_chevalley
    from .cohomology import ce_complex, cohomology_dims, trivial_module
    from .gradedlie import build_gbar

    h = rs.coxeter_number
    hypothesis_ok = p > h + 1
    ce_po = dga_po = None
    try:
        L = build_chevalley(rs)
        gb = build_gbar(L, p)
        ce_po = cohomology_dims(ce_complex(gb, trivial_module(gb)), "zero").poincare()
    except Exception as exc:  # hypothesis failures leave a record, not a crash
        detail_ce = f"cochain route failed: {exc}"
    try:
        dga_po = e1_dga_homology(rs, p).poincare()
    except Exception as exc:
        detail_dga = f"coinvariant route failed: {exc}"
    if not hypothesis_ok:
        return CrossValidation(None, False, ce_po, dga_po,
                               detail=f"p = {p} <= h + 1 = {h + 1}: recorded, "
                                      "no pass/fail claim")
    if ce_po is None or dga_po is None:
        raise InvariantSearchError("a route failed despite p > h + 1")
    n = max(len(ce_po), len(dga_po))
    ce_po += [0] * (n - len(ce_po))
    dga_po += [0] * (n - len(dga_po))
    return CrossValidation(ce_po == dga_po, True, ce_po, dga_po)
