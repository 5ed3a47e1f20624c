"""The graded Lie algebra of the congruence filtration on the units of a
division algebra of invariant 1/n, its Frobenius-twisted bracket, the base
change comparison with the split graded algebra, and the twisted weight-zero
cohomology table.

The residue tower k = F_q inside k_D = F_{q^n} is constructed, not assumed:
k_D is F_p[T] modulo the least irreducible polynomial of degree n*f, and k is
located inside it as the fixed points of the f-th Frobenius power.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .chevalley import build_chevalley
from .cohomology import (CohomologyTable, Lattice, ce_complex, cohomology_dims,
                         kunneth_twist, trivial_module)
from .errors import EnumerationLimitError
from .gradedlie import build_gbar, shift_presentation
from .linfp import FiniteField, Fq
from .rootsys import Weight, build_root_system

EXHAUSTIVE_FIELD_LIMIT = 25


@dataclass(frozen=True)
class TwistLattice:
    """The sublattice (q*w - 1) X*(T) of Z^n, w the n-cycle; its index is
    q^n - 1, the order of the nonsplit torus being twisted against."""

    n: int
    q: int
    lattice: Lattice = field(compare=False)

    @staticmethod
    def build(n: int, q: int) -> "TwistLattice":
        mat = [[0] * n for _ in range(n)]
        for i in range(n):
            mat[(i + 1) % n][i] += q
            mat[i][i] -= 1
        lat = Lattice(mat)
        if abs(lat.det) != q ** n - 1:
            raise ArithmeticError("twist lattice has the wrong index")
        return TwistLattice(n, q, lat)

    def contains(self, vec) -> bool:
        return self.lattice.contains(vec)

    @property
    def index(self) -> int:
        return self.lattice.index


class DivisionGradedLie:
    """Graded pieces gr^{i/n} = k_D for 1 <= i <= truncation, with bracket
    [x, y] = x * y^(q^i) - y * x^(q^j) and eps the identity to the piece one
    degree up."""

    def __init__(self, n: int, p: int, f: int, truncation: int | None = None):
        self.n = n
        self.p = p
        self.f = f
        self.q = p ** f
        self.kD: FiniteField = Fq(p, n * f)
        self.truncation = truncation if truncation is not None else 2 * n + 2
        self.exhaustive = self.kD.q <= EXHAUSTIVE_FIELD_LIMIT
        # the residue tower: k located as the fixed field of Frobenius^f
        self.k_in_kD = tuple(self.kD.fixed_field(f))
        if len(self.k_in_kD) != self.q:
            raise ArithmeticError("subfield of the wrong size")

    def frob_q(self, x: int, times: int) -> int:
        """x -> x^(q^times)."""
        return self.kD.frobenius(x, (self.f * times) % (self.n * self.f))

    def bracket(self, i: int, x: int, j: int, y: int) -> int:
        if not (1 <= i and 1 <= j and i + j <= self.truncation):
            raise ValueError("bidegree outside the stored truncation")
        F = self.kD
        return F.sub(F.mul(x, self.frob_q(y, i)), F.mul(y, self.frob_q(x, j)))

    def eps(self, i: int, x: int) -> tuple[int, int]:
        return i + self.n, x

    def character_exponent(self, i: int) -> int:
        """The multiplicative torus acts on gr^{i/n} by x -> x^(1 - q^i)."""
        return (1 - self.q ** i) % (self.kD.q - 1)

    def check_jacobi(self, seed: int = 0, samples: int = 4000) -> bool:
        """Jacobi over the prime field: exhaustive for tiny fields, sampled
        otherwise."""
        F = self.kD
        degs = [(i, j, k) for i in range(1, self.n + 1)
                for j in range(1, self.n + 1) for k in range(1, self.n + 1)
                if i + j + k <= self.truncation]
        if self.exhaustive:
            triples = itertools.product(F.elements(), repeat=3)
            combos = [(d, t) for d in degs for t in
                      itertools.product(range(F.q), repeat=3)]
        else:
            rng = random.Random(seed)
            combos = [(rng.choice(degs),
                       tuple(rng.randrange(F.q) for _ in range(3)))
                      for _ in range(samples)]
        for (i, j, k), (x, y, z) in combos:
            s = F.add(self.bracket(i + j, self.bracket(i, x, j, y), k, z),
                      F.add(self.bracket(j + k, self.bracket(j, y, k, z), i, x),
                            self.bracket(k + i, self.bracket(k, z, i, x), j, y)))
            if s != 0:
                return False
        return True

    def check_bilinear_antisymmetric(self, seed: int = 0, samples: int = 2000) -> bool:
        """F_p-bilinearity and antisymmetry (the bracket is not k_D-bilinear)."""
        F = self.kD
        rng = random.Random(seed)
        for _ in range(samples):
            i = rng.randrange(1, self.n + 1)
            j = rng.randrange(1, self.truncation - i)
            x, x2, y = (rng.randrange(F.q) for _ in range(3))
            c = rng.randrange(self.p)
            cx = 0
            for _ in range(c):
                cx = F.add(cx, x)
            if self.bracket(i, F.add(x, x2), j, y) != \
                    F.add(self.bracket(i, x, j, y), self.bracket(i, x2, j, y)):
                return False
            lhs = self.bracket(i, cx, j, y)
            rhs = 0
            for _ in range(c):
                rhs = F.add(rhs, self.bracket(i, x, j, y))
            if lhs != rhs:
                return False
            if self.bracket(j, y, i, x) != F.neg(self.bracket(i, x, j, y)):
                return False
        return True

    def check_eps_bracket(self) -> bool:
        """[eps x, y] = eps [x, y] wherever both sides are stored."""
        F = self.kD
        els = range(F.q) if self.exhaustive else \
            [random.Random(2).randrange(F.q) for _ in range(40)]
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                if i + j + self.n > self.truncation:
                    continue
                for x in els:
                    for y in els:
                        if self.bracket(i + self.n, x, j, y) != \
                                self.bracket(i, x, j, y):
                            return False
        return True


def build_division_graded(n: int, p: int, f: int,
                          truncation: int | None = None) -> DivisionGradedLie:
    """Construct and validate the division-algebra graded Lie algebra."""
    if p <= n + 1:
        raise ValueError(f"need p > n + 1 = {n + 1}")
    D = DivisionGradedLie(n, p, f, truncation)
    if not D.check_jacobi():
        raise ArithmeticError("twisted bracket fails Jacobi")
    if not D.check_bilinear_antisymmetric():
        raise ArithmeticError("twisted bracket is not F_p-bilinear antisymmetric")
    if not D.check_eps_bracket():
        raise ArithmeticError("eps does not commute with the bracket")
    return D


@dataclass
class BaseChangeReport:
    ok: bool
    exhaustive: bool
    pairs_checked: int
    witness: dict | None = None


def verify_base_change(n: int, p: int, f: int, seed: int = 0,
                       samples: int = 3000, _frob_offset: int = 0) -> BaseChangeReport:
    """After tensoring up to k_D, the division-algebra bracket must match the
    cyclic-shift presentation of the split gl_n graded algebra under
    lambda(x) = (x^(q^m))_m.  _frob_offset corrupts the Frobenius power and is
    only useful as a negative control."""
    D = build_division_graded(n, p, f)
    F = D.kD
    sp = shift_presentation(n, p, n * f)  # the shift model over k_D

    def lam(x: int) -> tuple:
        return tuple(D.frob_q(x, m) for m in range(n))

    def bracket(i, x, j, y):
        if _frob_offset == 0:
            return D.bracket(i, x, j, y)
        # negative control: corrupt the twist powers q^i -> q^(i+offset)
        return F.sub(F.mul(x, D.frob_q(y, i + _frob_offset)),
                     F.mul(y, D.frob_q(x, j + _frob_offset)))

    if D.exhaustive:
        pairs = [(i, j, x, y)
                 for i in range(1, n + 1) for j in range(1, n + 1)
                 for x in range(F.q) for y in range(F.q)]
    else:
        rng = random.Random(seed)
        pairs = [(rng.randrange(1, n + 1), rng.randrange(1, n + 1),
                  rng.randrange(F.q), rng.randrange(F.q))
                 for _ in range(samples)]
    checked = 0
    for (i, j, x, y) in pairs:
        if i + j > D.truncation:
            continue
        lhs = lam(bracket(i, x, j, y))
        rhs = sp.bracket(i, lam(x), j, lam(y))
        checked += 1
        if lhs != rhs:
            return BaseChangeReport(False, D.exhaustive, checked,
                                    witness={"i": i, "j": j, "x": x, "y": y,
                                             "lhs": lhs, "rhs": rhs})
    return BaseChangeReport(True, D.exhaustive, checked)


def check_character_compatibility(n: int, p: int, f: int) -> bool:
    """The torus character x -> x^(1-q^i) on gr^{i/n} matches, through the
    twisted-character identification, the weight of each coordinate of the
    shift presentation (a finite character-table check)."""
    D = build_division_graded(n, p, f)
    F = D.kD
    order = F.q - 1
    sp = shift_presentation(n, p, n * f)
    for i in range(1, n + 1):
        for m in range(n):
            wt = sp.weight(i, m)  # eps_m - eps_{m+i} as a Z^n vector (0-indexed)
            # chi_D sends eps_j (1-indexed) to x -> x^(q^(j-1))
            chi_exp = sum(wt[j] * D.q ** j for j in range(n)) % order
            metadata_exp = (D.q ** m - D.q ** ((m + i) % n)) % order
            # the scaling of coordinate m under z in the torus is z^(q^m (1-q^i))
            if chi_exp != metadata_exp:
                return False
            if metadata_exp != (D.q ** m * D.character_exponent(i)) % order:
                return False
    return True


@lru_cache(maxsize=None)
def _gl_cohomology_znweights(n: int, p: int) -> CohomologyTable:
    """Full-weight cohomology table of the centered nilpotent quotient algebra
    for gl_n, with weights re-expressed in Z^n coordinates."""
    rs = build_root_system("A", n - 1)
    L = build_chevalley(rs, with_center=True)
    gb = build_gbar(L, p)
    table = cohomology_dims(ce_complex(gb, trivial_module(gb)), "all")
    out = {}
    for (q, wt), d in table.dims.items():
        rc = rs.weight_to_root_coords(Weight(wt))
        v = [0] * n
        for i, c in enumerate(rc):
            if c.denominator != 1:
                raise ArithmeticError("cohomology weight outside the root lattice")
            v[i] += int(c)
            v[i + 1] -= int(c)
        out[(q, tuple(v))] = out.get((q, tuple(v)), 0) + d
    return CohomologyTable(out, {"p": p, "type": f"gl{n}", "filter": "all",
                                 "weights": "Z^n"})


def morava_cohomology(n: int, p: int, f: int) -> CohomologyTable:
    """The twisted weight-zero cohomology table: the gl_n table assembled over
    f Frobenius twists and restricted to the twist lattice (q*w - 1) Z^n."""
    if p <= n + 1:
        raise ValueError(f"need p > n + 1 = {n + 1}")
    table = _gl_cohomology_znweights(n, p)
    q = p ** f
    tl = TwistLattice.build(n, q)
    out = kunneth_twist(table, f, tl.lattice)
    out.meta.update({"n": n, "f": f, "q": q, "twist_index": tl.index,
                     "filter": "twist-lattice"})
    return out


def predicted_division_poincare(n: int, f: int) -> list[int]:
    """Coefficients of ((1+t) * prod_{i=1}^{n-1} (1+t^(2i+1)))^f."""
    poly = [1]

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    for _ in range(f):
        poly = mul(poly, [1, 1])
        for i in range(1, n):
            fac = [0] * (2 * i + 2)
            fac[0] = fac[2 * i + 1] = 1
            poly = mul(poly, fac)
    return poly


@dataclass
class NonsplitWeightReport:
    ok: bool
    hypothesis_ok: bool
    witnesses: list
    num_weights: int


def check_nonsplit_weight_lemma(n: int, p: int, f: int,
                                budget: int = 5_000_000) -> NonsplitWeightReport:
    """Enumerate the weights of the exterior algebra of gl_n (subset sums of
    the roots eps_a - eps_b) and verify that a trivial twisted character forces
    the twisted weight sum to vanish."""
    hypothesis_ok = n < p - 1
    q = p ** f
    roots = []
    for a in range(n):
        for b in range(n):
            if a != b:
                v = [0] * n
                v[a] += 1
                v[b] -= 1
                roots.append(tuple(v))
    sums = {(0,) * n}
    for r in roots:
        sums |= {tuple(a + b for a, b in zip(s, r)) for s in sums}
    weights = sorted(sums)
    if len(weights) ** f > budget:
        raise EnumerationLimitError("nonsplit weight enumeration budget exceeded")
    order = q ** n - 1
    witnesses = []
    for tup in itertools.product(weights, repeat=f):
        lam = tuple(sum(tup[i][j] * p ** i for i in range(f)) for j in range(n))
        lam_star = sum(lam[j] * p ** (j * f) for j in range(n))
        if lam_star % order == 0 and any(lam):
            witnesses.append({"tuple": tup, "sum": lam})
    return NonsplitWeightReport(ok=not witnesses, hypothesis_ok=hypothesis_ok,
                                witnesses=witnesses, num_weights=len(weights))
