"""Graded Lie algebras built from a Chevalley basis.

Two families of objects live here:

* ``GradedLie``: a truncation of the positively graded loop subalgebra
  v*n^-[v] + v*t[v] + n[v], with degrees in (1/he)Z, the X*(T)-weight
  grading, and the degree-one operator eps of multiplication by lambda*v^e.
  Degrees are handled as integer indices in units of 1/(he).
* ``FiniteGradedLie``: a finite-dimensional graded Lie algebra over F_p; the
  main instance is the quotient of the e=1 graded algebra by the image of
  eps, presented as n acting on g/n (basis: the positive root vectors and the
  classes of the lower Borel basis).

The cyclic-shift presentation of the gl_n case is a third, matrix-free model
used by the division-algebra comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .chevalley import StructLie, Subalgebra, build_chevalley, triangular
from .linfp import FiniteField, Fq
from .rootsys import RootSystem, Weight, build_root_system

GradedLabel = tuple  # (StructLie label, v-power)


class GradedLie:
    """Truncation of the graded loop subalgebra of a StructLie mod p."""

    def __init__(self, L: StructLie, e: int, p: int, truncation_degree: int = 3,
                 lam: int = 1):
        if e < 1:
            raise ValueError("ramification e must be >= 1")
        if e == 1 and lam != 1:
            raise ValueError("with e = 1 the uniformizer is p, forcing lambda = 1")
        self.L = L
        self.rs = L.rs
        self.e = e
        self.p = p
        self.lam = lam % p
        self.h = L.rs.coxeter_number
        self.he = self.h * e
        self.max_index = truncation_degree * self.he
        self.pieces: dict[int, list[GradedLabel]] = {}
        self.position: dict[GradedLabel, tuple[int, int]] = {}
        self._build()

    def _build(self):
        rs = self.rs
        h = self.h
        for d in range(1, self.max_index + 1):
            basis: list[GradedLabel] = []
            for i, r in enumerate(rs.roots):
                if (d - r.height) % h == 0:
                    basis.append((("X", i), (d - r.height) // h))
            if d % h == 0:
                vpow = d // h
                for i in range(rs.rank):
                    basis.append((("H", i), vpow))
                if self.L.with_center:
                    basis.append((("Z",), vpow))
            self.pieces[d] = basis
            for pos, el in enumerate(basis):
                self.position[el] = (d, pos)

    def degree(self, el: GradedLabel) -> Fraction:
        return Fraction(self.position[el][0], self.he)

    def weight(self, el: GradedLabel) -> Weight:
        return self.L.weight_of(el[0])

    def dim_piece(self, d: int) -> int:
        return len(self.pieces.get(d, []))

    def bracket_elements(self, a: GradedLabel, b: GradedLabel) -> dict[GradedLabel, int]:
        """[a, b] as a sparse vector over the graded basis, mod p."""
        da, db = self.position[a][0], self.position[b][0]
        if da + db > self.max_index:
            raise ValueError("bracket lands beyond the stored truncation")
        ia, ib = self.L.index[a[0]], self.L.index[b[0]]
        vpow = a[1] + b[1]
        out = {}
        for k, c in self.L.bracket_basis(ia, ib).items():
            cv = c % self.p
            if cv:
                out[(self.L.labels[k], vpow)] = cv
        return out

    def bracket_vec(self, d1: int, v1: dict[int, int], d2: int,
                    v2: dict[int, int]) -> dict[int, int]:
        """Bracket of coordinate vectors on pieces d1, d2 (position -> coeff)."""
        out: dict[int, int] = {}
        p = self.p
        for i, x in v1.items():
            a = self.pieces[d1][i]
            for j, y in v2.items():
                b = self.pieces[d2][j]
                for el, c in self.bracket_elements(a, b).items():
                    pos = self.position[el][1]
                    out[pos] = (out.get(pos, 0) + x * y * c) % p
        return {k: v for k, v in out.items() if v}

    def epsilon(self, el: GradedLabel) -> tuple[GradedLabel, int]:
        """eps(el) as (element, coefficient); multiplication by lambda v^e."""
        target = (el[0], el[1] + self.e)
        if self.position[el][0] + self.he > self.max_index:
            raise ValueError("eps image beyond the stored truncation")
        return target, self.lam

    def epsilon_image_positions(self, d: int) -> set[int]:
        """Positions in piece d spanned by eps(piece d - he)."""
        out = set()
        if d - self.he >= 1:
            for el in self.pieces[d - self.he]:
                out.add(self.position[(el[0], el[1] + self.e)][1])
        return out

    def to_json(self) -> str:
        data = {
            "type": f"{self.rs.cartan_type}{self.rs.rank}",
            "e": self.e, "p": self.p, "lambda": self.lam,
            "pieces": {
                str(d): [{"label": list(el[0]), "vpow": el[1],
                          "weight": list(self.weight(el).coords)}
                         for el in basis]
                for d, basis in self.pieces.items()},
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))


def build_tilde_g(L: StructLie, e: int, p: int, truncation_degree: int = 3,
                  lam: int = 1) -> GradedLie:
    return GradedLie(L, e, p, truncation_degree, lam)


def coxeter_grading_iso(tg: GradedLie, d: int) -> list[tuple[GradedLabel, tuple]]:
    """For e = 1: the basis bijection from graded piece d/h onto the Coxeter
    graded piece g[d mod h], forgetting v-powers.  eps corresponds to the
    identity under these maps."""
    if tg.e != 1:
        raise ValueError("Coxeter grading comparison requires e = 1")
    return [(el, el[0]) for el in tg.pieces[d]]


# ---------------------------------------------------------------------------
# Finite-dimensional graded Lie algebras over F_p


class FiniteGradedLie:
    """A finite-dimensional Lie algebra over F_p with a rational grading and a
    weight per basis element."""

    def __init__(self, labels, weights, degrees, brackets, p: int, rank: int,
                 name: str = ""):
        self.labels = list(labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        self.weights = list(weights)          # Weight per basis element
        self.degrees = list(degrees)          # Fraction per basis element
        self.p = p
        self.rank = rank                      # rank of the weight lattice
        self.name = name
        # brackets stored for i < j only
        self.brackets: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), terms in brackets.items():
            t = {k: v % p for k, v in terms.items() if v % p}
            if not t:
                continue
            if i < j:
                self.brackets[(i, j)] = t
            elif j < i:
                self.brackets[(j, i)] = {k: (-v) % p for k, v in t.items()}
            else:
                raise ValueError("diagonal bracket entry")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_basis(self, i: int, j: int) -> dict[int, int]:
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: (-v) % self.p for k, v in self.brackets.get((j, i), {}).items()}

    def bracket_vec(self, x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, xi in x.items():
            for j, yj in y.items():
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = (out.get(k, 0) + xi * yj * c) % self.p
        return {k: v for k, v in out.items() if v}

    def lower_central_series_dims(self, max_steps: int | None = None) -> list[int]:
        """Dimensions of the lower central series terms, until stable or zero."""
        import numpy as np
        from .linfp import _rref_dense_prime
        current = np.eye(self.dim, dtype=np.int64)  # rows span the current term
        dims = [self.dim]
        steps = max_steps if max_steps is not None else 4 * self.dim
        for _ in range(steps):
            rows = []
            for v in current:
                x = {i: int(c) for i, c in enumerate(v) if c}
                for j in range(self.dim):
                    z = self.bracket_vec(x, {j: 1})
                    if z:
                        row = [0] * self.dim
                        for k, c in z.items():
                            row[k] = c
                        rows.append(row)
            if not rows:
                dims.append(0)
                break
            R, piv = _rref_dense_prime(np.array(rows, dtype=np.int64), self.p)
            current = R[:len(piv)]
            dims.append(len(piv))
            if len(piv) == 0 or dims[-1] == dims[-2]:
                break
        return dims

    def permuted(self, perm: list[int]) -> "FiniteGradedLie":
        """The same algebra with basis reordered by perm (new index i holds old
        basis element perm[i]); dimension tables must be invariant under this."""
        inv = {old: new for new, old in enumerate(perm)}
        labels = [self.labels[old] for old in perm]
        weights = [self.weights[old] for old in perm]
        degrees = [self.degrees[old] for old in perm]
        brackets = {}
        for (i, j), terms in self.brackets.items():
            brackets[(inv[i], inv[j])] = {inv[k]: v for k, v in terms.items()}
        return FiniteGradedLie(labels, weights, degrees, brackets, self.p,
                               self.rank, self.name + "-permuted")

    def to_json(self) -> str:
        data = {
            "name": self.name, "p": self.p,
            "basis": [{"label": list(l) if isinstance(l, tuple) else l,
                       "weight": list(self.weights[i].coords),
                       "degree": [self.degrees[i].numerator, self.degrees[i].denominator]}
                      for i, l in enumerate(self.labels)],
            "brackets": sorted([[i, j, sorted([[k, v] for k, v in t.items()])]
                                for (i, j), t in self.brackets.items()]),
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))


def build_gbar(L: StructLie, p: int) -> FiniteGradedLie:
    """The nilpotent quotient of the e=1 graded algebra by the eps image,
    presented as the semidirect product of n with g/n (identified with the
    span of the lower Borel basis).  Valid construction for any p; the
    p > h+1 hypothesis matters only to what its cohomology means."""
    rs = L.rs
    h = rs.coxeter_number
    np_ = rs.num_positive
    tri = triangular(L)
    qlabels = list(tri.b_minus.member_labels)  # classes of b^- elements
    labels = [("n", i) for i in range(np_)] + [("q", lab) for lab in qlabels]
    qpos = {lab: np_ + k for k, lab in enumerate(qlabels)}
    weights, degrees = [], []
    for i in range(np_):
        weights.append(rs.root_weight(rs.positive_roots[i]))
        degrees.append(Fraction(rs.positive_roots[i].height, h))
    for lab in qlabels:
        w = L.weight_of(lab)
        weights.append(w)
        if lab[0] == "X":
            ht = rs.roots[lab[1]].height  # negative
            degrees.append(Fraction(h + ht, h))
        else:
            degrees.append(Fraction(1))
    qset = set(tri.b_minus.indices)
    brackets = {}
    for i in range(np_):
        gi = L.index[("X", i)]
        # [n_i, n_j] inside n
        for j in range(i + 1, np_):
            terms = L.bracket_basis(gi, L.index[("X", j)])
            t = {}
            for k, c in terms.items():
                lab = L.labels[k]
                assert lab[0] == "X" and lab[1] < np_
                t[lab[1]] = c
            if t:
                brackets[(i, j)] = t
        # [n_i, class of B] = class of the b^- component of [X_i, B]
        for lab in qlabels:
            terms = L.bracket_basis(gi, L.index[lab])
            t = {}
            for k, c in terms.items():
                if k in qset:
                    t[qpos[L.labels[k]]] = c
            if t:
                brackets[(i, qpos[lab])] = t
    return FiniteGradedLie(labels, weights, degrees, brackets, p, rs.rank,
                           name=f"gbar-{rs.cartan_type}{rs.rank}"
                                f"{'-centered' if L.with_center else ''}")


def finite_from_subalgebra(L: StructLie, sub: Subalgebra, p: int,
                           name: str = "") -> FiniteGradedLie:
    """A subalgebra of a StructLie, reduced mod p, as a FiniteGradedLie.
    Degrees are heights over h for root vectors and 0 on the torus."""
    rs = L.rs
    h = rs.coxeter_number
    labels = list(sub.member_labels)
    pos = {L.index[lab]: i for i, lab in enumerate(labels)}
    weights = [L.weight_of(lab) for lab in labels]
    degrees = [Fraction(rs.roots[lab[1]].height, h) if lab[0] == "X" else Fraction(0)
               for lab in labels]
    brackets = {}
    for a, ia in pos.items():
        for b, ib in pos.items():
            if ia < ib:
                terms = L.bracket_basis(a, b)
                t = {pos[k]: c for k, c in terms.items()}
                if t:
                    brackets[(ia, ib)] = t
    return FiniteGradedLie(labels, weights, degrees, brackets, p, rs.rank,
                           name=name or "sub")


@dataclass
class ModEpsilonReport:
    ok: bool
    mismatches: list


def verify_mod_epsilon_iso(tg: GradedLie, gb: FiniteGradedLie) -> ModEpsilonReport:
    """Check that the basis map from the semidirect-product presentation into
    the graded algebra matches all structure constants modulo the eps image."""
    if tg.e != 1:
        raise ValueError("comparison defined for e = 1")
    if tg.max_index < 2 * tg.h:
        raise ValueError("truncation too small: need two full degree periods")
    L = tg.L
    rs = tg.rs
    np_ = rs.num_positive

    def lift(label) -> GradedLabel:
        kind, payload = label[0], label[1:]
        if kind == "n":
            return (("X", payload[0]), 0)
        lab = payload[0]
        return (lab, 1)  # classes of b^- lift with one power of v

    def reduce_mod_eps(vec: dict[GradedLabel, int]) -> dict[GradedLabel, int]:
        out = {}
        for el, c in vec.items():
            lab, vpow = el
            if lab[0] == "X" and rs.roots[lab[1]].is_positive:
                keep = vpow == 0
            elif lab[0] == "X":
                keep = vpow == 1
            else:
                keep = vpow == 1
            if keep:
                out[el] = c
        return out

    mismatches = []
    for i in range(gb.dim):
        for j in range(i + 1, gb.dim):
            got = reduce_mod_eps(tg.bracket_elements(lift(gb.labels[i]),
                                                     lift(gb.labels[j])))
            expected = {lift(gb.labels[k]): c
                        for k, c in gb.bracket_basis(i, j).items()}
            if got != expected:
                mismatches.append({"pair": (gb.labels[i], gb.labels[j]),
                                   "graded_side": sorted(got.items()),
                                   "quotient_side": sorted(expected.items())})
    return ModEpsilonReport(ok=not mismatches, mismatches=mismatches)


# ---------------------------------------------------------------------------
# Cyclic-shift presentation for gl_n


class ShiftGradedLie:
    """Graded pieces k^n for i = 1..truncation, with the twisted shift bracket
    and eps the identity map to the piece one degree up."""

    def __init__(self, n: int, field: FiniteField, truncation: int | None = None):
        self.n = n
        self.field = field
        self.truncation = truncation if truncation is not None else 3 * n

    def shift(self, vec: tuple, times: int) -> tuple:
        # left shift: Phi(v)_j = v_{j+1 mod n}
        t = times % self.n
        return tuple(vec[(j + t) % self.n] for j in range(self.n))

    def bracket(self, i: int, x: tuple, j: int, y: tuple) -> tuple:
        """[x at i/n, y at j/n] in piece (i+j)/n."""
        F = self.field
        sy = self.shift(y, i)
        sx = self.shift(x, j)
        return tuple(F.sub(F.mul(x[m], sy[m]), F.mul(y[m], sx[m]))
                     for m in range(self.n))

    def eps(self, i: int, x: tuple) -> tuple[int, tuple]:
        return i + self.n, x

    def weight(self, i: int, m: int) -> tuple[int, ...]:
        """Torus weight of the m-th coordinate of piece i/n (0-indexed), as a
        vector in Z^n: eps_m - eps_{m + i}."""
        out = [0] * self.n
        out[m % self.n] += 1
        out[(m + i) % self.n] -= 1
        return tuple(out)


def shift_presentation(n: int, p: int, f: int, truncation: int | None = None) -> ShiftGradedLie:
    return ShiftGradedLie(n, Fq(p, f), truncation)


def gl_basis_to_shift_vector(tg: GradedLie, d: int, coeffs: dict[int, int]) -> tuple:
    """Convert a coordinate vector on the gl_n graded piece d (over F_p) to the
    shift presentation's k^n coordinates via E_{j, j+d} -> e_j.

    The root vector for eps_a - eps_b is the elementary matrix E_ab; diagonal
    pieces convert through H_i = E_ii - E_{i+1,i+1} and Z = sum E_jj.
    """
    rs = tg.rs
    n = rs.rank + 1
    if not tg.L.with_center:
        raise ValueError("shift comparison needs the centered (gl) algebra")
    out = [0] * n
    for pos, c in coeffs.items():
        lab, _ = tg.pieces[d][pos]
        if lab[0] == "X":
            coords = rs.roots[lab[1]].coords
            v = [0] * n
            for i, ci in enumerate(coords):
                v[i] += ci
                v[i + 1] -= ci
            a = v.index(1)
            out[a] = (out[a] + c) % tg.p
        elif lab[0] == "H":
            i = lab[1]
            out[i] = (out[i] + c) % tg.p
            out[i + 1] = (out[i + 1] - c) % tg.p
        else:  # Z
            for j in range(n):
                out[j] = (out[j] + c) % tg.p
    return tuple(out)
