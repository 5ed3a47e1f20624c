"""Exact linear algebra over F_p and F_{p^m}.

Matrices are sparse triplet lists over a field object.  Rank uses
Markowitz-style sparse elimination and falls back to dense elimination once
fill-in crosses a threshold; the dense prime-field path is vectorised with
numpy int64 (entries stay below 2^31 so products never overflow).  Everything
is exact; there is no probabilistic rank anywhere.

Extension fields are realised as F_p[x] modulo the irreducible polynomial of
the requested degree with the least integer encoding (base-p digits, low
degree first).  Field elements are integers in [0, q) under that encoding;
multiplication goes through discrete log tables, which caps supported field
sizes at 2^20 elements.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .errors import EnumerationLimitError, NotAComplexError

_TABLE_LIMIT = 1 << 20


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce modulo the monic polynomial mod
    m = len(mod) - 1
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * mod[j]) % p
    return _poly_trim(out)


def _poly_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # a mod b
        b_lead_inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            f = a[-1] * b_lead_inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % p
            _poly_trim(a)
        a, b = b, a
    return a


def _minus_x(poly, p):
    """poly - x, trimmed."""
    n = max(len(poly), 2)
    out = [(poly[i] if i < len(poly) else 0) - (1 if i == 1 else 0) for i in range(n)]
    return _poly_trim([c % p for c in out])


def _is_irreducible(mod, p):
    m = len(mod) - 1
    x = [0, 1]
    if _minus_x(_poly_powmod(x, p ** m, mod, p), p):
        return False  # x^{p^m} != x mod f
    for ell in _prime_divisors(m):
        diff = _minus_x(_poly_powmod(x, p ** (m // ell), mod, p), p)
        if not diff:
            return False
        if len(_poly_gcd(diff, list(mod), p)) > 1:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def Fq(p: int, m: int = 1) -> "FiniteField":
    return FiniteField(p, m)


class FiniteField:
    """F_{p^m}; elements are ints in [0, p^m) encoding coefficient vectors base p."""

    def __init__(self, p: int, m: int = 1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** m
        if q > _TABLE_LIMIT:
            raise EnumerationLimitError(f"field size {q} exceeds table limit {_TABLE_LIMIT}")
        self.p = p
        self.m = m
        self.q = q
        if m == 1:
            self.modulus = (0, 1)  # the polynomial x, for uniformity
            self._exp = None
            self._log = None
        else:
            self.modulus = self._least_irreducible()
            self._build_tables()

    def _least_irreducible(self):
        p, m = self.p, self.m
        for k in range(p ** m):
            low = [(k // p ** i) % p for i in range(m)]
            mod = low + [1]
            if _is_irreducible(mod, p):
                return tuple(mod)
        raise ArithmeticError("no irreducible polynomial found")  # unreachable

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        mod = list(self.modulus)

        def enc(poly):
            return sum(c * p ** i for i, c in enumerate(poly))

        def mul_raw(a, b):
            pa = [(a // p ** i) % p for i in range(m)]
            pb = [(b // p ** i) % p for i in range(m)]
            return enc(_poly_mulmod(pa, pb, mod, p))

        def pow_raw(a, e):
            r, base = 1, a
            while e:
                if e & 1:
                    r = mul_raw(r, base)
                base = mul_raw(base, base)
                e >>= 1
            return r

        factors = _prime_divisors(q - 1)
        gen = None
        for a in range(2, q):
            if all(pow_raw(a, (q - 1) // ell) != 1 for ell in factors):
                gen = a
                break
        if gen is None:
            raise ArithmeticError("no multiplicative generator found")
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for t in range(q - 1):
            exp[t] = x
            log[x] = t
            x = mul_raw(x, gen)
        self._exp = exp
        self._log = log
        self.generator = gen

    # -- element operations (elements are plain ints in [0, q)) --------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p ** i) % p for i in range(self.m))

    def from_coeffs(self, cs) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(cs)) % self.q

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out, mult = 0, 1
        for _ in range(self.m):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.from_coeffs(tuple(-c for c in self.coeffs(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError
            return 0 if e else 1
        if self.m == 1:
            return pow(a, e % (self.p - 1) if e >= 0 else e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** (times % self.m) if self.m > 1 else self.p)

    def elements(self):
        return range(self.q)

    def scalar_from_int(self, n: int) -> int:
        return n % self.p  # prime subfield embeds as the low digit

    def fixed_field(self, d: int) -> list[int]:
        """Elements fixed by Frobenius^d, i.e. the subfield F_{p^d} (d | m)."""
        return [a for a in range(self.q) if self.pow(a, self.p ** d) == a]

    def __repr__(self):
        return f"F({self.p}^{self.m})" if self.m > 1 else f"F({self.p})"


# ---------------------------------------------------------------------------
# Sparse matrices


class SparseMat:
    """A rows x cols matrix over a FiniteField, stored as (row, col, value) triplets.

    Immutable by convention once handed out; no duplicate positions and no
    stored zeros.
    """

    def __init__(self, rows: int, cols: int, entries, field: FiniteField):
        self.rows = rows
        self.cols = cols
        self.field = field
        seen = set()
        ent = []
        for (r, c, v) in entries:
            v %= field.q if field.m > 1 else field.p
            if v == 0:
                continue
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError("entry out of bounds")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at {(r, c)}")
            seen.add((r, c))
            ent.append((r, c, v))
        self.entries = tuple(sorted(ent))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMat":
        return SparseMat(self.cols, self.rows,
                         [(c, r, v) for (r, c, v) in self.entries], self.field)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (r, c, v) in self.entries:
            A[r, c] = v
        return A

    def mulvec(self, vec) -> list[int]:
        F = self.field
        out = [0] * self.rows
        for (r, c, v) in self.entries:
            if vec[c]:
                out[r] = F.add(out[r], F.mul(v, vec[c]))
        return out

    def matmul(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        F = self.field
        by_row = {}
        other_rows: dict[int, list] = {}
        for (r, c, v) in other.entries:
            other_rows.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (r, k, v) in self.entries:
            for (c, w) in other_rows.get(k, ()):
                key = (r, c)
                acc[key] = F.add(acc.get(key, 0), F.mul(v, w))
        return SparseMat(self.rows, other.cols,
                         [(r, c, v) for (r, c), v in acc.items() if v], F)


def _rank_dense_prime(A: np.ndarray, p: int) -> int:
    A = A % p
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        below = np.nonzero(A[r + 1:, c])[0]
        if below.size:
            rows = below + r + 1
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r])) % p
        r += 1
    return r


def _rref_dense_prime(A: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (R, pivot_cols)."""
    A = A % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_dense_field(M: list[list[int]], F: FiniteField):
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


_SPARSE_MIN_DIM = 48
_FILL_THRESHOLD = 0.18


def rank(M: SparseMat) -> int:
    """Rank of M over its field."""
    F = M.field
    if min(M.rows, M.cols) == 0 or M.nnz == 0:
        return 0
    if min(M.rows, M.cols) < _SPARSE_MIN_DIM or \
            M.nnz > _FILL_THRESHOLD * M.rows * M.cols:
        return _rank_dense(M)
    # Markowitz-style sparse elimination
    rows: dict[int, dict[int, int]] = {}
    for (r, c, v) in M.entries:
        rows.setdefault(r, {})[c] = v
    col_count: dict[int, int] = {}
    for r, row in rows.items():
        for c in row:
            col_count[c] = col_count.get(c, 0) + 1
    rk = 0
    total_cells = M.rows * M.cols
    while rows:
        nnz = sum(len(row) for row in rows.values())
        if len(rows) >= _SPARSE_MIN_DIM and nnz > _FILL_THRESHOLD * total_cells:
            rk += _rank_dense_from_rows(rows, M.cols, F)
            return rk
        # pick pivot minimising (row fill - 1) * (col fill - 1)
        best = None
        for r, row in rows.items():
            rl = len(row) - 1
            for c in row:
                cost = rl * (col_count[c] - 1)
                if best is None or cost < best[0]:
                    best = (cost, r, c)
                    if cost == 0:
                        break
            if best[0] == 0:
                break
        _, pr, pc = best
        prow = rows.pop(pr)
        for c in prow:
            col_count[c] -= 1
        inv = F.inv(prow[pc])
        prow = {c: F.mul(inv, v) for c, v in prow.items()}
        rk += 1
        for r in list(rows):
            row = rows[r]
            f = row.get(pc)
            if f is None:
                continue
            for c, v in prow.items():
                old = row.get(c, 0)
                new = F.sub(old, F.mul(f, v))
                if new == 0:
                    if c in row:
                        del row[c]
                        col_count[c] -= 1
                else:
                    if c not in row:
                        col_count[c] = col_count.get(c, 0) + 1
                    row[c] = new
            if not row:
                del rows[r]
    return rk


def _rank_dense(M: SparseMat) -> int:
    F = M.field
    if F.m == 1:
        return _rank_dense_prime(M.to_dense(), F.p)
    dense = [[0] * M.cols for _ in range(M.rows)]
    for (r, c, v) in M.entries:
        dense[r][c] = v
    _, piv = _rref_dense_field(dense, F)
    return len(piv)


def _rank_dense_from_rows(rows, cols, F) -> int:
    if F.m == 1:
        A = np.zeros((len(rows), cols), dtype=np.int64)
        for i, row in enumerate(rows.values()):
            for c, v in row.items():
                A[i, c] = v
        return _rank_dense_prime(A, F.p)
    dense = [[0] * cols for _ in range(len(rows))]
    for i, row in enumerate(rows.values()):
        for c, v in row.items():
            dense[i][c] = v
    _, piv = _rref_dense_field(dense, F)
    return len(piv)


def kernel_basis(M: SparseMat) -> list[list[int]]:
    """A basis of ker(M), as coordinate vectors of length M.cols."""
    F = M.field
    if F.m == 1:
        R, pivots = _rref_dense_prime(M.to_dense(), F.p)
        R = R.tolist()
    else:
        dense = [[0] * M.cols for _ in range(M.rows)]
        for (r, c, v) in M.entries:
            dense[r][c] = v
        R, pivots = _rref_dense_field(dense, F)
    pivset = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivset:
            continue
        vec = [0] * M.cols
        vec[free] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = F.neg(R[i][free])
        basis.append(vec)
    return basis


def cohomology_dim(d_in: SparseMat, d_out: SparseMat) -> int:
    """dim ker(d_out) - rank(d_in) for a two-step complex C --d_in--> C' --d_out--> C''."""
    if d_out.cols != d_in.rows:
        raise ValueError("dimension mismatch: d_out.cols != d_in.rows")
    comp = d_out.matmul(d_in)
    if comp.nnz:
        bad_col = min(c for (_, c, _) in comp.entries)
        raise NotAComplexError(f"d_out o d_in != 0; first violating column {bad_col}")
    return (d_in.rows - rank(d_out)) - rank(d_in)


def zero_matrix(rows: int, cols: int, field: FiniteField) -> SparseMat:
    return SparseMat(rows, cols, [], field)


def random_sparse(rows, cols, field, density, rng: random.Random) -> SparseMat:
    entries = []
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randrange(1, field.q)
                entries.append((r, c, v))
    return SparseMat(rows, cols, entries, field)
