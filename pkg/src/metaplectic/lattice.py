"""Exact integer-matrix and lattice algebra.

Matrices are tuples of int tuples and all reductions are exact; no floating
point is used anywhere in this module.  Hermite normal form is the canonical
representation of a sublattice, and the Smith decomposition (with unimodular
transforms on both sides) aligns a full-rank sublattice with a basis of its
ambient lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASublattice, ValidationError

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def _freeze(rows) -> Mat:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b) -> Mat:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def hnf(rows, cols: int | None = None) -> Mat:
    """Row Hermite normal form: echelon, positive pivots, entries above a
    pivot reduced into [0, pivot).  Zero rows are dropped, so the result is a
    canonical basis of the row span."""
    mat = [list(map(int, r)) for r in rows]
    ncols = cols if cols is not None else (len(mat[0]) if mat else 0)
    if any(len(r) != ncols for r in mat):
        raise ValidationError("ragged matrix")
    row = 0
    for col in range(ncols):
        pivot_here = False
        while True:
            nz = [i for i in range(row, len(mat)) if mat[i][col]]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(mat[i][col]), i))
            if best != row:
                mat[row], mat[best] = mat[best], mat[row]
            if len(nz) == 1:
                pivot_here = True
                break
            p = mat[row][col]
            for i in range(row + 1, len(mat)):
                if mat[i][col]:
                    q = mat[i][col] // p
                    if q:
                        mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
        if pivot_here:
            if mat[row][col] < 0:
                mat[row] = [-a for a in mat[row]]
            p = mat[row][col]
            for i in range(row):
                q = mat[i][col] // p
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
            row += 1
    return _freeze(mat[:row])


@dataclass(frozen=True)
class SmithForm:
    """U @ original @ V == diag(divisors), with U, V unimodular."""

    u: Mat
    v: Mat
    vinv: Mat
    divisors: tuple[int, ...]
    rows: int
    cols: int


def smith_form(rows, cols: int | None = None) -> SmithForm:
    """Smith normal form with both transforms tracked.

    Divisors form a divisibility chain d1 | d2 | ... and are nonnegative.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = cols if cols is not None else (len(a[0]) if a else 0)
    u = [list(r) for r in identity_matrix(m)]
    v = [list(r) for r in identity_matrix(n)]
    vinv = [list(r) for r in identity_matrix(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def addmul_row(dst, src, k):
        # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def addmul_col(dst, src, k):
        # col dst += k * col src; Vinv gets the inverse row operation
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]
        vinv[src] = [x - k * y for x, y in zip(vinv[src], vinv[dst])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(m):
                if i != t and a[i][t]:
                    q = a[i][t] // p
                    addmul_row(i, t, -q)
                    dirty = dirty or bool(a[i][t])
            for j in range(n):
                if j != t and a[t][j]:
                    q = a[t][j] // p
                    addmul_col(j, t, -q)
                    dirty = dirty or bool(a[t][j])
            if dirty:
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addmul_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    divisors = tuple(a[i][i] for i in range(min(m, n)))
    return SmithForm(_freeze(u), _freeze(v), _freeze(vinv), divisors, m, n)


def kernel_basis(rows, cols: int) -> Mat:
    """Basis of the left integer kernel {x : x @ M == 0}."""
    sf = smith_form(rows, cols)
    rank = sum(1 for d in sf.divisors if d)
    return hnf(sf.u[rank:], len(rows))


def solve_integer(rows, target) -> Vec | None:
    """One integer solution x of x @ rows == target, or None.

    Unlike Sublattice.coords this does not require an echelon basis."""
    rows = _freeze(rows)
    if not rows:
        return () if not any(target) else None
    n = len(rows[0])
    sf = smith_form(rows, n)
    tv = mat_mul((tuple(int(v) for v in target),), sf.v)[0]
    y = []
    for i in range(len(rows)):
        d = sf.divisors[i] if i < len(sf.divisors) else 0
        if d == 0:
            if i < n and tv[i]:
                return None
            y.append(0)
        else:
            if tv[i] % d:
                return None
            y.append(tv[i] // d)
    for j in range(len(rows), n):
        if tv[j]:
            return None
    return mat_mul((tuple(y),), sf.u)[0]


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank stored by its HNF basis rows."""

    ambient_rank: int
    basis: Mat

    @classmethod
    def from_rows(cls, ambient_rank: int, rows) -> "Sublattice":
        return cls(ambient_rank, hnf(rows, ambient_rank))

    @classmethod
    def full(cls, rank: int) -> "Sublattice":
        return cls(rank, identity_matrix(rank))

    @classmethod
    def scaled(cls, rank: int, k: int) -> "Sublattice":
        return cls.from_rows(rank, tuple(tuple(k if i == j else 0 for j in range(rank)) for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, v) -> Vec | None:
        """Integer coordinates of v in this basis, or None if v is outside."""
        v = [int(x) for x in v]
        if len(v) != self.ambient_rank:
            raise ValidationError("vector/lattice rank mismatch")
        out = []
        for row in self.basis:
            pc = next(i for i, x in enumerate(row) if x)
            if v[pc] % row[pc]:
                return None
            k = v[pc] // row[pc]
            out.append(k)
            if k:
                v = [x - k * y for x, y in zip(v, row)]
        return tuple(out) if not any(v) else None

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(self.contains(r) for r in other.basis)

    def index_in(self, ambient: "Sublattice") -> int:
        """[ambient : self]; both lattices must have equal rank."""
        c = _coord_matrix(ambient, self)
        if self.rank != ambient.rank:
            raise ValidationError("index undefined for unequal ranks")
        prod = 1
        for i, row in enumerate(hnf(c, ambient.rank)):
            prod *= row[next(j for j, x in enumerate(row) if x)] if any(row) else 0
        return prod


def _coord_matrix(ambient: Sublattice, sub: Sublattice) -> Mat:
    rows = []
    for r in sub.basis:
        c = ambient.coords(r)
        if c is None:
            raise NotASublattice(f"{r} is not in the ambient lattice")
        rows.append(c)
    return _freeze(rows)


def lattice_sum(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_rank != b.ambient_rank:
        raise ValidationError("ambient rank mismatch in lattice sum")
    return Sublattice.from_rows(a.ambient_rank, a.basis + b.basis)


def lattice_intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    """Intersection via the kernel of the stacked generator matrix."""
    if a.ambient_rank != b.ambient_rank:
        raise ValidationError("ambient rank mismatch in lattice intersection")
    stacked = a.basis + b.basis
    if not stacked:
        return Sublattice(a.ambient_rank, ())
    ker = kernel_basis(stacked, a.ambient_rank)
    s = len(a.basis)
    vecs = []
    for x in ker:
        vec = [0] * a.ambient_rank
        for coef, row in zip(x[:s], a.basis):
            if coef:
                vec = [p + coef * q for p, q in zip(vec, row)]
        vecs.append(vec)
    return Sublattice.from_rows(a.ambient_rank, vecs)


def quotient_invariants(ambient: Sublattice, sub: Sublattice) -> tuple[int, ...]:
    """Elementary divisors != 1 of ambient/sub (in divisibility order)."""
    c = _coord_matrix(ambient, sub)
    sf = smith_form(c, ambient.rank)
    if sub.rank < ambient.rank:
        raise ValidationError("quotient by a lower-rank sublattice is infinite")
    return tuple(d for d in sf.divisors if d != 1)


@dataclass(frozen=True)
class SmithDecomposition:
    """Aligned basis e_i of the ambient lattice with divisors k_i such that
    {k_i e_i} is a basis of the sublattice."""

    ambient: Sublattice
    sub: Sublattice
    basis: Mat
    divisors: tuple[int, ...]

    def index(self) -> int:
        p = 1
        for k in self.divisors:
            p *= k
        return p


def smith_align(ambient: Sublattice, sub: Sublattice) -> SmithDecomposition:
    """Align a full-rank sublattice with its ambient lattice.

    Output order is canonical: ascending divisors, ties broken by the
    lexicographically smaller basis vector (sign-normalized to a positive
    leading entry).
    """
    c = _coord_matrix(ambient, sub)
    if sub.rank != ambient.rank:
        raise NotASublattice("smith_align requires a full-rank sublattice")
    sf = smith_form(c, ambient.rank)
    aligned = mat_mul(sf.vinv, ambient.basis)
    pairs = []
    for k, row in zip(sf.divisors, aligned):
        lead = next(x for x in row if x)
        if lead < 0:
            row = tuple(-x for x in row)
        pairs.append((k, row))
    pairs.sort(key=lambda p: (p[0], p[1]))
    basis = tuple(r for _, r in pairs)
    divisors = tuple(k for k, _ in pairs)
    return SmithDecomposition(ambient, sub, basis, divisors)
