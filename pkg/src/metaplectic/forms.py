"""Weyl-invariant quadratic forms, bisectors, eta maps and incarnation morphisms.

A form is stored by its values Q(e_i) on the cocharacter basis together with
the full polarization matrix B_Q (integral, with even diagonal 2Q(e_i)), so
no half-integers ever appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotSameQ, NotWeylInvariant, ValidationError
from .lattice import Sublattice
from .localfield import FieldElement, TameField
from .rootdata import RootDatum, Vec


@dataclass(frozen=True)
class QuadraticForm:
    rd: RootDatum
    q_basis: tuple[int, ...]
    b: tuple[Vec, ...]

    def q(self, y) -> int:
        acc = 0
        y = tuple(y)
        for i, ci in enumerate(y):
            if ci:
                acc += ci * ci * self.q_basis[i]
                for j in range(i + 1, len(y)):
                    if y[j]:
                        acc += ci * y[j] * self.b[i][j]
        return acc

    def bq(self, y1, y2) -> int:
        return sum(a * self.b[i][j] * b2
                   for i, a in enumerate(y1) if a
                   for j, b2 in enumerate(y2) if b2)

    def q_coroot(self, entry) -> int:
        return self.q(entry.coroot)

    def validate(self) -> None:
        rd = self.rd
        n = rd.rank_y
        for i in range(n):
            if self.b[i][i] != 2 * self.q_basis[i]:
                raise NotWeylInvariant(f"B[{i}][{i}] != 2 Q(e_{i})")
            for j in range(n):
                if self.b[i][j] != self.b[j][i]:
                    raise NotWeylInvariant("B_Q is not symmetric")
        basis = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        for k in range(rd.nsimple):
            for e in basis:
                if self.q(rd.reflect_y(k, e)) != self.q(e):
                    raise NotWeylInvariant(f"Q is not invariant under s_{k + 1}")
        # B_Q(alpha^vee, y) = Q(alpha^vee) <alpha, y> for every root
        for r in rd.roots:
            qa = self.q(r.coroot)
            for e in basis:
                if self.bq(r.coroot, e) != qa * rd.pairing(r.x, e):
                    raise NotWeylInvariant(
                        f"B_Q(alpha^vee, {e}) != Q(alpha^vee) <alpha, {e}> for root {r.coeffs}")


def invariant_form(rd: RootDatum, short_coroot_value=None, basis_q=None, basis_b=None) -> QuadraticForm:
    """Build a Weyl-invariant integral form.

    Either give the value on the short coroot of each simple component (the
    Y-basis must then be the simple coroots), or supply Q(e_i) plus the
    off-diagonal B_Q entries for an arbitrary cocharacter basis.
    """
    n = rd.rank_y
    if basis_q is not None:
        q_basis = tuple(int(v) for v in basis_q)
        if len(q_basis) != n:
            raise ValidationError("basis_q length differs from rank")
        b = [[0] * n for _ in range(n)]
        for i in range(n):
            b[i][i] = 2 * q_basis[i]
        if basis_b:
            for (i, j), val in basis_b.items():
                if i == j:
                    raise ValidationError("diagonal B entries are determined by Q")
                b[i][j] = b[j][i] = int(val)
        form = QuadraticForm(rd, q_basis, tuple(tuple(r) for r in b))
        form.validate()
        return form

    if short_coroot_value is None:
        raise ValidationError("need short_coroot_value or basis_q")
    unit = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    if rd.nsimple != n or tuple(rd.simple_coroots) != tuple(unit):
        raise ValidationError("short-coroot values need the simply-connected basis; "
                              "pass basis_q for other isogenies")
    comps = _components(rd)
    values = list(short_coroot_value) if isinstance(short_coroot_value, (list, tuple)) \
        else [int(short_coroot_value)] * len(comps)
    if len(values) != len(comps):
        raise ValidationError(f"need one value per component ({len(comps)})")
    qvals: list[Fraction | None] = [None] * n
    for comp, target in zip(comps, values):
        # propagate Q along the Dynkin graph, then scale so min = target
        start = comp[0]
        qvals[start] = Fraction(1)
        todo = [start]
        while todo:
            i = todo.pop()
            for j in comp:
                if qvals[j] is None and rd.cartan[i][j]:
                    qvals[j] = qvals[i] * rd.cartan[j][i] / rd.cartan[i][j]
                    todo.append(j)
        low = min(qvals[i] for i in comp)
        for i in comp:
            qvals[i] = qvals[i] / low * target
            if qvals[i].denominator != 1:
                raise NotWeylInvariant("no integral invariant form with this value")
    q_basis = tuple(int(v) for v in qvals)
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        b[i][i] = 2 * q_basis[i]
        for j in range(n):
            if i != j:
                # B(e_i, e_j) = Q(e_i) <alpha_i, e_j> with cartan[j][i] = <alpha_i, alpha_j^vee>
                b[i][j] = q_basis[i] * rd.cartan[j][i]
    for i in range(n):
        for j in range(n):
            if b[i][j] != b[j][i]:
                raise NotWeylInvariant("propagated values are inconsistent")
    form = QuadraticForm(rd, q_basis, tuple(tuple(r) for r in b))
    form.validate()
    return form


def _components(rd: RootDatum) -> list[list[int]]:
    n = rd.nsimple
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp, todo = [], [s]
        seen.add(s)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and rd.cartan[i][j]:
                    seen.add(j)
                    todo.append(j)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class Bisector:
    """Integer bilinear D with D + D^T = B_Q and D(e_i,e_i) = Q(e_i)."""

    d: tuple[Vec, ...]

    def value(self, y1, y2) -> int:
        return sum(a * self.d[i][j] * b
                   for i, a in enumerate(y1) if a
                   for j, b in enumerate(y2) if b)

    def validate_against(self, qf: QuadraticForm) -> None:
        n = len(self.d)
        for i in range(n):
            if self.d[i][i] != qf.q_basis[i]:
                raise ValidationError(f"D(e_{i},e_{i}) != Q(e_{i})")
            for j in range(n):
                if self.d[i][j] + self.d[j][i] != qf.b[i][j]:
                    raise ValidationError(f"D + D^T != B_Q at ({i},{j})")


def fair_bisector(qf: QuadraticForm, order=None) -> Bisector:
    """Triangular bisector: zero above the diagonal (in the given basis
    order), Q on it, B_Q below."""
    n = len(qf.q_basis)
    order = tuple(order) if order is not None else tuple(range(n))
    pos = {idx: k for k, idx in enumerate(order)}
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                d[i][j] = qf.q_basis[i]
            elif pos[i] > pos[j]:
                d[i][j] = qf.b[i][j]
    out = Bisector(tuple(tuple(r) for r in d))
    out.validate_against(qf)
    return out


def find_fair_bisector(qf: QuadraticForm) -> Bisector:
    """A fair bisector for Q; one always exists.

    The triangular construction is fair whenever the basis leads with the
    simple coroots; otherwise fairness is a linear condition mod 2 on the
    above-diagonal entries, solved directly.
    """
    candidate = fair_bisector(qf)
    if is_fair(candidate, qf):
        return candidate
    rd = qf.rd
    n = rd.rank_y
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {p: k for k, p in enumerate(pairs)}
    rows = []
    for a in rd.simple_coroots:
        if qf.q(a) % 2:
            continue
        for j in range(n):
            coeffs = [0] * len(pairs)
            rhs = (a[j] * qf.q_basis[j]) % 2
            for i in range(n):
                if i == j or a[i] % 2 == 0:
                    continue
                if i < j:
                    coeffs[index[(i, j)]] ^= 1
                else:
                    coeffs[index[(j, i)]] ^= 1
                    rhs ^= qf.b[i][j] % 2
            rows.append((coeffs, rhs))
    solution = _solve_mod2(rows, len(pairs))
    if solution is None:
        raise ValidationError("no fair bisector exists (violates the existence result)")
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = qf.q_basis[i]
    for (i, j), k in index.items():
        d[i][j] = solution[k]
        d[j][i] = qf.b[i][j] - solution[k]
    out = Bisector(tuple(tuple(r) for r in d))
    out.validate_against(qf)
    if not is_fair(out, qf):
        raise ValidationError("fair bisector solver produced an unfair bisector")
    return out


def _solve_mod2(rows, nvars):
    matrix = [(list(c), r) for c, r in rows]
    pivots = {}
    for col in range(nvars):
        row = next((k for k in range(len(matrix))
                    if k not in pivots.values() and matrix[k][0][col]
                    and all(matrix[k][0][c] == 0 for c in range(col))), None)
        if row is None:
            continue
        pivots[col] = row
        for k in range(len(matrix)):
            if k != row and matrix[k][0][col]:
                matrix[k] = ([a ^ b for a, b in zip(matrix[k][0], matrix[row][0])],
                             matrix[k][1] ^ matrix[row][1])
    for coeffs, rhs in matrix:
        if rhs and not any(coeffs):
            return None
    out = [0] * nvars
    for col, row in pivots.items():
        out[col] = matrix[row][1]
    return out


def is_fair(d: Bisector, qf: QuadraticForm) -> bool:
    """Fair: even Q(alpha^vee) for a simple coroot forces even D(alpha^vee, .)."""
    rd = qf.rd
    n = rd.rank_y
    for a in rd.simple_coroots:
        if qf.q(a) % 2 == 0:
            for j in range(n):
                e = tuple(1 if k == j else 0 for k in range(n))
                if d.value(a, e) % 2:
                    return False
    return True


@dataclass(frozen=True)
class EtaMap:
    """Homomorphism Y^sc -> F^x pinned down by values on the simple coroots."""

    field: TameField
    rd: RootDatum
    values: tuple[FieldElement, ...]

    @classmethod
    def trivial(cls, field: TameField, rd: RootDatum) -> "EtaMap":
        return cls(field, rd, tuple(field.one() for _ in range(rd.nsimple)))

    def __post_init__(self):
        if len(self.values) != self.rd.nsimple:
            raise ValidationError("eta needs one value per simple coroot")

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)

    def of_coroot(self, entry) -> FieldElement:
        return self.of_vec(entry.coroot)

    def of_vec(self, y) -> FieldElement:
        coords = _coroot_span(self.rd).coords(y)
        if coords is None:
            raise ValidationError(f"{y} is not in the coroot lattice Y^sc")
        # coords are over the HNF basis of Y^sc; re-expand through the simples
        out = self.field.one()
        expanded = _coroot_expansions(self.rd)
        for c, exp in zip(coords, expanded):
            if c:
                for k, mult in enumerate(exp):
                    if mult:
                        out = out * (self.values[k] ** (c * mult))
        return out


_span_cache: "weakref.WeakKeyDictionary[RootDatum, tuple]" = None


def _span_data(rd: RootDatum) -> tuple:
    global _span_cache
    import weakref
    if _span_cache is None:
        _span_cache = weakref.WeakKeyDictionary()
    cached = _span_cache.get(rd)
    if cached is None:
        span = Sublattice.from_rows(rd.rank_y, rd.simple_coroots)
        # each HNF row written over the simple coroots (solve exactly)
        exps = tuple(_solve_over_simples(rd, row) for row in span.basis)
        cached = (span, exps)
        _span_cache[rd] = cached
    return cached


def _coroot_span(rd: RootDatum) -> Sublattice:
    return _span_data(rd)[0]


def _coroot_expansions(rd: RootDatum):
    return _span_data(rd)[1]


def _solve_over_simples(rd: RootDatum, y) -> Vec:
    """Integer coordinates of y in the simple coroots (y must lie in Y^sc)."""
    from .lattice import smith_form, mat_mul
    rows = rd.simple_coroots
    sf = smith_form(rows, rd.rank_y)
    # x @ rows = y  =>  x = ybar @ pseudo-solution through the Smith form
    yv = mat_mul((tuple(y),), sf.v)[0]
    coeffs = []
    for i in range(len(rows)):
        d = sf.divisors[i] if i < len(sf.divisors) else 0
        if d == 0:
            coeffs.append(0)
            continue
        if yv[i] % d:
            raise ValidationError(f"{y} is not an integral combination of simple coroots")
        coeffs.append(yv[i] // d)
    for j in range(len(rows), len(yv)):
        if yv[j]:
            raise ValidationError(f"{y} is outside the span of the simple coroots")
    x = mat_mul((tuple(coeffs),), sf.u)[0]
    check = [0] * rd.rank_y
    for c, row in zip(x, rows):
        check = [a + c * b for a, b in zip(check, row)]
    if tuple(check) != tuple(y):
        raise ValidationError(f"{y} is not in the coroot lattice")
    return tuple(x)


@dataclass(frozen=True)
class IncarnationMorphism:
    """H(y) = (-1)^{sum_{i<j} c_i c_j delta_ij} for delta = D2 - D1.

    delta is antisymmetric with zero diagonal, which makes property (i) of a
    morphism an identity; property (ii) defines the companion eta."""

    delta: tuple[Vec, ...]

    def sign_exp(self, y) -> int:
        y = tuple(y)
        n = len(y)
        acc = 0
        for i in range(n):
            if y[i]:
                for j in range(i + 1, n):
                    if y[j]:
                        acc += y[i] * y[j] * self.delta[i][j]
        return acc % 2

    def value(self, y, field: TameField) -> FieldElement:
        return field.unit(field.minus_one_exp() * self.sign_exp(y))

    def compose(self, other: "IncarnationMorphism") -> "IncarnationMorphism":
        return IncarnationMorphism(tuple(tuple(a + b for a, b in zip(r1, r2))
                                         for r1, r2 in zip(self.delta, other.delta)))

    def satisfies_property_i(self, d1: Bisector, d2: Bisector, y1, y2) -> bool:
        lhs = (d2.value(y1, y2) - d1.value(y1, y2)) % 2
        total = tuple(a + b for a, b in zip(y1, y2))
        rhs = (self.sign_exp(total) - self.sign_exp(y1) - self.sign_exp(y2)) % 2
        return lhs == rhs


def connect_bisectors(d1: Bisector, d2: Bisector, eta1: EtaMap) -> tuple[IncarnationMorphism, EtaMap]:
    """Morphism (d1, eta1) -> (d2, eta2) with eta2 forced by property (ii)."""
    n = len(d1.d)
    for i in range(n):
        for j in range(n):
            if d1.d[i][j] + d1.d[j][i] != d2.d[i][j] + d2.d[j][i] or (
                    i == j and d1.d[i][i] != d2.d[i][i]):
                raise NotSameQ("the two bisectors do not share a quadratic form")
    delta = tuple(tuple(d2.d[i][j] - d1.d[i][j] for j in range(n)) for i in range(n))
    h = IncarnationMorphism(delta)
    field = eta1.field
    values = tuple(v * h.value(a, field)
                   for v, a in zip(eta1.values, eta1.rd.simple_coroots))
    return h, EtaMap(field, eta1.rd, values)
