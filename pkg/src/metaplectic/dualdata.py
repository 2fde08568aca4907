"""(Q,n)-modified lattices and the dual root datum.

Y_{Q,n} is solved from the basis congruence system B_Q(y, e_j) = 0 mod n;
checking on the basis suffices because B_Q is bilinear, so vanishing mod n
against every basis vector is vanishing against all of Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import AxiomViolation, ValidationError, WrongHypothesis
from .forms import QuadraticForm
from .lattice import (Sublattice, kernel_basis, lattice_sum,
                      quotient_invariants, smith_align)
from .rootdata import RootDatum, RootEntry, identify_cartan_type


@dataclass(frozen=True)
class MetaplecticData:
    rd: RootDatum
    qf: QuadraticForm
    n: int
    y_qn: Sublattice
    y_sc: Sublattice
    y_qn_sc: Sublattice
    j_lattice: Sublattice

    def n_alpha(self, root: RootEntry) -> int:
        return self.n // gcd(self.qf.q(root.coroot), self.n)

    def modified_coroot(self, root: RootEntry) -> tuple[int, ...]:
        na = self.n_alpha(root)
        return tuple(na * c for c in root.coroot)

    def n_alpha_table(self) -> dict[int, int]:
        """n_alpha for each simple root, keyed by 1-based index."""
        return {i + 1: self.n_alpha(self.rd.simple_root(i)) for i in range(self.rd.nsimple)}


def compute(rd: RootDatum, qf: QuadraticForm, n: int) -> MetaplecticData:
    if qf.rd is not rd:
        raise ValidationError("form was built for a different root datum")
    if n < 1:
        raise ValidationError("cover degree must be positive")
    r = rd.rank_y
    # {y : y @ B in n Z^r} via the integer kernel of [[B], [-nI]]
    stacked = tuple(qf.b) + tuple(tuple(-n if i == j else 0 for j in range(r)) for i in range(r))
    ker = kernel_basis(stacked, r)
    y_qn = Sublattice.from_rows(r, [row[:r] for row in ker] + [
        tuple(n if i == j else 0 for j in range(r)) for i in range(r)])
    y_sc = Sublattice.from_rows(r, [e.coroot for e in rd.roots])
    md = MetaplecticData(rd, qf, n, y_qn, y_sc, Sublattice(r, ()), Sublattice(r, ()))
    y_qn_sc = Sublattice.from_rows(r, [md.modified_coroot(e) for e in rd.roots])
    j = lattice_sum(Sublattice.scaled(r, n), y_qn_sc)
    md = MetaplecticData(rd, qf, n, y_qn, y_sc, y_qn_sc, j)
    _validate(md)
    return md


def _validate(md: MetaplecticData) -> None:
    r = md.rd.rank_y
    if not md.y_qn.contains_lattice(Sublattice.scaled(r, md.n)):
        raise AxiomViolation("nY is not inside Y_{Q,n}")
    if not md.y_qn.contains_lattice(md.y_qn_sc):
        raise AxiomViolation("Y^sc_{Q,n} is not inside Y_{Q,n}")
    if not md.y_qn.contains_lattice(md.j_lattice):
        raise AxiomViolation("J is not inside Y_{Q,n}")
    # General form of the n-duality: n_alpha divides n_beta <alpha, beta^vee>,
    # which is what makes the modified reflections integral.  The symmetric
    # identity n_beta <alpha,beta^vee> = n_alpha <beta,alpha^vee> additionally
    # needs Q(alpha^vee) | n and Q(beta^vee) | n for the pair.
    for a in md.rd.roots:
        na = md.n_alpha(a)
        qa = md.qf.q(a.coroot)
        for b in md.rd.roots:
            nb = md.n_alpha(b)
            qb = md.qf.q(b.coroot)
            if (nb * md.rd.pairing(a.x, b.coroot)) % na:
                raise AxiomViolation(
                    f"n_alpha does not divide n_beta <alpha, beta^vee> "
                    f"for roots {a.coeffs}, {b.coeffs}")
            if qa and qb and md.n % qa == 0 and md.n % qb == 0:
                if nb * md.rd.pairing(a.x, b.coroot) != na * md.rd.pairing(b.x, a.coroot):
                    raise AxiomViolation(
                        f"n-duality fails for roots {a.coeffs}, {b.coeffs}")


def dual_datum(md: MetaplecticData) -> RootDatum:
    """Root datum (Y_{Q,n}, modified coroots, Hom(Y_{Q,n},Z), alpha/n_alpha).

    Returned as a RootDatum whose "roots" are the modified coroots written in
    the HNF basis of Y_{Q,n} and whose "coroots" are alpha/n_alpha in the
    dual coordinates.  The theorem guarantees validation succeeds.
    """
    basis = md.y_qn.basis
    new_roots = []
    new_coroots = []
    for i in range(md.rd.nsimple):
        entry = md.rd.simple_root(i)
        mc = md.modified_coroot(entry)
        coords = md.y_qn.coords(mc)
        if coords is None:
            raise AxiomViolation(f"modified coroot {mc} escapes Y_{{Q,n}}")
        new_roots.append(coords)
        na = md.n_alpha(entry)
        dual_coords = []
        for b in basis:
            value = Fraction(md.rd.pairing(entry.x, b), na)
            if value.denominator != 1:
                raise AxiomViolation(f"alpha/n_alpha pairs non-integrally with {b}")
            dual_coords.append(int(value))
        new_coroots.append(tuple(dual_coords))
    dual = RootDatum.from_simples(len(basis), new_roots, new_coroots)
    if len(dual.roots) != len(md.rd.roots):
        raise AxiomViolation("dual system has the wrong number of roots")
    return dual


def dual_type(md: MetaplecticData) -> tuple[str, int] | None:
    return identify_cartan_type(dual_datum(md).cartan)


def coset_structure(md: MetaplecticData) -> tuple[int, ...]:
    """Invariant factors of Y_{Q,n}/J (the entries != 1)."""
    return quotient_invariants(md.y_qn, md.j_lattice)


def index_y_qn_over_j(md: MetaplecticData) -> int:
    return md.j_lattice.index_in(md.y_qn)


def omega_subsets(md: MetaplecticData) -> list[tuple[int, ...]]:
    """Vertex subsets with no adjacency and even adjacency counts outside.

    Valid for the simply-laced double cover with Q = 1 on coroots; the empty
    set is always present and corresponds to the trivial coset of J.
    Subsets are returned as sorted tuples of 1-based vertex indices.
    """
    rd = md.rd
    c = rd.cartan
    n = rd.nsimple
    if md.n != 2:
        raise WrongHypothesis("omega subsets are defined for double covers")
    for i in range(n):
        for j in range(n):
            if i != j and c[i][j] not in (0, -1):
                raise WrongHypothesis("omega subsets need a simply-laced diagram")
    if any(md.qf.q(rd.simple_coroots[i]) != 1 for i in range(n)):
        raise WrongHypothesis("omega subsets need Q = 1 on the simple coroots")
    adj = {i: {j for j in range(n) if j != i and c[i][j]} for i in range(n)}
    out = []
    for mask in range(1 << n):
        omega = [i for i in range(n) if mask >> i & 1]
        inside = set(omega)
        if any(adj[i] & inside for i in omega):
            continue
        if any(len(adj[v] & inside) % 2 for v in range(n) if v not in inside):
            continue
        out.append(tuple(i + 1 for i in omega))
    return sorted(out, key=lambda t: (len(t), t))


def omega_vector(md: MetaplecticData, omega: tuple[int, ...]) -> tuple[int, ...]:
    """e_Omega = sum of the selected simple coroots."""
    v = [0] * md.rd.rank_y
    for i in omega:
        v = [a + b for a, b in zip(v, md.rd.simple_coroots[i - 1])]
    return tuple(v)


def omega_coset_check(md: MetaplecticData) -> bool:
    """The e_Omega exhaust Y_{Q,2}/J: pairwise distinct and right in number."""
    subsets = omega_subsets(md)
    idx = index_y_qn_over_j(md)
    if len(subsets) != idx:
        return False
    seen = []
    for omega in subsets:
        v = omega_vector(md, omega)
        if md.y_qn.coords(v) is None:
            return False
        for w in seen:
            diff = tuple(a - b for a, b in zip(v, w))
            if md.j_lattice.contains(diff):
                return False
        seen.append(v)
    return True
