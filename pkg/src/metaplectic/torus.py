"""The degree-n covering torus: group law, centrality, h-tilde values, Weyl
conjugation on the center.

Elements are pairs (zeta, coordinates) over a fixed lattice basis with the
D-twisted product: coordinates multiply componentwise and zeta picks up the
double product of Hilbert symbols prod_{i,j} (a_i, b_j)_n^{D(e_i,e_j)}.  By
bilinearity of the symbol this is exactly the bisector cocycle evaluated on
coordinates, and restricting to a single basis line recovers the one
dimensional torus laws.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dualdata import MetaplecticData
from .errors import NotCentral, ValidationError
from .forms import Bisector, EtaMap
from .localfield import FieldElement, RootOfUnity, TameField
from .rootdata import RootEntry


@dataclass(frozen=True)
class TorusCover:
    """mu_n x_D T for a torus with the given basis-indexed bisector.

    The same class serves the full covering torus (basis = Y) and the pulled
    back central cover (basis = a basis of Y_{Q,n}, bisector restricted).
    """

    field: TameField
    bisector: Bisector

    @property
    def rank(self) -> int:
        return len(self.bisector.d)

    def q_of(self, y) -> int:
        d = self.bisector.d
        return sum(a * d[i][j] * b
                   for i, a in enumerate(y) if a
                   for j, b in enumerate(y) if b)

    def b_of(self, y1, y2) -> int:
        return self.bisector.value(y1, y2) + self.bisector.value(y2, y1)

    def identity(self) -> "TorusElement":
        return TorusElement(self, self.field.one_value(),
                            tuple(self.field.one() for _ in range(self.rank)))

    def element(self, zeta: RootOfUnity, coords) -> "TorusElement":
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ValidationError("coordinate/rank mismatch")
        return TorusElement(self, zeta, coords)

    def pure_tensor(self, y, a: FieldElement, zeta: RootOfUnity | None = None) -> "TorusElement":
        """(zeta, y (x) a): the torus point with coordinates a^{y_i}."""
        if zeta is None:
            zeta = self.field.one_value()
        return self.element(zeta, tuple(a ** c for c in y))

    def scalar(self, zeta: RootOfUnity) -> "TorusElement":
        return self.element(zeta, tuple(self.field.one() for _ in range(self.rank)))


@dataclass(frozen=True)
class TorusElement:
    cover: TorusCover
    zeta: RootOfUnity
    coords: tuple[FieldElement, ...]

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        if self.cover != other.cover:
            raise ValidationError("elements live on different covers")
        field = self.cover.field
        d = self.cover.bisector.d
        zeta = self.zeta * other.zeta
        for i, a in enumerate(self.coords):
            for j, b in enumerate(other.coords):
                e = d[i][j]
                if e:
                    zeta = zeta * (field.hilbert(a, b) ** e)
        return TorusElement(self.cover, zeta,
                            tuple(a * b for a, b in zip(self.coords, other.coords)))

    def inv(self) -> "TorusElement":
        field = self.cover.field
        d = self.cover.bisector.d
        inv_coords = tuple(a.inv() for a in self.coords)
        corr = field.one_value()
        for i, a in enumerate(self.coords):
            for j, b in enumerate(inv_coords):
                e = d[i][j]
                if e:
                    corr = corr * (field.hilbert(a, b) ** e)
        return TorusElement(self.cover, (self.zeta * corr).inv(), inv_coords)

    def __pow__(self, k: int) -> "TorusElement":
        if k < 0:
            return self.inv() ** (-k)
        out = self.cover.identity()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def commutator(self, other: "TorusElement") -> RootOfUnity:
        lhs = self * other
        rhs = other * self
        return lhs.zeta * rhs.zeta.inv()

    def is_identity(self) -> bool:
        return self.zeta.is_one() and all(a.is_one() for a in self.coords)


def phi_h(cover: TorusCover, eta: EtaMap, root: RootEntry, q_coroot: int,
          a: FieldElement, b: FieldElement | None = None) -> TorusElement:
    """The image of the h-section: ({b^{Q(alpha^vee)} eta(alpha^vee), a}, h_alpha(a)).

    For non-simple roots eta extends multiplicatively through the coroot's
    expansion over the simple coroots.
    """
    field = cover.field
    if b is None:
        b = field.one()
    front = (b ** q_coroot) * eta.of_coroot(root)
    zeta = field.hilbert(front, a)
    return cover.pure_tensor(root.coroot, a, zeta)


def h_modified(cover: TorusCover, eta: EtaMap, md: MetaplecticData,
               root: RootEntry, a: FieldElement) -> TorusElement:
    """h_alpha(a^{n_alpha}) as an element of the full cover; b-independent."""
    na = md.n_alpha(root)
    return phi_h(cover, eta, root, md.qf.q(root.coroot), a ** na)


def is_central(t: TorusElement, md: MetaplecticData) -> bool:
    """Center test via the n-th power class map on prod_i a_i^{B(e_i, e_j)}.

    Commuting with every generator needs each of these products to be an
    n-th power; with mu_n in the field, the tame pairing is perfect on
    classes, so the criterion is exact and matches the preimage of the image
    of the (Q,n)-torus.
    """
    n = md.n
    b = md.qf.b
    r = len(t.coords)
    for j in range(r):
        val = sum(t.coords[i].val * b[i][j] for i in range(r))
        exp = sum(t.coords[i].unit_exp * b[i][j] for i in range(r))
        if val % n or exp % n:
            return False
    return True


def weyl_conjugate_central(t: TorusElement, simple_index: int, md: MetaplecticData,
                           eta: EtaMap) -> TorusElement:
    """w_alpha^{-1} t w_alpha = t * Phi(h_alpha(alpha(t)^{-1})) on the center."""
    if not is_central(t, md):
        raise NotCentral("Weyl conjugation is only defined on central elements")
    rd = md.rd
    alpha = rd.simple_root(simple_index)
    x = t.cover.field.one()
    for i, a in enumerate(t.coords):
        k = alpha.x[i]
        if k:
            x = x * (a ** k)
    factor = phi_h(t.cover, eta, alpha, md.qf.q(alpha.coroot), x.inv())
    return t * factor
