"""Genuine characters of the covering-torus center.

Two concrete flavors are materialized.  Unramified characters are pinned by
their values on (1, b_i (x) pi) for a basis b_i of the modified lattice and
evaluated through the canonical decomposition of a central element; the
cocycle corrections produced by reassembling powers of the uniformizer are
computed by the group law, and multiplicativity is a tested property rather
than an assumption.  Formula characters are the distinguished characters of
the explicit construction: gamma_psi powers along a Smith-aligned basis.

Both flavors evaluate on elements of the pulled-back central cover, whose
coordinates here always live over the HNF basis of Y_{Q,n}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .dualdata import MetaplecticData
from .errors import (NotCentral, NotInYQn, ObstructionPresent, ValidationError)
from .forms import Bisector, EtaMap, is_fair
from .lattice import Sublattice, lattice_intersect, smith_align, solve_integer
from .localfield import FieldElement, RootOfUnity, TameField, WeilIndex
from .rootdata import ParabolicDatum, RootEntry
from .torus import TorusCover, TorusElement, is_central, phi_h


@dataclass(frozen=True)
class Monomial:
    """Exact value zeta * q^(q_const - q_s * s), s a formal variable."""

    zeta: RootOfUnity
    q_const: Fraction = Fraction(0)
    q_s: Fraction = Fraction(0)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.zeta * other.zeta, self.q_const + other.q_const,
                        self.q_s + other.q_s)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(self.zeta ** k, self.q_const * k, self.q_s * k)

    def inv(self) -> "Monomial":
        return self ** -1

    def is_one(self) -> bool:
        return self.zeta.is_one() and self.q_const == 0 and self.q_s == 0

    def shift_q(self, c) -> "Monomial":
        """Multiply by q^c."""
        return Monomial(self.zeta, self.q_const + Fraction(c), self.q_s)

    def key(self):
        return (self.zeta.exponent, self.zeta.modulus, self.q_const, self.q_s)

    def evaluate(self, s: complex, q: float) -> complex:
        import cmath
        angle = 2 * cmath.pi * self.zeta.exponent / self.zeta.modulus
        return cmath.exp(1j * angle) * q ** complex(self.q_const - self.q_s * s)

    def __repr__(self):
        parts = []
        if not self.zeta.is_one():
            parts.append(repr(self.zeta))
        if self.q_const or self.q_s:
            expo = []
            if self.q_const:
                expo.append(str(self.q_const))
            if self.q_s:
                expo.append(f"-{self.q_s}*s" if self.q_s > 0 else f"+{-self.q_s}*s")
            parts.append(f"q^({' '.join(expo)})")
        return "*".join(parts) if parts else "1"


def monomial_one(field: TameField) -> Monomial:
    return Monomial(field.one_value())


@dataclass(frozen=True)
class CoverContext:
    """Everything a character needs: the cover data plus both torus covers."""

    md: MetaplecticData
    bisector: Bisector
    eta: EtaMap
    field: TameField
    full_cover: TorusCover
    center_cover: TorusCover

    @classmethod
    def create(cls, md: MetaplecticData, bisector: Bisector, eta: EtaMap) -> "CoverContext":
        bisector.validate_against(md.qf)
        field = eta.field
        basis = md.y_qn.basis
        restricted = Bisector(tuple(tuple(bisector.value(b1, b2) for b2 in basis) for b1 in basis))
        return cls(md, bisector, eta, field,
                   TorusCover(field, bisector), TorusCover(field, restricted))

    def center_coords(self, y) -> tuple[int, ...]:
        c = self.md.y_qn.coords(y)
        if c is None:
            raise NotInYQn(f"{tuple(y)} is not in Y_(Q,n)")
        return c

    def center_pure(self, y, a: FieldElement, zeta: RootOfUnity | None = None) -> TorusElement:
        """(zeta, y (x) a) as an element of the central cover, y in Y-coords."""
        return self.center_cover.pure_tensor(self.center_coords(y), a, zeta)

    def center_to_full(self, t: TorusElement) -> TorusElement:
        """The inclusion T~_(Q,n) -> T~; pure tensors map to pure tensors with
        the same zeta, so coordinates transform and zeta is untouched."""
        basis = self.md.y_qn.basis
        coords = []
        for j in range(self.md.rd.rank_y):
            a = self.field.one()
            for i, x in enumerate(t.coords):
                k = basis[i][j]
                if k:
                    a = a * (x ** k)
            coords.append(a)
        return self.full_cover.element(t.zeta, coords)

    def phi_modified(self, root: RootEntry, c: FieldElement) -> TorusElement:
        """Phi(h_alpha(c^{n_alpha})) written on the central cover."""
        na = self.md.n_alpha(root)
        eta_mod = self.eta.of_coroot(root) ** na
        zeta = self.field.hilbert(eta_mod, c)
        return self.center_pure(tuple(na * v for v in root.coroot), c, zeta)

    def central_conjugate(self, t: TorusElement, simple_index: int) -> TorusElement:
        """w_alpha-conjugation on the center, line by line: each coordinate
        x_i on a basis vector b_i contributes Phi(h_alpha(x_i^{-<alpha,b_i>}))
        and n_alpha | <alpha, b_i> because b_i is in Y_(Q,n)."""
        alpha = self.md.rd.simple_root(simple_index)
        na = self.md.n_alpha(alpha)
        out = t
        for i, x in enumerate(t.coords):
            k = self.md.rd.pairing(alpha.x, self.md.y_qn.basis[i])
            if k % na:
                raise NotCentral("basis pairing not divisible by n_alpha")
            if k:
                out = out * self.phi_modified(alpha, x ** (-(k // na)))
        return out

    def central_generators(self) -> list[TorusElement]:
        gens = [self.center_cover.scalar(self.field.zeta(self.md.n))] if self.md.n > 1 else []
        r = len(self.md.y_qn.basis)
        for i in range(r):
            unit_vec = tuple(1 if j == i else 0 for j in range(r))
            gens.append(self.center_cover.pure_tensor(unit_vec, self.field.uniformizer()))
            if self.field.q > 2:
                gens.append(self.center_cover.pure_tensor(unit_vec, self.field.unit(1)))
        return gens

    def class_reps(self, max_val: int = 3) -> list[FieldElement]:
        """One element per (valuation mod 4, unit class); every value computed
        by either character flavor factors through these."""
        return [self.field.element(v, e)
                for v in range(max_val + 1) for e in range(self.field.q - 1)]


@dataclass(frozen=True)
class UnramifiedCharacter:
    ctx: CoverContext
    base_values: tuple[Monomial, ...]

    @classmethod
    def trivial_base(cls, ctx: CoverContext) -> "UnramifiedCharacter":
        one = monomial_one(ctx.field)
        return cls(ctx, tuple(one for _ in ctx.md.y_qn.basis))

    def __post_init__(self):
        if len(self.base_values) != len(self.ctx.md.y_qn.basis):
            raise ValidationError("one base value per Y_(Q,n) basis vector required")

    def epsilon(self, zeta: RootOfUnity) -> Monomial:
        return Monomial(zeta)

    def eval_full(self, t: TorusElement) -> Monomial:
        """Canonical-decomposition evaluation on the full cover."""
        ctx = self.ctx
        if not is_central(t, ctx.md):
            raise NotCentral("unramified characters live on the center")
        field = ctx.field
        m = tuple(a.val for a in t.coords)
        v = ctx.md.y_qn.coords(m)
        if v is None:
            raise NotInYQn(f"valuation vector {m} is not in Y_(Q,n)")
        # P = prod of uniformizer generators, then absorb the unit point
        p = ctx.full_cover.identity()
        for vi, b in zip(v, ctx.md.y_qn.basis):
            if vi:
                p = p * (ctx.full_cover.pure_tensor(b, field.uniformizer()) ** vi)
        t_unit = ctx.full_cover.element(field.one_value(), tuple(field.unit(a.unit_exp) for a in t.coords))
        q_el = p * t_unit
        out = self.epsilon(t.zeta * q_el.zeta.inv())
        for vi, base in zip(v, self.base_values):
            if vi:
                out = out * (base ** vi)
        return out

    def eval_center(self, t: TorusElement) -> Monomial:
        return self.eval_full(self.ctx.center_to_full(t))


def tau(chi: UnramifiedCharacter, root: RootEntry) -> Monomial:
    """chi(h_alpha(pi^{n_alpha})): the adjoint eigenvalue on the alpha-line."""
    ctx = chi.ctx
    na = ctx.md.n_alpha(root)
    element = phi_h(ctx.full_cover, ctx.eta, root, ctx.md.qf.q(root.coroot),
                    ctx.field.uniformizer() ** na)
    return chi.eval_full(element)


def weyl_twist(chi: UnramifiedCharacter, simple_index: int) -> UnramifiedCharacter:
    """The conjugated character: base values transported through the center
    conjugation formula; only tau at the simple root enters."""
    ctx = chi.ctx
    alpha = ctx.md.rd.simple_root(simple_index)
    na = ctx.md.n_alpha(alpha)
    t_alpha = tau(chi, alpha)
    new = []
    for base, b in zip(chi.base_values, ctx.md.y_qn.basis):
        k = ctx.md.rd.pairing(alpha.x, b)
        new.append(base * (t_alpha ** (-(k // na))))
    return UnramifiedCharacter(ctx, tuple(new))


def twist_delta_s(chi: UnramifiedCharacter, pd: ParabolicDatum) -> UnramifiedCharacter:
    """Tensor with the formal delta^s character of the maximal parabolic."""
    new = []
    for base, b in zip(chi.base_values, chi.ctx.md.y_qn.basis):
        exponent = sum(Fraction(x) * c for x, c in zip(pd.beta_p, b))
        new.append(Monomial(base.zeta, base.q_const, base.q_s + exponent))
    return UnramifiedCharacter(chi.ctx, tuple(new))


@dataclass(frozen=True)
class FormulaCharacter:
    """Distinguished character gamma_psi^{f_i} along a Smith-aligned basis."""

    ctx: CoverContext
    weil: WeilIndex
    aligned: tuple[tuple[int, ...], ...]
    divisors: tuple[int, ...]
    a_vals: tuple[int, ...]
    f_vals: tuple[int, ...]

    def _aligned_coords(self, t: TorusElement) -> tuple[FieldElement, ...]:
        # torus point coordinates transform through the basis transition
        rows = [solve_integer(self.aligned, b) for b in self.ctx.md.y_qn.basis]
        if any(r is None for r in rows):
            raise ValidationError("aligned basis does not span Y_(Q,n)")
        out = []
        for j in range(len(self.aligned)):
            a = self.ctx.field.one()
            for i, x in enumerate(t.coords):
                k = rows[i][j]
                if k:
                    a = a * (x ** k)
            out.append(a)
        return tuple(out)

    def eval_center(self, t: TorusElement) -> Monomial:
        """Value on any element of the central cover: peel the element into
        aligned coordinate lines and pay the cocycle corrections exactly."""
        ctx = self.ctx
        coords = self._aligned_coords(t)
        d = ctx.bisector
        zeta_p = ctx.field.one_value()
        for i in range(len(coords)):
            for j in range(i + 1, len(coords)):
                e = d.value(self.aligned[i], self.aligned[j])
                if e:
                    zeta_p = zeta_p * (ctx.field.hilbert(coords[i], coords[j]) ** e)
        value = t.zeta * zeta_p.inv()
        for x, f in zip(coords, self.f_vals):
            value = value * (self.weil(x) ** f)
        return Monomial(value)

    def eval_pure(self, y, a: FieldElement, zeta: RootOfUnity | None = None) -> Monomial:
        return self.eval_center(self.ctx.center_pure(y, a, zeta))

    def closed_form(self, y, a: FieldElement) -> RootOfUnity:
        """The printed formula prod_i gamma(a^{n_i})^{f_i} (a,a)^{sum D} for
        cross-checking eval_pure; n_i are aligned coordinates of y."""
        ctx = self.ctx
        coords = solve_integer(self.aligned, y)
        if coords is None:
            raise NotInYQn(f"{tuple(y)} is outside Y_(Q,n)")
        out = ctx.field.one_value()
        for n_i, f in zip(coords, self.f_vals):
            out = out * (self.weil(a ** n_i) ** f)
        cross = sum(coords[i] * coords[j] * ctx.bisector.value(self.aligned[i], self.aligned[j])
                    for i in range(len(coords)) for j in range(i + 1, len(coords)))
        return out * (ctx.field.hilbert(a, a) ** cross)


def check_obstructions(ctx: CoverContext) -> dict:
    """(Obs1) on kernel generators of the sc-isogeny, (Obs2) on nY cap Y^sc_(Q,n)."""
    md, field, eta = ctx.md, ctx.field, ctx.eta
    report = {"obs1": [], "obs2": []}
    if md.y_qn_sc.rank == md.y_qn.rank:
        sd = smith_align(md.y_qn, md.y_qn_sc)
        for k, e in zip(sd.divisors, sd.basis):
            torsion = gcd(k, field.q - 1)
            if torsion == 1:
                continue
            y = tuple(k * v for v in e)
            a = field.unit((field.q - 1) // torsion)
            if not field.hilbert(eta.of_vec(y), a).is_one():
                report["obs1"].append({"y": y, "a": repr(a)})
    inter = lattice_intersect(Sublattice.scaled(md.rd.rank_y, md.n), md.y_qn_sc)
    for y in inter.basis:
        for a in (field.uniformizer(), field.unit(1)):
            if not field.hilbert(eta.of_vec(y), a).is_one():
                report["obs2"].append({"y": tuple(y), "a": repr(a)})
    report["passed"] = not report["obs1"] and not report["obs2"]
    return report


def construct_distinguished(ctx: CoverContext, seed_psi: str = "+i") -> FormulaCharacter:
    """The explicit distinguished character for a fair (D, 1) incarnation.

    Sign convention: f_i = +(k_i - 1) A_i.
    """
    md = ctx.md
    if not ctx.eta.is_trivial():
        raise ValidationError("the explicit construction needs eta = 1")
    if not is_fair(ctx.bisector, md.qf):
        raise ValidationError("the explicit construction needs a fair bisector")
    report = check_obstructions(ctx)
    if not report["passed"]:
        raise ObstructionPresent("obstruction to distinguished characters", report=report)
    sd = smith_align(md.y_qn, md.j_lattice)
    a_vals, f_vals = [], []
    for k, e in zip(sd.divisors, sd.basis):
        twice_q = 2 * md.qf.q(e)
        if twice_q % md.n:
            raise ValidationError(f"2Q({e}) is not divisible by n, impossible for Y_(Q,n)")
        a_i = twice_q // md.n
        f_i = (k - 1) * a_i
        if (f_i - a_i) % 2:
            raise ValidationError("(R1) fails: f_i != A_i mod 2")
        if (k * f_i + k * (k - 1) * a_i) % 4:
            raise ValidationError("(R2) fails: k f + k(k-1)A != 0 mod 4")
        a_vals.append(a_i)
        f_vals.append(f_i)
    weil = WeilIndex(ctx.field, seed_psi)
    return FormulaCharacter(ctx, weil, sd.basis, sd.divisors, tuple(a_vals), tuple(f_vals))


def unramified_from_formula(fc: FormulaCharacter) -> UnramifiedCharacter:
    """The same character presented by its base values; formula characters
    are unramified (gamma is trivial on units)."""
    ctx = fc.ctx
    pi = ctx.field.uniformizer()
    return UnramifiedCharacter(ctx, tuple(fc.eval_pure(b, pi) for b in ctx.md.y_qn.basis))


# -- predicates ---------------------------------------------------------------


def _eval(char, t: TorusElement) -> Monomial:
    return char.eval_center(t)


def satisfies_c1(char, max_val: int = 3) -> tuple[bool, dict | None]:
    """(C1)^eq: chi(1, alpha_[n] (x) a) = (a, eta(alpha_[n]))_n on simple roots."""
    ctx = char.ctx
    md = ctx.md
    for i in range(md.rd.nsimple):
        alpha = md.rd.simple_root(i)
        na = md.n_alpha(alpha)
        y = tuple(na * v for v in alpha.coroot)
        eta_mod = ctx.eta.of_coroot(alpha) ** na
        for a in ctx.class_reps(max_val):
            lhs = _eval(char, ctx.center_pure(y, a))
            rhs = Monomial(ctx.field.hilbert(a, eta_mod))
            if lhs != rhs:
                return False, {"alpha": i + 1, "y": y, "a": repr(a),
                               "lhs": repr(lhs), "rhs": repr(rhs)}
    return True, None


def satisfies_c0(char) -> tuple[bool, dict | None]:
    """(C0): trivial on Ker(T_(Q,n) -> T), i.e. on torsion pure tensors."""
    ctx = char.ctx
    md, field = ctx.md, ctx.field
    sd = smith_align(Sublattice.full(md.rd.rank_y), md.y_qn)
    for k, e in zip(sd.divisors, sd.basis):
        torsion = gcd(k, field.q - 1)
        if torsion == 1:
            continue
        y = tuple(k * v for v in e)
        for power in range(1, torsion):
            a = field.unit((field.q - 1) // torsion * power)
            if not _eval(char, ctx.center_pure(y, a)).is_one():
                return False, {"y": y, "a": repr(a)}
    return True, None


def satisfies_c0_plus(char, max_val: int = 3) -> tuple[bool, dict | None]:
    """(C0)_+^eq: trivial on (1, (ny) (x) a) for every y in Y."""
    ctx = char.ctx
    md = ctx.md
    for j in range(md.rd.rank_y):
        y = tuple(md.n if i == j else 0 for i in range(md.rd.rank_y))
        for a in ctx.class_reps(max_val):
            if not _eval(char, ctx.center_pure(y, a)).is_one():
                return False, {"y": y, "a": repr(a)}
    return True, None


def is_qualified(char) -> bool:
    return satisfies_c0(char)[0] and satisfies_c1(char)[0]


def qualified_witness(char) -> dict | None:
    ok, witness = satisfies_c0(char)
    if not ok:
        return {"condition": "(C0)", **witness}
    ok, witness = satisfies_c1(char)
    if not ok:
        return {"condition": "(C1)eq", **witness}
    return None


def is_distinguished(char) -> bool:
    return satisfies_c0_plus(char)[0] and satisfies_c1(char)[0]


def weyl_invariance_check(char) -> bool:
    """Conjugating every central generator by every simple reflection fixes
    the character's values."""
    ctx = char.ctx
    for t in ctx.central_generators():
        base = _eval(char, t)
        for i in range(ctx.md.rd.nsimple):
            if _eval(char, ctx.central_conjugate(t, i)) != base:
                return False
    return True


def gamma_power_on(char, y, max_val: int = 3) -> int | None:
    """Exponent d with chi(1, y (x) a) = gamma_psi(a)^d for all classes of a,
    if one exists.  Uses the character's own psi seed for formula characters
    and the +i seed otherwise."""
    ctx = char.ctx
    weil = char.weil if isinstance(char, FormulaCharacter) else WeilIndex(ctx.field, "+i")
    reps = ctx.class_reps(max_val)
    values = [_eval(char, ctx.center_pure(y, a)) for a in reps]
    for d in range(4):
        if all(v == Monomial(weil(a) ** d) for v, a in zip(values, reps)):
            return d
    return None
