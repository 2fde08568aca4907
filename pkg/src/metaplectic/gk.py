"""Gindikin-Karpelevich coefficients and Langlands-Shahidi L-factor shapes.

A rank-one factor is (1 - q^{-1} tau)/(1 - tau) with tau the character value
on the modified h-element; general coefficients are products over inversion
sets, and the cocycle route recomputes them through genuinely transported
characters, so the two paths cross-check each other.  L-factors stay in
factored (1 - tau)^{-1} form; nothing is ever expanded or cancelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import Monomial, UnramifiedCharacter, tau, twist_delta_s, weyl_twist
from .dualdata import MetaplecticData
from .errors import NonIntegralLevel, NotReduced, PoleAt, ValidationError
from .rootdata import ParabolicDatum, RootEntry, WeylWord


@dataclass(frozen=True)
class GKFactor:
    """(1 - q^{-1} tau)/(1 - tau), kept symbolic."""

    tau: Monomial

    def key(self):
        return self.tau.key()

    def evaluate(self, s: complex, q: float) -> complex:
        t = self.tau.evaluate(s, q)
        if abs(1 - t) < 1e-12:
            raise PoleAt(s)
        return (1 - t / q) / (1 - t)


def gk_rank1(chi: UnramifiedCharacter, root: RootEntry) -> GKFactor:
    return GKFactor(tau(chi, root))


def gk_coefficient(chi: UnramifiedCharacter, word: WeylWord) -> list[GKFactor]:
    """One factor per inversion-set root, in canonical root order."""
    rd = chi.ctx.md.rd
    return [GKFactor(tau(chi, r)) for r in rd.inversion_set(word)]


def gk_via_cocycle(chi: UnramifiedCharacter, word: WeylWord) -> list[GKFactor]:
    """Rank-one factors against successively transported characters.

    The m-th factor is the rank-one coefficient of the conjugated character
    at the m-th simple reflection, so this never looks at inversion sets.
    """
    rd = chi.ctx.md.rd
    if len(rd.inversion_set(word)) != len(word.letters):
        raise NotReduced("cocycle route requires a reduced word")
    out = []
    current = chi
    for letter in reversed(word.letters):
        out.append(gk_rank1(current, rd.simple_root(letter)))
        current = weyl_twist(current, letter)
    return out


def factor_multiset(factors) -> tuple:
    return tuple(sorted(f.key() for f in factors))


def evaluate_product(factors, s: complex, q: float) -> complex:
    out = 1.0 + 0j
    for f in factors:
        out *= f.evaluate(s, q)
    return out


def adjoint_decomposition(pd: ParabolicDatum, md: MetaplecticData) -> list[tuple[int, list[RootEntry]]]:
    """Bucket the inversion set of the parabolic's element by the level
    i = <beta_P / n_beta, alpha_[n]^vee>."""
    rd = md.rd
    beta = rd.simple_root(pd.omitted_simple)
    n_beta = md.n_alpha(beta)
    buckets: dict[int, list[RootEntry]] = {}
    for r in rd.inversion_set(pd.unique_w):
        level = Fraction(md.n_alpha(r), n_beta) * sum(
            Fraction(x) * c for x, c in zip(pd.beta_p, r.coroot))
        if level.denominator != 1 or level <= 0:
            raise NonIntegralLevel(f"level {level} at root {r.coeffs}")
        buckets.setdefault(int(level), []).append(r)
    return sorted(buckets.items())


@dataclass(frozen=True)
class LFactorization:
    """Product over pieces of L(n_beta i s, Ad_i) = prod 1/(1 - tau)."""

    pieces: tuple[tuple[int, tuple[Monomial, ...]], ...]

    def dimensions(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, len(taus)) for i, taus in self.pieces)

    def shifted(self, c: int) -> "LFactorization":
        """All eigenvalues multiplied by q^{-c}: the L(c + arg, .) factor."""
        return LFactorization(tuple(
            (i, tuple(t.shift_q(-c) for t in taus)) for i, taus in self.pieces))

    def evaluate(self, s: complex, q: float) -> complex:
        out = 1.0 + 0j
        for _, taus in self.pieces:
            for t in taus:
                tv = t.evaluate(s, q)
                if abs(1 - tv) < 1e-12:
                    raise PoleAt(s)
                out /= (1 - tv)
        return out


@dataclass(frozen=True)
class PolePrediction:
    s: Fraction
    piece: int
    condition: str


@dataclass(frozen=True)
class ConstantTermReport:
    self_associated: bool
    n_beta: int
    numerator: LFactorization
    denominator: LFactorization
    predicted_poles: tuple[PolePrediction, ...]

    def argument_coefficients(self) -> tuple[tuple[int, int], ...]:
        """(piece, coefficient of s in the L-argument) pairs."""
        return tuple((i, self.n_beta * i) for i, _ in self.numerator.pieces)


def constant_term(pd: ParabolicDatum, md: MetaplecticData,
                  chi: UnramifiedCharacter) -> ConstantTermReport:
    """The Eisenstein constant-term ratio prod_i L(n_beta i s, Ad_i) /
    L(1 + n_beta i s, Ad_i) with the delta^s twist folded into the
    eigenvalues, plus the zeta-rule pole prediction.

    Poles are *predicted under the stated triviality condition*, never
    claimed proved: the one analytic input is that the completed L-function
    of the trivial Hecke character has its half-plane pole at argument 1.
    """
    if chi.ctx.md is not md:
        raise ValidationError("character belongs to a different cover")
    beta = md.rd.simple_root(pd.omitted_simple)
    n_beta = md.n_alpha(beta)
    twisted = twist_delta_s(chi, pd)
    pieces = []
    inv_count = 0
    for i, roots in adjoint_decomposition(pd, md):
        taus = []
        for r in roots:
            t = tau(twisted, r)
            if t.q_s != n_beta * i:
                raise NonIntegralLevel(
                    f"eigenvalue carries q_s={t.q_s}, expected {n_beta * i}")
            taus.append(t)
        inv_count += len(taus)
        pieces.append((i, tuple(taus)))
    if inv_count != len(md.rd.inversion_set(pd.unique_w)):
        raise NonIntegralLevel("adjoint pieces do not partition the inversion set")
    numerator = LFactorization(tuple(pieces))
    poles = []
    for i, taus in pieces:
        a = n_beta * i
        for t in taus:
            if t.zeta.is_one():
                s0 = (1 + t.q_const) / a
                if s0 > 0:
                    poles.append(PolePrediction(
                        s0, i,
                        "inducing character trivial on the piece-%d line" % i))
    unique = sorted({(p.s, p.piece, p.condition) for p in poles})
    return ConstantTermReport(pd.self_associated, n_beta, numerator,
                              numerator.shifted(1),
                              tuple(PolePrediction(*u) for u in unique))


@dataclass(frozen=True)
class ChiScDescriptor:
    """Unramified data of the rank-one character chi^sc along a coroot line."""

    tau_alpha: Monomial
    unit_trivial: bool


def chi_sc(chi: UnramifiedCharacter, root: RootEntry) -> ChiScDescriptor:
    """chi composed with the coroot-line splitting: a -> chi(h_alpha(a^{n_alpha})).

    On units the value is the Hilbert symbol against eta(alpha_[n]^vee), so
    the descriptor is trivial on units iff that symbol is."""
    ctx = chi.ctx
    na = ctx.md.n_alpha(root)
    eta_mod = ctx.eta.of_coroot(root) ** na
    unit_trivial = eta_mod.val % ctx.md.n == 0
    return ChiScDescriptor(tau(chi, root), unit_trivial)
