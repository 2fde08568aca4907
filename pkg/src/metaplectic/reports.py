"""Report assembly: every command produces one Report model whose JSON form
is deterministic (sorted keys, canonical orderings, exact values as strings)."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel

from . import checks
from .characters import (FormulaCharacter, Monomial, check_obstructions,
                         gamma_power_on, is_distinguished, is_qualified,
                         weyl_invariance_check)
from .dualdata import (coset_structure, dual_datum, dual_type,
                       index_y_qn_over_j, omega_subsets, omega_vector)
from .errors import WrongHypothesis
from .problem import SCHEMA_VERSION, Model, ProblemSpec


def _frac(x) -> str:
    return str(Fraction(x))


def monomial_wire(m: Monomial) -> dict:
    return {"zeta_turn": _frac(m.zeta.as_fraction()),
            "q_const": _frac(m.q_const),
            "q_s": _frac(m.q_s)}


class LatticeSection(BaseModel):
    ambient_rank: int
    n_alpha: dict[str, int]
    y_qn_basis: list[list[int]]
    y_qn_sc_basis: list[list[int]]
    j_basis: list[list[int]]
    index_y_qn_over_j: int
    quotient_invariants: list[int]
    omega_sets: Optional[list[list[int]]] = None
    omega_note: Optional[str] = None


class DualSection(BaseModel):
    cartan: list[list[int]]
    identified_type: Optional[str] = None
    simple_roots: list[list[int]]
    simple_coroots: list[list[int]]
    positive_root_count: int


class GeneratorRow(BaseModel):
    label: str
    vector: list[int]
    divisor: Optional[int] = None
    gamma_power: Optional[int] = None
    value_at_pi_turn: str


class CharacterSection(BaseModel):
    kind: str
    seed_psi: Optional[str] = None
    aligned_basis: Optional[list[list[int]]] = None
    divisors: Optional[list[int]] = None
    a_values: Optional[list[int]] = None
    f_values: Optional[list[int]] = None
    base_values: Optional[list[dict]] = None
    generators: list[GeneratorRow]
    qualified: bool
    distinguished: bool
    weyl_invariant: bool


class ObstructionSection(BaseModel):
    passed: bool
    obs1_failures: list[dict]
    obs2_failures: list[dict]


class GKSection(BaseModel):
    word: list[int]
    reduced_word: list[int]
    inversion_roots: list[list[int]]
    factors: list[dict]
    cocycle_agrees: bool


class PieceWire(BaseModel):
    level: int
    dimension: int
    argument_coefficient: int
    eigenvalues: list[dict]


class ConstantTermSection(BaseModel):
    self_associated: bool
    omitted_simple: int
    n_beta: int
    pieces: list[PieceWire]
    predicted_poles: list[dict]


class CheckResult(BaseModel):
    name: str
    cases: int
    passed: bool
    detail: Optional[str] = None


class CheckSection(BaseModel):
    results: list[CheckResult]
    total_cases: int
    all_passed: bool


class Report(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    problem: ProblemSpec
    lattices: Optional[LatticeSection] = None
    dual: Optional[DualSection] = None
    character: Optional[CharacterSection] = None
    obstructions: Optional[ObstructionSection] = None
    gk: Optional[GKSection] = None
    constant_term: Optional[ConstantTermSection] = None
    checks: Optional[CheckSection] = None

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude_none=True),
                          sort_keys=True, indent=2) + "\n"


def lattice_section(model: Model) -> LatticeSection:
    md = model.md
    omega = None
    note = None
    try:
        omega = [list(o) for o in omega_subsets(md)]
    except WrongHypothesis as err:
        note = err.message
    return LatticeSection(
        ambient_rank=md.rd.rank_y,
        n_alpha={f"alpha{i}": v for i, v in md.n_alpha_table().items()},
        y_qn_basis=[list(r) for r in md.y_qn.basis],
        y_qn_sc_basis=[list(r) for r in md.y_qn_sc.basis],
        j_basis=[list(r) for r in md.j_lattice.basis],
        index_y_qn_over_j=index_y_qn_over_j(md),
        quotient_invariants=list(coset_structure(md)),
        omega_sets=omega,
        omega_note=note)


def dual_section(model: Model) -> DualSection:
    dual = dual_datum(model.md)
    ident = dual_type(model.md)
    return DualSection(
        cartan=[list(r) for r in dual.cartan],
        identified_type=f"{ident[0]}{ident[1]}" if ident else None,
        simple_roots=[list(r) for r in dual.simple_roots_x],
        simple_coroots=[list(r) for r in dual.simple_coroots],
        positive_root_count=len(dual.positive_roots()))


def character_section(model: Model) -> CharacterSection:
    char = model.character()
    ctx = model.ctx
    rows = []

    def add_row(label, vector, divisor=None):
        value = char.eval_center(ctx.center_pure(vector, ctx.field.uniformizer()))
        rows.append(GeneratorRow(
            label=label, vector=list(vector), divisor=divisor,
            gamma_power=gamma_power_on(char, vector) if ctx.field.q % 2 else None,
            value_at_pi_turn=_frac(value.zeta.as_fraction())))

    section = CharacterSection(
        kind=model.spec.character.kind,
        generators=[], qualified=False, distinguished=False, weyl_invariant=False)
    if isinstance(char, FormulaCharacter):
        section.seed_psi = char.weil.seed_name
        section.aligned_basis = [list(r) for r in char.aligned]
        section.divisors = list(char.divisors)
        section.a_values = list(char.a_vals)
        section.f_values = list(char.f_vals)
        for i, (e, k) in enumerate(zip(char.aligned, char.divisors), start=1):
            add_row(f"e{i}", e, k)
    else:
        section.base_values = [monomial_wire(m) for m in char.base_values]
        for i, b in enumerate(model.md.y_qn.basis, start=1):
            add_row(f"b{i}", b)
    try:
        for omega in omega_subsets(model.md):
            if omega:
                add_row("e_Omega{" + ",".join(map(str, omega)) + "}",
                        omega_vector(model.md, omega))
    except WrongHypothesis:
        pass
    section.generators = rows
    section.qualified = is_qualified(char)
    section.distinguished = is_distinguished(char)
    section.weyl_invariant = weyl_invariance_check(char)
    return section


def obstruction_section(model: Model) -> ObstructionSection:
    report = check_obstructions(model.ctx)
    return ObstructionSection(
        passed=report["passed"],
        obs1_failures=[{"y": list(w["y"]), "a": w["a"]} for w in report["obs1"]],
        obs2_failures=[{"y": list(w["y"]), "a": w["a"]} for w in report["obs2"]])


def gk_section(model: Model, word_text: str | None) -> GKSection:
    from .gk import factor_multiset, gk_coefficient, gk_via_cocycle
    word = model.word(word_text)
    chi = model.unramified_character()
    if model.spec.formal_s:
        if model.pd is None:
            raise WrongHypothesis("formal_s twisting needs a parabolic")
        from .characters import twist_delta_s
        chi = twist_delta_s(chi, model.pd)
    reduced = model.rd.reduced_word(word)
    factors = gk_coefficient(chi, word)
    agrees = factor_multiset(factors) == factor_multiset(gk_via_cocycle(chi, reduced))
    return GKSection(
        word=[l + 1 for l in word.letters],
        reduced_word=[l + 1 for l in reduced.letters],
        inversion_roots=[list(r.coeffs) for r in model.rd.inversion_set(word)],
        factors=[{"tau": monomial_wire(f.tau)} for f in factors],
        cocycle_agrees=agrees)


def constant_term_section(model: Model) -> ConstantTermSection:
    from .errors import ValidationError
    from .gk import constant_term
    if model.pd is None:
        raise ValidationError("constant-term needs a parabolic (omitted simple root)")
    report = constant_term(model.pd, model.md, model.unramified_character())
    pieces = [PieceWire(level=i,
                        dimension=len(taus),
                        argument_coefficient=report.n_beta * i,
                        eigenvalues=[monomial_wire(t) for t in taus])
              for i, taus in report.numerator.pieces]
    return ConstantTermSection(
        self_associated=report.self_associated,
        omitted_simple=model.pd.omitted_simple + 1,
        n_beta=report.n_beta,
        pieces=pieces,
        predicted_poles=[{"s": _frac(p.s), "piece": p.piece, "condition": p.condition}
                         for p in report.predicted_poles])


def check_section(model: Model) -> CheckSection:
    results = [CheckResult(name=n, cases=c, passed=ok, detail=detail)
               for n, c, ok, detail in checks.run_all(model)]
    return CheckSection(results=results,
                        total_cases=sum(r.cases for r in results),
                        all_passed=all(r.passed for r in results))
