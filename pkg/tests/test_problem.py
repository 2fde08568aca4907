import pytest

from metaplectic.errors import ParseError, ValidationError
from metaplectic.localfield import TameField
from metaplectic.problem import (ProblemSpec, build_model, parse_field_element,
                                 parse_problem_text, render_problem_text)

C2_TEXT = """
# double cover of Sp4
cartan {
  type C
  rank 2
  isogeny sc
}
n 2
q_values 1
field {
  p 7
  q 7
  g 3
}
bisector fair-default
character distinguished
parabolic 1
"""


def test_parse_and_build():
    spec = parse_problem_text(C2_TEXT)
    assert spec.cartan.type == "C" and spec.n == 2
    model = build_model(spec)
    assert model.md.n_alpha_table() == {1: 2, 2: 1}
    assert model.pd is not None and model.pd.self_associated


def test_round_trip_idempotent():
    spec = parse_problem_text(C2_TEXT)
    text = render_problem_text(spec)
    again = parse_problem_text(text)
    assert again == spec
    assert render_problem_text(again) == text


def test_json_wire_form():
    spec = parse_problem_text(C2_TEXT)
    wire = spec.model_dump_json()
    assert ProblemSpec.model_validate_json(wire) == spec


def test_parse_errors_with_positions():
    with pytest.raises(ParseError) as err:
        parse_problem_text("cartan {\n  type C\n  rank oops\n}\nn 2\n")
    assert err.value.line == 3
    with pytest.raises(ParseError) as err:
        parse_problem_text(C2_TEXT + "\nmystery 4\n")
    assert "mystery" in err.value.message
    with pytest.raises(ParseError):
        parse_problem_text("cartan {\n  rank 2\n")   # unbalanced brace
    with pytest.raises(ParseError):
        parse_problem_text("n\n")                    # key with no value


def test_field_element_grammar():
    F = TameField(7, 7, 2, 3)
    assert parse_field_element(F, "1").is_one()
    assert parse_field_element(F, "-1") == F.minus_one()
    assert parse_field_element(F, "pi") == F.uniformizer()
    assert parse_field_element(F, "pi^-2") == F.element(-2, 0)
    assert parse_field_element(F, "g^4") == F.unit(4)
    assert parse_field_element(F, "pi^2*g^3") == F.element(2, 3)
    assert parse_field_element(F, "pi * g") == F.element(1, 1)
    for bad in ("", "q^2", "pi^", "pi**g", "2"):
        with pytest.raises(ParseError):
            parse_field_element(F, bad)


def test_eta_section_forms():
    spec = parse_problem_text(C2_TEXT.replace(
        "bisector fair-default", "bisector fair-default\neta pi, g^2"))
    assert spec.eta == ["pi", "g^2"]
    spec2 = parse_problem_text(C2_TEXT.replace(
        "bisector fair-default",
        "bisector fair-default\neta {\n  alpha1 pi\n  alpha2 g^2\n}"))
    assert spec2.eta == ["pi", "g^2"]
    model = build_model(spec2)
    assert model.ctx.eta.values[0] == model.field.uniformizer()


def test_unramified_character_input():
    text = C2_TEXT.replace("character distinguished", """character {
  kind unramified
  base1 zeta=1/2, q_const=0
  base2 zeta=0, q_const=-1
}""")
    spec = parse_problem_text(text)
    model = build_model(spec)
    chi = model.character()
    assert chi.base_values[0].zeta == model.field.zeta(2)
    assert chi.base_values[1].q_const == -1
    rendered = render_problem_text(spec)
    assert parse_problem_text(rendered) == spec


def test_validation_errors():
    with pytest.raises(ValidationError):
        build_model(parse_problem_text(C2_TEXT.replace("n 2", "n 4")))
    with pytest.raises(ValidationError):
        build_model(parse_problem_text(C2_TEXT.replace("parabolic 1", "parabolic 9")))
    with pytest.raises(ValidationError):
        build_model(parse_problem_text(C2_TEXT.replace(
            "bisector fair-default", "bisector 1 0; 0 1")))
    with pytest.raises(ValidationError):
        build_model(parse_problem_text(C2_TEXT + "eta pi\n"))  # wrong arity
    spec = parse_problem_text(C2_TEXT)
    bad = spec.model_copy(update={"seed_psi": "+2"})
    with pytest.raises(ValidationError):
        build_model(bad)


def test_explicit_cartan():
    text = """
cartan {
  rank 1
  isogeny explicit
  coroots 2
  roots 1
  y_rank 1
}
n 2
gram_q 1
field {
  p 7
  q 7
  g 3
}
character trivial-base
"""
    model = build_model(parse_problem_text(text))
    assert model.md.y_qn_sc.basis == ((2,),)
    assert model.character().base_values[0].is_one()


def test_word_resolution():
    model = build_model(parse_problem_text(C2_TEXT))
    assert model.word("2,1,2").letters == (1, 0, 1)
    assert len(model.word("longest").letters) == 4
    assert model.word("parabolic") == model.pd.unique_w
    with pytest.raises(ParseError):
        model.word("2,x")
    with pytest.raises(ValidationError):
        model.word("5")
