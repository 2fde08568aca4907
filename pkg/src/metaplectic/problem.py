"""Problem descriptions: pydantic wire models, the text input format, and the
assembly of a full computation model from a validated spec.

The canonical input is a small key/value document with brace-nested sections
(see README for the schema); its JSON image is the wire form used by the
service.  Field elements are written "pi^k*g^e", root-of-unity values as
fractions of a full turn.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, Field

from .characters import (CoverContext, FormulaCharacter, Monomial,
                         UnramifiedCharacter, construct_distinguished,
                         unramified_from_formula)
from .dualdata import MetaplecticData, compute
from .errors import ParseError, ValidationError
from .forms import (Bisector, EtaMap, QuadraticForm, find_fair_bisector,
                    invariant_form)
from .localfield import FieldElement, TameField
from .rootdata import ParabolicDatum, RootDatum, WeylWord

SCHEMA_VERSION = 1


class CartanSpec(BaseModel):
    type: Optional[str] = None
    rank: int
    isogeny: str = "sc"
    coroots: Optional[list[list[int]]] = None
    roots: Optional[list[list[int]]] = None
    y_rank: Optional[int] = None


class FieldSpec(BaseModel):
    p: int = 7
    q: int = 7
    g: int = 3


class MonomialSpec(BaseModel):
    """zeta is a fraction of a full turn; q_const and q_s are exponents."""

    zeta: str = "0"
    q_const: str = "0"
    q_s: str = "0"


class CharacterSpec(BaseModel):
    kind: str = "distinguished"
    base: Optional[list[MonomialSpec]] = None


class ProblemSpec(BaseModel):
    schema_version: int = SCHEMA_VERSION
    cartan: CartanSpec
    n: int
    q_values: Union[int, list[int]] = 1
    gram_q: Optional[list[int]] = None
    gram_b: Optional[list[list[int]]] = None
    field: FieldSpec = Field(default_factory=FieldSpec)
    eta: Optional[list[str]] = None
    bisector: Union[str, list[list[int]]] = "fair-default"
    character: CharacterSpec = Field(default_factory=CharacterSpec)
    parabolic: Optional[int] = None
    formal_s: bool = False
    seed_psi: str = "+i"


# -- the text format -----------------------------------------------------------

_FIELD_ELEMENT_RE = re.compile(
    r"^\s*(?:(?P<one>1|-1)|(?:pi(?:\^(?P<piexp>-?\d+))?)?\s*"
    r"(?:(?P<star>\*)?\s*g(?:\^(?P<gexp>-?\d+))?)?)\s*$")


def parse_field_element(field: TameField, text: str, line: int | None = None) -> FieldElement:
    """Grammar: '1' | '-1' | 'pi[^k]' | 'g[^e]' | 'pi[^k]*g[^e]'."""
    m = _FIELD_ELEMENT_RE.match(text)
    if not m or not text.strip():
        raise ParseError(f"bad field element {text!r} (expected pi^k*g^e)", line=line)
    if m.group("one"):
        return field.one() if m.group("one") == "1" else field.minus_one()
    has_pi = "pi" in text
    has_g = re.search(r"(?<![a-z])g", text) is not None
    if m.group("star") and not (has_pi and has_g):
        raise ParseError(f"bad field element {text!r}", line=line)
    val = 0
    if has_pi:
        val = int(m.group("piexp")) if m.group("piexp") else 1
    exp = 0
    if has_g:
        exp = int(m.group("gexp")) if m.group("gexp") else 1
    return field.element(val, exp)


def parse_fraction(text: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}", line=line)


def _parse_int_list(text: str, line: int) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"bad integer list {text!r}", line=line)


def _parse_matrix(text: str, line: int) -> list[list[int]]:
    rows = [r for r in text.split(";") if r.strip()]
    return [_parse_int_list(r, line) for r in rows]


def parse_problem_text(text: str) -> ProblemSpec:
    """Parse the key/value document into a ProblemSpec.

    Unknown keys, malformed values and unbalanced braces raise ParseError
    with the offending line number.
    """
    root: dict = {}
    stack: list[dict] = [root]
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "}":
            if len(stack) == 1:
                raise ParseError("unbalanced '}'", line=lineno)
            stack.pop()
            continue
        if stripped.endswith("{"):
            key = stripped[:-1].strip()
            if not key:
                raise ParseError("section needs a name", line=lineno)
            child: dict = {}
            stack[-1][key] = child
            stack.append(child)
            continue
        parts = stripped.split(None, 1)
        if len(parts) == 1:
            raise ParseError(f"key {parts[0]!r} has no value", line=lineno)
        stack[-1][parts[0]] = (parts[1].strip(), lineno)
    if len(stack) != 1:
        raise ParseError("unbalanced '{'", line=len(lines))
    return _spec_from_tree(root)


def _take(tree: dict, key: str, default=None):
    if key in tree:
        value = tree.pop(key)
        return value
    return default


def _scalar(entry, caster, field: str):
    value, lineno = entry
    try:
        return caster(value)
    except (ValueError, TypeError):
        raise ParseError(f"bad value {value!r}", line=lineno, field=field)


def _spec_from_tree(tree: dict) -> ProblemSpec:
    data: dict = {}
    cartan = _take(tree, "cartan")
    if cartan is None:
        raise ParseError("missing required section 'cartan'", field="cartan")
    cdata: dict = {}
    for key in ("type", "isogeny"):
        if key in cartan:
            cdata[key] = _scalar(cartan.pop(key), str, f"cartan.{key}")
    for key in ("rank", "y_rank"):
        if key in cartan:
            cdata[key] = _scalar(cartan.pop(key), int, f"cartan.{key}")
    for key in ("coroots", "roots"):
        if key in cartan:
            value, lineno = cartan.pop(key)
            cdata[key] = _parse_matrix(value, lineno)
    if cartan:
        k = next(iter(cartan))
        raise ParseError(f"unknown cartan key {k!r}", line=cartan[k][1] if isinstance(cartan[k], tuple) else None)
    data["cartan"] = cdata

    if "n" not in tree:
        raise ParseError("missing required key 'n'", field="n")
    data["n"] = _scalar(_take(tree, "n"), int, "n")
    if "q_values" in tree:
        value, lineno = _take(tree, "q_values")
        vals = _parse_int_list(value, lineno)
        data["q_values"] = vals[0] if len(vals) == 1 else vals
    if "gram_q" in tree:
        value, lineno = _take(tree, "gram_q")
        data["gram_q"] = _parse_int_list(value, lineno)
    if "gram_b" in tree:
        value, lineno = _take(tree, "gram_b")
        data["gram_b"] = _parse_matrix(value, lineno)
    fieldsec = _take(tree, "field")
    if fieldsec is not None:
        fdata = {}
        for key in ("p", "q", "g"):
            if key in fieldsec:
                fdata[key] = _scalar(fieldsec.pop(key), int, f"field.{key}")
        if fieldsec:
            raise ParseError(f"unknown field key {next(iter(fieldsec))!r}")
        data["field"] = fdata
    eta = _take(tree, "eta")
    if eta is not None:
        if isinstance(eta, dict):
            pairs = []
            for key, entry in eta.items():
                m = re.fullmatch(r"alpha(\d+)", key)
                if not m:
                    raise ParseError(f"eta entries are keyed alpha<i>, got {key!r}",
                                     line=entry[1])
                pairs.append((int(m.group(1)), entry))
            pairs.sort()
            if [i for i, _ in pairs] != list(range(1, len(pairs) + 1)):
                raise ParseError("eta must name alpha1..alpha_r contiguously")
            data["eta"] = [entry[0] for _, entry in pairs]
        else:
            value, lineno = eta
            data["eta"] = [x.strip() for x in value.split(",")]
    bisector = _take(tree, "bisector")
    if bisector is not None:
        value, lineno = bisector
        data["bisector"] = value if value == "fair-default" else _parse_matrix(value, lineno)
    charsec = _take(tree, "character")
    if charsec is not None:
        if isinstance(charsec, dict):
            cdict: dict = {}
            if "kind" in charsec:
                cdict["kind"] = _scalar(charsec.pop("kind"), str, "character.kind")
            base = []
            for key in sorted(k for k in charsec if re.fullmatch(r"base\d+", k)):
                value, lineno = charsec.pop(key)
                base.append(_parse_monomial(value, lineno))
            if base:
                cdict["base"] = base
            if charsec:
                raise ParseError(f"unknown character key {next(iter(charsec))!r}")
            data["character"] = cdict
        else:
            value, lineno = charsec
            data["character"] = {"kind": value}
    for key, caster in (("parabolic", int), ("seed_psi", str)):
        if key in tree:
            data[key] = _scalar(_take(tree, key), caster, key)
    if "formal_s" in tree:
        value, lineno = _take(tree, "formal_s")
        if value not in ("true", "false"):
            raise ParseError("formal_s must be true or false", line=lineno)
        data["formal_s"] = value == "true"
    if tree:
        key = next(iter(tree))
        entry = tree[key]
        raise ParseError(f"unknown key {key!r}",
                         line=entry[1] if isinstance(entry, tuple) else None)
    return ProblemSpec(**data)


def _parse_monomial(text: str, line: int) -> dict:
    out = {"zeta": "0", "q_const": "0", "q_s": "0"}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        m = re.fullmatch(r"(zeta|q_const|q_s)\s*=\s*(-?\d+(?:/\d+)?)", piece)
        if not m:
            raise ParseError(f"bad monomial component {piece!r}", line=line)
        out[m.group(1)] = m.group(2)
    return out


def render_problem_text(spec: ProblemSpec) -> str:
    """Deterministic text form; parse(render(spec)) round-trips."""
    lines = ["cartan {"]
    c = spec.cartan
    if c.type:
        lines.append(f"  type {c.type}")
    lines.append(f"  rank {c.rank}")
    lines.append(f"  isogeny {c.isogeny}")
    if c.y_rank is not None:
        lines.append(f"  y_rank {c.y_rank}")
    if c.coroots:
        lines.append("  coroots " + "; ".join(" ".join(map(str, r)) for r in c.coroots))
    if c.roots:
        lines.append("  roots " + "; ".join(" ".join(map(str, r)) for r in c.roots))
    lines.append("}")
    lines.append(f"n {spec.n}")
    qv = spec.q_values
    lines.append("q_values " + (" ".join(map(str, qv)) if isinstance(qv, list) else str(qv)))
    if spec.gram_q is not None:
        lines.append("gram_q " + " ".join(map(str, spec.gram_q)))
    if spec.gram_b is not None:
        lines.append("gram_b " + "; ".join(" ".join(map(str, r)) for r in spec.gram_b))
    lines.append("field {")
    lines.append(f"  p {spec.field.p}")
    lines.append(f"  q {spec.field.q}")
    lines.append(f"  g {spec.field.g}")
    lines.append("}")
    if spec.eta:
        lines.append("eta " + ", ".join(spec.eta))
    if isinstance(spec.bisector, str):
        lines.append(f"bisector {spec.bisector}")
    else:
        lines.append("bisector " + "; ".join(" ".join(map(str, r)) for r in spec.bisector))
    if spec.character.base:
        lines.append("character {")
        lines.append(f"  kind {spec.character.kind}")
        for i, m in enumerate(spec.character.base, start=1):
            lines.append(f"  base{i} zeta={m.zeta}, q_const={m.q_const}, q_s={m.q_s}")
        lines.append("}")
    else:
        lines.append(f"character {spec.character.kind}")
    if spec.parabolic is not None:
        lines.append(f"parabolic {spec.parabolic}")
    lines.append(f"formal_s {'true' if spec.formal_s else 'false'}")
    lines.append(f"seed_psi {spec.seed_psi}")
    return "\n".join(lines) + "\n"


# -- model assembly -------------------------------------------------------------


@dataclass
class Model:
    spec: ProblemSpec
    rd: RootDatum
    qf: QuadraticForm
    field: TameField
    md: MetaplecticData
    ctx: CoverContext
    pd: ParabolicDatum | None
    _character: object = None

    def character(self):
        """The requested character, built on first use (may raise
        ObstructionPresent for the distinguished construction)."""
        if self._character is None:
            spec = self.spec.character
            if spec.kind == "distinguished":
                self._character = construct_distinguished(self.ctx, self.spec.seed_psi)
            elif spec.kind == "trivial-base":
                self._character = UnramifiedCharacter.trivial_base(self.ctx)
            elif spec.kind == "unramified":
                if not spec.base:
                    raise ValidationError("unramified character needs base values")
                if len(spec.base) != len(self.md.y_qn.basis):
                    raise ValidationError(
                        f"need {len(self.md.y_qn.basis)} base values, got {len(spec.base)}")
                vals = []
                for m in spec.base:
                    turn = parse_fraction(m.zeta)
                    if (turn * self.field.M).denominator != 1:
                        raise ValidationError(
                            f"zeta={m.zeta} is not in mu_{self.field.M}")
                    vals.append(Monomial(self.field.root_of_unity(int(turn * self.field.M)),
                                         parse_fraction(m.q_const), parse_fraction(m.q_s)))
                self._character = UnramifiedCharacter(self.ctx, tuple(vals))
            else:
                raise ValidationError(f"unknown character kind {spec.kind!r}")
        return self._character

    def unramified_character(self) -> UnramifiedCharacter:
        char = self.character()
        if isinstance(char, FormulaCharacter):
            return unramified_from_formula(char)
        return char

    def word(self, text: str | None) -> WeylWord:
        """Resolve a --word argument: comma list of 1-based letters,
        'longest', or 'parabolic'."""
        if text is None or text == "longest":
            return self.rd.longest_word()
        if text == "parabolic":
            if self.pd is None:
                raise ValidationError("word 'parabolic' needs a parabolic in the problem")
            return self.pd.unique_w
        try:
            letters = tuple(int(x) - 1 for x in text.split(","))
        except ValueError:
            raise ParseError(f"bad word {text!r} (expected comma-separated indices)")
        if any(not 0 <= l < self.rd.nsimple for l in letters):
            raise ValidationError(f"word letter out of range in {text!r}")
        return WeylWord(letters)


def build_model(spec: ProblemSpec) -> Model:
    if spec.schema_version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {spec.schema_version}")
    c = spec.cartan
    if c.isogeny == "explicit":
        if not c.coroots or not c.roots:
            raise ValidationError("explicit isogeny needs coroots and roots")
        y_rank = c.y_rank if c.y_rank is not None else len(c.coroots[0])
        rd = RootDatum.from_simples(y_rank, c.roots, c.coroots)
    else:
        if not c.type:
            raise ValidationError("cartan.type required unless isogeny is explicit")
        rd = RootDatum.build(c.type, c.rank, c.isogeny)
    if spec.gram_q is not None:
        gram_b = {}
        if spec.gram_b:
            for i, row in enumerate(spec.gram_b):
                for j, v in enumerate(row):
                    if i < j and v:
                        gram_b[(i, j)] = v
        qf = invariant_form(rd, basis_q=spec.gram_q, basis_b=gram_b)
    else:
        qf = invariant_form(rd, spec.q_values)
    field = TameField(spec.field.p, spec.field.q, spec.n, spec.field.g)
    if spec.eta is not None:
        if len(spec.eta) != rd.nsimple:
            raise ValidationError(
                f"eta needs {rd.nsimple} entries, got {len(spec.eta)}")
        eta = EtaMap(field, rd, tuple(parse_field_element(field, t) for t in spec.eta))
    else:
        eta = EtaMap.trivial(field, rd)
    if isinstance(spec.bisector, str):
        if spec.bisector != "fair-default":
            raise ValidationError(f"unknown bisector {spec.bisector!r}")
        bis = find_fair_bisector(qf)
    else:
        bis = Bisector(tuple(tuple(r) for r in spec.bisector))
        bis.validate_against(qf)
    md = compute(rd, qf, spec.n)
    ctx = CoverContext.create(md, bis, eta)
    pd = rd.parabolic(spec.parabolic - 1) if spec.parabolic is not None else None
    if spec.parabolic is not None and not 1 <= spec.parabolic <= rd.nsimple:
        raise ValidationError(f"parabolic index {spec.parabolic} out of range")
    if spec.seed_psi not in ("+1", "-1", "+i", "-i"):
        raise ValidationError(f"seed_psi must be one of +1,-1,+i,-i")
    return Model(spec, rd, qf, field, md, ctx, pd)
