"""Thin command-line client.

The CLI only parses input, builds a ComputeRequest and renders the Report;
all computation happens behind the service handlers (in process by default,
over HTTP with --server).  Exit codes: 0 ok, 2 parse, 3 validation, 4
obstruction.
"""

from __future__ import annotations

import sys

import click

from .errors import MetaplecticError, ObstructionPresent, ParseError, ValidationError
from .problem import ProblemSpec, parse_problem_text
from .reports import Report
from .service import HANDLERS, ComputeRequest

EXIT_CODES = {"parse": 2, "validation": 3, "obstruction": 4}


def _load_problem(path: str) -> ProblemSpec:
    text = sys.stdin.read() if path == "-" else open(path).read()
    if text.lstrip().startswith("{"):
        import pydantic
        try:
            return ProblemSpec.model_validate_json(text)
        except pydantic.ValidationError as err:
            raise ParseError(f"bad problem JSON: {err.errors()[0]['msg']}")
    return parse_problem_text(text)


def _dispatch(command: str, request: ComputeRequest, server: str | None) -> Report:
    if server is None:
        return HANDLERS[command](request)
    import httpx
    resp = httpx.post(f"{server.rstrip('/')}/v1/{command}",
                      json=request.model_dump(mode="json"), timeout=120.0)
    if resp.status_code != 200:
        body = resp.json().get("error", {})
        kind = body.get("kind", "validation")
        err = {"parse": ParseError, "obstruction": ObstructionPresent}.get(
            kind, ValidationError)(body.get("message", "service error"))
        raise err
    return Report.model_validate(resp.json())


def _emit(report: Report, fmt: str) -> None:
    if fmt == "json":
        click.echo(report.to_json(), nl=False)
    else:
        click.echo(render_table(report), nl=False)


def render_table(report: Report) -> str:
    lines = [f"# {report.command}"]
    if report.lattices is not None:
        s = report.lattices
        lines.append("[lattices]")
        lines.append("  n_alpha: " + " ".join(f"{k}={v}" for k, v in sorted(s.n_alpha.items())))
        lines.append("  Y_Qn basis:    " + "; ".join(map(_vec, s.y_qn_basis)))
        lines.append("  Y_Qn^sc basis: " + "; ".join(map(_vec, s.y_qn_sc_basis)))
        lines.append("  J basis:       " + "; ".join(map(_vec, s.j_basis)))
        lines.append(f"  [Y_Qn : J] = {s.index_y_qn_over_j}"
                     f"   invariants {s.quotient_invariants}")
        if s.omega_sets is not None:
            pretty = ["{" + ",".join(f"a{i}" for i in o) + "}" for o in s.omega_sets]
            lines.append("  Omega sets: " + (" ".join(pretty) if pretty else "none"))
        elif s.omega_note:
            lines.append(f"  Omega sets: n/a ({s.omega_note})")
    if report.dual is not None:
        d = report.dual
        lines.append("[dual]")
        lines.append(f"  type: {d.identified_type or 'unrecognized'}"
                     f"   positive roots: {d.positive_root_count}")
        for row in d.cartan:
            lines.append("  cartan " + _vec(row))
    if report.obstructions is not None:
        o = report.obstructions
        lines.append("[obstructions]")
        lines.append(f"  passed: {o.passed}")
        for w in o.obs1_failures:
            lines.append(f"  (Obs1) fails at y={_vec(w['y'])} a={w['a']}")
        for w in o.obs2_failures:
            lines.append(f"  (Obs2) fails at y={_vec(w['y'])} a={w['a']}")
    if report.character is not None:
        c = report.character
        lines.append("[character]")
        head = f"  kind: {c.kind}"
        if c.seed_psi:
            head += f"   gamma_psi(pi) = {c.seed_psi}"
        lines.append(head)
        if c.divisors is not None:
            lines.append(f"  divisors k_i: {c.divisors}   A_i: {c.a_values}   f_i: {c.f_values}")
        for row in c.generators:
            value = (f"gamma_psi^{row.gamma_power}" if row.gamma_power is not None
                     else f"zeta turn {row.value_at_pi_turn}")
            extra = f" (divisor {row.divisor})" if row.divisor is not None else ""
            lines.append(f"  {row.label} = {_vec(row.vector)}{extra}: {value}")
        lines.append(f"  qualified: {c.qualified}   distinguished: {c.distinguished}"
                     f"   weyl-invariant: {c.weyl_invariant}")
    if report.gk is not None:
        g = report.gk
        lines.append("[gk]")
        lines.append("  word: " + ",".join(map(str, g.word))
                     + "   reduced: " + ",".join(map(str, g.reduced_word)))
        lines.append(f"  inversion set ({len(g.inversion_roots)} roots): "
                     + "; ".join(map(_vec, g.inversion_roots)))
        for f in g.factors:
            lines.append("  factor (1 - q^-1 tau)/(1 - tau) with tau = " + _monomial(f["tau"]))
        lines.append(f"  cocycle route agrees: {g.cocycle_agrees}")
    if report.constant_term is not None:
        ct = report.constant_term
        lines.append("[constant-term]")
        lines.append(f"  omitted simple: alpha{ct.omitted_simple}   n_beta: {ct.n_beta}"
                     f"   self-associated: {ct.self_associated}")
        for p in ct.pieces:
            arg = "s" if p.argument_coefficient == 1 else f"{p.argument_coefficient}s"
            lines.append(f"  piece i={p.level}: dim {p.dimension},"
                         f" ratio L({arg}, Ad_{p.level})"
                         f" / L(1+{arg}, Ad_{p.level})")
            for ev in p.eigenvalues:
                lines.append("    eigenvalue " + _monomial(ev))
        if ct.predicted_poles:
            for p in ct.predicted_poles:
                lines.append(f"  predicted pole (under triviality): s = {p['s']}"
                             f"   [{p['condition']}]")
        else:
            lines.append("  predicted poles: none")
    if report.checks is not None:
        ck = report.checks
        lines.append("[checks]")
        for r in ck.results:
            status = "pass" if r.passed else f"FAIL ({r.detail})"
            lines.append(f"  {r.name}: {r.cases} cases {status}")
        lines.append(f"  total: {ck.total_cases} cases, all_passed={ck.all_passed}")
    return "\n".join(lines) + "\n"


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _monomial(m: dict) -> str:
    parts = []
    if m["zeta_turn"] != "0":
        parts.append(f"zeta[{m['zeta_turn']} turn]")
    if m["q_const"] != "0":
        parts.append(f"q^{m['q_const']}")
    if m["q_s"] != "0":
        parts.append(f"q^(-{m['q_s']}s)")
    return " * ".join(parts) if parts else "1"


def _common(fn):
    fn = click.option("--input", "-i", "input_path", required=True,
                      help="problem file (text or JSON), '-' for stdin")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["table", "json"]),
                      default="table")(fn)
    fn = click.option("--server", default=None, help="remote service URL")(fn)
    fn = click.option("--parabolic", type=int, default=None,
                      help="override the omitted simple root (1-based)")(fn)
    fn = click.option("--seed-psi", type=click.Choice(["+i", "-i", "+1", "-1"]),
                      default=None, help="Weil index seed gamma_psi(pi)")(fn)
    fn = click.option("--formal-s", is_flag=True, default=False,
                      help="fold the delta^s twist into character values")(fn)
    fn = click.option("--check", "with_check", is_flag=True, default=False,
                      help="also run the invariant suite")(fn)
    return fn


def _run(command: str, input_path: str, fmt: str, server: str | None,
         parabolic: int | None, seed_psi: str | None, formal_s: bool,
         with_check: bool, word: str | None = None) -> None:
    try:
        problem = _load_problem(input_path)
        updates = {}
        if parabolic is not None:
            updates["parabolic"] = parabolic
        if seed_psi is not None:
            updates["seed_psi"] = seed_psi
        if formal_s:
            updates["formal_s"] = True
        if updates:
            problem = problem.model_copy(update=updates)
        request = ComputeRequest(problem=problem, word=word)
        report = _dispatch(command, request, server)
        if with_check and command != "check":
            check_report = _dispatch("check", request, server)
            report.checks = check_report.checks
        _emit(report, fmt)
    except MetaplecticError as err:
        click.echo(f"error[{err.kind}]: {err.message}", err=True)
        for key, value in err.details.items():
            click.echo(f"  {key}: {value}", err=True)
        sys.exit(EXIT_CODES.get(err.kind, 3))


@click.group()
def main():
    """Exact invariants of covering groups: modified root data, distinguished
    characters, Gindikin-Karpelevich coefficients, constant-term L-factors."""


@main.command()
@_common
def lattices(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check):
    """Modified lattices, n_alpha table, J, and Omega sets."""
    _run("lattices", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check)


@main.command()
@_common
def dual(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check):
    """Dual root datum with type identification."""
    _run("dual", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check)


@main.command()
@_common
def distinguished(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check):
    """Obstruction check plus the explicit distinguished character table."""
    _run("distinguished", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check)


@main.command()
@click.option("--word", default="longest",
              help="comma list of simple indices, 'longest', or 'parabolic'")
@_common
def gk(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check, word):
    """Gindikin-Karpelevich factors for a Weyl word."""
    _run("gk", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check, word)


@main.command("constant-term")
@_common
def constant_term(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check):
    """Langlands-Shahidi constant-term ratio and pole prediction."""
    _run("constant-term", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check)


@main.command()
@_common
def check(input_path, fmt, server, parabolic, seed_psi, formal_s, with_check):
    """Run every invariant suite against the problem's model."""
    _run("check", input_path, fmt, server, parabolic, seed_psi, formal_s, with_check)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8571, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn
    uvicorn.run("metaplectic.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
