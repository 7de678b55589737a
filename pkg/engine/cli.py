"""
🖥️ KM Belief Change Engine - Command Line
Parse formulas, load distributions, run change operators, measures and postulate checks
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional

import click
import typer
from pydantic import ValidationError

from config.logging_setup import configure_logging
from config.settings import app_config, render_config, validate_config
from models.change import ChangeReport
from models.distributions import ProbDist
from models.logic import Alphabet, Formula, Top
from models.measures import KnowledgeMeasureConfig
from models.postulates import PostulateReport
from models.session import Session
from services.belief_change import BeliefChangeService
from services.demos import demo_names, run_demo
from services.errors import BeliefEngineError, InvariantBreachError
from services.file_formats import dump_distribution_json, dump_distribution_text, load_distribution, load_ranking
from services.formatting import format_fraction, format_measure
from services.logic import models
from services.measures import check_km1, check_km2, check_km3, kappa_b, kappa_h, kappa_s
from services.parser import parse
from services.postulates import OPERATORS, check_family, fuzz
from services.probability import (
    conditional, p_consistent, p_entails, p_equiv, p_independent, p_strict, possible_models, prob, uniform,
)
from services.rankings import dist_from_ranking

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="km-engine",
    help=f"{app_config.TITLE} {app_config.VERSION}: {app_config.DESCRIPTION}",
    add_completion=False,
    no_args_is_help=True,
)

FAMILIES = ('contraction', 'severe', 'revision', 'iterated')

# Shared options
DistOption = typer.Option(None, "--dist", help="Distribution file (text or JSON)")
AlphabetOption = typer.Option(None, "--alphabet", help="Letters, e.g. 'b p o f w'; uniform distribution")
PhiOption = typer.Option("true", "--phi", help="Belief formula")
JsonOption = typer.Option(False, "--json", help="Emit JSON")
DecimalOption = typer.Option(render_config.DECIMAL_RATIONALS, "--decimal/--fraction", help="Render rationals as decimals")
PrecisionOption = typer.Option(
    None, "--precision", min=0, max=render_config.MAX_MEASURE_DECIMALS, help="Decimals for measures",
)


@contextmanager
def handled_errors() -> Iterator[None]:
    """Map engine errors to exit codes: 1 for input problems, 2 for internal invariant breaches"""
    try:
        yield
    except InvariantBreachError as e:
        logger.error(f"❌ Invariant breach: {e}")
        typer.echo(f"internal error: {e}", err=True)
        raise typer.Exit(code=2)
    except (BeliefEngineError, ValidationError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=1)


def _decimals(precision: Optional[int]) -> int:
    return render_config.MEASURE_DECIMALS if precision is None else precision


def _load(dist_path: Optional[Path], alphabet: Optional[str]) -> ProbDist:
    if dist_path is not None:
        return load_distribution(dist_path)
    if alphabet:
        return uniform(Alphabet.from_text(alphabet))
    raise BeliefEngineError("Provide --dist or --alphabet")


def _session(dist_path: Optional[Path], alphabet: Optional[str], phi: str) -> Session:
    dist = _load(dist_path, alphabet)
    return Session.open(dist, parse(phi, dist.alphabet))


def _emit(lines: List[str], payload: Dict, as_json: bool) -> None:
    if as_json:
        typer.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        typer.echo("\n".join(lines))


def _change_payload(report: ChangeReport, decimals: int) -> Dict:
    return {
        'operator': report.operator,
        'phi': report.phi.render(),
        'alpha': report.alpha.render(),
        'result': report.result.render(),
        'worlds': report.result_worlds.bitstrings(),
        'measure': report.measure_name,
        'value': format_measure(report.measure, decimals),
        'closed_form': format_measure(report.closed_form, decimals),
    }


def _change_lines(report: ChangeReport, decimals: int) -> List[str]:
    return [
        f"result: {report.result.render()}",
        f"worlds: {report.result_worlds.render()}",
        f"{report.measure_name} = {format_measure(report.measure, decimals)}",
    ]


def _report_lines(report: PostulateReport) -> List[str]:
    lines = [f"{report.family} postulates for {report.operator} over {report.cases} case(s)"]
    for key, verdict in report.verdicts.items():
        status = "holds" if verdict.holds else f"FAILS {verdict.failed}/{verdict.checked}"
        lines.append(f"  {key:<4} {verdict.name:<28} {status}")
        if verdict.witness is not None:
            w = verdict.witness
            extra = f", psi = {w.psi}" if w.psi is not None else f", beta = {w.beta}" if w.beta is not None else ""
            lines.append(f"       witness: phi = {w.phi}, alpha = {w.alpha}{extra}")
            lines += [f"         {line}" for line in w.distribution.splitlines()]
    return lines


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level (default from ENGINE_LOG_LEVEL)"),
    log_json: Optional[bool] = typer.Option(None, "--log-json/--log-text", help="JSON log lines on stderr"),
):
    configure_logging(level=log_level, json_format=log_json)
    if not validate_config():
        logger.warning("⚠️ Continuing with invalid configuration values")


@app.command("models")
def models_command(
    phi: str = PhiOption, dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    as_json: bool = JsonOption,
):
    """List the models of --phi and, with a distribution, its possible models"""
    with handled_errors():
        distribution = _load(dist, alphabet)
        formula = parse(phi, distribution.alphabet)
        all_models = models(formula, distribution.alphabet)
        possible = possible_models(formula, distribution)
        _emit(
            [f"models: {all_models.render()}", f"possible models: {possible.render()}"],
            {'phi': formula.render(), 'models': all_models.bitstrings(), 'possible': possible.bitstrings()},
            as_json,
        )


@app.command("prob")
def prob_command(
    phi: str = PhiOption, alpha: Optional[str] = typer.Option(None, "--alpha", help="Second formula"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    as_json: bool = JsonOption, decimal: bool = DecimalOption,
):
    """P(phi); with --alpha also the P-entailment relations between the two"""
    with handled_errors():
        distribution = _load(dist, alphabet)
        left = parse(phi, distribution.alphabet)
        payload: Dict = {'phi': left.render(), 'probability': format_fraction(prob(left, distribution), decimal)}
        lines = [f"P({left.render()}) = {payload['probability']}"]
        if alpha is not None:
            right = parse(alpha, distribution.alphabet)
            relations = {
                'p_entails': p_entails(left, right, distribution),
                'p_strict': p_strict(left, right, distribution),
                'p_equiv': p_equiv(left, right, distribution),
                'p_independent': p_independent(left, right, distribution),
            }
            payload.update(alpha=right.render(), **relations)
            lines += [f"{name}: {'yes' if value else 'no'}" for name, value in relations.items()]
            if p_consistent(left, distribution):
                payload['conditional'] = format_fraction(conditional(right, left, distribution), decimal)
                lines.append(f"P({right.render()} | {left.render()}) = {payload['conditional']}")
        _emit(lines, payload, as_json)


@app.command("kappa")
def kappa_command(
    phi: str = PhiOption, dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    base: Optional[float] = typer.Option(None, "--base", help="Logarithm base (> 1)"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Second formula for the axiom checks"),
    axioms: bool = typer.Option(False, "--axioms", help="Check the measure axioms on phi and --alpha"),
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Knowledge measures of --phi: kappa_S, kappa_b for --base, and kappa_h"""
    with handled_errors():
        decimals = _decimals(precision)
        distribution = _load(dist, alphabet)
        formula = parse(phi, distribution.alphabet)
        config = KnowledgeMeasureConfig(base=base) if base is not None else KnowledgeMeasureConfig()
        payload: Dict = {
            'phi': formula.render(),
            'kappa_s': kappa_s(formula, distribution).render(decimals),
            'kappa_b': kappa_b(formula, distribution, config).render(decimals),
            'base': config.base,
            'kappa_h': kappa_h(formula).render(decimals),
        }
        lines = [
            f"kappa_S = {payload['kappa_s']}",
            f"kappa_b (base {format_measure(config.base, decimals)}) = {payload['kappa_b']}",
            f"kappa_h = {payload['kappa_h']}",
        ]
        if axioms:
            other = parse(alpha, distribution.alphabet) if alpha is not None else Top()
            checks = {
                'KM1': check_km1(distribution),
                'KM2': check_km2(formula, other, distribution),
                'KM3': check_km3(formula, other, distribution),
            }
            payload['axioms'] = checks
            lines += [f"{name}: {'holds' if ok else 'FAILS'}" for name, ok in checks.items()]
        _emit(lines, payload, as_json)


def _change(operator: str, phi: str, alpha: str, dist: Optional[Path], alphabet: Optional[str],
            precision: Optional[int], as_json: bool) -> None:
    decimals = _decimals(precision)
    session = _session(dist, alphabet, phi)
    service = BeliefChangeService(session.dist)
    change = parse(alpha, session.alphabet)
    operations = {
        'km-contraction': service.contract,
        'full-meet': service.full_meet_contract,
        'severe-withdrawal': service.severe_withdraw,
        'km-revision': service.revise,
        'expansion': service.expand,
    }
    report = operations[operator](session.belief, change)
    _emit(_change_lines(report, decimals), _change_payload(report, decimals), as_json)


@app.command("contract")
def contract_command(
    phi: str = PhiOption, alpha: str = typer.Option(..., "--alpha", help="Formula to give up"),
    operator: str = typer.Option("km-contraction", "--operator", help="km-contraction or full-meet"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Contract --phi by --alpha and report the information loss L"""
    with handled_errors():
        if operator not in ('km-contraction', 'full-meet'):
            raise BeliefEngineError(f"contract supports km-contraction and full-meet, not '{operator}'")
        _change(operator, phi, alpha, dist, alphabet, precision, as_json)


@app.command("withdraw")
def withdraw_command(
    phi: str = PhiOption, alpha: str = typer.Option(..., "--alpha", help="Formula to give up"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Severe withdrawal of --alpha from --phi"""
    with handled_errors():
        _change('severe-withdrawal', phi, alpha, dist, alphabet, precision, as_json)


@app.command("expand")
def expand_command(
    phi: str = PhiOption, alpha: str = typer.Option(..., "--alpha", help="Formula to add"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Expand --phi by --alpha and report the information gain G"""
    with handled_errors():
        _change('expansion', phi, alpha, dist, alphabet, precision, as_json)


@app.command("revise")
def revise_command(
    phi: str = PhiOption, alpha: str = typer.Option(..., "--alpha", help="Formula to accept"),
    psi: Optional[str] = typer.Option(None, "--psi", help="Second revision applied to the result"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Revise --phi by --alpha (then by --psi) and report the information change R"""
    with handled_errors():
        if psi is None:
            _change('km-revision', phi, alpha, dist, alphabet, precision, as_json)
            return
        decimals = _decimals(precision)
        session = _session(dist, alphabet, phi)
        service = BeliefChangeService(session.dist)
        first = service.revise(session.belief, parse(alpha, session.alphabet))
        # the revised belief must stay consistent before it is revised again
        revised = session.with_belief(first.result)
        steps = [first, service.revise(revised.belief, parse(psi, revised.alphabet))]
        lines: List[str] = []
        for number, step in enumerate(steps, start=1):
            lines.append(f"step {number}: revise by {step.alpha.render()}")
            lines += [f"  {line}" for line in _change_lines(step, decimals)]
        _emit(lines, {'steps': [_change_payload(step, decimals) for step in steps]}, as_json)


@app.command("spheres")
def spheres_command(
    phi: str = PhiOption, dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    decimal: bool = DecimalOption, as_json: bool = JsonOption,
):
    """Sphere system centred on the possible models of --phi"""
    with handled_errors():
        session = _session(dist, alphabet, phi)
        system = BeliefChangeService(session.dist).spheres(session.belief)
        lines = [f"centre: {system.center.render()}"]
        lines += [
            f"annulus {n} (mass {format_fraction(annulus.mass, decimal)}): {annulus.worlds.render()}"
            for n, annulus in enumerate(system.annuli, start=1)
        ]
        payload = {
            'center': system.center.bitstrings(),
            'annuli': [
                {'mass': format_fraction(annulus.mass, decimal), 'worlds': annulus.worlds.bitstrings()}
                for annulus in system.annuli
            ],
        }
        _emit(lines, payload, as_json)


@app.command("check")
def check_command(
    family: str = typer.Option("contraction", "--family", help="contraction, severe, revision or iterated"),
    operator: Optional[str] = typer.Option(None, "--operator", help=f"One of {', '.join(OPERATORS)}"),
    letters: int = typer.Option(3, "--letters", help="Alphabet size for fuzzing"),
    cases: Optional[int] = typer.Option(None, "--cases", help="Number of fuzz cases"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Fuzz seed"),
    dist: Optional[Path] = DistOption, alphabet: Optional[str] = AlphabetOption,
    phi: Optional[str] = typer.Option(None, "--phi", help="Check one instance instead of fuzzing"),
    alpha: str = typer.Option("true", "--alpha"),
    beta: str = typer.Option("true", "--beta"),
    psi: str = typer.Option("true", "--psi"),
    as_json: bool = JsonOption,
):
    """Check a postulate family on one instance (--phi) or on seeded random instances"""
    with handled_errors():
        if family not in FAMILIES:
            raise BeliefEngineError(f"Unknown family '{family}'; expected one of {', '.join(FAMILIES)}")
        if phi is None:
            report = fuzz(family, letters, cases, seed, operator)
        else:
            session = _session(dist, alphabet, phi)
            extra = psi if family == 'iterated' else beta
            report = check_family(
                family, operator, session.belief, parse(alpha, session.alphabet),
                parse(extra, session.alphabet), session.dist,
            )
        _emit(_report_lines(report), report.model_dump(), as_json)


@app.command("rank2dist")
def rank2dist_command(
    ranking: Path = typer.Option(..., "--ranking", help="Ranking file: alphabet line, then '<bitstring> <rank>'"),
    as_json: bool = JsonOption, decimal: bool = DecimalOption,
):
    """Emit the faithful distribution induced by a ranking"""
    with handled_errors():
        dist = dist_from_ranking(load_ranking(ranking))
        typer.echo(dump_distribution_json(dist) if as_json else dump_distribution_text(dist, decimal), nl=as_json)


@app.command("demo")
def demo_command(
    name: str = typer.Argument(..., help=f"One of {', '.join(demo_names())}"),
    precision: Optional[int] = PrecisionOption, as_json: bool = JsonOption,
):
    """Replay a worked example"""
    with handled_errors():
        report = run_demo(name, precision)
        typer.echo(report.model_dump_json(indent=2) if as_json else report.render())


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code: 0 ok, 1 input or usage error, 2 invariant breach"""
    try:
        result = app(args=argv, standalone_mode=False)
    except click.exceptions.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
