"""Scenario-driven command line.

One command per pipeline: `surface` samples the two-scope well-being
surface, `consensus-check` tests scope agreement under the declared
mapping, `fit` builds the survey-backed target function, `sweep` runs the
policy grid through the simulator, `select` couples sweep facts into the
target and picks maximizers per weighting profile, `impact` evaluates the
logic model, `network` propagates fact deltas to value parameters, and
`validate` reports scenario findings without running anything.

Outputs are staged in memory and written only after a command fully
succeeds, so a nonzero exit never leaves partial files behind.
"""

from __future__ import annotations

import argparse
import hashlib
import re
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import logicmodel
from .coupling import ScopeFunction, check_consensus, propagate_network
from .errors import RankDeficiencyError, ScenarioError
from .evaluator import evaluate_policies, select_best
from .policy_sim import normalize_ternary, run_sweep
from .scenario import Scenario, load_scenario, validate_scenario
from .serialize import csv_table, dump_json, json_rows
from .survey import (
    aggregate_survey,
    fit_target,
    read_survey_csv,
    rescale_answer,
    respondent_scores,
)
from .we_model import consensus_curve, sample_surface

COMMANDS = ("surface", "consensus-check", "fit", "sweep", "select", "impact", "network")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

_NUMERICAL_ERRORS: tuple[type[Exception], ...] = (
    RankDeficiencyError,
    np.linalg.LinAlgError,
    ZeroDivisionError,
    OverflowError,
    FloatingPointError,
)


def _require(sc: Scenario, attr: str, section: str):
    value = getattr(sc, attr)
    if value is None or (isinstance(value, (list, dict)) and not value):
        raise ScenarioError([f"{section}: section required by this command is missing"])
    return value


def _table(fmt: str, stem: str, header, rows) -> tuple[str, str]:
    if fmt == "json":
        return f"{stem}.json", json_rows(header, rows)
    return f"{stem}.csv", csv_table(header, rows)


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def _cmd_surface(sc: Scenario, fmt: str, seed):
    model = _require(sc, "model", "layers")
    grids = _require(sc, "surface_grids", "surface")
    rows = sample_surface(model, grids[0], grids[1])
    name, text = _table(fmt, "surface", ("x_n", "x_w", "W"), rows)
    outputs = {name: text}
    if sc.curve is not None:
        layer = sc.layer_by_label(sc.curve[0])
        curve_rows = consensus_curve(layer, sc.curve[1])
        name, text = _table(fmt, "curve", ("x", "W"), curve_rows)
        outputs[name] = text
    return outputs, [], seed


def _scope_function(sc: Scenario, label: str) -> ScopeFunction:
    layer = sc.layer_by_label(label)
    return ScopeFunction(
        element_weights=tuple(layer.element_weights),
        value_function=layer.value_function,
    )


def _cmd_consensus(sc: Scenario, fmt: str, seed):
    cfg = _require(sc, "consensus", "consensus")
    mapping = _require(sc, "mapping_f", "mapping_f")
    report = check_consensus(
        narrow=_scope_function(sc, cfg.narrow_label),
        f=mapping,
        wide=_scope_function(sc, cfg.wide_label),
        probe_grid=cfg.probes,
        tol=cfg.tol,
    )
    warnings = [] if report.holds else [
        f"consensus does not hold: max deviation {report.max_deviation!r} > tol {cfg.tol!r}"
    ]
    return {"consensus_report.json": dump_json(report.to_dict())}, warnings, seed


def _fit_from_survey(sc: Scenario):
    cfg = _require(sc, "survey", "survey")
    path = Path(cfg.file)
    if not path.is_absolute():
        path = sc.base_dir / path
    try:
        responses, k = read_survey_csv(path.read_text(encoding="utf-8"))
    except ValueError as err:
        raise ScenarioError([f"survey.file: {err}"]) from None
    if k != cfg.construct_map.question_count:
        raise ScenarioError(
            [
                f"survey.file: CSV has {k} questions, construct_matrix expects "
                f"{cfg.construct_map.question_count}"
            ]
        )
    try:
        baseline = aggregate_survey(responses, cfg.construct_map, cfg.scale)
        scores = respondent_scores(responses, cfg.construct_map, cfg.scale)
    except ValueError as err:
        raise ScenarioError([f"survey.file: {err}"]) from None
    design = [[1.0, *row] for row in scores]
    y = [rescale_answer(r.answers[cfg.target_question - 1], cfg.scale) for r in responses]
    model = fit_target(design, y, column_names=cfg.construct_map.constructs)
    return model, baseline


def _cmd_fit(sc: Scenario, fmt: str, seed):
    model, baseline = _fit_from_survey(sc)
    outputs = {
        "model.json": dump_json(model.to_dict()),
        "baseline.json": dump_json(list(baseline)),
    }
    return outputs, [], seed


def _run_sweep(sc: Scenario, seed):
    dynamics = _require(sc, "dynamics", "dynamics")
    grid = _require(sc, "sweep_grid", "sweep")
    if seed is not None:
        dynamics = replace(dynamics, seed=seed)
    table = run_sweep(dynamics, grid["subsidy"], grid["tax"], grid["service"])
    return table, dynamics.seed


def _cmd_sweep(sc: Scenario, fmt: str, seed):
    table, effective_seed = _run_sweep(sc, seed)
    sweep_rows = [
        (r.policy_id, r.knobs.subsidy, r.knobs.tax, r.knobs.service, *r.indicators)
        for r in table.rows
    ]
    shares = normalize_ternary(table)
    ternary_rows = [(r.policy_id, *p) for r, p in zip(table.rows, shares)]
    outputs = {}
    name, text = _table(fmt, "sweep", ("policy_id", "s", "t", "v", "econ", "env", "social"), sweep_rows)
    outputs[name] = text
    name, text = _table(fmt, "ternary", ("policy_id", "p_econ", "p_env", "p_soc"), ternary_rows)
    outputs[name] = text
    outputs["skipped.json"] = dump_json(
        [{"s": s, "t": t, "v": v} for s, t, v in table.skipped]
    )
    warnings = []
    if table.skipped:
        warnings.append(
            f"skipped {len(table.skipped)} inadmissible grid combinations (s + v > 1)"
        )
    return outputs, warnings, effective_seed


def _cmd_select(sc: Scenario, fmt: str, seed):
    profiles = _require(sc, "profiles", "weighting_profiles")
    model, baseline = _fit_from_survey(sc)
    table, effective_seed = _run_sweep(sc, seed)
    constructs = sc.survey.construct_map.constructs
    header = ("rank", "policy_id", "W_prime", *(f"x_w_prime_{c}" for c in constructs))
    outputs = {}
    warnings = []
    selection = {}
    for profile in profiles:
        ranked = evaluate_policies(model, baseline, profile, table)
        selection[profile.name] = select_best(ranked)
        if ranked.perturbation_warnings:
            warnings.append(
                f"profile {profile.name!r}: perturbation ratio above threshold on "
                f"{ranked.perturbation_warnings} of {len(ranked.rows)} rows"
            )
        rows = [
            (i + 1, r.policy_id, r.w_prime, *r.x_w_prime)
            for i, r in enumerate(ranked.rows)
        ]
        name, text = _table(fmt, f"ranked_{_slug(profile.name)}", header, rows)
        outputs[name] = text
    outputs["selection.json"] = dump_json(selection)
    return outputs, warnings, effective_seed


def _cmd_impact(sc: Scenario, fmt: str, seed):
    model = _require(sc, "logic_model", "logic_model")
    values, impacts = logicmodel.propagate(model, sc.logic_inputs)
    report = {"node_values": values, "impacts": impacts}
    if sc.fact_binding is not None:
        report["coupled_impacts"] = logicmodel.couple_facts(
            model, sc.fact_binding, sc.logic_inputs
        )
    return {"impact_report.json": dump_json(report)}, [], seed


def _cmd_network(sc: Scenario, fmt: str, seed):
    net = _require(sc, "network", "parameter_network")
    deltas = propagate_network(net, sc.network_deltas)
    return {"network.json": dump_json({"value_deltas": deltas})}, [], seed


_DISPATCH = {
    "surface": _cmd_surface,
    "consensus-check": _cmd_consensus,
    "fit": _cmd_fit,
    "sweep": _cmd_sweep,
    "select": _cmd_select,
    "impact": _cmd_impact,
    "network": _cmd_network,
}


def run(command: str, scenario_path: str, out_dir: str, fmt: str = "csv",
        seed: int | None = None) -> int:
    """Run one command; returns the process exit code.

    Output files are only created when the whole command succeeds; a
    RunReport JSON goes to stdout.
    """
    started = time.perf_counter()
    try:
        sc, raw = load_scenario(scenario_path)
        digest = hashlib.sha256(raw).hexdigest()
        outputs, warnings, effective_seed = _DISPATCH[command](sc, fmt, seed)
        warnings = list(sc.warnings) + warnings
    except ScenarioError as err:
        for finding in err.findings:
            print(f"error: {finding}", file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL_ERRORS as err:
        print(f"error: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO

    out = Path(out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            target = out / name
            target.write_text(text, encoding="utf-8", newline="")
            written.append(target)
    except OSError as err:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO

    report = {
        "command": command,
        "scenario_digest": digest,
        "seed": effective_seed,
        "outputs": [str(out / name) for name in outputs],
        "warnings": warnings,
        "wall_time_s": time.perf_counter() - started,
    }
    print(dump_json(report), end="")
    return EXIT_OK


def _run_validate(scenario_path: str) -> int:
    try:
        errors, warnings = validate_scenario(scenario_path)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    print(dump_json({"ok": not errors, "errors": errors, "warnings": warnings}), end="")
    return EXIT_OK if not errors else EXIT_VALIDATION


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="wepolicy",
        description="Scenario-driven well-being policy evaluation pipelines.",
    )
    parser.add_argument("command", choices=COMMANDS + ("validate",))
    parser.add_argument("--scenario", required=True, help="scenario JSON file")
    parser.add_argument("--out", help="output directory (all commands except validate)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt",
                        help="table output format (reports are always JSON)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario's dynamics seed")
    args = parser.parse_args(argv)

    if args.command == "validate":
        return _run_validate(args.scenario)
    if not args.out:
        print("error: --out is required for this command", file=sys.stderr)
        return EXIT_VALIDATION
    return run(args.command, args.scenario, args.out, fmt=args.fmt, seed=args.seed)


if __name__ == "__main__":
    raise SystemExit(main())
