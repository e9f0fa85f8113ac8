"""Batch analysis: parse input specs, run condition batteries, emit reports."""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from typing import Any

from .conditions import (
    admissibility_bundle,
    beta_gamma,
    condv_propagation,
    equlemma_check,
    growth_flags,
    matrix_mg,
    mg_battery,
    moderate_growth_index,
    quotient_root_comparison,
)
from .counterexample import build_counterexample, validate_schedule
from .matrices import WeightMatrix, build_associated_matrix, matrix_from_json
from .sequences import WeightSequence, sequence_from_json, validate_lc
from .verdicts import ConditionReport, dumps_stable, fmt12
from .weights import AssociatedWeightFunction, check_weight_conditions

DEFAULT_HORIZON = 512
DEFAULT_D_MAX = 8
DEFAULT_GRID = tuple(2.0 ** k for k in range(-4, 5))

CONDITION_IDS = (
    "validate_lc",
    "mg_battery",
    "growth_flags",
    "beta_gamma",
    "genmg",
    "equlemma",
    "admissibility",
    "weight_conditions",
    "matrix_mg",
    "quotient_root",
    "condv_propagation",
    "schedule",
)


class SpecError(ValueError):
    """Schema-level failure; carries (json_path, message) pairs."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        super().__init__("; ".join(f"{p}: {m}" for p, m in problems))


class ComputationError(RuntimeError):
    """Module error propagated out of run_analysis, annotated with the input label."""


@dataclass
class AnalysisInput:
    label: str
    sequence: WeightSequence | None = None
    matrix: WeightMatrix | None = None
    schedule: Any = None


@dataclass
class AnalysisSpec:
    inputs: list[AnalysisInput]
    conditions: list[dict[str, Any]]
    horizon: int | None = None
    d_max: int = DEFAULT_D_MAX
    grid: tuple[float, ...] = DEFAULT_GRID
    output: dict[str, Any] = field(default_factory=dict)


def parse_spec(text: str) -> AnalysisSpec:
    """Validate and materialize an analysis spec from JSON text.

    Schema errors are collected with their JSON paths and raised together.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([("$", f"invalid JSON: {exc}")]) from exc
    problems: list[tuple[str, str]] = []
    if not isinstance(doc, dict):
        raise SpecError([("$", "top level must be an object")])

    horizon = doc.get("horizon")
    if horizon is not None:
        if not isinstance(horizon, int) or horizon < 4:
            problems.append(("horizon", f"horizon must be an integer >= 4, got {horizon!r}"))
            horizon = None

    d_max = doc.get("d_max", DEFAULT_D_MAX)
    if not isinstance(d_max, int) or d_max < 1:
        problems.append(("d_max", f"d_max must be a positive integer, got {d_max!r}"))
        d_max = DEFAULT_D_MAX

    grid = doc.get("grid", list(DEFAULT_GRID))
    if (not isinstance(grid, list) or not grid
            or any(not isinstance(g, (int, float)) or g <= 0 for g in grid)):
        problems.append(("grid", "grid must be a non-empty list of positive numbers"))
        grid = list(DEFAULT_GRID)

    inputs: list[AnalysisInput] = []
    raw_inputs = doc.get("inputs", [])
    if not isinstance(raw_inputs, list) or not raw_inputs:
        problems.append(("inputs", "need a non-empty list of inputs"))
        raw_inputs = []
    for i, item in enumerate(raw_inputs):
        path = f"inputs[{i}]"
        if not isinstance(item, dict):
            problems.append((path, "input must be an object"))
            continue
        try:
            inputs.append(_parse_input(item, horizon))
        except (ValueError, KeyError) as exc:
            problems.append((path, str(exc)))

    conditions: list[dict[str, Any]] = []
    raw_conditions = doc.get("conditions", [])
    if not isinstance(raw_conditions, list):
        problems.append(("conditions", "conditions must be a list"))
        raw_conditions = []
    for i, item in enumerate(raw_conditions):
        path = f"conditions[{i}]"
        if isinstance(item, str):
            entry: dict[str, Any] = {"id": item}
        elif isinstance(item, dict) and isinstance(item.get("id"), str):
            entry = dict(item)
        else:
            problems.append((path, "condition must be an id string or an object with 'id'"))
            continue
        if entry["id"] not in CONDITION_IDS:
            problems.append((path, f"unknown condition '{entry['id']}'"))
            continue
        conditions.append(entry)

    output = doc.get("output", {})
    if not isinstance(output, dict):
        problems.append(("output", "output must be an object"))
        output = {}
    fmt = output.get("format")
    if fmt is not None and fmt not in ("json", "csv", "plotdata"):
        problems.append(("output.format", f"unknown format '{fmt}'"))

    if problems:
        raise SpecError(problems)
    return AnalysisSpec(inputs, conditions, horizon, d_max, tuple(float(g) for g in grid),
                        output)


def _parse_input(item: dict[str, Any], horizon_override: int | None) -> AnalysisInput:
    if "counterexample" in item:
        opts = item["counterexample"]
        if not isinstance(opts, dict):
            raise ValueError("counterexample options must be an object")
        spec, seq = build_counterexample(
            levels=int(opts.get("levels", 8)),
            variant=tuple(opts.get("variant", ["minimal"])),
            b1=float(opts.get("b1", 1.0)))
        if horizon_override is not None and horizon_override < seq.horizon:
            seq = seq.truncated(horizon_override)
        return AnalysisInput(label=seq.label, sequence=seq, schedule=spec)
    if "matrix" in item:
        m = matrix_from_json(item["matrix"])
        return AnalysisInput(label=str(item.get("label", f"matrix[{len(m.indices)}]")),
                             matrix=m)
    doc = dict(item)
    if horizon_override is not None and "log_values" not in doc:
        doc["horizon"] = horizon_override
    seq = sequence_from_json(doc)
    if horizon_override is not None and seq.horizon > horizon_override:
        seq = seq.truncated(horizon_override)
    return AnalysisInput(label=seq.label or str(item.get("label", "sequence")),
                         sequence=seq)


def _need_sequence(inp: AnalysisInput) -> WeightSequence:
    if inp.sequence is None:
        raise ValueError("condition requires a sequence input")
    return inp.sequence


def _need_matrix(inp: AnalysisInput, grid: tuple[float, ...]) -> WeightMatrix:
    if inp.matrix is not None:
        return inp.matrix
    seq = _need_sequence(inp)
    return build_associated_matrix(AssociatedWeightFunction(seq), grid)


def _run_condition(entry: dict[str, Any], inp: AnalysisInput,
                   spec: AnalysisSpec) -> dict[str, ConditionReport]:
    cid = entry["id"]
    if cid == "validate_lc":
        return {"lc_membership": validate_lc(_need_sequence(inp))}
    if cid == "mg_battery":
        return mg_battery(_need_sequence(inp))
    if cid == "growth_flags":
        return growth_flags(_need_sequence(inp))
    if cid == "beta_gamma":
        return beta_gamma(_need_sequence(inp), Q=int(entry.get("Q", 2)),
                          beta=float(entry.get("beta", 1.0)))
    if cid == "genmg":
        rep = moderate_growth_index(_need_sequence(inp),
                                    d_max=int(entry.get("d_max", spec.d_max)))
        return {"gen_mg": rep}
    if cid == "equlemma":
        rep = equlemma_check(_need_sequence(inp), d=int(entry.get("d", 2)))
        return {"equiv_transfer": rep}
    if cid == "admissibility":
        return {"admissibility": admissibility_bundle(_need_sequence(inp))}
    if cid == "weight_conditions":
        a = AssociatedWeightFunction(_need_sequence(inp))
        return check_weight_conditions(a)
    if cid == "matrix_mg":
        m = _need_matrix(inp, spec.grid)
        out = {}
        for variant in ("R", "B"):
            for level in ("I", "II", "III", "IV", "V"):
                out[f"matrix_mg:{variant}:{level}"] = matrix_mg(m, variant, level)
        return out
    if cid == "quotient_root":
        m = _need_matrix(inp, spec.grid)
        return {f"quotient_root:{v}": quotient_root_comparison(m, v) for v in ("R", "B")}
    if cid == "condv_propagation":
        m = _need_matrix(inp, spec.grid)
        rep = condv_propagation(m, x=float(entry.get("x", 1.0)), c=int(entry.get("c", 2)),
                                Q=int(entry.get("Q", 2)), beta=float(entry.get("beta", 1.0)))
        return {"liminf_propagation": rep}
    if cid == "schedule":
        if inp.schedule is None:
            return {}
        return {"schedule": validate_schedule(inp.schedule)}
    raise ValueError(f"unknown condition '{cid}'")


def run_analysis(spec: AnalysisSpec) -> dict[str, Any]:
    """Deterministic bundle of reports keyed by '<label>::<condition key>'."""
    reports: dict[str, Any] = {}
    for inp in spec.inputs:
        for entry in spec.conditions:
            try:
                results = _run_condition(entry, inp, spec)
            except SpecError:
                raise
            except (ValueError, KeyError, ArithmeticError) as exc:
                raise ComputationError(f"{inp.label}: {entry['id']}: {exc}") from exc
            for key, rep in results.items():
                reports[f"{inp.label}::{key}"] = rep.to_jsonable()
    return {
        "inputs": [inp.label for inp in spec.inputs],
        "conditions": [e["id"] for e in spec.conditions],
        "reports": reports,
    }


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_")


def emit_report(bundle: dict[str, Any], fmt: str, out_dir: str,
                figures: bool = True) -> list[str]:
    """Write the bundle as json, csv, or plotdata (+ rendered figures).

    plotdata produces one two-column (prefix, value) CSV per witness series,
    with a PNG rendering of the same series next to it unless disabled.
    """
    if fmt not in ("json", "csv", "plotdata"):
        raise ValueError(f"unknown format '{fmt}'")
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []
    if fmt == "json":
        path = os.path.join(out_dir, "bundle.json")
        with open(path, "w") as fh:
            fh.write(dumps_stable(bundle) + "\n")
        return [path]

    items = sorted(bundle.get("reports", {}).items())
    if not items:
        raise ValueError("empty bundle")
    if fmt == "csv":
        path = os.path.join(out_dir, "witness_series.csv")
        with open(path, "w") as fh:
            fh.write("label,condition,prefix,value,verdict\n")
            for key, rep in items:
                label, _, cond = key.partition("::")
                for prefix, value in rep.get("witness_series", []):
                    fh.write(f"{label},{cond},{fmt12(_as_float(prefix))},"
                             f"{fmt12(_as_float(value))},{rep['verdict']}\n")
        return [path]

    from .plotting import render_series  # deferred: pulls in matplotlib
    for key, rep in items:
        series = rep.get("witness_series", [])
        if not series:
            continue
        base = _slug(key)
        csv_path = os.path.join(out_dir, f"{base}.csv")
        with open(csv_path, "w") as fh:
            fh.write("prefix,value\n")
            for prefix, value in series:
                fh.write(f"{fmt12(_as_float(prefix))},{fmt12(_as_float(value))}\n")
        written.append(csv_path)
        if figures:
            png_path = os.path.join(out_dir, f"{base}.png")
            render_series(png_path, key, series, rep["verdict"])
            written.append(png_path)
    return written


def _as_float(v: Any) -> float:
    if isinstance(v, str):
        if v == "inf":
            return math.inf
        if v == "-inf":
            return -math.inf
        return math.nan
    return float(v)
