import json
import math

import numpy as np
import pytest

from logweights.cli import main
from logweights.report import (
    ComputationError,
    SpecError,
    emit_report,
    parse_spec,
    run_analysis,
)


SPEC_GEVREY = {
    "inputs": [{"family": "gevrey", "params": {"s": 1}, "horizon": 256}],
    "conditions": ["mg_battery"],
}


class TestParseSpec:
    def test_valid_spec(self):
        spec = parse_spec(json.dumps(SPEC_GEVREY))
        assert len(spec.inputs) == 1
        assert spec.inputs[0].sequence.horizon == 256
        assert spec.conditions == [{"id": "mg_battery"}]

    def test_unknown_family(self):
        with pytest.raises(SpecError) as err:
            parse_spec(json.dumps({"inputs": [{"family": "nope"}], "conditions": []}))
        paths = [p for p, _ in err.value.problems]
        assert "inputs[0]" in paths
        assert "unknown family" in err.value.problems[0][1]

    def test_counterexample_input(self):
        doc = {"inputs": [{"counterexample": {"levels": 6, "variant": ["minimal"]}}],
               "conditions": ["genmg"]}
        spec = parse_spec(json.dumps(doc))
        assert spec.inputs[0].schedule is not None
        assert spec.inputs[0].sequence.horizon == 325

    def test_unknown_condition(self):
        with pytest.raises(SpecError) as err:
            parse_spec(json.dumps({"inputs": [{"family": "gevrey"}],
                                   "conditions": ["nope"]}))
        assert any("unknown condition" in m for _, m in err.value.problems)

    def test_bad_horizon(self):
        with pytest.raises(SpecError) as err:
            parse_spec(json.dumps({"inputs": [{"family": "gevrey"}],
                                   "conditions": [], "horizon": 2}))
        assert any(p == "horizon" for p, _ in err.value.problems)

    def test_invalid_json(self):
        with pytest.raises(SpecError):
            parse_spec("{nope")

    def test_roundtrip_of_validated_fields(self):
        text = json.dumps(SPEC_GEVREY)
        spec1 = parse_spec(text)
        again = {
            "inputs": [{"family": "gevrey", "params": {"s": 1}, "horizon": 256}],
            "conditions": [dict(c) for c in spec1.conditions],
            "d_max": spec1.d_max,
            "grid": list(spec1.grid),
        }
        spec2 = parse_spec(json.dumps(again))
        assert [i.label for i in spec2.inputs] == [i.label for i in spec1.inputs]
        assert spec2.conditions == spec1.conditions
        assert spec2.grid == spec1.grid


class TestRunAnalysis:
    def test_gevrey_battery(self):
        bundle = run_analysis(parse_spec(json.dumps(SPEC_GEVREY)))
        reports = bundle["reports"]
        assert len(reports) == 7
        assert all(rep["verdict"] == "HoldsOnHorizon" for rep in reports.values())

    def test_counterexample_genmg(self):
        doc = {"inputs": [{"counterexample": {"levels": 8}}],
               "conditions": ["genmg", "schedule"]}
        bundle = run_analysis(parse_spec(json.dumps(doc)))
        rep = bundle["reports"]["counterexample(J=8)::gen_mg"]
        assert rep["verdict"] == "FailsOnHorizon"
        assert rep["constants"]["g"] == "inf"
        assert bundle["reports"]["counterexample(J=8)::schedule"]["verdict"] == "HoldsOnHorizon"

    def test_empty_conditions(self):
        doc = {"inputs": [{"family": "gevrey"}], "conditions": []}
        bundle = run_analysis(parse_spec(json.dumps(doc)))
        assert bundle["reports"] == {}

    def test_computation_error_is_annotated(self):
        doc = {"inputs": [{"family": "gevrey", "params": {"s": 1}, "horizon": 16}],
               "conditions": [{"id": "beta_gamma", "Q": 17}]}
        with pytest.raises(ComputationError, match="gevrey"):
            run_analysis(parse_spec(json.dumps(doc)))

    def test_determinism(self):
        from logweights.verdicts import dumps_stable
        doc = {"inputs": [{"family": "q_gevrey", "params": {"q": 2, "n": 2}, "horizon": 128}],
               "conditions": ["mg_battery", "growth_flags"]}
        one = dumps_stable(run_analysis(parse_spec(json.dumps(doc))))
        two = dumps_stable(run_analysis(parse_spec(json.dumps(doc))))
        assert one == two


class TestEmit:
    @pytest.fixture()
    def bundle(self):
        doc = {"inputs": [{"family": "gevrey", "params": {"s": 1}, "horizon": 128}],
               "conditions": ["growth_flags"]}
        return run_analysis(parse_spec(json.dumps(doc)))

    def test_json(self, bundle, tmp_path):
        paths = emit_report(bundle, "json", str(tmp_path))
        data = json.loads((tmp_path / "bundle.json").read_text())
        assert data["inputs"] == ["gevrey(1)"]
        assert paths == [str(tmp_path / "bundle.json")]

    def test_csv(self, bundle, tmp_path):
        emit_report(bundle, "csv", str(tmp_path))
        lines = (tmp_path / "witness_series.csv").read_text().splitlines()
        assert lines[0] == "label,condition,prefix,value,verdict"
        assert len(lines) > 3
        assert lines[1].startswith("gevrey(1),")

    def test_plotdata_with_figures(self, bundle, tmp_path):
        paths = emit_report(bundle, "plotdata", str(tmp_path))
        csvs = [p for p in paths if p.endswith(".csv")]
        pngs = [p for p in paths if p.endswith(".png")]
        assert csvs and len(csvs) == len(pngs)
        first = (tmp_path / csvs[0].split("/")[-1]).read_text().splitlines()
        assert first[0] == "prefix,value"

    def test_plotdata_without_figures(self, bundle, tmp_path):
        paths = emit_report(bundle, "plotdata", str(tmp_path), figures=False)
        assert all(p.endswith(".csv") for p in paths)

    def test_empty_bundle_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            emit_report({"reports": {}}, "csv", str(tmp_path))

    def test_unknown_format(self, bundle, tmp_path):
        with pytest.raises(ValueError, match="format"):
            emit_report(bundle, "xml", str(tmp_path))


class TestCliEndToEnd:
    def test_gen_family(self, tmp_path, capsys):
        out = tmp_path / "seq.json"
        code = main(["gen", "--family", "q_gevrey", "--params", '{"q": 2, "n": 2}',
                     "--horizon", "16", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["horizon"] == 16
        assert doc["log_values"][3] == pytest.approx(9 * math.log(2), rel=1e-12)

    def test_gen_counterexample(self, tmp_path):
        out = tmp_path / "ce.json"
        sched = tmp_path / "sched.json"
        code = main(["gen", "--counterexample", '{"levels": 5}',
                     "--out", str(out), "--schedule-out", str(sched)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["schedule"]["breakpoints"] == [0, 1, 4, 15, 64]
        assert json.loads(sched.read_text())["slopes"][1] == 9.0

    def test_gen_requires_one_source(self, capsys):
        assert main(["gen"]) == 1

    def test_gen_bad_family_params(self):
        assert main(["gen", "--family", "gevrey", "--params", '{"s": -1}']) == 1

    def test_analyze_and_report(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(SPEC_GEVREY))
        bundle_path = tmp_path / "bundle.json"
        assert main(["analyze", "--spec", str(spec_path), "--out", str(bundle_path)]) == 0
        out_dir = tmp_path / "report"
        assert main(["report", "--bundle", str(bundle_path), "--format", "plotdata",
                     "--out", str(out_dir)]) == 0
        pngs = list(out_dir.glob("*.png"))
        csvs = list(out_dir.glob("*.csv"))
        assert pngs and csvs

    def test_analyze_schema_error(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"inputs": [{"family": "nope"}],
                                         "conditions": []}))
        assert main(["analyze", "--spec", str(spec_path)]) == 1

    def test_analyze_missing_file(self, tmp_path):
        assert main(["analyze", "--spec", str(tmp_path / "missing.json")]) == 1

    def test_analyze_computation_error(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(
            {"inputs": [{"family": "gevrey", "params": {"s": 1}, "horizon": 16}],
             "conditions": [{"id": "beta_gamma", "Q": 17}]}))
        assert main(["analyze", "--spec", str(spec_path)]) == 2

    def test_analyze_flag_overrides(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(SPEC_GEVREY))
        out = tmp_path / "bundle.json"
        code = main(["analyze", "--spec", str(spec_path), "--horizon", "64",
                     "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        series = doc["reports"]["gevrey(1)::mg:product"]["witness_series"]
        assert max(p for p, _ in series) == 64

    def test_cli_byte_identical_runs(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(SPEC_GEVREY))
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["analyze", "--spec", str(spec_path), "--out", str(a)]) == 0
        assert main(["analyze", "--spec", str(spec_path), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_report_bad_bundle(self, tmp_path):
        bad = tmp_path / "bundle.json"
        bad.write_text("{nope")
        assert main(["report", "--bundle", str(bad), "--format", "json",
                     "--out", str(tmp_path / "out")]) == 1
