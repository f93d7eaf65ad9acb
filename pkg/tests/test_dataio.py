#!/usr/bin/env python3
"""
Tests for CSV datasets, truth sidecars, JSON configs and report rendering.
"""

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from RP_RCT_Toolkit.dataio import (
    DatasetSchema,
    LatexExporter,
    design_from_dict,
    load_design,
    load_simulation_config,
    parse_reports,
    read_dataset,
    read_outcomes,
    read_sidecar,
    render_document,
    render_report,
    render_rows,
    save_json,
    write_dataset,
    write_sidecar,
)
from RP_RCT_Toolkit.design import DesignSpec
from RP_RCT_Toolkit.errors import ConfigError, SchemaError
from RP_RCT_Toolkit.estimate import (
    BalanceRow,
    CheaterEstimate,
    EffectEstimate,
    EstimateReport,
    Method,
    PrivateDataset,
    WaldResult,
)
from RP_RCT_Toolkit.simulate import (
    case_study_population,
    generate_population,
    run_protocol_outcomes,
)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _effect(tau, se, method):
    return EffectEstimate(tau, se, (tau - 2 * se, tau + 2 * se), 0.05, method, 72, se * se * 72)


def _report(outcome="attention", lam=0.24, lam_se=0.129, diff=(-0.316, 0.155), cov=(-0.3, 0.14)):
    return EstimateReport(
        outcome=outcome,
        n=72,
        alpha=0.05,
        design=DesignSpec.case_study().to_dict(),
        lam=CheaterEstimate(lam, lam_se, lam, False, lam_se ** 2 * 72, 72),
        h_diff=_effect(diff[0], diff[1], Method.H_DIFF),
        h_cov=_effect(cov[0], cov[1], Method.H_COV),
        wald={
            "HDiff": WaldResult(diff[0] / diff[1], 0.04, True),
            "HCov": WaldResult(cov[0] / cov[1], 0.03, True),
        },
    )


class TestReadDataset(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_two_rows(self):
        path = _write(self.dir / "d.csv", "id,s,a,y_tilde\n1,1,1,1\n2,2,0,0\n")
        data = read_dataset(path)
        self.assertEqual(data.n, 2)
        self.assertEqual(data.y_tilde.tolist(), [1, 0])
        self.assertEqual(data.s.tolist(), [1, 2])
        self.assertEqual(data.ids.tolist(), [1, 2])
        self.assertFalse(data.has_covariates)

    def test_bad_subsample_label_reports_line(self):
        path = _write(self.dir / "d.csv", "id,s,a,y_tilde\n1,1,1,1\n2,3,0,0\n")
        with self.assertRaises(SchemaError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.row, 3)
        self.assertEqual(ctx.exception.column, "s")
        self.assertIn("(row 3, column 's')", str(ctx.exception))

    def test_missing_required_column(self):
        path = _write(self.dir / "d.csv", "s,a\n1,1\n")
        with self.assertRaises(SchemaError) as ctx:
            read_dataset(path)
        self.assertEqual(ctx.exception.column, "y_tilde")

    def test_empty_file(self):
        with self.assertRaises(SchemaError):
            read_dataset(_write(self.dir / "d.csv", ""))

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            read_dataset(str(self.dir / "nope.csv"))

    def test_sidecar_column_rejected(self):
        path = _write(self.dir / "d.csv", "s,a,y_tilde,y1\n1,1,1,1\n")
        with self.assertRaises(SchemaError) as ctx:
            read_dataset(path, DatasetSchema(infer_covariates=True))
        self.assertEqual(ctx.exception.column, "y1")

    def test_undeclared_column_rejected(self):
        path = _write(self.dir / "d.csv", "s,a,y_tilde,age\n1,1,1,20\n")
        with self.assertRaises(SchemaError):
            read_dataset(path)

    def test_covariates_with_missing_token(self):
        text = "s,a,y_tilde,gpa,year\n1,1,1,3.5,L1\n2,0,0,NA,NA\n1,0,1,2.9,L0\n"
        path = _write(self.dir / "d.csv", text)
        schema = DatasetSchema(
            covariates={"gpa": "numeric", "year": "categorical"}, missing_token="NA"
        )
        x = read_dataset(path, schema).x
        self.assertTrue(np.isnan(x["gpa"][1]))
        self.assertTrue(pd.isna(x["year"][1]))
        self.assertEqual(x["year"][2], "L0")

    def test_inferred_covariate_kinds(self):
        path = _write(self.dir / "d.csv", "s,a,y_tilde,gpa,year\n1,1,1,3.5,L1\n2,0,0,2.9,L0\n")
        x = read_dataset(path, DatasetSchema(infer_covariates=True)).x
        self.assertEqual(x["gpa"].dtype, np.float64)
        self.assertEqual(x["year"].dtype, object)

    def test_non_numeric_declared_numeric(self):
        path = _write(self.dir / "d.csv", "s,a,y_tilde,gpa\n1,1,1,high\n")
        with self.assertRaises(SchemaError) as ctx:
            read_dataset(path, DatasetSchema(covariates={"gpa": "numeric"}))
        self.assertEqual(ctx.exception.row, 2)

    def test_several_outcomes_need_read_outcomes(self):
        path = _write(self.dir / "d.csv", "s,a,attention,retention\n1,1,1,0\n2,0,0,1\n")
        schema = DatasetSchema(outcomes=("attention", "retention"))
        with self.assertRaises(SchemaError):
            read_dataset(path, schema)
        multi = read_outcomes(path, schema)
        self.assertEqual(multi.outcome_names, ["attention", "retention"])
        self.assertEqual(multi.dataset("retention").y_tilde.tolist(), [0, 1])


def test_round_trip(tmp_path, noise_dataset):
    path = write_dataset(noise_dataset, str(tmp_path / "data.csv"))
    schema = DatasetSchema(covariates={"age": "numeric", "group": "categorical"})
    assert read_dataset(path, schema) == noise_dataset


def test_covariate_floats_read_back_exactly(tmp_path):
    values = [0.1 + 0.2, 1 / 3, 2 / 3, 1e-300, 123456.789012345678, -0.7]
    x = pd.DataFrame({"score": values})
    data = PrivateDataset([0, 1, 0, 1, 0, 1], [1, 0, 1, 0, 1, 0], [1, 1, 2, 2, 1, 2], x)
    path = write_dataset(data, str(tmp_path / "floats.csv"))
    restored = read_dataset(path, DatasetSchema(covariates={"score": "numeric"}))
    assert restored.x["score"].tolist() == values


def test_empty_dataset_writes_header_only(tmp_path):
    path = write_dataset(PrivateDataset([], [], []), str(tmp_path / "empty.csv"))
    with open(path, encoding="utf-8") as f:
        assert f.read() == "s,a,y_tilde\n"
    assert read_dataset(path).n == 0


def test_sidecar_files(tmp_path):
    spec = DesignSpec.symmetric(0.5, 0.3, 0.1)
    population = generate_population(case_study_population(n=40), np.random.default_rng(1))
    multi, sidecars = run_protocol_outcomes(population, spec, np.random.default_rng(2))
    data_path = write_dataset(multi, str(tmp_path / "run.csv"))
    truth_path = write_sidecar(sidecars, str(tmp_path / "run.truth.csv"))

    with open(data_path, encoding="utf-8") as f:
        header = f.readline().strip().split(",")
    assert not any(name in header for name in ("y1", "y0", "c", "behavior"))
    with open(truth_path, encoding="utf-8") as f:
        truth_header = f.readline().strip().split(",")
    assert truth_header[:4] == ["s", "a", "c", "behavior"]
    assert "attention:y1" in truth_header

    restored = read_sidecar(truth_path)
    assert list(restored) == multi.outcome_names
    np.testing.assert_array_equal(restored["retention"].y0, sidecars["retention"].y0)
    np.testing.assert_array_equal(restored["retention"].prompt, sidecars["retention"].prompt)

    with pytest.raises(SchemaError):
        read_dataset(truth_path, DatasetSchema(infer_covariates=True))


class TestConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def _config_file(self, document):
        path = os.path.join(self.tmp.name, "config.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f)
        return path

    def test_full_config(self):
        path = self._config_file(
            {
                "population": {
                    "n": 100,
                    "lambda": 0.1,
                    "covariates": [{"name": "age", "kind": "gaussian", "params": [20, 2]}],
                    "outcomes": [{"name": "y_tilde", "coefficients": {"age": 0.1}}],
                    "behavior_mix": {"AlwaysZero": 0.5, "UniformRandom": 0.5},
                },
                "design": {"epsilon": 2.0, "gap": 0.06},
            }
        )
        population, design = load_simulation_config(path)
        self.assertEqual(population.n, 100)
        self.assertAlmostEqual(design.epsilon.epsilon, 2.0)

    def test_pointer_to_bad_field(self):
        path = self._config_file(
            {
                "population": {"n": 10, "outcomes": [{"intercept": "high"}]},
                "design": {"preset": "case-study"},
            }
        )
        with self.assertRaises(ConfigError) as ctx:
            load_simulation_config(path)
        self.assertEqual(ctx.exception.pointer, "/population/outcomes/0/intercept")

    def test_missing_design(self):
        path = self._config_file({"population": {"preset": "case-study"}})
        with self.assertRaises(ConfigError) as ctx:
            load_simulation_config(path)
        self.assertEqual(ctx.exception.pointer, "/design")

    def test_invalid_cheater_share(self):
        path = self._config_file(
            {"population": {"n": 10, "lambda": 1.0}, "design": {"preset": "case-study"}}
        )
        with self.assertRaises(ConfigError) as ctx:
            load_simulation_config(path)
        self.assertEqual(ctx.exception.pointer, "/population")

    def test_treatment_probability_belongs_to_design(self):
        path = self._config_file(
            {"population": {"n": 10, "delta": 0.3}, "design": {"preset": "case-study"}}
        )
        with self.assertRaises(ConfigError) as ctx:
            load_simulation_config(path)
        self.assertEqual(ctx.exception.pointer, "/population/delta")

    def test_design_document_round_trip(self):
        spec = DesignSpec.symmetric(0.4, 0.3, 0.1)
        path = os.path.join(self.tmp.name, "design.json")
        save_json(spec.to_dict(), path)
        self.assertEqual(load_design(path), spec)

    def test_equal_maps_rejected(self):
        with self.assertRaises(ConfigError):
            design_from_dict({"frr1": {"r0": 0.1, "r1": 0.1}, "frr2": {"r0": 0.1, "r1": 0.1}})

    def test_invalid_json(self):
        path = os.path.join(self.tmp.name, "broken.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write("{not json")
        with self.assertRaises(ConfigError):
            load_simulation_config(path)


class TestRendering(unittest.TestCase):

    def test_markdown_table(self):
        text = render_report([_report()], "markdown")
        lines = text.splitlines()
        self.assertEqual(lines[0], "| Outcome | λ̂ (se) | τ̂_H,Diff (se) | τ̂_H,Cov (se) |")
        self.assertTrue(lines[2].startswith("| Attention | 0.240 (0.129) | -0.316 (0.155) |"))

    def test_markdown_inference_and_balance(self):
        report = _report()._replace(
            h_diff=_effect(-0.316, 0.155, Method.H_DIFF).with_bootstrap(0.161, (-0.63, -0.01)),
            balance=[BalanceRow("gpa", 3.1, 3.4, -0.35, 0.0, 0.1, True, "")],
        )
        text = render_report([report], "markdown")
        lines = text.splitlines()
        header = "| Outcome | Estimator | Estimate | SE | Bootstrap SE | CI | t | p-value |"
        self.assertIn(header, lines)
        hdiff = "| Attention | τ̂_H,Diff | -0.316 | 0.155 | 0.161 | [-0.630, -0.010] | -2.04 "
        self.assertIn(hdiff + "| 0.0400 |", lines)
        self.assertIn("| Attention | τ̂_H,Cov | -0.300 | 0.140 |  | [-0.580, -0.020] |", text)
        self.assertIn("Covariate balance:", text)
        self.assertIn("| Attention | gpa | 3.100 | 3.400 | -0.350 | yes |  |", text)

    def test_markdown_without_covariates_has_no_balance_table(self):
        self.assertNotIn("Covariate balance", render_report([_report()], "markdown"))

    def test_display_names(self):
        text = render_report([_report("judgement_of_learning")], "markdown")
        self.assertIn("| Judgement of learning |", text)

    def test_empty_report_list(self):
        with self.assertRaises(ValueError):
            render_report([], "markdown")

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render_report([_report()], "xml")

    def test_json_round_trip(self):
        reports = [_report(), _report("retention", 0.0, 0.05, (0.1, 0.2), (0.12, 0.18))]
        self.assertEqual(parse_reports(render_report(reports, "json")), reports)

    def test_csv_has_one_row_per_outcome(self):
        text = render_report([_report(), _report("retention")], "csv")
        lines = text.strip().split("\n")
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[0].startswith("outcome,n,alpha,lambda_hat"))

    def test_latex_table(self):
        text = render_report([_report()], "latex")
        self.assertIn(r"\begin{tabular}{lrrr}", text)
        self.assertIn("Attention", text)
        self.assertIn("0.240 (0.129)", text)

    def test_latex_document(self):
        doc = LatexExporter().document([_report()])
        self.assertIn("Treatment effects", doc.dumps())

    def test_latex_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = LatexExporter().export_tex([_report()], os.path.join(tmp, "effects.tex"))
            self.assertTrue(path.endswith("effects.tex"))
            self.assertIn(r"\begin{document}", Path(path).read_text(encoding="utf-8"))

    def test_rows_and_documents(self):
        rows = [{"value": 0.5, "method": "HDiff", "rejection_rate": 0.25}]
        self.assertIn("| value | method | rejection_rate |", render_rows(rows, "markdown"))
        with self.assertRaises(ValueError):
            render_rows(rows, "latex")
        text = render_document({"epsilon": {"strict": float("inf")}}, "markdown")
        self.assertIn("| epsilon.strict | inf |", text)


if __name__ == '__main__':
    unittest.main()
