import io
import logging
import os

import numpy as np
import pandas as pd
import pytest

from span_opt.baselines import BaselineConfig
from span_opt.bench import (
    ScalingConfig,
    build_problem,
    emit_plot_data,
    growth_factors,
    load_experiment,
    load_scaling,
    per_iteration_scaling,
    preiterate,
    run_experiment,
)
from span_opt.bench.main_bench import EXIT_CONFIG, EXIT_METHOD, EXIT_OK, main
from span_opt.core import SpanConfig
from span_opt.errors import ConfigError, IncompatibleTraces

HEADER = "iteration,wall_clock_s,loss,grad_norm,hessian_err,lambda_used"

QUADRATIC_EXPERIMENT = """
# two methods on a small quadratic
experiment.name = quad
experiment.output_dir = {output}
experiment.seed = 3
experiment.preiterate_svrg_epochs = 0
dataset.kind = synthetic_quadratic
dataset.spectrum = 5, 4, 3, 2, 1
dataset.seed = 1
objective.loss = quadratic
span.method = span
span.T = 10
span.l = 5
span.m = 2
span.eta = 0.5
gd.method = gd
gd.T = 10
gd.eta = 0.1
"""


def write_config(tmp_path, text, name="experiment.conf"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def quadratic_config(tmp_path, output="out", extra=""):
    return write_config(tmp_path, QUADRATIC_EXPERIMENT.format(output=tmp_path / output) + extra)


class TestExperimentFile:
    def test_parses_sections(self, tmp_path):
        cfg = load_experiment(quadratic_config(tmp_path))
        assert cfg.name == "quad"
        assert cfg.dataset.spectrum == (5.0, 4.0, 3.0, 2.0, 1.0)
        assert [spec.name for spec in cfg.methods] == ["span", "gd"]
        span, gd = (spec.config for spec in cfg.methods)
        assert isinstance(span, SpanConfig) and (span.l, span.m, span.eta, span.seed) == (5, 2, 0.5, 3)
        assert isinstance(gd, BaselineConfig) and gd.eta == 0.1

    def test_named_sections_and_step_forms(self):
        text = """
experiment.name = sweep
dataset.kind = synthetic_logistic
objective.loss = logistic
span_auto.method = span
span_auto.T = 5
span_auto.l = 4
span_auto.m = 2
span_auto.eta = auto
span_sched.method = span
span_sched.T = 2
span_sched.l = 4
span_sched.m = 2
span_sched.eta = 1.0, 0.5
span_sched.hvp = analytic
"""
        cfg = load_experiment(io.StringIO(text))
        auto, sched = (spec.config for spec in cfg.methods)
        assert auto.eta == "auto"
        assert sched.eta == (1.0, 0.5)
        assert sched.hvp_mode.is_analytic
        assert cfg.output_dir == os.path.join("results", "sweep")

    def test_geometric_spectrum_shorthand(self):
        text = """
experiment.name = geo
dataset.kind = synthetic_quadratic
dataset.dim = 4
dataset.ratio = 0.5
objective.loss = quadratic
gd.method = gd
gd.T = 1
"""
        cfg = load_experiment(io.StringIO(text))
        assert cfg.dataset.spectrum == (1.0, 0.5, 0.25, 0.125)

    @pytest.mark.parametrize(
        "edit",
        [
            "span.colour = red\n",
            "span.l = sixteen\n",
            "experiment.unknown = 1\n",
            "newsamp.T = 3\n",
            "lissa.method = bfgs\nlissa.T = 1\n",
            "gd.b = 4\n",
        ],
    )
    def test_rejects_bad_entries(self, tmp_path, edit):
        with pytest.raises(ConfigError):
            load_experiment(quadratic_config(tmp_path, extra=edit))

    def test_rejects_missing_file_and_methods(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment(str(tmp_path / "missing.conf"))
        with pytest.raises(ConfigError):
            load_experiment(io.StringIO("experiment.name = x\ndataset.kind = synthetic_logistic\nobjective.loss = logistic\n"))

    def test_rejects_mismatched_objective(self):
        text = "experiment.name = x\ndataset.kind = synthetic_logistic\nobjective.loss = quadratic\ngd.method = gd\ngd.T = 1\n"
        with pytest.raises(ConfigError):
            load_experiment(io.StringIO(text))

    def test_scaling_section(self, tmp_path):
        path = write_config(tmp_path, "scaling.l = 8\nscaling.m = 4\nscaling.steps = 5\n")
        cfg = load_scaling(path)
        assert tuple(cfg.dims) == (100, 400, 1600)
        assert load_scaling(path, (10, 20)).dims == (10, 20)
        with pytest.raises(ConfigError):
            load_scaling(path, (4, 20))


class TestRunExperiment:
    def test_writes_traces_and_summary(self, tmp_path):
        result = run_experiment(load_experiment(quadratic_config(tmp_path)))
        assert result.ok
        for name in ("span", "gd"):
            lines = (tmp_path / "out" / f"{name}.csv").read_text().splitlines()
            assert lines[0] == HEADER
            assert len(lines) == 11
        gd_rows = (tmp_path / "out" / "gd.csv").read_text().splitlines()[1:]
        assert all(row.endswith(",,") for row in gd_rows)

        summary = pd.read_csv(tmp_path / "out" / "summary.csv")
        assert list(summary["name"]) == ["span", "gd"]
        assert list(summary["status"]) == ["success", "success"]
        assert (summary["iterations"] == 10).all()

    def test_repeat_is_identical_except_clock(self, tmp_path):
        first = run_experiment(load_experiment(quadratic_config(tmp_path, output="a")))
        second = run_experiment(load_experiment(quadratic_config(tmp_path, output="b")))
        for a, b in zip(first.results, second.results):
            rows_a = [row.split(",") for row in open(a.trace_path).read().splitlines()]
            rows_b = [row.split(",") for row in open(b.trace_path).read().splitlines()]
            assert [r[:1] + r[2:] for r in rows_a] == [r[:1] + r[2:] for r in rows_b]

    def test_method_failure_is_recorded(self, tmp_path):
        extra = "lissa.method = lissa\nlissa.T = 5\nlissa.inner_steps = 200\nlissa.scale = 0.01\n"
        result = run_experiment(load_experiment(quadratic_config(tmp_path, extra=extra)))
        status = {r.name: r.status for r in result.results}
        assert status == {"span": "success", "gd": "success", "lissa": "error"}
        assert "DivergingSeries" in next(r.error for r in result.results if r.name == "lissa")
        assert not result.ok
        assert not (tmp_path / "out" / "lissa.csv").exists()

    def test_invalid_method_settings_are_config_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            run_experiment(load_experiment(quadratic_config(tmp_path, extra="wide.method = span\nwide.T = 1\nwide.l = 9\nwide.m = 2\n")))

    def test_start_point_without_preiteration_is_zero(self):
        text = """
experiment.name = logistic
experiment.preiterate_svrg_epochs = 0
dataset.kind = synthetic_logistic
dataset.n_samples = 40
dataset.dim = 5
objective.loss = logistic
objective.reg_a = 0.01
gd.method = gd
gd.T = 1
"""
        cfg = load_experiment(io.StringIO(text))
        objective, data, x_init = build_problem(cfg)
        assert data.normalized
        np.testing.assert_array_equal(preiterate(cfg, objective, data, x_init), np.zeros(5))

        cfg.preiterate_svrg_epochs = 2
        warm = preiterate(cfg, objective, data, x_init)
        assert not np.array_equal(warm, np.zeros(5))
        assert warm.tobytes() == preiterate(cfg, objective, data, x_init).tobytes()


def write_trace_csv(path, rows):
    frame = pd.DataFrame(rows, columns=HEADER.split(","))
    frame.to_csv(path, index=False, na_rep="")
    return str(path)


class TestPlotData:
    def test_time_union_carries_last_value(self, tmp_path):
        a = write_trace_csv(tmp_path / "a.csv", [[1, 0.1, 3.0, 1, None, None], [2, 0.3, 2.0, 1, None, None], [3, 0.5, 1.0, 1, None, None]])
        b = write_trace_csv(tmp_path / "b.csv", [[1, 0.2, 5.0, 1, None, None], [2, 0.4, 4.0, 1, None, None]])
        table = emit_plot_data([a, b], "loss_vs_time")
        assert list(table.columns) == ["wall_clock_s", "a", "b"]
        np.testing.assert_allclose(table["wall_clock_s"], [0.1, 0.2, 0.3, 0.4, 0.5])
        np.testing.assert_allclose(table["a"], [3.0, 3.0, 2.0, 2.0, 1.0])
        assert np.isnan(table["b"].iloc[0])
        np.testing.assert_allclose(table["b"].iloc[1:], [5.0, 5.0, 4.0, 4.0])

    def test_single_trace_by_iteration(self, tmp_path):
        a = write_trace_csv(tmp_path / "span.csv", [[1, 0.1, 3.0, 1, None, 0.5], [2, 0.2, 2.0, 1, None, 0.5]])
        out = tmp_path / "iter.csv"
        table = emit_plot_data([a], "loss_vs_iter", output=str(out))
        assert list(table.columns) == ["iteration", "span"]
        assert out.read_text().splitlines()[0] == "iteration,span"

    def test_suboptimality(self, tmp_path):
        a = write_trace_csv(tmp_path / "a.csv", [[1, 0.1, 3.0, 1, None, None], [2, 0.2, 1.5, 1, None, None]])
        b = write_trace_csv(tmp_path / "b.csv", [[1, 0.1, 2.0, 1, None, None], [2, 0.2, 1.0, 1, None, None]])
        table = emit_plot_data([a, b], "loss_vs_iter", suboptimality=True)
        np.testing.assert_allclose(table["a"], [2.0, 0.5])
        np.testing.assert_allclose(table["b"], [1.0, 0.0])

    def test_hessian_error_omits_unprobed(self, tmp_path, caplog):
        span = write_trace_csv(tmp_path / "span.csv", [[1, 0.1, 3.0, 1, 0.2, 0.5]])
        gd = write_trace_csv(tmp_path / "gd.csv", [[1, 0.1, 3.0, 1, None, None]])
        with caplog.at_level(logging.WARNING):
            table = emit_plot_data([span, gd], "hessian_err")
        assert list(table.columns) == ["iteration", "span"]
        assert any("gd" in record.getMessage() for record in caplog.records)

    def test_incompatible_inputs(self, tmp_path):
        other = tmp_path / "other.csv"
        other.write_text("x,y\n1,2\n")
        with pytest.raises(IncompatibleTraces):
            emit_plot_data([str(other)], "loss_vs_iter")
        gd = write_trace_csv(tmp_path / "gd.csv", [[1, 0.1, 3.0, 1, None, None]])
        with pytest.raises(IncompatibleTraces):
            emit_plot_data([gd], "hessian_err")
        with pytest.raises(IncompatibleTraces):
            emit_plot_data([gd, gd], "loss_vs_iter")


class TestScaling:
    def test_table_shape_and_newsamp_cap(self):
        cfg = ScalingConfig(dims=(20, 40), l=4, m=2, q=1, steps=3, warmup=1, newsamp_max_dim=30)
        table = per_iteration_scaling(cfg)
        assert list(table["d"]) == [20, 40]
        assert (table["span_step_s"] > 0).all()
        assert table["newsamp_step_s"].iloc[0] > 0
        assert np.isnan(table["newsamp_step_s"].iloc[1])
        assert list(growth_factors(table)["d"]) == [40]


class TestCommandLine:
    def test_run_and_plot(self, tmp_path):
        assert main(["run", quadratic_config(tmp_path)]) == EXIT_OK
        out = tmp_path / "plot.csv"
        traces = [str(tmp_path / "out" / "span.csv"), str(tmp_path / "out" / "gd.csv")]
        assert main(["plot", "loss_vs_time", *traces, "-o", str(out), "--suboptimality"]) == EXIT_OK
        assert out.read_text().splitlines()[0] == "wall_clock_s,span,gd"

    def test_exit_codes(self, tmp_path):
        assert main(["run", str(tmp_path / "missing.conf")]) == EXIT_CONFIG
        broken = quadratic_config(tmp_path, extra="lissa.method = lissa\nlissa.T = 5\nlissa.inner_steps = 200\nlissa.scale = 0.01\n")
        assert main(["run", broken]) == EXIT_METHOD

    def test_output_dir_override(self, tmp_path):
        assert main(["run", quadratic_config(tmp_path), "--output-dir", str(tmp_path / "elsewhere")]) == EXIT_OK
        assert (tmp_path / "elsewhere" / "summary.csv").exists()


CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, "configs")


@pytest.mark.parametrize(
    "name", ["synthetic_quadratic.conf", "desk_logistic.conf", "mnist49_logistic.conf", "huber_svm.conf"]
)
def test_shipped_experiments_parse(name):
    cfg = load_experiment(os.path.join(CONFIG_DIR, name))
    assert cfg.methods


def test_shipped_scaling_parses():
    cfg = load_scaling(os.path.join(CONFIG_DIR, "scaling.conf"))
    assert tuple(cfg.dims) == (100, 400, 1600)
