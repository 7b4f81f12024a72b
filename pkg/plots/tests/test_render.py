import numpy as np
import pytest

from kleplots import render
from kleplots.io import SchemaError, mode_columns, read_table


class TestReadTable:
    def test_missing_column_named(self, fixture_csvs):
        with pytest.raises(SchemaError, match="sigma"):
            read_table(fixture_csvs / "spectrum.csv", ["k", "sigma"])

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(SchemaError, match="empty"):
            read_table(p, ["k"])

    def test_header_only_rejected(self, tmp_path):
        p = tmp_path / "header.csv"
        p.write_text("k,lambda\n")
        with pytest.raises(SchemaError, match="no data rows"):
            read_table(p, ["k", "lambda"])

    def test_non_numeric_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("k,lambda\n1,abc\n")
        with pytest.raises(SchemaError, match="non-numeric"):
            read_table(p, ["k", "lambda"])

    def test_column_arrays(self, fixture_csvs):
        tab = read_table(fixture_csvs / "spectrum.csv", ["k", "lambda"])
        assert tab["k"].shape == (30,)
        assert np.all(np.diff(tab["lambda"]) < 0)

    def test_mode_columns_sorted(self, fixture_csvs):
        tab = read_table(fixture_csvs / "eigenvectors.csv", ["x0"])
        assert mode_columns(tab) == ["f_1", "f_2", "f_3", "f_4"]


@pytest.fixture()
def captured_figure(monkeypatch):
    """Intercept the final save so tests can inspect the axes."""
    box = {}

    def grab(fig, out_path):
        box["fig"] = fig
        box["out"] = out_path

    monkeypatch.setattr(render, "_finish", grab)
    return box


class TestFigureContent:
    def test_histogram_overlays_standard_normal(self, fixture_csvs, captured_figure):
        render.coefficient_histogram(fixture_csvs / "coefficients.csv", "x.png", 1)
        ax = captured_figure["fig"].axes[0]
        lines = ax.get_lines()
        assert len(lines) == 1
        y = lines[0].get_ydata()
        assert y.max() == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-3)
        assert len(ax.patches) >= 10  # histogram bars present

    def test_spectrum_log_scale_with_overlay(self, fixture_csvs, captured_figure):
        render.spectrum(
            fixture_csvs / "spectrum.csv",
            "x.png",
            fixture_csvs / "analytic_spectrum.csv",
        )
        ax = captured_figure["fig"].axes[0]
        assert ax.get_yscale() == "log"
        assert len(ax.get_lines()) == 2

    def test_kl_convergence_trendline_uses_fit(self, fixture_csvs, captured_figure):
        render.kl_convergence(fixture_csvs / "kl_divergence_summary.csv", "x.png")
        ax = captured_figure["fig"].axes[0]
        assert ax.get_xscale() == "log" and ax.get_yscale() == "log"
        trend = ax.get_lines()[-1]
        xs, ys = trend.get_xdata(), trend.get_ydata()
        assert np.allclose(ys, 0.15 * xs**-0.57, rtol=1e-12)

    def test_requested_mode_missing_is_schema_error(self, fixture_csvs):
        with pytest.raises(SchemaError, match="f_9"):
            render.eigenfunctions(
                fixture_csvs / "eigenvectors.csv", "x.png", modes=(9,)
            )

    def test_histogram_unknown_mode_rejected(self, fixture_csvs):
        with pytest.raises(SchemaError, match="mode 7"):
            render.coefficient_histogram(
                fixture_csvs / "coefficients.csv", "x.png", 7
            )
