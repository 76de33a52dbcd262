"""String-assembled SVG output: determinism, geometry, and layer math."""

import re

import numpy as np
import pytest

from profilekit.svgplot import (
    MARGIN,
    OTHER_COLOR,
    PlotSpec,
    emit_svg,
    read_table,
    stack_layers,
    write_svg,
)

CURVE_HEADER = ["p", "value"]
CURVE_ROWS = [["0.0", "0.0"], ["0.5", "0.25"], ["1.0", "1.0"]]


def polyline_points(svg):
    match = re.search(r'<polyline points="([^"]+)"', svg)
    assert match is not None
    return [tuple(float(v) for v in pair.split(",")) for pair in match.group(1).split()]


class TestDeterminism:
    def test_identical_inputs_give_identical_bytes(self):
        spec = PlotSpec(kind="curve")
        a = emit_svg(spec, CURVE_HEADER, CURVE_ROWS)
        b = emit_svg(spec, CURVE_HEADER, CURVE_ROWS)
        assert a == b

    def test_write_matches_emit(self, tmp_path):
        spec = PlotSpec(kind="scatter")
        path = tmp_path / "plot.svg"
        write_svg(spec, CURVE_HEADER, CURVE_ROWS, path)
        assert path.read_text() == emit_svg(spec, CURVE_HEADER, CURVE_ROWS)

    def test_document_skeleton(self):
        svg = emit_svg(PlotSpec(kind="curve"), CURVE_HEADER, CURVE_ROWS)
        assert svg.startswith("<svg ")
        assert svg.endswith("</svg>\n")
        assert 'viewBox="0 0 640 480"' in svg


class TestCurve:
    def test_identity_line_spans_the_margins(self):
        spec = PlotSpec(kind="curve", width=640, height=480)
        svg = emit_svg(spec, CURVE_HEADER, [["0", "0"], ["1", "1"]])
        pts = polyline_points(svg)
        assert pts[0] == (MARGIN, spec.height - MARGIN)
        assert pts[-1] == (spec.width - MARGIN, MARGIN)

    def test_midpoint_lands_mid_viewport(self):
        spec = PlotSpec(kind="curve", width=640, height=480)
        svg = emit_svg(spec, CURVE_HEADER, [["0", "0"], ["0.5", "0.5"], ["1", "1"]])
        x_mid, y_mid = polyline_points(svg)[1]
        assert x_mid == pytest.approx((MARGIN + spec.width - MARGIN) / 2, abs=0.01)
        assert y_mid == pytest.approx((MARGIN + spec.height - MARGIN) / 2, abs=0.01)

    def test_flat_series_still_renders(self):
        svg = emit_svg(PlotSpec(kind="curve"), CURVE_HEADER, [["0", "0.5"], ["1", "0.5"]])
        ys = {y for _, y in polyline_points(svg)}
        assert len(ys) == 1  # flat line, padded scale keeps it on-canvas

    def test_axis_labels_use_four_significant_digits(self):
        svg = emit_svg(
            PlotSpec(kind="curve"), CURVE_HEADER, [["0", "0.123456"], ["1", "1.0"]]
        )
        assert ">0.1235<" in svg

    def test_non_numeric_cell_rejected(self):
        with pytest.raises(ValueError, match="non-numeric"):
            emit_svg(PlotSpec(kind="curve"), CURVE_HEADER, [["0", "abc"]])

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError, match="no data"):
            emit_svg(PlotSpec(kind="curve"), CURVE_HEADER, [])


class TestScatter:
    def test_one_circle_per_row(self):
        svg = emit_svg(PlotSpec(kind="scatter"), CURVE_HEADER, CURVE_ROWS)
        assert svg.count("<circle ") == len(CURVE_ROWS)


class TestStackLayers:
    def test_onehot_channel_fills_the_whole_band(self):
        channels = np.zeros((4, 3))
        channels[:, 1] = 1.0
        names, edges = stack_layers(["a", "b", "c"], channels, top_k=2)
        assert names == ["b", "a", "other"]
        np.testing.assert_allclose(edges[:, 0], 0.0, atol=0)
        np.testing.assert_allclose(edges[:, -1], 1.0, atol=1e-12)

    def test_edges_accumulate_the_kept_channels(self):
        rng = np.random.default_rng(110)
        channels = rng.random((6, 7))
        channels /= channels.sum(axis=1, keepdims=True)
        names, edges = stack_layers([f"c{i}" for i in range(7)], channels, top_k=3)
        assert names[-1] == "other"
        assert len(names) == 4
        assert edges.shape == (6, 5)
        np.testing.assert_allclose(edges[:, -1], 1.0, atol=1e-12)
        widths = np.diff(edges, axis=1)
        assert np.all(widths >= 0)
        means = [channels[:, i].mean() for i in range(7)]
        kept = sorted(means, reverse=True)[:3]
        np.testing.assert_allclose(sorted(widths[:, :3].mean(axis=0), reverse=True), kept)

    def test_small_channel_count_skips_the_other_band(self):
        channels = np.full((3, 2), 0.5)
        names, edges = stack_layers(["a", "b"], channels, top_k=5)
        assert names == ["a", "b"]
        assert edges.shape == (3, 3)


class TestStackplot:
    def test_bands_fill_the_vertical_viewport(self):
        spec = PlotSpec(kind="stackplot", top_k=2)
        header = ["p", "c0", "c1", "c2"]
        rows = [["0", "0.2", "0.5", "0.3"], ["1", "0.1", "0.6", "0.3"]]
        svg = emit_svg(spec, header, rows)
        polygons = re.findall(r'<polygon points="([^"]+)"', svg)
        assert len(polygons) == 3  # two kept channels plus the other band
        ys = [
            float(pair.split(",")[1])
            for poly in polygons
            for pair in poly.split()
        ]
        assert min(ys) == pytest.approx(MARGIN, abs=0.01)
        assert max(ys) == pytest.approx(spec.height - MARGIN, abs=0.01)
        assert OTHER_COLOR in svg

    def test_legend_names_every_band(self):
        spec = PlotSpec(kind="stackplot", top_k=1)
        header = ["p", "alpha", "beta"]
        rows = [["0", "0.9", "0.1"], ["1", "0.8", "0.2"]]
        svg = emit_svg(spec, header, rows)
        assert ">alpha</text>" in svg
        assert ">other</text>" in svg
        assert ">beta</text>" not in svg


class TestPie:
    def test_wedge_per_positive_count_and_legend_per_row(self):
        rows = [["Easy", "3"], ["Hard", "1"], ["Compatible", "0"]]
        svg = emit_svg(PlotSpec(kind="pie"), ["class", "count"], rows)
        assert svg.count("<path ") == 2  # zero-count classes draw no wedge
        assert svg.count("<rect ") == 1 + 3  # background plus one legend chip each
        assert "Easy (3)" in svg
        assert "Compatible (0)" in svg

    def test_single_class_draws_a_full_circle(self):
        svg = emit_svg(PlotSpec(kind="pie"), ["class", "count"], [["Easy", "7"]])
        assert svg.count("<circle ") == 1
        assert svg.count("<path ") == 0

    def test_negative_and_zero_totals_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            emit_svg(PlotSpec(kind="pie"), ["class", "count"], [["Easy", "-1"]])
        with pytest.raises(ValueError, match="positive total"):
            emit_svg(PlotSpec(kind="pie"), ["class", "count"], [["Easy", "0"]])


class TestHeatmap:
    def test_cell_grid_and_annotations(self):
        header = ["", "a", "b"]
        rows = [["a", "0.0", "0.25"], ["b", "0.25", "0.0"]]
        svg = emit_svg(PlotSpec(kind="heatmap"), header, rows)
        assert svg.count("<rect ") == 1 + 4  # background plus one rect per cell
        assert svg.count(">0.25<") == 2  # one annotation per matching cell
        assert ">a</text>" in svg and ">b</text>" in svg

    def test_label_escaping(self):
        header = ["", "a<b"]
        rows = [["r&d", "1.0"]]
        svg = emit_svg(PlotSpec(kind="heatmap"), header, rows)
        assert "a&lt;b" in svg
        assert "r&amp;d" in svg

    def test_ragged_rows_rejected(self):
        header = ["", "a", "b"]
        rows = [["r0", "0.1"], ["r1", "0.2", "0.3"]]
        with pytest.raises(ValueError):
            emit_svg(PlotSpec(kind="heatmap"), header, rows)


class TestSpecAndIo:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            PlotSpec(kind="sparkline")

    def test_tiny_viewport_rejected(self):
        with pytest.raises(ValueError, match="viewport"):
            PlotSpec(kind="curve", width=60, height=60)

    def test_non_positive_top_k_rejected(self):
        with pytest.raises(ValueError, match="top_k"):
            PlotSpec(kind="stackplot", top_k=0)

    def test_read_table_round_trip(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("p,value\n0.0,0.5\n1.0,0.75\n")
        header, rows = read_table(path)
        assert header == CURVE_HEADER
        assert rows == [["0.0", "0.5"], ["1.0", "0.75"]]

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="no table"):
            read_table(path)
