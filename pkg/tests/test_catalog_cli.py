import json
import subprocess
import sys

import pytest

from sphereflows import GenerationConfig, MarkedMap, SourceMark, realize
from sphereflows.catalog import (Catalog, CatalogEntry, PAPER_EXPECTED_FLOWS,
                                 UnknownCodeError, UnsupportedFormatError,
                                 build_bifurcation_catalog, build_census_report,
                                 build_map_catalog, entry_to_dot,
                                 export_entries, load_paper_labels,
                                 resolve_marked)


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "sphereflows", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def maps3():
    return build_map_catalog(GenerationConfig(3))


@pytest.fixture(scope="module")
def bifs2():
    return build_bifurcation_catalog("saddle-node", 2)


@pytest.fixture(scope="module")
def report():
    return build_census_report()


class TestCatalog:
    def test_codes_unique_and_sorted(self, maps3):
        codes = [e.code for e in maps3.entries]
        assert len(set(codes)) == len(codes) == 14

    def test_json_round_trip(self, maps3, bifs2):
        for catalog in (maps3, bifs2):
            assert Catalog.loads(catalog.dumps()) == catalog

    def test_entry_round_trip(self, bifs2):
        for e in bifs2.entries:
            assert CatalogEntry.from_dict(json.loads(json.dumps(e.to_dict()))) == e

    def test_paper_labels_cover_small_catalogs(self, maps3):
        labels = {e.paper_label for e in maps3.entries}
        assert labels == {f"G^3_{i}" for i in range(1, 15)}
        for e in (1, 2):
            catalog = build_map_catalog(GenerationConfig(e))
            assert all(entry.paper_label for entry in catalog.entries)

    def test_flow_labels_cover_items_1_to_16(self, bifs2):
        assert len(bifs2.entries) == 10
        labelled = {e.paper_label for e in bifs2.entries}
        assert labelled == {f"Fig3:{i}" for i in range(2, 7)} | \
               {f"Fig3:{i}" for i in range(8, 13)}
        bifs1 = build_bifurcation_catalog("saddle-node", 1)
        assert [e.paper_label for e in bifs1.entries] == ["Fig3:1", "Fig3:7"]
        t2 = build_bifurcation_catalog("saddle-connection", 2)
        assert {e.paper_label for e in t2.entries} == {f"Fig3:{i}"
                                                       for i in range(13, 17)}

    def test_marked_summary_matches_realize(self, bifs2):
        for e in bifs2.entries:
            mm = resolve_marked(e)
            assert realize(mm).point_counts() == e.singular_points
            assert e.mark["kind"] == mm.mark.kind

    def test_unmarked_summary_is_the_morse_flow(self, maps3):
        for e in maps3.entries:
            assert e.singular_points == {"source": e.n_vertices,
                                         "saddle": e.n_edges,
                                         "sink": e.n_faces}

    def test_unknown_code(self, maps3):
        with pytest.raises(UnknownCodeError):
            maps3.entry("E:1;s:0,1;a:1,0;m:-" + "x")

    def test_labels_file_is_curated(self):
        labels = load_paper_labels()
        assert labels["E:1;s:0,1;a:1,0;m:-"] == "G^1_1"
        assert labels["E:1;s:1,0;a:1,0;m:-"] == "G^1_2"


class TestCensusReport:
    def test_flow_rows_carry_expected_values(self, report):
        rows = report.rows_in("flows by singular points")
        assert [r.expected for r in rows] == [PAPER_EXPECTED_FLOWS[p]
                                              for p in range(3, 11)]

    def test_small_censuses_match(self, report):
        by_label = {r.label: r for r in report.rows}
        for pts in (3, 4, 5, 6):
            row = next(r for r in report.rows_in("flows by singular points")
                       if r.label.startswith(f"{pts} points"))
            assert row.match is True

    def test_nine_point_rows_have_deltas_and_parity(self, report):
        breakdown = report.rows_in("9 points breakdown")
        assert any(r.expected == 64 for r in breakdown)
        assert any(r.expected == 89 for r in breakdown)
        assert report.parity["source_classes"] == report.parity["sink_classes"]
        assert report.parity["per_map_duality_bijection_verified"] is True

    def test_ten_point_categories(self, report):
        rows = {r.expected: r for r in report.rows_in("10 points breakdown")}
        assert rows[16].match is True
        assert rows[14].match is True
        assert rows[130].computed == 135

    def test_mismatches_carry_notes(self, report):
        assert report.notes
        assert any("217" in n for n in report.notes)

    def test_report_round_trips_to_json(self, report):
        doc = json.loads(report.dumps())
        assert doc["schema_version"] == 1
        assert len(doc["rows"]) == len(report.rows)

    def test_text_table_mentions_every_row(self, report):
        text = report.to_text()
        for row in report.rows:
            assert row.label in text


class TestExports:
    def test_dot_of_chain(self, named):
        catalog = build_map_catalog(GenerationConfig(2))
        entry = catalog.entry(named["chain2"].canonical_code().token())
        dot = entry_to_dot(entry)
        assert dot.count(" -- ") == 2
        assert dot.count("[degree=") == 3

    def test_dot_marks_annotated(self, bifs2):
        marked = [e for e in bifs2.entries if e.mark["kind"] == "source"]
        dot = entry_to_dot(marked[0])
        assert 'mark="source endpoint' in dot

    def test_diagram_json_lists_three_points(self, named):
        catalog = build_bifurcation_catalog("saddle-node", 1)
        marked = MarkedMap(named["segment"], SourceMark(0))
        entry = catalog.entry(marked.canonical_code().token())
        doc = json.loads(export_entries([entry], "diagram-json"))
        assert len(doc[0]["diagram"]["points"]) == 3

    def test_json_export_round_trips(self, maps3):
        doc = json.loads(export_entries(list(maps3.entries), "json"))
        assert [CatalogEntry.from_dict(d) for d in doc] == list(maps3.entries)

    def test_unsupported_format(self, maps3):
        with pytest.raises(UnsupportedFormatError):
            export_entries(list(maps3.entries), "pdf")
        with pytest.raises(UnsupportedFormatError):
            export_entries(list(maps3.entries), "diagram-json")


class TestCli:
    def test_maps_writes_catalog(self, tmp_path):
        out = tmp_path / "m2.json"
        res = run_cli("maps", "2", "--out", str(out))
        assert res.returncode == 0
        assert "4 maps with 2 edge(s)" in res.stdout
        assert len(Catalog.loads(out.read_text()).entries) == 4

    def test_maps_out_of_range_exits_2(self, tmp_path):
        res = run_cli("maps", "9", cwd=tmp_path)
        assert res.returncode == 2
        assert "error" in res.stderr

    def test_bifurcations_table(self, tmp_path):
        out = tmp_path / "b.json"
        res = run_cli("bifurcations", "saddle-connection", "2", "--out", str(out))
        assert res.returncode == 0
        assert "4 saddle-connection classes" in res.stdout

    def test_bifurcations_out_of_range_exits_2(self, tmp_path):
        res = run_cli("bifurcations", "saddle-connection", "1", cwd=tmp_path)
        assert res.returncode == 2

    def test_usage_error_exits_2(self):
        res = run_cli("maps")
        assert res.returncode == 2

    def test_export_dot(self, tmp_path):
        catalog_path = tmp_path / "m2.json"
        run_cli("maps", "2", "--out", str(catalog_path))
        out = tmp_path / "m2.dot"
        res = run_cli("export", str(catalog_path), "--format", "dot",
                      "--out", str(out))
        assert res.returncode == 0
        assert out.read_text().count("graph ") == 4

    def test_export_unknown_code_exits_2(self, tmp_path):
        catalog_path = tmp_path / "m2.json"
        run_cli("maps", "2", "--out", str(catalog_path))
        res = run_cli("export", str(catalog_path), "--code", "nope",
                      "--format", "json", cwd=tmp_path)
        assert res.returncode == 2

    def test_export_missing_catalog_exits_2(self, tmp_path):
        res = run_cli("export", str(tmp_path / "absent.json"),
                      "--format", "json")
        assert res.returncode == 2
