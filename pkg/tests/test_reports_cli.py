"""CSV/SVG output, the command-line runner and the property suites."""
import json

import pandas as pd
import pytest

import run_qmc
from evaluation.suites import SuiteStatus, run_suite, run_suites
from geometry.radii import separation_scan
from reports.csv_records import read_records_csv, thin_records, write_points_csv, write_records_csv
from reports.svg_plot import PlotSpec, render_svg, write_svg
from sequences.halton import IntegerBaseSet, halton_array, halton_prefix
from utils.errors import InvalidInputError, OutputWriteError


@pytest.fixture(scope="module")
def records():
    return separation_scan(halton_array(IntegerBaseSet((2, 3)), 100), 100)


# --- CSV ------------------------------------------------------------------------

def test_thinning_keeps_powers_and_last(records):
    assert [r.N for r in thin_records(records)] == [2, 4, 8, 10, 16, 32, 64, 100]
    assert len(thin_records(records, dense=True)) == 99


def test_records_csv_reads_back_exactly(tmp_path, records):
    path = tmp_path / "q.csv"
    assert write_records_csv(str(path), records, dense=True) == 99
    assert read_records_csv(str(path)) == records
    assert list(pd.read_csv(path).columns) == ["N", "q", "q_scaled"]


def test_cover_columns_only_when_present(tmp_path, records):
    rows = thin_records(records)
    rows[-1].h_est, rows[-1].h_bound = 0.1, 0.4
    path = tmp_path / "qh.csv"
    write_records_csv(str(path), rows, dense=True)
    rows[-1].h_est = rows[-1].h_bound = None
    assert list(pd.read_csv(path).columns) == ["N", "q", "q_scaled", "h_est", "h_bound"]
    back = read_records_csv(str(path))
    assert back[-1].h_bound == 0.4
    assert back[0].h_est is None


def test_points_csv_text():
    text = write_points_csv(None, halton_prefix(IntegerBaseSet((2, 3)), 3))
    lines = text.splitlines()
    assert lines[0] == "n,x1,x2"
    assert lines[1] == "0,0,0"
    assert lines[2].startswith("1,0.5,0.3333333333333333")


def test_empty_inputs_are_rejected(tmp_path):
    with pytest.raises(InvalidInputError):
        write_records_csv(str(tmp_path / "x.csv"), [])
    with pytest.raises(InvalidInputError):
        write_points_csv(None, [])


# --- SVG ------------------------------------------------------------------------

def test_svg_is_deterministic(tmp_path, records):
    spec = PlotSpec().add("d = 2", 2, thin_records(records))
    text = render_svg(spec)
    assert text == render_svg(PlotSpec().add("d = 2", 2, thin_records(records)))
    assert text.startswith("<svg") and text.endswith("</svg>\n")
    assert text.count('class="series"') == 1
    assert text.count('class="reference"') == 1
    path = write_svg(str(tmp_path / "q.svg"), spec)
    with open(path, encoding="utf-8") as f:
        assert f.read() == text


def test_svg_without_reference_lines(records):
    spec = PlotSpec(reference_lines=False).add("a", 2, records).add("b", 2, records[:10])
    text = render_svg(spec)
    assert text.count('class="series"') == 2
    assert 'class="reference"' not in text


def test_svg_needs_data():
    with pytest.raises(InvalidInputError):
        render_svg(PlotSpec())


# --- CLI ------------------------------------------------------------------------

def test_generate_to_file(tmp_path):
    path = tmp_path / "pts.csv"
    assert run_qmc.main(["generate", "--bases", "2,3", "--count", "8", "--csv", str(path)]) == 0
    df = pd.read_csv(path)
    assert len(df) == 8
    assert df["x1"].tolist()[:4] == [0.0, 0.5, 0.25, 0.75]


def test_generate_faure_digital(capsys):
    assert run_qmc.main(["generate", "--family", "digital", "--p", "3", "--faure", "--count", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,x1,x2,x3"
    assert len(out) == 5


def test_scan_writes_csv_and_svg(tmp_path):
    csv_path, svg_path = tmp_path / "q.csv", tmp_path / "q.svg"
    code = run_qmc.main(["-q", "scan", "--bases", "2,3", "--max-n", "64",
                         "--csv", str(csv_path), "--svg", str(svg_path), "--grid", "9"])
    assert code == 0
    df = pd.read_csv(csv_path)
    assert df["N"].tolist() == [2, 4, 8, 10, 16, 32, 64]
    assert {"h_est", "h_bound"} <= set(df.columns)
    assert svg_path.read_text(encoding="utf-8").startswith("<svg")


def test_scan_dimension_range(tmp_path):
    base = tmp_path / "q.csv"
    assert run_qmc.main(["-q", "scan", "--dims", "2-3", "--max-n", "32", "--csv", str(base)]) == 0
    assert (tmp_path / "q_d2.csv").exists()
    assert (tmp_path / "q_d3.csv").exists()


def test_scan_halton_type(tmp_path):
    path = tmp_path / "ht.csv"
    code = run_qmc.main(["-q", "scan", "--family", "halton-type", "--p", "2", "--polys", "0,1;1,1;1,1,1",
                         "--max-n", "64", "--norm", "linf", "--csv", str(path)])
    assert code == 0
    assert len(pd.read_csv(path)) == 7


def test_certify_writes_json(tmp_path):
    path = tmp_path / "faure.json"
    assert run_qmc.main(["-q", "certify", "faure", "--p", "3", "--w", "1", "--json", str(path)]) == 0
    data = json.loads(path.read_text(encoding="utf-8"))
    assert (data["n_dec"], data["m_dec"], data["N_dec"]) == ("1", "726", "729")
    assert data["verdict"] == "pass"
    assert run_qmc.main(["-q", "verify", "--certificate", str(path)]) == 0


def test_certify_several_orders(tmp_path):
    path = tmp_path / "h.json"
    assert run_qmc.main(["-q", "certify", "halton", "--bases", "2,3", "--k", "2,7", "--json", str(path)]) == 0
    first = json.loads((tmp_path / "h_1.json").read_text(encoding="utf-8"))
    second = json.loads((tmp_path / "h_2.json").read_text(encoding="utf-8"))
    assert first["verdict"] == "unconditional_only"
    assert second["verdict"] == "pass"


def test_certify_uses_local_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("QMC_CERT_CACHE_DIR", str(tmp_path / "cache"))
    args = ["-q", "certify", "halton-type", "--case", "2", "--w", "1", "--allow-local-cache"]
    assert run_qmc.main(args) == 0
    assert len(list((tmp_path / "cache").glob("*.json"))) == 1
    assert run_qmc.main(args) == 0


def test_tampered_cache_entry_is_rebuilt(tmp_path, monkeypatch):
    monkeypatch.setenv("QMC_CERT_CACHE_DIR", str(tmp_path / "cache"))
    args = ["-q", "certify", "halton-type", "--case", "2", "--w", "1", "--allow-local-cache"]
    assert run_qmc.main(args) == 0
    (entry,) = (tmp_path / "cache").glob("*.json")
    data = json.loads(entry.read_text(encoding="utf-8"))
    data["m_dec"] = "7"
    entry.write_text(json.dumps(data), encoding="utf-8")

    assert run_qmc.main(args) == 0
    rebuilt = json.loads(entry.read_text(encoding="utf-8"))
    assert rebuilt["m_dec"] == "8"
    assert rebuilt["verdict"] == "pass"


def test_invalid_input_exits_with_error(capsys):
    assert run_qmc.main(["-q", "certify", "halton-type", "--case", "2", "--p", "3"]) == 1
    assert "Error:" in capsys.readouterr().err
    assert run_qmc.main(["-q", "scan", "--family", "halton-type", "--max-n", "10"]) == 1


def test_cover_command(tmp_path):
    path = tmp_path / "cover.json"
    assert run_qmc.main(["-q", "cover", "--bases", "2,3", "--max-n", "16", "--grid", "17",
                         "--json", str(path)]) == 0
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["h_est"] <= data["h_bound"]
    assert data["mesh_ratio"] == pytest.approx(data["h_est"] / data["q"])


def test_parse_dims():
    assert run_qmc.parse_dims("2-5") == (2, 5)
    assert run_qmc.parse_dims("3") == (3, 3)
    with pytest.raises(InvalidInputError):
        run_qmc.parse_dims("5-2")


# --- suites ---------------------------------------------------------------------

@pytest.mark.parametrize("name", ["intervals", "t-property", "scrambling"])
def test_fast_suites_pass(name):
    result = run_suite(name, seed=0)
    assert result.status is SuiteStatus.PASS, result.checks


@pytest.mark.slow
@pytest.mark.parametrize("name", ["lemmas", "faure", "certificates"])
def test_slow_suites_pass(name):
    assert run_suite(name).passed


def test_run_suites_writes_progress(tmp_path):
    path = tmp_path / "progress.json"
    seen = []
    summary = run_suites(["intervals"], progress_path=str(path), on_result=seen.append)
    assert summary["success"]
    assert summary["statistics"] == {"total": 1, "pass": 1, "fail": 0, "error": 0}
    assert [r.name for r in seen] == ["intervals"]
    assert json.loads(path.read_text(encoding="utf-8"))["status"] == "completed"


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_verify_command_runs_suites(tmp_path):
    path = tmp_path / "summary.json"
    assert run_qmc.main(["-q", "verify", "--suite", "intervals", "--json", str(path)]) == 0
    assert json.loads(path.read_text(encoding="utf-8"))["success"]


# --- output files -----------------------------------------------------------------

def test_writers_create_missing_directories(tmp_path, records):
    nested = tmp_path / "a" / "b"
    write_records_csv(str(nested / "q.csv"), records)
    write_points_csv(str(nested / "points.csv"), halton_prefix(IntegerBaseSet((2, 3)), 4))
    write_svg(str(nested / "q.svg"), PlotSpec().add("halton 2,3", 2, records))
    # no temp files left behind
    assert sorted(p.name for p in nested.iterdir()) == ["points.csv", "q.csv", "q.svg"]
    assert len(read_records_csv(str(nested / "q.csv"))) == 8


def test_scan_into_new_directory(tmp_path):
    out = tmp_path / "new" / "dir"
    assert run_qmc.main(["-q", "scan", "--bases", "2,3", "--max-n", "32",
                         "--csv", str(out / "q.csv"), "--svg", str(out / "q.svg")]) == 0
    assert (out / "q.csv").exists()
    assert "<svg" in (out / "q.svg").read_text(encoding="utf-8")


def test_unwritable_output_is_an_error(tmp_path, records, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory", encoding="utf-8")
    with pytest.raises(OutputWriteError):
        write_svg(str(blocker / "q.svg"), PlotSpec().add("halton 2,3", 2, records))
    assert run_qmc.main(["-q", "scan", "--bases", "2,3", "--max-n", "16",
                         "--svg", str(blocker / "q.svg")]) == 1
    assert "Error:" in capsys.readouterr().err


def test_progress_output_follows_quiet_flag(tmp_path, capsys):
    args = ["scan", "--bases", "2,3", "--max-n", "16", "--csv", str(tmp_path / "q.csv")]
    assert run_qmc.main(args) == 0
    assert "[Stage 1/1]" in capsys.readouterr().out
    assert run_qmc.main(["-q"] + args) == 0
    assert capsys.readouterr().out == ""
    # -v raises the log level only; progress still follows -q
    assert run_qmc.main(["-v", "-q"] + args) == 0
    assert capsys.readouterr().out == ""
