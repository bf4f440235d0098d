import json

import pytest

from compsaw.cli import main
from compsaw.oracle import dfs_count_bridges


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        return main([str(a) for a in argv])

    return _run


def test_enumerate_deterministic(run, tmp_path):
    assert run("enumerate", "bridges", "--h-max", 4, "--n-max", 14, "--out", "bh.json") == 0
    first = (tmp_path / "bh.json").read_bytes()
    assert run("enumerate", "bridges", "--h-max", 4, "--n-max", 14, "--out", "bh.json",
               "--threads", 2) == 0
    assert (tmp_path / "bh.json").read_bytes() == first
    data = json.loads(first)
    assert data[0]["h"] == 1 and data[0]["coeffs"][:3] == ["0", "1", "2"]
    man = json.loads((tmp_path / "bh.json.manifest.json").read_text())
    assert man["command"] == "enumerate" and man["kind"] == "bridges"
    assert set(man["outputs"]) == {"bh.json"}


def test_oracle_outputs(run, tmp_path):
    assert run("enumerate", "oracle-bridges", "--n-max", 10, "--out", "o.csv") == 0
    a = (tmp_path / "o.csv").read_text()
    assert a == dfs_count_bridges(10).to_csv()
    assert run("enumerate", "oracle-bridges", "--n-max", 10, "--out", "o.csv") == 0
    assert (tmp_path / "o.csv").read_text() == a
    for kind in ("oracle-walks", "oracle-polygons", "walks", "walks-centered"):
        assert run("enumerate", kind, "--n-max", 8, "--out", f"{kind}.csv") == 0


def test_exit_codes(run, capsys):
    assert run("enumerate", "oracle-walks", "--n-max", 30, "--out", "x.csv") == 3
    assert run("partition", "--table", "missing.csv", "--u", "1") == 2
    assert run("extend", "--in", "missing.json", "--w-max", 2, "--out", "e.csv") == 2
    with pytest.raises(SystemExit) as info:
        run("enumerate", "spirals", "--n-max", 3, "--out", "x.csv")
    assert info.value.code == 2
    assert run("lemma", "--r", "0", "--alpha", "-1") == 2


def test_pipeline(run, tmp_path):
    assert run("enumerate", "bridges", "--h-max", 4, "--n-max", 14, "--out", "bh.json") == 0
    assert run("extend", "--in", "bh.json", "--w-max", 4, "--out", "bh_ext.csv") == 0
    ext = (tmp_path / "bh_ext.csv").read_text().splitlines()
    assert ext[0] == "n,h,count" and ext[-1] == "14,14,1"
    assert run("partition", "--table", "bh_ext.csv", "--u", "0.6931471805599453",
               "--normalized", "--out", "s.csv") == 0
    head = json.loads((tmp_path / "s.csv").read_text().splitlines()[0][2:])
    assert head["beta_mode"] == "normalized" and head["provenance"] == "bridges"
    for task in ("mu1", "sigma", "g", "power"):
        assert run("analyze", "--series", "s.csv", "--task", task, "--out", f"{task}.json",
                   "--plot-csv", f"{task}_plot.csv") == 0
    rep = json.loads((tmp_path / "mu1.json").read_text())
    assert len(rep["records"]) == 9 and "log_mu1" in rep["combined"]
    assert (tmp_path / "sigma_plot.csv").read_text().startswith("plot,x,y\n")
    before = (tmp_path / "mu1.json").read_bytes()
    run("analyze", "--series", "s.csv", "--task", "mu1", "--out", "mu1.json",
        "--plot-csv", "mu1_plot.csv")
    assert (tmp_path / "mu1.json").read_bytes() == before


def test_analyze_nc_is_success(run, tmp_path):
    run("enumerate", "oracle-bridges", "--n-max", 6, "--out", "b.csv")
    run("partition", "--table", "b.csv", "--u", "0.5", "--out", "s.csv")
    assert run("analyze", "--series", "s.csv", "--task", "mu1", "--method", "direct_root",
               "--window", "1:3", "--out", "r.json") == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["records"][0]["estimates"] == "n.c."
    assert run("analyze", "--series", "s.csv", "--task", "mu1", "--method", "nope") == 2
    assert run("analyze", "--series", "s.csv", "--task", "alpha") == 2


def test_rw_and_lemma(run, tmp_path):
    assert run("rw", "--n", 100, 10000, "--u", 1, "--out", "rw.csv") == 0
    rows = (tmp_path / "rw.csv").read_text().splitlines()
    assert rows[0] == "n,exact,asymptotic,ratio" and len(rows) == 3
    assert run("lemma", "--r=-19/12", "--alpha", "4/3", "--m-sweep", "1e4:1e6",
               "--out", "l.csv") == 0
    rows = (tmp_path / "l.csv").read_text().splitlines()
    assert rows[0] == "m,quadrature,closed_form,ratio" and len(rows) == 4
    assert run("lemma", "--r", "-1.58333333", "--alpha", "1.3333333",
               "--m-sweep", "1e4:1e5") == 0
