import csv
import io
import json
import os
import subprocess

import pytest

CLI = os.environ.get("KLCALC_CLI", "klcalc")


def run(*args, cache_dir=None, check_code=0):
    env = dict(os.environ)
    env.pop("KL_CACHE_DIR", None)
    if cache_dir is not None:
        env["KL_CACHE_DIR"] = str(cache_dir)
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, env=env)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def run_json(*args, **kw):
    return json.loads(run(*args, **kw).stdout)


@pytest.fixture
def cache(tmp_path):
    return tmp_path / "cache"


def test_kl_example(cache):
    out = run_json("kl", "--type", "A3", "--y", "", "--x", "2132", cache_dir=cache)
    assert out["P"] == "1 + q"
    assert out["h"] == "v^2 + v^4"
    assert out["ldiff"] == 4


def test_andersen_example(cache):
    out = run_json("andersen", "--type", "A2", "--ybar", "", "--xbar", "121", cache_dir=cache)
    assert out["layers"] == {"3": 1}
    assert out["total"] == 1
    assert list(out) == ["ybar", "xbar", "y", "x", "ldiff", "P", "h", "layers", "total"]


def test_group_example():
    out = run_json("group", "--type", "B2")
    assert out["order"] == 8
    assert out["longest_length"] == 4
    assert run_json("group", "--type", "[[1,3],[3,1]]")["type"] == "A2"


def test_mu_and_klbasis(cache):
    assert run_json("mu", "--type", "A2", "--y", "1", "--x", "12", cache_dir=cache)["mu"] == 1
    assert run_json("mu", "--type", "A2", "--y", "", "--x", "12", cache_dir=cache)["mu"] == 0
    terms = run_json("klbasis", "--type", "A2", "--x", "121", cache_dir=cache)["terms"]
    assert len(terms) == 6
    assert {t["P"] for t in terms} == {"1"}


def test_bs(cache):
    out = run_json("bs", "--type", "A2", "--word", "11", cache_dir=cache)
    assert out["kl_decomposition"] == [{"y": "1", "multiplicity": "v^-1 + v"}]


def test_table_counts(cache):
    assert run_json("table", "--type", "A2", cache_dir=cache)["count"] == 19
    full = run_json("table", "--type", "A2", "--singular", "1,2", cache_dir=cache)
    assert full["count"] == 1
    assert full["cross_check"] is True


def test_weight_front_end(cache):
    out = run_json("table", "--type", "A2", "--weight", "0,-1", cache_dir=cache)
    assert out["ambient"] == "A2"
    assert out["singular"] == "2"
    run("table", "--type", "A2", "--weight", "-2,0", check_code=3)
    run("table", "--type", "A2", "--weight", "0", check_code=2)


def test_formats_agree(cache):
    js = run_json("table", "--type", "B2", "--singular", "1", cache_dir=cache)
    rows = list(csv.DictReader(io.StringIO(run("table", "--type", "B2", "--singular", "1", "--format", "csv", cache_dir=cache).stdout)))
    assert len(rows) == js["count"]
    for r, j in zip(rows, js["reports"]):
        assert r["P"] == j["P"] and r["h"] == j["h"] and int(r["total"]) == j["total"]
    latex = run("kl", "--type", "A3", "--y", "", "--x", "2132", "--format", "latex", cache_dir=cache).stdout
    assert "v^{2} + v^{4}" in latex and latex.startswith("\\begin{tabular}")


def test_exit_codes(tmp_path):
    run(check_code=2)
    run("kl", "--type", "A3", "--y", "5", "--x", "1", check_code=2)
    run("kl", "--type", "A3", "--x", "1", check_code=2)
    run("group", "--type", "[[1,3,3],[3,1,3],[3,3,1]]", check_code=3)
    run("group", "--type", "A3", "--format", "yaml", check_code=2)
    m = tmp_path / "m.json"
    m.write_text('[["v^5"]]')
    run("filtration", "--matrix", str(m), "--trunc", "3", check_code=3)
    run("filtration", "--matrix", str(tmp_path / "missing.json"), check_code=2)


def test_filtration(tmp_path):
    m = tmp_path / "m.json"
    m.write_text('[["v", "v"], ["v", "v + v^2"]]')
    out = run_json("filtration", "--matrix", str(m))
    assert out["valuations"] == [1, 2]
    assert out["layers"] == {"1": 1, "2": 1}


def test_large_rank_words():
    commuting = [[1 if i == j else 2 for j in range(10)] for i in range(10)]
    out = run_json("kl", "--type", json.dumps(commuting), "--y", "", "--x", "10,2", "--no-cache")
    assert out["x"] == "2,10"
    assert out["h"] == "v^2"
    run("kl", "--type", "A10", "--y", "", "--x", "1", "--no-cache", check_code=3)


def test_cache_roundtrip(tmp_path, cache):
    path = tmp_path / "a3.jsonl"
    run("cache", "save", "--type", "A3", "--path", str(path), "--no-cache")
    first = path.read_bytes()
    assert json.loads(first.splitlines()[0]) == {"format": "klcache", "version": 1, "group": "A3", "normalization": "soergel-v"}
    verified = run_json("cache", "verify", "--path", str(path))
    assert verified["canonical"] and verified["consistent"]
    loaded = run_json("cache", "load", "--path", str(path), cache_dir=cache)
    installed = loaded["installed"]
    assert open(installed, "rb").read() == first
    cold = run("kl", "--type", "A3", "--y", "1", "--x", "2132", "--no-cache").stdout
    warm = run("kl", "--type", "A3", "--y", "1", "--x", "2132", cache_dir=cache).stdout
    assert cold == warm
    assert open(installed, "rb").read() == first


def test_no_cache_writes_nothing(cache):
    run("kl", "--type", "B2", "--y", "", "--x", "1212", "--no-cache", cache_dir=cache)
    assert not cache.exists()
    run("kl", "--type", "B2", "--y", "", "--x", "1212", cache_dir=cache)
    assert (cache / "B2.klcache.jsonl").exists()


def test_damaged_cache_is_ignored(cache):
    cache.mkdir()
    (cache / "A2.klcache.jsonl").write_text("not json\n")
    proc = run("kl", "--type", "A2", "--y", "", "--x", "121", cache_dir=cache)
    assert json.loads(proc.stdout)["h"] == "v^3"
    assert "ignoring cache" in proc.stderr


def test_tampered_cache_fails_verification(tmp_path):
    path = tmp_path / "a2.jsonl"
    run("cache", "save", "--type", "A2", "--path", str(path), "--no-cache")
    text = path.read_text().replace("[[3,1]]", "[[3,2]]")
    path.write_text(text)
    run("cache", "verify", "--path", str(path), check_code=3)


def test_bench_is_exact():
    out = run_json("bench", "--type", "A3")
    assert out["elements"] == 24
    assert isinstance(out["ms"], int)
