import json
import subprocess
import sys

import pytest

from cosetiq.cache import ENV_VAR, ArtifactCache, resolve_cache_dir
from cosetiq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_counts_examples(capsys):
    code, out, _ = run(capsys, "counts", "-q", "2", "-a", "1", "-n", "1", "--no-cache", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["sigma"] == ["1", "1"] and doc["kappa"] == ["2", "4"] and doc["sum"] == "6"
    code, out, _ = run(capsys, "counts", "-q", "2", "-a", "2", "-n", "2", "--no-cache", "--format", "json")
    doc = json.loads(out)
    assert doc["sigma"] == ["6", "9", "1"] and doc["pbl"] == "16" and doc["sum"] == "20160"


def test_counts_big(capsys):
    code, out, _ = run(capsys, "counts", "-q", "3", "-a", "3", "-n", "7", "--no-cache")
    assert code == 0 and "identity PASS" in out


def test_counts_csv(capsys):
    code, out, _ = run(capsys, "counts", "-q", "2", "-a", "2", "-n", "2", "--no-cache", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["rho,rank,sigma,kappa", "0,2,6,96", "1,1,9,1152", "2,0,1,9216"]


def test_verify_alpha1(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "-q", "2", "-a", "1", "-n", "1", "--cache-dir", str(tmp_path))
    assert code == 0
    assert out.splitlines()[0] == "all relations PASS (6 relation families, 9 instances)"


def test_structure_pbw(capsys, tmp_path):
    code, out, _ = run(capsys, "structure", "-q", "2", "-a", "2", "-n", "2", "--basis", "pbw",
                       "--cache-dir", str(tmp_path))
    assert code == 0
    assert "16-label table" in out and "associativity PASS" in out


def test_interpolate_theta_row(capsys, tmp_path):
    code, out, _ = run(capsys, "interpolate", "-q", "2", "-a", "1", "--samples", "1,2", "--holdout", "3",
                       "--cache-dir", str(tmp_path))
    assert code == 0
    assert "  -> theta: 2*t - 3" in out
    assert "  -> a(1): 2*t - 2" in out
    assert "holdout PASS" in out


def test_semisimple(capsys, tmp_path):
    code, out, _ = run(capsys, "semisimple", "-q", "2", "-a", "1", "--cache-dir", str(tmp_path))
    assert code == 0
    assert "t=1/2 (x2)" in out and "semisimplicity PASS" in out


def test_byte_identical_artifacts(capsys, tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"out{i}.json"
        code, _, _ = run(capsys, "structure", "-q", "3", "-a", "1", "-n", "2", "--format", "json",
                         "--cache-dir", str(tmp_path / f"cache{i}"), "--output", str(target))
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    caches = [sorted(p.read_bytes() for p in (tmp_path / f"cache{i}").iterdir()) for i in range(2)]
    assert caches[0] == caches[1]


def test_cache_hit_and_corruption(capsys, tmp_path, caplog):
    args = ["decompose", "-q", "2", "-a", "1", "-n", "2", "--format", "json", "--cache-dir", str(tmp_path)]
    code, first, _ = run(capsys, *args)
    files = list(tmp_path.iterdir())
    assert code == 0 and len(files) == 1
    code, second, _ = run(capsys, *args)
    assert second == first
    doc = json.loads(files[0].read_text())
    doc["payload"] += " "
    files[0].write_text(json.dumps(doc))
    with caplog.at_level("WARNING"):
        code, third, _ = run(capsys, *args)
    assert code == 0 and third == first
    assert any("corrupted" in r.message for r in caplog.records)
    # the recomputed entry replaced the corrupted one
    assert run(capsys, *args)[1] == first
    assert not json.loads(files[0].read_text())["payload"].endswith(" ")


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env"))
    assert resolve_cache_dir(None) == tmp_path / "env"
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    code, _, _ = run(capsys, "decompose", "-q", "2", "-a", "1", "-n", "1")
    assert code == 0
    assert any((tmp_path / "env").iterdir())


def test_cache_key_includes_version_and_recipes(tmp_path):
    cache = ArtifactCache(tmp_path)
    key = cache.key("structure", q=2, alpha=1, n=1)
    assert "version" in key and "gamma" in key["recipes"]
    cache.store(key, "payload")
    assert cache.load(key) == "payload"
    other = dict(key, version="0.0.0")
    assert cache.load(other) is None


def test_budget_refusal(capsys):
    code, _, err = run(capsys, "decompose", "-q", "2", "-a", "2", "-n", "3", "--budget", "1000", "--no-cache")
    assert code == 2 and "refused" in err and "9999360" in err


@pytest.mark.parametrize("argv", [
    ["counts", "-q", "6", "-a", "1", "-n", "1"],
    ["counts", "-q", "2", "-a", "2", "-n", "1"],
    ["structure", "-q", "2", "-a", "1", "-n", "1", "--format", "csv", "--no-cache"],
    ["decompose", "-q", "2", "-a", "1", "--no-cache"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "-q", "2", "-a", "2", "-n", "2", "--no-cache", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["k,dim_gr,sigma", "0,6,6", "1,9,9", "2,1,1"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cosetiq", "counts", "-q", "2", "-a", "1", "-n", "1",
                          "--no-cache"], capture_output=True, text=True)
    assert res.returncode == 0 and "identity PASS" in res.stdout
