import json
import subprocess
import sys

import pytest

from multlattice import from_file
from multlattice.cli import main


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def files(tmp_path, run):
    paths = {}
    for name, args in {
        "d12": ("divisor", 12),
        "d8": ("divisor", 8),
        "d900": ("divisor", 900),
        "d4": ("divisor", 4),
        "d9": ("divisor", 9),
        "chain3": ("chain", 3),
    }.items():
        path = tmp_path / f"{name}.json"
        code, out, _ = run("build", *args, "-o", path)
        assert code == 0
        paths[name] = path
    return paths


def rows(out):
    lines = out.strip().split("\n")
    header = lines[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in lines[1:]]


def test_build_summary(run, tmp_path):
    code, out, _ = run("build", "divisor", 12, "-o", tmp_path / "d.json")
    assert code == 0 and out == "D(12)\t6\t12\t1\n"
    assert from_file((tmp_path / "d.json").read_bytes()).size == 6


def test_build_to_stdout(run):
    code, out, err = run("build", "chain", 3)
    assert code == 0
    assert from_file(out).name == "chain(3)"
    assert err.startswith("chain(3)\t3")


def test_build_quotient_and_localize(run, files, tmp_path):
    code, out, _ = run("build", "quotient", files["d12"], "--at", "4", "-o", tmp_path / "q.json")
    assert code == 0 and out.split("\t")[1] == "3"
    code, out, _ = run("build", "localize", files["d12"], "--at-prime", "3", "-o", tmp_path / "l.json")
    assert code == 0 and out.split("\t")[1] == "2"
    code, out, _ = run("build", "localize", files["d12"], "--set", "1,3", "-o", tmp_path / "s.json")
    assert code == 0 and sorted(from_file((tmp_path / "s.json").read_bytes()).labels) == ["1", "2", "4"]


def test_build_product(run, files, tmp_path):
    code, out, _ = run("build", "product", files["d4"], files["d9"], "-o", tmp_path / "p.json")
    assert code == 0 and out == "D(4) x D(9)\t9\t(4,9)\t(1,1)\n"


@pytest.mark.parametrize(
    "argv",
    [
        ("build", "divisor", "x"),
        ("build", "divisor", 12, 13),
        ("build", "quotient", "{d12}"),
        ("build", "localize", "{d12}"),
        ("build", "localize", "{d12}", "--set", "2"),
        ("build", "quotient", "{d12}", "--at", "7"),
        ("build", "quotient", "{d12}", "--at", "1"),
        ("build", "product", "{d12}"),
        ("classify", "missing.json"),
        ("classify", "{d12}", "-n", 9),
        ("theorems", "{d12}", "--ids", "NOPE"),
        ("frobnicate",),
        ("search", "--max", 10),
        ("residual", "{d12}", "4"),
    ],
)
def test_usage_errors_exit_1(run, files, argv):
    argv = [str(a).format(**files) for a in argv]
    code, _, err = run(*argv)
    assert code == 1
    assert err


def test_size_cap(run, monkeypatch):
    assert run("build", "divisor", 360, "--size-cap", 10)[0] == 1
    monkeypatch.setenv("MLAT_SIZE_CAP", "10")
    assert run("build", "divisor", 360)[0] == 1
    assert run("build", "divisor", 360, "--size-cap", 100)[0] == 0


def test_validate(run, files, tmp_path):
    code, out, _ = run("validate", files["d12"])
    assert code == 0 and out == "D(12)\tok\t6\n"
    doc = json.loads(files["d12"].read_text())
    doc["mul"][1][1] = 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run("validate", bad)
    assert code == 3
    assert out.split("\n")[0] == "D(12)\tassociative\t(2,2,4)"
    code, out, _ = run("validate", bad, "--format", "json")
    report = json.loads(out)
    assert report["schema"] == "mlat-validate/1" and not report["ok"]
    assert report["failures"][0] == {"axiom": "associative", "witness": ["2", "2", "4"]}
    # every other command refuses the file with exit 3
    assert run("classify", bad)[0] == 3
    assert run("theorems", bad)[0] == 3


def test_malformed_file_exit_1(run, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, _, err = run("validate", path)
    assert code == 1 and "byte" in err


def test_classify_d900(run, files):
    code, out, _ = run("classify", files["d900"], "-n", 2)
    assert code == 0
    row = next(r for r in rows(out) if r["element"] == "30")
    assert row["quasi2"] == "true" and row["absorbing2"] == "false"
    assert "absorbing(2)=(2,3,5)" in row["witnesses"].split(";")


def test_classify_d8_and_d12(run, files):
    row8 = next(r for r in rows(run("classify", files["d8"], "-n", 3)[1]) if r["element"] == "8")
    assert row8["quasi2"] == "false" and row8["quasi3"] == "true"
    primes = [r["element"] for r in rows(run("classify", files["d12"], "-n", 1)[1]) if r["prime"] == "true"]
    assert primes == ["2", "3"]


def test_classify_json(run, files):
    code, out, _ = run("classify", files["d12"], "-n", 2, "--format", "json")
    doc = json.loads(out)
    assert doc["schema"] == "mlat-classify/1" and doc["n_max"] == 2
    r12 = doc["rows"][-1]
    assert r12["element"] == "12" and r12["quasi"] == [False, False] and r12["weakly_quasi"] == [True, True]
    assert r12["witnesses"]["quasi(2)"] == "(2,3)"


def test_classify_column_order(run, files):
    header = run("classify", files["d12"], "-n", 2)[1].split("\n")[0].split("\t")
    assert header[:7] == ["element", "prime", "weakly_prime", "maximal", "principal", "absorbing1", "absorbing2"]
    assert header[-1] == "witnesses"


def test_theorems(run, files):
    code, out, _ = run("theorems", files["d12"], "--ids", "all", "-n", 3)
    assert code == 0 and len(rows(out)) == 15
    code, out, _ = run("theorems", files["d12"], "--ids", "PRIN-EQ", "-n", 2)
    assert code == 0 and rows(out)[0]["status"] == "pass"
    code, out, _ = run("theorems", files["chain3"], "--ids", "TOT-MEET", "-n", 2)
    row = rows(out)[0]
    assert row["status"] == "pass" and row["detail"].startswith("trivial at finite scale")


def test_theorems_violation_exit_2(run, files, monkeypatch):
    from multlattice import predicates as P

    monkeypatch.setattr(P, "quasi_by_residuals", lambda L, q, n: True)
    code, out, _ = run("theorems", files["d12"], "--ids", "RES-CHAR", "--format", "json")
    assert code == 2
    doc = json.loads(out)
    assert doc["schema"] == "mlat-theorems/1"
    assert doc["reports"][0]["status"] == "violated"


def test_search(run):
    where = "quasi(2) and not absorbing(2)"
    code, out, _ = run("search", "--family", "divisor", "--min", 2, "--max", 100, "--where", where)
    assert code == 0
    hit = rows(out)[0]
    assert (hit["param"], hit["element"]) == ("30", "30")
    code, out, _ = run("search", "--family", "divisor", "--min", 2, "--max", 20, "--where", where)
    assert code == 2 and rows(out) == []


def test_search_shrinks(run):
    code, out, _ = run("search", "--min", 12, "--max", 12, "--where", "prime", "--format", "json")
    doc = json.loads(out)
    assert doc["schema"] == "mlat-search/1"
    assert doc["hits"][0]["shrunk"] == {"param": 2, "element": "2"}


def test_search_syntax_error(run):
    code, _, err = run("search", "--max", 20, "--where", "quasi(2 and")
    assert code == 1
    assert "offset 8" in err and "quasi(2 and\n        ^" in err


def test_residual_and_radical(run, files):
    assert run("residual", files["d12"], 4, 2)[1] == "2\n"
    assert run("residual", files["d12"], 6, 2)[1] == "3\n"
    assert run("radical", files["d12"], 4)[1] == "2\n"


def test_output_is_byte_identical_across_runs(run, files):
    for argv in (
        ("classify", files["d900"], "-n", 2, "--format", "json"),
        ("theorems", files["d12"], "--format", "json"),
        ("search", "--max", 60, "--where", "weakly_quasi(2)", "--limit", 5),
    ):
        assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "multlattice", "radical", str(files["d12"]), "12"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "6\n"
