"""Command-line entry points, exercised through main()."""

import json
from importlib import resources

import pytest

from wreduce.cli import main, parse_element, parse_rational
import wreduce as w


def golden_text(fname):
    return (resources.files("wreduce") / "goldens" / fname).read_text()


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# ----------------------------------------------------------------- reduce

def test_reduce_kdv_matches_packaged_tables(tmp_path, capsys):
    code, out, err = run(capsys, "reduce", "--builtin", "kdv",
                         "--output", str(tmp_path))
    assert code == 0, err
    for part in ("p1", "p2", "pencil"):
        written = (tmp_path / f"kdv_{part}.txt").read_text()
        assert written == golden_text(f"kdv_{part}.txt")


def test_reduce_is_deterministic(tmp_path, capsys):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out_dir in (a, b):
        code, _, _ = run(capsys, "reduce", "--builtin", "fkdv",
                         "--output", str(out_dir))
        assert code == 0
    for part in ("p1", "p2", "pencil"):
        fname = f"fkdv_{part}.txt"
        assert (a / fname).read_bytes() == (b / fname).read_bytes()


def test_reduce_flag_style_spec(tmp_path, capsys):
    code, out, err = run(capsys, "reduce", "--builtin", "sl3",
                         "--partition", "2,1", "--grading", "dynkin",
                         "--a", "e31", "--method", "all",
                         "--output", str(tmp_path))
    assert code == 0, err
    assert "methods tensor, dirac, ds agree" in out
    written = (tmp_path / "sl3_2_1_p2.txt").read_text()
    golden = golden_text("fkdv_p2.txt")
    # same brackets, different header prefix
    assert written.splitlines()[2:] == golden.splitlines()[2:]


def test_reduce_json_format(tmp_path, capsys):
    code, _, _ = run(capsys, "reduce", "--builtin", "kdv",
                     "--format", "json", "--output", str(tmp_path))
    assert code == 0
    payload = json.loads((tmp_path / "kdv_p2.json").read_text())
    assert payload["fields"] == ["q1"]
    assert payload["entries"]
    assert "1/eps" in payload["convention"]


def test_reduce_setup_file_roundtrip(tmp_path, capsys):
    setup_json = json.loads(golden_text("kdv_setup.json"))
    path = tmp_path / "setup.json"
    path.write_text(json.dumps(setup_json))
    code, _, err = run(capsys, "reduce", "--setup", str(path),
                       "--prefix", "kdv", "--output", str(tmp_path))
    assert code == 0, err
    assert (tmp_path / "kdv_p2.txt").read_text() == golden_text("kdv_p2.txt")


def test_reduce_malformed_setup_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "reduce", "--setup", str(path))
    assert code == 2
    assert "error" in err


def test_reduce_inadmissible_shift_element(tmp_path, capsys):
    code, _, err = run(capsys, "reduce", "--builtin", "sl3",
                       "--partition", "2,1", "--a", "e12",
                       "--output", str(tmp_path))
    assert code == 1
    assert "centralizer" in err


def test_reduce_order_cap_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(w.ORDER_CAP_ENV, "0")
    code, _, err = run(capsys, "reduce", "--builtin", "kdv",
                       "--method", "dirac", "--output", str(tmp_path))
    assert code == 1
    assert "cap 0" in err
    monkeypatch.setenv(w.ORDER_CAP_ENV, "1")
    code, _, _ = run(capsys, "reduce", "--builtin", "kdv",
                     "--method", "dirac", "--output", str(tmp_path))
    assert code == 0


# ----------------------------------------------------------------- verify

def test_verify_fkdv_core_checks(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "fkdv",
                       "--checks", "setup,skew,lambda,methods,golden")
    assert code == 0
    for name in ("setup", "skew", "lambda", "methods", "golden"):
        assert f"PASS {name}" in out
    assert "result: OK" in out


def test_verify_gradings_independence(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "fkdv",
                       "--checks", "setup,gradings",
                       "--gradings", "G1,G2,G3")
    assert code == 0
    assert "PASS gradings" in out


def test_verify_skips_gradings_without_flag(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "kdv",
                       "--checks", "setup,gradings")
    assert code == 0
    assert "SKIP gradings" in out


def test_verify_corrupted_golden_reports_first_entry(tmp_path, capsys):
    for part in ("p1", "p2", "pencil"):
        fname = f"fkdv_{part}.txt"
        text = golden_text(fname)
        if part == "p2":
            text = text.replace("- 9*q4^2", "- 8*q4^2")
        (tmp_path / fname).write_text(text)
    code, out, _ = run(capsys, "verify", "--builtin", "fkdv",
                       "--checks", "setup,golden", "--golden", str(tmp_path))
    assert code == 1
    assert "FAIL golden" in out
    assert "first differing bracket entry {q2(x), q3(y)}" in out
    assert "result: FAIL" in out


def test_verify_json_format(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "kdv",
                       "--checks", "setup,skew,lambda", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    names = [c["name"] for c in payload["checks"]]
    assert names == ["setup", "skew", "lambda"]
    assert all(c["status"] == "pass" for c in payload["checks"])


def test_verify_jacobi_sampling(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "kdv",
                       "--checks", "setup,jacobi", "--jacobi-degree", "2",
                       "--lambda", "0,1,-2/3")
    assert code == 0
    assert "PASS jacobi" in out
    assert "3 lambda values" in out


# ---------------------------------------------------------------- examples

def test_examples_kdv_reproduces_goldens(tmp_path, capsys):
    code, out, _ = run(capsys, "examples", "kdv", "--output", str(tmp_path))
    assert code == 0
    for fname in ("kdv_setup.json", "kdv_p1.txt", "kdv_p2.txt",
                  "kdv_pencil.txt"):
        assert (tmp_path / fname).read_text() == golden_text(fname)


def test_examples_fkdv_emits_all_variants(tmp_path, capsys):
    code, _, _ = run(capsys, "examples", "fkdv", "--output", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    setups = [n for n in names if n.startswith("fkdv_setup_")]
    assert len(setups) == 8
    assert (tmp_path / "fkdv_p2.txt").read_text() == golden_text("fkdv_p2.txt")


def test_examples_unknown_name(capsys):
    code, _, err = run(capsys, "examples", "boussinesq")
    assert code == 2
    assert "kdv" in err and "fkdv" in err


# ----------------------------------------------------------------- parsing

def test_parse_rational_accepts_exact_forms():
    from fractions import Fraction
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational(" 7 ") == 7


def test_parse_rational_rejects_floats():
    for bad in ("0.5", "1e3", "3/0", ""):
        with pytest.raises(Exception):
            parse_rational(bad)


def test_parse_element_named_and_sums():
    setup = w.fkdv_setup()
    alg, triple = setup.algebra, setup.triple
    e21 = alg.basis_vector(alg.label_index("e21"))
    e32 = alg.basis_vector(alg.label_index("e32"))
    v = parse_element(alg, triple, "e21+e32")
    assert v == tuple(a + b for a, b in zip(e21, e32))
    assert parse_element(alg, triple, "f") == triple.f
    e31 = alg.basis_vector(alg.label_index("e31"))
    assert parse_element(alg, triple, "2*e31") == tuple(2 * c for c in e31)


def test_parse_element_rejects_garbage():
    setup = w.kdv_setup()
    alg, triple = setup.algebra, setup.triple
    for bad in ("e99", "e21++e32", "", "q1"):
        with pytest.raises(Exception):
            parse_element(alg, triple, bad)
