import io
import json
import subprocess
import sys

import pytest

from exhaustion.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_integrate_json_converged():
    code, text = run("integrate", "--fn", "3*x^2", "--a", "0", "--b", "1", "--tol", "1e-6")
    report = json.loads(text)
    assert code == 0 and report["converged"]
    assert abs(report["value"] - 1) < 1e-5


def test_integrate_not_converged_exit_code():
    code, text = run("integrate", "--fn", "exp(x)", "--a", "0", "--b", "1", "--max-level", "6", "--format", "csv")
    assert code == 2
    assert text.splitlines()[0] == "level,A_n,partial,error_ratio"
    assert len(text.splitlines()) == 7


def test_parse_error_exit_code(caplog):
    code, _ = run("integrate", "--fn", "sin(", "--a", "0", "--b", "1")
    assert code == 3
    assert "offset 4" in caplog.text


def test_bad_arguments_exit_code():
    assert run("integrate", "--fn", "x")[0] == 3
    assert run("nonsense")[0] == 3


def test_non_finite_exit_code():
    code, text = run("integrate", "--fn", "1/x", "--a", "-1", "--b", "1")
    assert code == 4
    assert json.loads(text)["termination"] == "non_finite_sample"


def test_improper():
    code, text = run("improper", "--fn", "exp(-x)", "--tol", "1e-4", "--max-level", "20", "--tail-tol", "1e-8")
    report = json.loads(text)
    assert code == 0 and report["converged"]
    assert abs(report["value"] - 1) < 1e-3
    assert report["error_estimate"] == pytest.approx(abs(report["value"] - 1), rel=0.05)


def test_improper_level_cap_is_not_converged():
    code, text = run("improper", "--fn", "exp(-x)", "--tol", "1e-9", "--max-level", "10")
    assert code == 2
    assert json.loads(text)["termination"] == "level_cap"


@pytest.mark.parametrize(
    "args, expected, tol",
    [
        (["--id", "sin", "--x", "1"], 0.8414709848, 1e-6),
        (["--id", "LN", "--x", "2"], 0.6931471806, 1e-5),
        (["--id", "sine_integral", "--a", "1", "--b", "1"], 0.9460830704, 1e-5),
        (["--id", "factorial", "--p", "3"], 6.0, 1e-2),
    ],
)
def test_series(args, expected, tol):
    code, text = run("series", *args, "--levels", "20")
    assert code == 0
    assert abs(json.loads(text)["value"] - expected) < tol


def test_series_missing_parameter():
    assert run("series", "--id", "gaussian", "--a", "1", "--levels", "5")[0] == 3


def test_diffract_outputs(tmp_path):
    spectrum = tmp_path / "spectrum.csv"
    code, text = run(
        "diffract", "--aperture", "rect", "--wx", "2", "--wy", "1", "--k", "1", "--slice", "z=20",
        "--extent", "5", "--samples", "3", "--levels", "6", "--spectrum-out", str(spectrum), "--spectrum-levels", "2",
    )
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "x,y,z,re_phi,im_phi,abs_phi" and len(lines) == 10
    spec_lines = spectrum.read_text().splitlines()
    assert spec_lines[0] == "n,m,p,q,kx,ky,weight,kz,group_speed_z,evanescent"
    assert len(spec_lines) == 1 + 4 * 4


def test_diffract_bad_slice():
    assert run("diffract", "--slice", "x=3")[0] == 3


def test_bench_csv():
    code, text = run("bench", "--suite", "default", "--format", "csv", "--max-level", "8")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "function,method,level,eval_count,abs_error"
    assert len(lines) == 1 + 4 * 4 * 5


def test_output_is_byte_identical_across_runs():
    args = ("--seed", "3", "bench", "--suite", "poly", "--max-level", "10")
    first = run(*args)[1]
    assert first and first == run(*args)[1]
    assert first != run("--seed", "4", "bench", "--suite", "poly", "--max-level", "10")[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "exhaustion", "series", "--id", "exp", "--x", "1", "--levels", "10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["id"] == "exp"


def test_help_documents_grammar():
    proc = subprocess.run([sys.executable, "-m", "exhaustion", "--help"], capture_output=True, text=True)
    assert "-2^2 = -4" in proc.stdout and "EXH_THREADS" in proc.stdout
