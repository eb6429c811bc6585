import io

import pytest

from goedelkit.cli import run

D = "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_sat_prints_witness():
    code, out, _ = call("sat", "--A", "finite{1/2}", "--theory", f"{D}/theories/half_lower_bound.gl")
    assert code == 0 and "SAT" in out and "rho=" in out


def test_unsat_exit_code():
    code, out, _ = call("sat", "--theory", f"{D}/theories/contradiction.gl")
    assert code == 1 and "UNSAT" in out


def test_entail_double_negation():
    code, out, _ = call("entail", "--A", "finite{1/2}", "--theory", f"{D}/theories/double_negation.gl",
                        "--goal", "~rho")
    assert code == 0 and "ENTAILED" in out


def test_family_needs_prefix():
    code, out, err = call("sat", "--V", "downward", "--A", "downward", "--theory", f"{D}/theories/harmonic.gl")
    assert code == 2 and out == "" and err
    code, out, _ = call("sat", "--V", "downward", "--A", "downward", "--theory", f"{D}/theories/harmonic.gl",
                        "--prefix", "5")
    assert code == 0 and "rho=1/5" in out


def test_check_proof():
    code, out, _ = call("check-proof", "--proof", f"{D}/proofs/identity.prf")
    assert code == 0 and out.startswith("OK p -> p")
    code, out, _ = call("check-proof", "--theory", f"{D}/theories/identity.gl", "--proof", f"{D}/proofs/bad_mp.prf")
    assert code == 1 and "Error line 3" in out


def test_lab_delta():
    code, out, _ = call("lab", "run", "EX_DELTA", "--k", "10")
    assert code == 0 and "FINITELY-SAT ∧ UNSAT" in out


def test_lab_list():
    code, out, _ = call("lab", "list")
    assert code == 0 and "EX_ENTAIL_FAIL" in out


def test_embed_and_henkin():
    code, out, _ = call("embed", "--A", "downward", "--algebra", f"{D}/algebras/three_chain.alg")
    assert code == 0 and "norm partition" in out
    code, out, _ = call("henkin", "--A", "finite{1/2}", "--theory", f"{D}/theories/pinned.gl")
    assert code == 0 and "rho=1/2" in out


def test_metric_and_los():
    code, out, _ = call("metric", "--structure", f"{D}/structures/bad_triangle.st")
    assert code == 1 and "strong triangle" in out
    code, out, _ = call("los-check", "--structures", f"{D}/structures/m1.st", f"{D}/structures/m2.st",
                        "--principal", "2")
    assert code == 0 and "mismatches 0" in out


def test_dual_display_header():
    code, out, _ = call("sat", "--display", "dual", "--A", "finite{1/2}",
                        "--theory", f"{D}/theories/half_lower_bound.gl")
    assert code == 0 and out.startswith("% display: dual")


@pytest.mark.parametrize("argv", [
    ["sat"],
    ["frobnicate"],
    ["sat", "--theory", "no/such/file.gl"],
    ["sat", "--V", "finite{1/2", "--theory", f"{D}/theories/half_lower_bound.gl"],
    ["lab", "run", "EX_NOPE"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


def test_output_is_deterministic():
    argv = ["validate", "--suite", "lipschitz", "--count", "5", "--seed", "3"]
    first, second = call(*argv), call(*argv)
    assert first == second and first[0] == 0
