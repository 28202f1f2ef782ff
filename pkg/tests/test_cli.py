import json

import pytest
from click.testing import CliRunner

from artifact.cli import canonical_permutation, main
from artifact.treebound import cohomology_bound


def run(args, env=None):
    result = CliRunner().invoke(main, args, env=env)
    return result.exit_code, (json.loads(result.output) if result.output.strip().startswith("{") else result.output)


def test_selftest_quick():
    code, out = run(["selftest", "--quick"])
    assert code == 0 and out["ok"]
    assert out["schema"] == 1


def test_bounds_row():
    code, out = run(["bounds", "--r", "6", "--m", "2"])
    assert code == 0
    assert out["table"]["B"] == cohomology_bound(6, 2) == 16138240
    assert out["table"]["power_bound"] == 128**6


def test_a_coeff_example():
    code, out = run(["a-coeff", "--q", "3", "--M", "0,1;1,0", "--f", "0,1;1,1"])
    assert code == 0
    assert out["embed"][0] == pytest.approx(-1) and out["provenance"] == "generic"


def test_lambda_two_routes(tmp_path):
    code, out = run(["lambda", "--q", "3", "--M", "0,1;1,1", "--d", "1,2", "--cache-dir", str(tmp_path)])
    assert code == 0 and out["routes_agree"]


def test_configuration_errors():
    code, out = run(["lambda", "--q", "7", "--n", "4", "--M", "0,1;1,1", "--d", "1,1"])
    assert code == 2 and "divide" in out
    code, out = run(["verify-global-fe", "--q", "7", "--n", "3", "--M", "0,1;1,1", "--D", "1"])
    assert code == 2 and "even" in out
    code, out = run(["verify-global-fe", "--q", "3", "--M", "1,1;1,1", "--D", "1"])
    assert code == 2


def test_canonical_permutation():
    M, perm = canonical_permutation([[0, 1, 0], [1, 1, 0], [0, 0, 1]], 2)
    assert perm == [0, 2, 1]
    assert M == ((0, 0, 1), (0, 1, 0), (1, 0, 1))


def test_verify_global_fe_q3():
    code, out = run(["verify-global-fe", "--q", "3", "--M", "0,1;1,1", "--D", "1"])
    assert code == 0 and out["reports"][0]["passed"]


def test_solve_local_and_cache_determinism(tmp_path):
    args = ["solve-local", "--q", "3", "--M", "0,1;1,1", "--max-total", "3", "--cache-dir", str(tmp_path)]
    first = CliRunner().invoke(main, args)
    assert first.exit_code == 0
    cache_files = list(tmp_path.iterdir())
    assert len(cache_files) == 1
    cached = cache_files[0].read_text()
    second = CliRunner().invoke(main, args)
    assert second.output == first.output
    assert cache_files[0].read_text() == cached


def test_cache_dir_from_environment(tmp_path):
    code, _ = run(["lambda", "--q", "3", "--M", "1", "--d", "2"], env={"ARTIFACT_CACHE_DIR": str(tmp_path)})
    assert code == 0
    assert any(p.name.startswith("spectra_p3") for p in tmp_path.iterdir())
