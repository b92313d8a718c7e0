import json

import pytest

import robustpath as rp

TRIANGLE = json.dumps({
    "version": 1,
    "n": 3,
    "source": 0,
    "sink": 2,
    "edges": [[0, 2], [0, 1], [1, 2]],
    "costs": [["4", "1", "1"], ["1", "2", "2"]],
})


def test_brute_force_triangle():
    r = rp.brute_force(TRIANGLE)
    assert r["path"] == [0]
    assert r["value"] == "4"


@pytest.mark.parametrize("pipeline", ["sp", "metatree", "treewidth"])
def test_pipelines_return_verified_paths(pipeline):
    r = rp.solve(TRIANGLE, pipeline, seed=7)
    check = rp.verify(TRIANGLE, r["path"])
    assert check["costs"] == r["costs"]
    assert check["max_cost"] == r["max_cost"]


def test_seed_required_for_rounding():
    with pytest.raises(ValueError):
        rp.solve(TRIANGLE, "sp")


def test_same_seed_same_answer():
    inst = rp.generate("sp", 40, k=3, seed=5)
    assert rp.solve(inst, "sp", seed=11) == rp.solve(inst, "sp", seed=11)


def test_bad_path_and_bad_instance():
    with pytest.raises(rp.RobustPathError):
        rp.verify(TRIANGLE, [1])
    with pytest.raises(rp.RobustPathError):
        rp.normalize_instance('{"version": 1}')


def test_normalize_is_idempotent():
    once = rp.normalize_instance(TRIANGLE)
    assert rp.normalize_instance(once) == once


def test_gap_demo_and_kz():
    text = rp.gap_demo("flow-two-vertex", 5)
    assert "gap 5" in text
    assert [rp.kz_instance(t)["height"] for t in range(3)] == [4, 6, 8]


def test_bench_threads_agree():
    args = ("sp", [20, 30], [1, 2], ["sp", "brute"])
    assert rp.bench_csv(*args, threads=1) == rp.bench_csv(*args, threads=3)
