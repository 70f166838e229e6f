import io
import json

import pytest

from latfm.cli import run
from latfm.lattices import Lattice
from latfm.selfcheck import CHECKS, SelftestConfig, run_selftest


def invoke(argv, env_threads=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


class TestFmCount:
    def test_single_degree(self):
        code, out, _ = invoke(["fm-count", "--degree", "420"])
        assert code == 0
        assert out.strip() == "degree=420 d=210 p=4 fm_partners=8"

    def test_verify_flag(self):
        code, out, _ = invoke(["fm-count", "--degree", "60", "--verify"])
        assert code == 0
        assert "via_cosets=4" in out

    def test_json(self):
        code, out, _ = invoke(["fm-count", "--degree", "30", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["results"] == [
            {"degree": 30, "d": 15, "p": 2, "fm_partners": 2}
        ]

    def test_range(self):
        code, out, _ = invoke(["fm-count", "--range", "2..8", "--json"])
        assert code == 0
        degrees = [row["degree"] for row in json.loads(out)["results"]]
        assert degrees == [2, 4, 6, 8]

    def test_odd_degree_is_usage_error(self):
        code, _, err = invoke(["fm-count", "--degree", "3"])
        assert code == 2
        assert "even" in err

    def test_degree_and_range_conflict(self):
        code, _, _ = invoke(["fm-count", "--degree", "4", "--range", "2..4"])
        assert code == 2

    def test_unknown_flag(self):
        code, _, _ = invoke(["fm-count", "--degre", "4"])
        assert code == 2


class TestDisc:
    def test_family_gram(self):
        code, out, _ = invoke(["disc", "--gram", "[[2,3],[3,0]]", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload == {"factors": [9], "q": ["16/9"], "b": [["7/9"]]}

    def test_rank_one(self):
        code, out, _ = invoke(["disc", "--gram", "[[12]]", "--json"])
        assert code == 0
        assert json.loads(out)["q"] == ["1/12"]

    def test_odd_lattice_q_null(self):
        code, out, _ = invoke(["disc", "--gram", "[[3]]", "--json"])
        assert code == 0
        assert json.loads(out)["q"] is None

    def test_lattice_object_form(self):
        code, out, _ = invoke(
            ["disc", "--gram", '{"rank": 1, "gram": [[4]]}', "--json"]
        )
        assert code == 0
        assert json.loads(out)["factors"] == [4]

    def test_degenerate_is_domain_error(self):
        code, _, err = invoke(["disc", "--gram", "[[1,1],[1,1]]"])
        assert code == 1
        assert "error" in err


class TestMukai:
    def test_classes(self):
        code, out, _ = invoke(["mukai", "--degree", "30", "--classes", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["vectors"] == [
            {"r": 1, "s": 15},
            {"r": 3, "s": 5},
            {"r": 5, "s": 3},
            {"r": 15, "s": 1},
        ]
        assert payload["classes"] == [[1, 15], [3, 5]]

    def test_shadow(self):
        code, out, _ = invoke(["mukai", "--degree", "4", "--shadow", "--json"])
        assert code == 0
        payload = json.loads(out)
        for entry in payload["shadows"]:
            assert entry["quotient"]["rank"] == 22
            assert entry["quotient"]["signature"] == [3, 19]
            assert entry["ns_square"] == 4

    def test_text_mode(self):
        code, out, _ = invoke(["mukai", "--degree", "30", "--classes"])
        assert code == 0
        assert "v = (1, h, 15)" in out
        assert "class {3, 5}" in out


class TestFamily:
    def test_bundle(self):
        code, out, _ = invoke(["family", "--count", "2", "--degree", "2", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 17
        assert [m["d"] for m in payload["members"]] == [1, 4]
        assert payload["members"][0]["lattice"] == {"rank": 2, "gram": [[2, 17], [17, 0]]}
        assert payload["witnesses"] == [{"d1": 1, "d2": 4, "n": 17, "alpha": 2}]
        assert len(payload["certificates"]) == 1
        assert payload["attestations"][0]["rank"] == 20
        assert payload["attestations"][0]["signature"] == [2, 18]

    def test_abelian(self):
        code, out, _ = invoke(
            ["family", "--count", "2", "--degree", "2", "--ambient", "abelian",
             "--json"]
        )
        assert code == 0
        assert json.loads(out)["attestations"][0]["rank"] == 4


class TestIsometry:
    def test_witness(self):
        code, out, _ = invoke(
            ["isometry", "--gram1", "[[2,5],[5,0]]", "--gram2", "[[12,5],[5,0]]",
             "--json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["isometric"] is True

    def test_invariant_mismatch(self):
        code, out, _ = invoke(
            ["isometry", "--gram1", "[[2]]", "--gram2", "[[4]]", "--json"]
        )
        assert code == 0
        assert json.loads(out)["isometric"] is False

    def test_budget_exhaustion_exit_code(self):
        code, _, err = invoke(
            ["isometry", "--gram1", "[[2,17],[17,0]]", "--gram2", "[[8,17],[17,0]]",
             "--budget-entries", "12"]
        )
        assert code == 3
        assert "budget" in err


class TestOrbits:
    def test_counts(self):
        code, out, _ = invoke(["orbits", "--degree", "30", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 2
        assert payload["representatives"] == [[1, 15], [3, 5]]


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["fm-count", "--range", "2..40", "--json"],
            ["family", "--count", "2", "--degree", "2", "--json"],
            ["mukai", "--degree", "60", "--classes", "--json"],
            ["orbits", "--degree", "420", "--json"],
        ],
    )
    def test_byte_identical_output(self, argv):
        first = invoke(argv)
        second = invoke(argv)
        assert first == second


class TestThreadEnv:
    def test_invalid_thread_count(self, monkeypatch):
        monkeypatch.setenv("LATFM_THREADS", "zero")
        code, _, err = invoke(["fm-count", "--degree", "4"])
        assert code == 2
        assert "LATFM_THREADS" in err

    def test_valid_thread_count_no_output_change(self, monkeypatch):
        base = invoke(["fm-count", "--degree", "60", "--json"])
        monkeypatch.setenv("LATFM_THREADS", "8")
        assert invoke(["fm-count", "--degree", "60", "--json"]) == base


class TestSelftest:
    def test_default_run_passes_quickly(self):
        import time

        start = time.perf_counter()
        code, out, _ = invoke(["selftest"])
        elapsed = time.perf_counter() - start
        assert code == 0
        assert f"{len(CHECKS)}/{len(CHECKS)} checks passed" in out
        assert elapsed < 60.0

    def test_reduced_run_passes(self):
        code, out, _ = invoke(["selftest", "--range-d", "12"])
        assert code == 0
        lines = out.strip().splitlines()
        assert all(line.startswith("PASS") for line in lines[:-1])
        assert lines[-1].endswith("checks passed")
        assert len(lines) - 1 == len(CHECKS)

    def test_corrupted_builtin_is_reported(self):
        # replace U by an odd unimodular lattice: the builtin invariants fail
        bad = Lattice(((1, 0), (0, -1)))
        cfg = SelftestConfig(
            d_max=5, shadow_d_max=2, closed_form_max=5,
            lattice_overrides=(("U", bad),),
        )
        results = run_selftest(cfg)
        by_name = {r.name: r for r in results}
        assert not by_name["builtin-lattice-invariants"].passed
        assert "U must" in by_name["builtin-lattice-invariants"].detail
