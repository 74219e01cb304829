import json

import pytest

from wiretaplab.anti_latin import reference_decodable_pair
from wiretaplab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExampleCommands:
    def test_mincut_fig1(self, capsys):
        code, out, _ = run(capsys, "mincut", "--net", "fig1.net", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["mincut1"] == 3
        assert data["mincut2"] == 2

    def test_capacity_layered(self, capsys):
        code, out, _ = run(capsys, "capacity", "--layered",
                           '{"c":2,"k":[2,2],"r":[1,1],"q":2}', "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["C1"] == 1.0
        assert data["C2"] == 0.5

    def test_classify_standard_adaptive(self, capsys):
        code, out, _ = run(capsys, "classify", "--family", "standard", "--d", "2",
                           "--class", "adaptive", "--format", "json")
        assert code == 0
        verdict = json.loads(out)["verdict"]
        assert verdict["level"] == "insecure"
        # the route-by-observation attack: tap e(1), Y1=0 -> e(4), Y1=1 -> e(3)
        assert verdict["witness"]["first_edge"] == 1
        assert verdict["witness"]["selector"] == [4, 3]

    def test_classify_vector_linear_active(self, capsys):
        code, out, _ = run(capsys, "classify", "--family", "vector-linear",
                           "--d", "3", "--class", "active", "--format", "json")
        assert code == 0
        assert json.loads(out)["verdict"]["level"] == "perfectly-secret"

    def test_antilatin_find_d2_not_found(self, capsys):
        code, out, _ = run(capsys, "antilatin", "find", "--d", "2")
        assert code == 0
        assert "NotFound" in out
        assert "exhaustive" in out

    def test_wiretap2(self, capsys):
        code, out, _ = run(capsys, "wiretap2", "--q", "3", "--k", "3", "--r", "1",
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["all_taps_zero"] and data["decode_ok"]


class TestTable:
    def test_expect_table1_passes(self, capsys):
        code, out, _ = run(capsys, "classify", "--table", "--d", "2,3",
                           "--expect-table1")
        assert code == 0
        assert "vector-linear" in out

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "classify", "--table", "--d", "2",
                           "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "family,d,deterministic-passive,active,adaptive"

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "classify", "--table", "--d", "2",
                           "--format", "json")
        data = json.loads(out)
        assert data["schema"] == "wiretaplab/v1"
        families = [r["family"] for r in data["table"]["rows"]]
        assert families == ["scalar-linear", "standard-nonlinear", "vector-linear"]


class TestDeterminism:
    def test_identical_seed_identical_json(self, capsys):
        args = ("antilatin", "find", "--d", "4", "--seed", "77", "--format", "json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_maxset_heuristic_deterministic(self, capsys):
        args = ("antilatin", "maxset", "--d", "4", "--method", "heuristic",
                "--mode", "decodable", "--seed", "5", "--budget", "8000",
                "--format", "json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2


class TestExitCodes:
    def test_usage_error_is_2(self, capsys):
        code, _, err = run(capsys, "capacity", "--layered", "{not json")
        assert code == 2
        assert "error" in err

    def test_missing_classify_args(self, capsys):
        code, _, _ = run(capsys, "classify", "--d", "2")
        assert code == 2

    def test_unknown_class_name(self, capsys):
        code, _, _ = run(capsys, "classify", "--family", "standard", "--d", "2",
                         "--class", "sneaky")
        assert code == 2

    def test_budget_exhaustion_is_3(self, capsys):
        code, _, err = run(capsys, "antilatin", "find", "--d", "5",
                           "--budget", "5")
        assert code == 3
        assert "budget" in err

    def test_argparse_rejects_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_mds_verify_expect_failure_is_1(self, capsys, tmp_path):
        path = tmp_path / "bad.mat"
        path.write_text("2 3 5\n1 1 0\n2 2 1\n")
        code, out, _ = run(capsys, "mds", "verify", "--file", str(path), "--expect")
        assert code == 1
        assert "not MDS" in out


class TestFileCommands:
    def test_mds_build_verify_round_trip(self, capsys, tmp_path):
        path = tmp_path / "gen.mat"
        code, _, _ = run(capsys, "mds", "build", "--k", "4", "--r", "2",
                         "--q", "7", "--out", str(path))
        assert code == 0
        code, out, _ = run(capsys, "mds", "verify", "--file", str(path),
                           "--format", "json")
        assert code == 0
        assert json.loads(out)["mds"] is True

    def test_antilatin_file_commands(self, capsys, tmp_path):
        a, b = reference_decodable_pair(3)
        pa, pb = tmp_path / "a.sq", tmp_path / "b.sq"
        pa.write_text(a.to_text())
        pb.write_text(b.to_text())
        code, out, _ = run(capsys, "antilatin", "verify", "--file", str(pa),
                           "--format", "json")
        assert code == 0 and json.loads(out)["anti_latin"] is True
        code, out, _ = run(capsys, "antilatin", "pair-check", "--a", str(pa),
                           "--b", str(pb), "--format", "json")
        data = json.loads(out)
        assert data["one_to_one"] and data["decodable"]
        code, out, _ = run(capsys, "antilatin", "xi", "--a", str(pa),
                           "--b", str(pb), "--z", "0", "--m", "0",
                           "--format", "json")
        assert code == 0
        expected = sorted({b.entry(l, l) for l in range(3) if a.entry(l, l) == 0})
        assert json.loads(out)["members"] == expected

    def test_builtin_network_names(self, capsys):
        code, out, _ = run(capsys, "mincut", "--net", "one-hop", "--format", "json")
        assert code == 0
        assert json.loads(out)["mincut1"] == 2

    def test_capacity_net_mode(self, capsys):
        code, out, _ = run(capsys, "capacity", "--net", "fig1", "--r", "2",
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["C2"] == 0
        assert data["C1_bounds"] == [0, 1]


class TestSelftests:
    @pytest.mark.parametrize("argv", [
        ("classify", "--selftest"),
        ("antilatin", "verify", "--selftest"),
        ("antilatin", "xi", "--selftest"),
        ("antilatin", "pair-check", "--selftest"),
        ("antilatin", "find", "--selftest"),
        ("antilatin", "maxset", "--selftest"),
        ("capacity", "--selftest"),
        ("mincut", "--selftest"),
        ("mds", "build", "--selftest"),
        ("mds", "verify", "--selftest"),
        ("wiretap2", "--selftest"),
        ("han", "--selftest"),
    ])
    def test_selftests_pass(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert "FAIL" not in out


class TestHanCommand:
    def test_small_sweep_clean(self, capsys):
        code, out, _ = run(capsys, "han", "--k", "3", "--r", "2",
                           "--samples", "300", "--seed", "42", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["violations"] == 0
        assert data["min_slack"] >= -1e-9
