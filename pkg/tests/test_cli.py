import json

import pytest

from conjlen.cli import main

BS2_CONFIG = json.dumps({"family": "bs", "m": 2})
SOL_CONFIG = json.dumps({"family": "semidirect", "phi_gens": [[[2, 1], [1, 1]]]})


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestNormalForm:
    def test_conjugated_generator(self, capsys):
        code, out, _ = run(capsys, "normal-form", "--config", BS2_CONFIG, "b a b^-1")
        assert code == 0
        assert out.strip() == "0|2|0"

    def test_empty_word(self, capsys):
        code, out, _ = run(capsys, "normal-form", "--config", BS2_CONFIG, "")
        assert code == 0
        assert out.strip() == "0|0|0"

    def test_descending_coset(self, capsys):
        code, out, _ = run(capsys, "normal-form", "--config", BS2_CONFIG, "b^-1 a b")
        assert code == 0
        assert out.strip() == "1|1|0"

    def test_parse_error_exit_two(self, capsys):
        code, _, err = run(capsys, "normal-form", "--config", BS2_CONFIG, "a q")
        assert code == 2
        assert "token 2" in err

    def test_bad_config_exit_two(self, capsys):
        code, _, _ = run(capsys, "normal-form", "--config", '{"family": "bs", "m": 1}', "a")
        assert code == 2


class TestConjugate:
    def test_conjugate_pair(self, capsys):
        code, out, _ = run(
            capsys, "conjugate", "--config", BS2_CONFIG, "--radius", "4", "a", "a a a a"
        )
        assert code == 0
        report = json.loads(out)
        assert report["conjugate"] is True
        assert report["witness_length"] == 2
        assert not report["search_exhausted"]

    def test_not_conjugate_exit_one(self, capsys):
        code, out, _ = run(capsys, "conjugate", "--config", BS2_CONFIG, "a", "a a a")
        assert code == 1
        assert json.loads(out)["conjugate"] is False

    def test_identity_pair(self, capsys):
        code, out, _ = run(capsys, "conjugate", "--config", BS2_CONFIG, "a", "a")
        assert code == 0
        assert json.loads(out)["conjugate"] is True

    def test_search_exhausted_exit_three(self, capsys):
        fib = json.dumps({"family": "gamma_m", "matrix_m": [[2, 1], [1, 1]]})
        code, out, _ = run(capsys, "conjugate", "--config", fib, "a1", "a1 a2")
        assert code == 3
        assert json.loads(out)["search_exhausted"] is True


class TestBallAndWordlen:
    def test_radius_zero_csv(self, capsys, tmp_path):
        out_path = tmp_path / "ball.csv"
        code, _, _ = run(
            capsys, "ball", "--config", BS2_CONFIG, "--radius", "0", "--out", str(out_path)
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "element,length"
        assert len(lines) == 2

    def test_cap_exit_four(self, capsys, tmp_path):
        code, _, _ = run(
            capsys,
            "ball",
            "--config",
            BS2_CONFIG,
            "--radius",
            "8",
            "--cap",
            "50",
            "--out",
            str(tmp_path / "b.csv"),
        )
        assert code == 4

    def test_wordlen(self, capsys):
        code, out, _ = run(
            capsys, "wordlen", "--config", BS2_CONFIG, "--radius", "6", "a^4"
        )
        assert code == 0
        assert out.strip() == "4"

    def test_wordlen_beyond_radius(self, capsys):
        code, _, _ = run(
            capsys, "wordlen", "--config", BS2_CONFIG, "--radius", "2", "a^64"
        )
        assert code == 4

    def test_deterministic_output(self, capsys, tmp_path):
        p1, p2 = tmp_path / "b1.csv", tmp_path / "b2.csv"
        run(capsys, "ball", "--config", SOL_CONFIG, "--radius", "4", "--out", str(p1))
        run(capsys, "ball", "--config", SOL_CONFIG, "--radius", "4", "--out", str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestTables:
    def test_clf_run(self, capsys, tmp_path):
        out_path = tmp_path / "clf.csv"
        code, _, _ = run(
            capsys,
            "clf",
            "--config",
            BS2_CONFIG,
            "--n-max",
            "4",
            "--radius",
            "6",
            "--out",
            str(out_path),
        )
        assert code == 0
        assert out_path.exists()
        meta = json.loads((tmp_path / "clf.meta.json").read_text())
        assert "linear" in meta["fits"]
        assert meta["fits"]["linear"]["constant"] >= 0

    def test_rclf_run(self, capsys, tmp_path):
        out_path = tmp_path / "rclf.csv"
        code, _, _ = run(
            capsys, "rclf", "--m", "2", "--r-max", "8", "--out", str(out_path)
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "n,clf,u_word,v_word,conjugator_word,certified"
        assert len(lines) > 2

    def test_tclf_run(self, capsys, tmp_path):
        out_path = tmp_path / "tclf.csv"
        code, _, _ = run(
            capsys,
            "tclf",
            "--config",
            SOL_CONFIG,
            "--n-max",
            "4",
            "--out",
            str(out_path),
        )
        assert code == 0
        assert out_path.exists()

    def test_byte_identical_rerun(self, capsys, tmp_path):
        args = ["clf", "--config", BS2_CONFIG, "--n-max", "4", "--radius", "6"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, *args, "--out", str(p1))
        run(capsys, *args, "--out", str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestRho:
    def test_rho_output(self, capsys):
        code, out, _ = run(capsys, "rho", "--config", SOL_CONFIG, "--x", "1,0", "--y", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["rho"] == 1
        assert payload["lattice_index"] == 2
        assert payload["axis_orders"] == [2]

    def test_missing_subcommand_exit_two(self, capsys):
        assert run(capsys, )[0] == 2
