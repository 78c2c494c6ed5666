import json

import numpy as np
import pytest

from bettiq import SingularSystemError, cli, hoeffding_sample_count


def run(args):
    return cli.main(args)


@pytest.fixture
def c4_file(tmp_path):
    path = tmp_path / "c4.json"
    assert run(["generate", "--model", "cycle", "--n", "4", "--out", str(path)]) == 0
    return path


@pytest.fixture
def octa_file(tmp_path):
    path = tmp_path / "octa.json"
    assert run(["generate", "--model", "octahedron", "--out", str(path)]) == 0
    return path


class TestGenerate:
    def test_deterministic_bytes(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        args = ["generate", "--model", "erdos-renyi", "--n", "8", "--p", "0.5", "--seed", "7"]
        assert run(args + ["--out", str(p1)]) == 0
        assert run(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_octahedron_has_12_edges(self, octa_file):
        data = json.loads(octa_file.read_text())
        assert len(data["edges"]) == 12

    def test_annulus_cloud(self, tmp_path):
        path = tmp_path / "cloud.json"
        assert run(["generate", "--model", "annulus-cloud", "--n", "12",
                    "--length-scale", "0.7", "--seed", "2", "--out", str(path)]) == 0
        data = json.loads(path.read_text())
        assert len(data["points"]) == 12 and data["length_scale"] == 0.7

    def test_bad_model_exits_2(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as err:
            run(["generate", "--model", "torus", "--out", str(tmp_path / "x.json")])
        assert err.value.code == 2


class TestExact:
    def test_c4_report(self, c4_file, tmp_path):
        out = tmp_path / "exact.json"
        assert run(["exact", "--instance", str(c4_file), "--k", "1", "--out", str(out)]) == 0
        rep = json.loads(out.read_text())["results"]
        assert rep["beta"] == 1
        assert rep["s_count"] == 4
        assert rep["slot_count"] == 6
        assert rep["kappa_laplacian"] == pytest.approx(2.0)
        assert rep["euler_ok"]

    def test_empty_level_exits_2(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"n": 4, "edges": []}))
        assert run(["exact", "--instance", str(path), "--k", "1"]) == 2

    def test_missing_file_exits_2(self):
        assert run(["exact", "--instance", "nope.json", "--k", "1"]) == 2


class TestEstimate:
    def test_exact_mode(self, c4_file, tmp_path):
        out = tmp_path / "est.json"
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["beta_rounded"] == 1
        assert res["p1"] == pytest.approx(2.0, abs=1e-9)
        assert res["beta_oracle"] == 1

    def test_sampled_replay_bit_identical(self, c4_file, tmp_path):
        args = ["estimate", "--instance", str(c4_file), "--k", "1", "--eps", "0.25",
                "--mode", "sampled", "--seed", "11"]
        o1, o2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert run(args + ["--out", str(o1)]) == 0
        assert run(args + ["--out", str(o2)]) == 0
        r1 = json.loads(o1.read_text())
        r2 = json.loads(o2.read_text())
        assert r1["results"] == r2["results"]
        assert r1["config"] == r2["config"]

    def test_sampled_sample_count(self, c4_file, tmp_path):
        out = tmp_path / "est.json"
        assert run(["estimate", "--instance", str(c4_file), "--k", "1", "--eps", "0.25",
                    "--mode", "sampled", "--seed", "1", "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["samples"] == hoeffding_sample_count(res["delta"], 0.975)

    def test_normalized_octahedron(self, octa_file, tmp_path):
        out = tmp_path / "norm.json"
        assert run(["estimate", "--instance", str(octa_file), "--k", "2", "--normalized",
                    "--delta", "0.05", "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["normalized_betti"] == pytest.approx(0.125, abs=1e-10)
        assert res["eps_measurement"] == pytest.approx(0.05 * 8 / 20)

    def test_trials_emit_csv(self, c4_file, tmp_path):
        out = tmp_path / "multi.json"
        assert run(["estimate", "--instance", str(c4_file), "--k", "1", "--eps", "0.25",
                    "--mode", "sampled", "--seed", "5", "--trials", "3",
                    "--out", str(out)]) == 0
        trials = json.loads(out.read_text())["results"]["trials"]
        assert len(trials) == 3
        csv_path = tmp_path / "multi.trials.csv"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == ",".join(cli.TRIAL_CSV_COLUMNS)
        assert len(lines) == 4

    def test_pe_bits_flag(self, c4_file, tmp_path):
        out = tmp_path / "bits.json"
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--pe", "bits:4", "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["pe"] == "bits"
        assert res["beta_rounded"] == 1

    def test_custom_pair_matches_default(self, c4_file, tmp_path):
        pair_file = tmp_path / "pair.json"
        pair_file.write_text(json.dumps({"m1": [[1, 0], [0, 1]], "m2": [[0, 0], [0, 1]]}))
        out = tmp_path / "custom.json"
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--pair", f"custom:{pair_file}", "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["beta_estimate"] == pytest.approx(1.0, abs=1e-9)
        assert res["p1"] == pytest.approx(2.0, abs=1e-9)

    def test_sampled_without_eps_exits_2(self, c4_file):
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--mode", "sampled"]) == 2

    def test_normalized_without_delta_exits_2(self, c4_file):
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--normalized"]) == 2

    def test_bad_pe_string_exits_2(self, c4_file):
        assert run(["estimate", "--instance", str(c4_file), "--k", "1",
                    "--pe", "magic"]) == 2

    def test_numerical_failure_exits_3(self, c4_file, monkeypatch):
        def boom(*args, **kwargs):
            raise SingularSystemError("forced")

        monkeypatch.setattr(cli, "estimate_betti", boom)
        assert run(["estimate", "--instance", str(c4_file), "--k", "1"]) == 3


class TestResources:
    def test_reference_row(self, tmp_path, capsys):
        assert run(["resources", "--n", "4", "--k", "1", "--kappa", "2",
                    "--beta", "1", "--s-k", "4", "--eps", "0.25"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        header = lines[0].split(",")
        row = dict(zip(header, lines[1].split(",")))
        assert float(row["this_method_cost"]) == pytest.approx(288.0)
        assert float(row["classical_cost"]) == 6.0
        assert float(row["depth_this_method"]) == 12.0
        assert float(row["depth_prior_quantum"]) == pytest.approx(16 * np.sqrt(1.5) + 8)

    def test_sweep_monotone_slots(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["resources", "--n", "4..12", "--k", "1", "--kappa", "2",
                    "--beta", "1", "--s-k", "dense", "--eps", "0.25",
                    "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        header = lines[0].split(",")
        slots = [float(dict(zip(header, ln.split(",")))["slot_count"]) for ln in lines[1:]]
        assert slots == sorted(slots) and len(set(slots)) == len(slots)

    def test_beta_zero_flagged_invalid(self, capsys):
        assert run(["resources", "--n", "4", "--k", "1", "--kappa", "2",
                    "--beta", "0", "--s-k", "4", "--eps", "0.25"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        header = lines[0].split(",")
        row = dict(zip(header, lines[1].split(",")))
        assert row["valid"] == "False"
        assert "beta" in row["error"]


class TestComplement:
    def test_c4_table(self, c4_file, tmp_path):
        out = tmp_path / "comp.json"
        assert run(["complement", "--instance", str(c4_file), "--k", "1",
                    "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["p1_restricted"] == pytest.approx(2.0, abs=1e-9)
        assert res["betti_complement_exact"] == 0
        assert res["dual_matches_block_kernel"]

    def test_complete_graph_complement_empty(self, tmp_path):
        path = tmp_path / "k4.json"
        assert run(["generate", "--model", "complete", "--n", "4", "--out", str(path)]) == 0
        out = tmp_path / "comp.json"
        assert run(["complement", "--instance", str(path), "--k", "1",
                    "--out", str(out)]) == 0
        res = json.loads(out.read_text())["results"]
        assert res["complement_slot_count"] == 0
        assert res["p1_restricted"] == 0.0
