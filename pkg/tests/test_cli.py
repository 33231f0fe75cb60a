import json

import pytest

from uccvqe.circuit import Circuit
from uccvqe.cli import CliError, load_report, main, validate_report


def run(args):
    return main(args)


def strip_timings(report):
    out = dict(report)
    out.pop("timings_seconds", None)
    return out


class TestSynth:
    def test_h2_counts(self, h2_path, tmp_path):
        code = run(["synth", "--fcidump", h2_path, "--electrons", "2",
                    "--out", str(tmp_path)])
        assert code == 0
        report = load_report(tmp_path / "report.json")
        assert report["qubits"] == 4
        assert report["parameter_count"] == 1
        assert report["two_qubit_gate_count"] == 4
        assert report["qwc_group_count"] == 5
        assert report["energies_hartree"]["hf"] == pytest.approx(-1.11668005, abs=1e-7)

    def test_symmetry_off_never_lowers_parameter_count(self, h2_path, tmp_path):
        run(["synth", "--fcidump", h2_path, "--electrons", "2",
             "--variant", "uccsd", "--out", str(tmp_path / "on")])
        run(["synth", "--fcidump", h2_path, "--electrons", "2",
             "--variant", "uccsd", "--no-symmetry", "--out", str(tmp_path / "off")])
        with_sym = load_report(tmp_path / "on" / "report.json")["parameter_count"]
        without = load_report(tmp_path / "off" / "report.json")["parameter_count"]
        assert without >= with_sym

    def test_circuit_file_round_trips(self, h2_path, tmp_path):
        run(["synth", "--fcidump", h2_path, "--electrons", "2", "--out", str(tmp_path)])
        text = (tmp_path / "circuit.txt").read_text()
        circ = Circuit.from_text(text)
        assert circ.to_text() == text

    def test_missing_file_fails_nonzero(self, tmp_path):
        code = run(["synth", "--fcidump", str(tmp_path / "nope.fcidump"),
                    "--electrons", "2", "--out", str(tmp_path)])
        assert code == 1

    def test_bad_orbital_list_fails(self, h2_path, tmp_path):
        code = run(["synth", "--fcidump", h2_path, "--electrons", "2",
                    "--orbitals", "0;1", "--out", str(tmp_path)])
        assert code == 1


class TestVqe:
    def test_full_run_report(self, h2_path, tmp_path):
        code = run(["vqe", "--fcidump", h2_path, "--electrons", "2",
                    "--shots", "2000", "--sample-seed", "7", "--out", str(tmp_path)])
        assert code == 0
        report = load_report(tmp_path / "report.json")
        energies = report["energies_hartree"]
        assert energies["variational"] == pytest.approx(-1.1372655544, abs=1e-7)
        assert energies["exact_ground"] == pytest.approx(-1.1372655544, abs=1e-7)
        for key in ("sampled_raw", "sampled_particle", "sampled_spin"):
            assert key in energies
            assert key in report["standard_errors_hartree"]
        retained = report["retained_shots"]
        assert retained["spin"] <= retained["particle"] <= retained["z_basis_total"]
        hist_files = sorted(tmp_path.glob("group_*.hist"))
        assert len(hist_files) == report["qwc_group_count"]

    def test_repeat_runs_identical_apart_from_timings(self, h2_path, tmp_path):
        run(["vqe", "--fcidump", h2_path, "--electrons", "2", "--shots", "500",
             "--sample-seed", "3", "--out", str(tmp_path / "a")])
        run(["vqe", "--fcidump", h2_path, "--electrons", "2", "--shots", "500",
             "--sample-seed", "3", "--out", str(tmp_path / "b")])
        ra = strip_timings(load_report(tmp_path / "a" / "report.json"))
        rb = strip_timings(load_report(tmp_path / "b" / "report.json"))
        assert json.dumps(ra, sort_keys=True) == json.dumps(rb, sort_keys=True)


class TestSweep:
    def test_table_rows(self, h2_path, tmp_path, capsys):
        code = run(["sweep", "--fcidump", h2_path, "--electrons", "2",
                    "--shot-list", "600,6000", "--out", str(tmp_path)])
        assert code == 0
        report = load_report(tmp_path / "report.json")
        assert [row["shots"] for row in report["sweep"]] == [600, 6000]
        assert report["sweep"][0]["standard_error"] > report["sweep"][1]["standard_error"]
        out = capsys.readouterr().out
        assert "shots" in out and "600" in out

    def test_empty_shot_list_is_usage_error(self, h2_path, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["sweep", "--fcidump", h2_path, "--electrons", "2",
                 "--shot-list", "", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_single_value_rejected(self, h2_path, tmp_path):
        code = run(["sweep", "--fcidump", h2_path, "--electrons", "2",
                    "--shot-list", "600", "--out", str(tmp_path)])
        assert code == 1


class TestMitigateCommand:
    def test_reruns_policies_on_saved_histograms(self, h2_path, tmp_path):
        run(["vqe", "--fcidump", h2_path, "--electrons", "2", "--shots", "800",
             "--sample-seed", "5", "--out", str(tmp_path)])
        before = load_report(tmp_path / "report.json")
        code = run(["mitigate", "--report", str(tmp_path / "report.json"),
                    "--histograms", str(tmp_path), "--policy", "all"])
        assert code == 0
        after = load_report(tmp_path / "report.json")
        assert after["energies_hartree"]["sampled_spin"] == pytest.approx(
            before["energies_hartree"]["sampled_spin"], abs=1e-12
        )


class TestReportSchema:
    def test_unknown_top_level_field_rejected(self, h2_path, tmp_path):
        run(["synth", "--fcidump", h2_path, "--electrons", "2", "--out", str(tmp_path)])
        data = json.loads((tmp_path / "report.json").read_text())
        data["surprise"] = 1
        with pytest.raises(CliError, match="unknown report fields"):
            validate_report(data)

    def test_unknown_energy_field_rejected(self, h2_path, tmp_path):
        run(["synth", "--fcidump", h2_path, "--electrons", "2", "--out", str(tmp_path)])
        data = json.loads((tmp_path / "report.json").read_text())
        data["energies_hartree"]["mystery"] = 0.0
        with pytest.raises(CliError, match="unknown energy fields"):
            validate_report(data)

    def test_wrong_schema_version_rejected(self):
        with pytest.raises(CliError, match="schema"):
            validate_report({"schema_version": 99})
