"""Command-line interface: subcommands, file outputs, metadata embedding,
exit codes, reproducibility."""

import json

import numpy as np

from entpoly.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_PRECONDITION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEnumerate:
    def test_L3_summary_and_db(self, capsys, tmp_path):
        db = tmp_path / "db3.json"
        code, out, _ = run(capsys, "enumerate", "3", "--out", str(db))
        assert code == EXIT_OK
        assert "spectra=6" in out
        assert "permutation_orbits=4" in out
        payload = json.loads(db.read_text())
        assert payload["L"] == 3
        assert len(payload["spectra"]) == 4
        assert payload["meta"]["command"] == "enumerate"
        assert payload["meta"]["version"]

    def test_L2_degenerate_label(self, capsys):
        code, out, _ = run(capsys, "enumerate", "2")
        assert code == EXIT_OK
        assert "degenerate" in out
        assert "min_accepted_norm_sq=none" in out

    def test_cap_exceeded_exit_2(self, capsys):
        code, _, err = run(capsys, "enumerate", "9")
        assert code == EXIT_PRECONDITION
        assert "error" in err

    def test_repeat_runs_identical_file(self, capsys, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            run(capsys, "enumerate", "3", "--out", str(p))
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestSample:
    def test_histogram_output(self, capsys, tmp_path):
        out_csv = tmp_path / "hist.csv"
        code, out, _ = run(
            capsys, "sample", "10", "2000", "--seed", "5", "--bins", "12",
            "--out", str(out_csv),
        )
        assert code == EXIT_OK
        assert "ks_vs_gamma" in out
        text = out_csv.read_text()
        assert "# command=sample" in text
        assert "# seed=5" in text
        assert "bin_left,bin_right,count,model_density" in text

    def test_metadata_embeds_run_config(self, capsys, tmp_path):
        out_csv = tmp_path / "h.csv"
        run(capsys, "sample", "8", "500", "--seed", "9", "--threads", "2",
            "--out", str(out_csv))
        text = out_csv.read_text()
        for needle in ("# L=8", "# n=500", "# seed=9", "# threads=2",
                       "# filter=all-independent", "# version="):
            assert needle in text

    def test_thread_count_does_not_change_payload(self, capsys, tmp_path):
        # identical payloads across thread counts; only the embedded
        # threads metadata line reflects the differing run config
        def strip_threads(path):
            return [l for l in path.read_text().splitlines()
                    if not l.startswith("# threads")]

        for threads in (1, 4):
            run(capsys, "sample", "9", "6000", "--seed", "3",
                "--threads", str(threads), "--out", str(tmp_path / f"t{threads}.csv"),
                "--samples-out", str(tmp_path / f"s{threads}.csv"))
        assert strip_threads(tmp_path / "t1.csv") == strip_threads(tmp_path / "t4.csv")
        assert strip_threads(tmp_path / "s1.csv") == strip_threads(tmp_path / "s4.csv")

    def test_same_config_reruns_byte_identical(self, capsys, tmp_path):
        for name in ("a.csv", "b.csv"):
            run(capsys, "sample", "9", "3000", "--seed", "3", "--threads", "2",
                "--out", str(tmp_path / name))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_check_pass_and_fail(self, capsys):
        code, out, _ = run(capsys, "sample", "20", "4000", "--seed", "1",
                           "--check", "0.2")
        assert code == EXIT_OK
        assert "check passed" in out
        code, _, err = run(capsys, "sample", "20", "4000", "--seed", "1",
                           "--check", "0.0001")
        assert code == EXIT_CHECK_FAILED
        assert "CHECK FAILED" in err

    def test_log_histogram(self, capsys, tmp_path):
        p = tmp_path / "log.csv"
        code, _, _ = run(capsys, "sample", "12", "1500", "--seed", "2",
                         "--log", "--out", str(p))
        assert code == EXIT_OK
        assert "# transform=log" in p.read_text()

    def test_bad_args_exit_2(self, capsys):
        code, _, _ = run(capsys, "sample", "0", "10")
        assert code == EXIT_PRECONDITION
        code, _, _ = run(capsys, "sample", "5", "0")
        assert code == EXIT_PRECONDITION


class TestWishartCheck:
    def test_report_and_gate(self, capsys, tmp_path):
        p = tmp_path / "report.csv"
        code, out, _ = run(capsys, "wishart-check", "5", "20000", "--seed", "4",
                           "--out", str(p), "--check")
        assert code == EXIT_OK
        for name in (
            "gram_ratio_vs_chi2_1",
            "gram_ratio_vs_bartlett_two_sample",
            "transformed_direct_vs_difference_two_sample",
            "transformed_scaled_vs_chi2_1",
            "sigma_cholesky_R2_minus_1_over_L",
        ):
            assert name in out
        text = p.read_text()
        assert "check,value,threshold,pass" in text
        assert "# command=wishart-check" in text


class TestPurity:
    def test_table_with_db(self, capsys, tmp_path):
        db = tmp_path / "db3.json"
        run(capsys, "enumerate", "3", "--out", str(db))
        out_csv = tmp_path / "purity.csv"
        code, out, _ = run(capsys, "purity", "--Lmax", "7", "--db", str(db),
                           "--out", str(out_csv))
        assert code == EXIT_OK
        lines = out_csv.read_text().splitlines()
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "L,p_generic,p_all,delta_generic,min_norm_lambda"
        rows = [l.split(",") for l in lines[header_idx + 1 :]]
        assert len(rows) == 7
        by_L = {int(r[0]): r for r in rows}
        assert by_L[3][2] != ""   # p_all present where db given
        assert by_L[5][2] == ""   # absent elsewhere
        assert by_L[1][1] == ""   # degenerate generic column at L=1


class TestSpectraCommand:
    def test_w3_state(self, capsys, tmp_path):
        amp = 1 / np.sqrt(3)
        state = tmp_path / "w3.json"
        state.write_text(json.dumps(
            {"L": 3, "amplitudes": [[1, amp, 0], [2, amp, 0], [4, amp, 0]]}
        ))
        out_csv = tmp_path / "out.csv"
        code, out, _ = run(capsys, "spectra", str(state), "--out", str(out_csv))
        assert code == EXIT_OK
        assert "in_delta_H=True" in out
        assert "0.166666666667" in out
        assert "linear_entropy=0.4444444" in out
        assert "# statefile=w3.json" in out_csv.read_text()

    def test_invalid_norm_exit_2(self, capsys, tmp_path):
        state = tmp_path / "bad.json"
        state.write_text(json.dumps({"L": 1, "amplitudes": [[0, 0.4, 0]]}))
        code, _, err = run(capsys, "spectra", str(state))
        assert code == EXIT_PRECONDITION
        assert "error" in err

    def test_missing_file_exit_2(self, capsys, tmp_path):
        code, _, _ = run(capsys, "spectra", str(tmp_path / "nope.json"))
        assert code == EXIT_PRECONDITION
