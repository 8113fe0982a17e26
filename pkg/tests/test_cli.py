import json
import math
from importlib.resources import files

import numpy as np
import pytest

from phonodist import cli, corpus, dirichlet, entropy, io, maxent

DATA = files("phonodist") / "data"


def data_path(name):
    return str(DATA / name)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestFitAlpha:
    def test_matches_library(self, capsys):
        payload = run_json(capsys, "fit-alpha", data_path("samoan.tsv"))
        counts = io.load_frequency_table(data_path("samoan.tsv"))
        est = entropy.cwj_entropy(counts)
        assert payload["schema_version"] == 1
        assert payload["language"] == "samoan"
        assert payload["n"] == est.support_size
        assert payload["alpha_hat"] == float(
            f"{dirichlet.solve_alpha(est.value, est.support_size):.12g}"
        )
        assert payload["H_cwj"] == float(f"{est.value:.12g}")

    def test_n_override(self, capsys):
        payload = run_json(capsys, "fit-alpha", data_path("samoan.tsv"), "--n", "20")
        assert payload["n"] == 20
        assert payload["config"]["n_override"] == 20

    def test_infeasible_entropy_exits_4(self, capsys, tmp_path):
        table = tmp_path / "uniform.tsv"
        table.write_text("a\t100\nb\t100\nc\t100\n", encoding="utf-8")
        code, _, err = run(capsys, "fit-alpha", str(table))
        assert code == 4
        assert "error:" in err

    def test_missing_file_exits_3(self, capsys, tmp_path):
        code, _, err = run(capsys, "fit-alpha", str(tmp_path / "nope.tsv"))
        assert code == 3
        assert "error:" in err

    def test_malformed_row_exits_3(self, capsys, tmp_path):
        table = tmp_path / "bad.tsv"
        table.write_text("a\t10\nb\tten\n", encoding="utf-8")
        code, _, err = run(capsys, "fit-alpha", str(table))
        assert code == 3
        assert "bad.tsv:2" in err


class TestPredictAlpha:
    def test_default_law(self, capsys):
        payload = run_json(capsys, "predict-alpha", "--n", "160")
        assert payload["alpha_predicted"] == float(
            f"{dirichlet.predict_alpha(160):.12g}"
        )
        assert payload["config"] == {"coeff_a": 19.47, "exponent_b": -0.95}

    def test_custom_law(self, capsys):
        payload = run_json(
            capsys, "predict-alpha", "--n", "4", "--coeff-a", "2", "--exponent-b", "-1"
        )
        assert payload["alpha_predicted"] == 0.5

    def test_invalid_inventory_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["predict-alpha", "--n", "1"])
        assert excinfo.value.code == 2


class TestReconstruct:
    def test_rows_match_library(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--n", "13")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "# schema_version\t1"
        assert lines[2] == "rank\tmean\tsd\tci_low\tci_high"
        body = lines[3:]
        assert len(body) == 13
        summary = dirichlet.reconstruct_from_inventory(13)
        for line, (rank, mean, sd, lo, hi) in zip(body, summary.rank_rows()):
            cells = line.split("\t")
            assert int(cells[0]) == rank
            assert cells[1] == f"{mean:.12g}"
            assert cells[4] == f"{hi:.12g}"

    def test_means_sum_to_one(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--n", "11")
        means = [float(l.split("\t")[1]) for l in out.strip().split("\n")[3:]]
        assert sum(means) == pytest.approx(1.0, abs=1e-6)

    def test_deterministic_output_files(self, capsys, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert cli.main(["reconstruct", "--n", "17", "-o", str(a)]) == 0
        assert cli.main(["reconstruct", "--n", "17", "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_gamma_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["reconstruct", "--n", "10", "--gamma", "1.5"])
        assert excinfo.value.code == 2


class TestEstimateEntropy:
    def test_matches_library(self, capsys):
        payload = run_json(capsys, "estimate-entropy", data_path("kaiwa.tsv"))
        counts = io.load_frequency_table(data_path("kaiwa.tsv"))
        est = entropy.cwj_entropy(counts)
        assert payload["H_cwj"] == float(f"{est.value:.12g}")
        assert payload["H_plugin"] == float(
            f"{entropy.plugin_entropy(counts).value:.12g}"
        )
        assert payload["H_max"] == float(f"{math.log(est.support_size):.12g}")
        assert 0.0 < payload["relative_entropy"] <= 1.0


class TestFeaturesAndMaxent:
    def test_features_table_matches_library(self, capsys):
        code, out, _ = run(
            capsys, "features", data_path("toy_a.lex"), data_path("toy_incidence.tsv")
        )
        assert code == 0
        lexicon = io.load_lexicon(data_path("toy_a.lex"))
        incidence = io.load_incidence(data_path("toy_incidence.tsv"))
        table = corpus.build_feature_table(lexicon, incidence)
        lines = out.strip().split("\n")
        body = [l for l in lines if not l.startswith("#")][1:]
        assert len(body) == len(table.phonemes)
        for line, i in zip(body, range(len(table.phonemes))):
            cells = line.split("\t")
            assert cells[0] == table.phonemes[i]
            assert cells[1] == f"{float(table.observed_prob[i]):.12g}"
            assert cells[3] == f"{float(table.seg_info[i]):.12g}"
        constraints = corpus.constraint_expectations(table)
        assert f"c1={constraints.c1:.12g}" in lines[-1]

    def test_pipeline_into_maxent(self, capsys, tmp_path):
        feat_file = tmp_path / "features.tsv"
        assert (
            cli.main(
                [
                    "features",
                    data_path("toy_a.lex"),
                    data_path("toy_incidence.tsv"),
                    "-o",
                    str(feat_file),
                ]
            )
            == 0
        )
        capsys.readouterr()
        payload = run_json(capsys, "maxent", str(feat_file))
        assert max(abs(r) for r in payload["residuals"]) <= 1e-9
        assert sum(payload["probs"].values()) == pytest.approx(1.0, abs=1e-9)
        # the maxent optimum dominates the observed entropy by construction
        assert payload["entropy_guessed"] >= payload["entropy_observed"] - 1e-9
        table = io.load_feature_table(str(feat_file))
        problem = maxent.MaxEntProblem(
            support=table.phonemes,
            features=table.feature_matrix(),
            targets=corpus.constraint_expectations(table).as_array(),
        )
        solution = maxent.solve(problem)
        for p, v in zip(table.phonemes, solution.probs):
            assert payload["probs"][p] == float(f"{float(v):.12g}")

    def test_maxent_deterministic(self, capsys, tmp_path):
        feat_file = tmp_path / "features.tsv"
        cli.main(
            [
                "features",
                data_path("toy_b.lex"),
                data_path("toy_incidence.tsv"),
                "-o",
                str(feat_file),
            ]
        )
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(["maxent", str(feat_file), "-o", str(a)]) == 0
        assert cli.main(["maxent", str(feat_file), "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_coverage_floor_violation_exits_3(self, capsys, tmp_path):
        incidence = tmp_path / "sparse.tsv"
        incidence.write_text(
            "phoneme\tlanguages_with\tlanguages_total\na\t1000\t2000\n",
            encoding="utf-8",
        )
        code, _, err = run(capsys, "features", data_path("toy_a.lex"), str(incidence))
        assert code == 3
        assert "coverage" in err


class TestRegress:
    def test_recovers_planted_law(self, capsys, tmp_path):
        fits = tmp_path / "fits.tsv"
        rows = [f"{n}\t{19.47 * n ** -0.95:.12g}" for n in range(11, 161, 10)]
        fits.write_text("n\talpha_hat\n" + "\n".join(rows) + "\n", encoding="utf-8")
        payload = run_json(capsys, "regress", str(fits))
        assert payload["fit"]["slope"] == pytest.approx(-0.95, abs=1e-9)
        assert payload["law"]["coeff_a"] == pytest.approx(19.47, rel=1e-9)

    def test_too_few_rows_exits_3(self, capsys, tmp_path):
        fits = tmp_path / "fits.tsv"
        fits.write_text("n\talpha_hat\n11\t2.0\n13\t1.8\n", encoding="utf-8")
        code, _, err = run(capsys, "regress", str(fits))
        assert code == 3


class TestReport:
    def test_five_bundled_languages(self, capsys):
        tables = [
            data_path(f"{name}.tsv")
            for name in ("amenglish", "bengali", "kaiwa", "samoan", "swedish")
        ]
        payload = run_json(capsys, "report", *tables)
        assert [row["language"] for row in payload["languages"]] == [
            "amenglish",
            "bengali",
            "kaiwa",
            "samoan",
            "swedish",
        ]
        assert payload["regression"] is not None
        assert payload["regression"]["n_points"] == 5
        assert payload["law"]["exponent_b"] == pytest.approx(-0.95, abs=0.4)
        for row in payload["languages"]:
            assert row["alpha_hat"] is not None
            assert 0.0 < row["relative_entropy"] <= 1.0

    def test_deterministic(self, capsys, tmp_path):
        tables = [data_path("kaiwa.tsv"), data_path("samoan.tsv"), data_path("swedish.tsv")]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(["report", *tables, "-o", str(a)]) == 0
        assert cli.main(["report", *tables, "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestRoundTrip:
    def test_reconstruct_then_fit_recovers_alpha(self, capsys, tmp_path):
        n = 30
        summary = dirichlet.reconstruct_from_inventory(n)
        counts = np.round(summary.mean * 1_000_000).astype(int)
        table = tmp_path / "synthetic.tsv"
        table.write_text(
            "\n".join(f"ph{r:02d}\t{c}" for r, c in enumerate(counts, start=1)) + "\n",
            encoding="utf-8",
        )
        payload = run_json(capsys, "fit-alpha", str(table), "--n", str(n))
        # the entropy of the mean rank profile sits slightly above the
        # expected entropy (Jensen gap), so allow a modest overshoot
        assert payload["alpha_hat"] == pytest.approx(summary.alpha, rel=0.08)
        assert payload["alpha_hat"] >= summary.alpha
        # and the CLI value is exactly the library fit of the same counts
        loaded = io.load_frequency_table(str(table))
        expected = dirichlet.solve_alpha(entropy.cwj_entropy(loaded).value, n)
        assert payload["alpha_hat"] == float(f"{expected:.12g}")
