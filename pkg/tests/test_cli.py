import json
import os
from pathlib import Path

import pytest

from jacobsthal import cli

GOLDEN_DIR = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def jsonl_records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def strip_timings(record):
    return {k: v for k, v in record.items() if not k.startswith("elapsed")}


class TestSeq:
    def test_jacobsthal(self, capsys):
        code, out, _ = run(capsys, "seq", "--kind", "J", "--n", "10")
        assert code == 0 and out.strip() == "341"

    def test_jacobsthal_lucas_seed(self, capsys):
        code, out, _ = run(capsys, "seq", "--kind", "j", "--n", "0")
        assert code == 0 and out.strip() == "2"

    def test_lucas_u(self, capsys):
        code, out, _ = run(capsys, "seq", "--kind", "U", "--n", "5", "--params", "1,-1")
        assert code == 0 and out.strip() == "5"

    def test_lucas_v(self, capsys):
        code, out, _ = run(capsys, "seq", "--kind", "V", "--n", "4", "--params", "1,-1")
        assert code == 0 and out.strip() == "7"

    def test_check_flag(self, capsys):
        code, out, err = run(capsys, "seq", "--kind", "J", "--n", "500", "--check")
        assert code == 0
        assert "check ok" in err

    def test_check_flag_uv(self, capsys):
        code, out, err = run(capsys, "seq", "--kind", "V", "--n", "30", "--params", "3,2", "--check")
        assert code == 0
        assert out.strip() == str(2**30 + 1)  # V_n(3,2) = 2^n + 1

    def test_params_required_for_uv(self, capsys):
        code, _, err = run(capsys, "seq", "--kind", "U", "--n", "5")
        assert code == 2

    def test_params_rejected_for_jj(self, capsys):
        code, _, err = run(capsys, "seq", "--kind", "J", "--n", "5", "--params", "1,-1")
        assert code == 2

    def test_degenerate_params(self, capsys):
        code, _, err = run(capsys, "seq", "--kind", "U", "--n", "5", "--params", "2,1")
        assert code == 2
        assert "degenerate" in err

    def test_negative_n(self, capsys):
        code, _, _ = run(capsys, "seq", "--kind", "J", "--n", "-1")
        assert code == 2

    def test_bad_params_format(self, capsys):
        code, _, _ = run(capsys, "seq", "--kind", "U", "--n", "5", "--params", "ab")
        assert code == 2


class TestLehmer:
    def test_carmichael(self, capsys):
        code, out, _ = run(capsys, "lehmer", "--m", "561")
        assert code == 0
        record = json.loads(out)
        assert record["kind"] == "lehmer-verdict"
        assert record["status"] == "TotientDoesNotDivide"
        assert record["evidence"]["factors"] == [[3, 1], [11, 1], [17, 1]]

    def test_prime(self, capsys):
        code, out, _ = run(capsys, "lehmer", "--m", "13")
        assert code == 0
        assert json.loads(out)["status"] == "NotComposite"

    def test_square_factor_fires_first(self, capsys):
        code, out, _ = run(capsys, "lehmer", "--m", "945")
        assert code == 0
        assert json.loads(out)["status"] == "NotSquareFree"

    def test_indeterminate_exit_code(self, capsys):
        m = (2**61 - 1) * (2**89 - 1)
        code, out, _ = run(capsys, "lehmer", "--m", str(m),
                           "--trial-limit", "3", "--rho-iters", "2")
        assert code == 3
        record = json.loads(out)
        assert record["status"] == "Indeterminate"
        assert record["evidence"]["complete"] is False
        assert record["primality"] == "base2-strong+strong-lucas"

    def test_below_one(self, capsys):
        code, _, _ = run(capsys, "lehmer", "--m", "0")
        assert code == 2

    def test_lehmer_found_exit_4(self, capsys, monkeypatch):
        # no Lehmer number is known, so the headline exit code is exercised
        # with a staged verdict
        from jacobsthal import lehmer as lehmer_mod

        def staged(m, budget=None, cache=None):
            return lehmer_mod.LehmerVerdict(m, lehmer_mod.LehmerStatus.LEHMER)

        monkeypatch.setattr(lehmer_mod, "is_lehmer_direct", staged)
        code, out, _ = run(capsys, "lehmer", "--m", "15")
        assert code == 4
        assert json.loads(out)["status"] == "Lehmer"


class TestScan:
    def test_record_count_and_summary(self, capsys):
        code, out, err = run(capsys, "scan", "--seq", "J", "--max", "200",
                             "--mode", "certificate")
        assert code == 0
        records = jsonl_records(out)
        entries = [r for r in records if r["kind"] == "scan-entry"]
        summary = records[-1]
        assert len(entries) == 201
        assert summary["kind"] == "scan-summary"
        assert summary["count"] == 201
        assert summary["lehmer"] == 0
        assert summary["fallbacks"] == 0
        assert summary["rule_counts"] == {
            "DegenerateValue": 3,
            "OddIndexValuation": 99,
            "EvenIndexValuation": 99,
        }
        assert "scan J" in err

    def test_schema_stable_keys(self, capsys):
        code, out, _ = run(capsys, "scan", "--seq", "j", "--max", "20",
                           "--mode", "certificate")
        assert code == 0
        entries = [r for r in jsonl_records(out) if r["kind"] == "scan-entry"]
        keys = {frozenset(r.keys()) for r in entries}
        assert len(keys) == 1
        for r in entries:
            assert r["axioms"] == {"omega_lower_bound": 15}
            assert r["mode"] == "certificate"

    def test_direct_mode(self, capsys):
        code, out, _ = run(capsys, "scan", "--seq", "j", "--max", "12", "--mode", "direct")
        assert code == 0
        entries = [r for r in jsonl_records(out) if r["kind"] == "scan-entry"]
        assert len(entries) == 13
        assert all(r["status"] is not None for r in entries)
        assert all(r["rule"] is None for r in entries)

    def test_direct_mode_indeterminate_exit(self, capsys):
        code, out, _ = run(capsys, "scan", "--seq", "J", "--max", "30", "--mode", "direct",
                           "--trial-limit", "3", "--rho-iters", "1")
        assert code == 3
        summary = jsonl_records(out)[-1]
        assert summary["indeterminate"] >= 1

    def test_scan_lehmer_found_exit_4(self, capsys, monkeypatch):
        from jacobsthal import lehmer as lehmer_mod

        def staged(m, budget=None, cache=None):
            return lehmer_mod.LehmerVerdict(m, lehmer_mod.LehmerStatus.LEHMER)

        monkeypatch.setattr(lehmer_mod, "is_lehmer_direct", staged)
        code, out, _ = run(capsys, "scan", "--seq", "J", "--max", "6", "--mode", "direct")
        assert code == 4
        assert jsonl_records(out)[-1]["lehmer"] >= 1

    def test_omega_bound_fallback_reported(self, capsys):
        code, out, _ = run(capsys, "scan", "--seq", "J", "--max", "20",
                           "--mode", "certificate", "--omega-bound", "2")
        assert code == 0
        entries = [r for r in jsonl_records(out) if r["kind"] == "scan-entry"]
        fallbacks = [r for r in entries if r["fallback"]]
        assert [r["n"] for r in fallbacks] == list(range(4, 21, 2))
        assert all(r["rule"] == "SmallIndexDirect" for r in fallbacks)
        assert all(r["status"] is not None for r in fallbacks)
        assert all(r["axioms"] == {"omega_lower_bound": 2} for r in entries)

    def test_bad_omega_bound(self, capsys):
        code, _, _ = run(capsys, "scan", "--seq", "J", "--max", "5",
                         "--mode", "certificate", "--omega-bound", "1")
        assert code == 2

    def test_jsonl_file_output(self, capsys, tmp_path):
        target = tmp_path / "scan.jsonl"
        code, out, _ = run(capsys, "scan", "--seq", "J", "--max", "5",
                           "--mode", "certificate", "--jsonl", str(target))
        assert code == 0
        assert out == ""
        records = jsonl_records(target.read_text())
        assert len(records) == 7  # 6 entries + summary

    @pytest.mark.parametrize(
        "name,argv",
        [
            ("scan_J_max5_certificate.jsonl",
             ["scan", "--seq", "J", "--max", "5", "--mode", "certificate"]),
            ("scan_j_max4_certificate.jsonl",
             ["scan", "--seq", "j", "--max", "4", "--mode", "certificate"]),
            ("scan_J_max6_direct.jsonl",
             ["scan", "--seq", "J", "--max", "6", "--mode", "direct"]),
        ],
    )
    def test_golden(self, capsys, name, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        actual = [strip_timings(r) for r in jsonl_records(out)]
        expected = [strip_timings(r) for r in jsonl_records((GOLDEN_DIR / name).read_text())]
        assert actual == expected


class TestVerify:
    def test_all_hold(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity",
                           "j(n)^2 - 9*J(n)^2 == 4*(-2)^n", "--lo", "0", "--hi", "500")
        assert code == 0
        assert json.loads(out)["status"] == "AllHold"

    def test_even_sugar(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "j(n)-1 == 2^n",
                           "--even", "--lo", "2", "--hi", "500")
        assert code == 0
        record = json.loads(out)
        assert record["status"] == "AllHold"
        assert record["step"] == 2

    def test_odd_sugar_adjusts_lo(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity",
                           "J(n)-1 == 2*J((n-1)/2)*j((n-1)/2)",
                           "--odd", "--lo", "2", "--hi", "499")
        assert code == 0
        record = json.loads(out)
        assert record["lo"] == 3 and record["step"] == 2

    def test_counterexample_exit_5(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "J(n) == j(n)",
                           "--lo", "0", "--hi", "5")
        assert code == 5
        record = json.loads(out)
        assert (record["n"], record["lhs"], record["rhs"]) == (0, 0, 2)

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run(capsys, "verify", "--identity", "J(n", "--lo", "0", "--hi", "5")
        assert code == 2
        assert "column 4" in err

    def test_no_equals_exit_2(self, capsys):
        code, _, err = run(capsys, "verify", "--identity", "J(n)", "--lo", "0", "--hi", "5")
        assert code == 2

    def test_eval_error_exit_1(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity",
                           "J(n)-1 == 2*J((n-1)/2)*j((n-1)/2)", "--lo", "2", "--hi", "10")
        assert code == 1
        assert json.loads(out)["status"] == "EvalError"

    def test_step_and_parity_flags_exclusive(self, capsys):
        code, _, _ = run(capsys, "verify", "--identity", "n == n",
                         "--lo", "0", "--hi", "5", "--step", "2", "--odd")
        assert code == 2

    def test_lo_above_hi(self, capsys):
        code, _, _ = run(capsys, "verify", "--identity", "n == n",
                         "--lo", "6", "--hi", "5")
        assert code == 2


class TestIngestAndCache:
    def test_ingest_accept_and_reject(self, capsys, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("65=5,13\n65=5,14\n65=5,11\n561=3,11,17\n# comment\n\n1=\n")
        cache_file = tmp_path / "cache.txt"
        code, out, err = run(capsys, "ingest", "--file", str(table),
                             "--cache", str(cache_file))
        assert code == 0
        result = json.loads(out)
        assert result["accepted"] == 3
        assert result["rejected"] == 2
        assert "14 is not prime" in err
        assert "product 55 != 65" in err
        text = cache_file.read_text()
        assert text.startswith("# jacobsthal factor cache v1")
        assert "65=5,13" in text

    def test_ingest_exponent_form(self, capsys, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("720=2^4,3^2,5\n")
        cache_file = tmp_path / "cache.txt"
        code, out, _ = run(capsys, "ingest", "--file", str(table), "--cache", str(cache_file))
        assert code == 0 and json.loads(out)["accepted"] == 1
        assert "720=2^4,3^2,5" in cache_file.read_text()

    def test_ingest_unsorted_factors_rejected(self, capsys, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("65=13,5\n")
        cache_file = tmp_path / "cache.txt"
        code, out, err = run(capsys, "ingest", "--file", str(table), "--cache", str(cache_file))
        assert code == 0
        assert json.loads(out)["rejected"] == 1
        assert "strictly increasing" in err

    def test_ingest_structural_error_exit_2(self, capsys, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("65=5,x\n")
        code, _, err = run(capsys, "ingest", "--file", str(table),
                           "--cache", str(tmp_path / "cache.txt"))
        assert code == 2

    def test_ingest_missing_file_exit_2(self, capsys, tmp_path):
        code, _, _ = run(capsys, "ingest", "--file", str(tmp_path / "nope.txt"),
                         "--cache", str(tmp_path / "cache.txt"))
        assert code == 2

    def test_ingest_needs_cache_path(self, capsys, monkeypatch):
        monkeypatch.delenv("JACOBSTHAL_FACTOR_CACHE", raising=False)
        code, _, err = run(capsys, "ingest", "--file", "whatever.txt")
        assert code == 2

    def test_cache_round_trip_bytes(self, capsys, tmp_path):
        from jacobsthal.cache import FactorCache

        path = tmp_path / "cache.txt"
        cache = FactorCache(path)
        cache.record_computed(65, ((5, 1), (13, 1)))
        cache.record_computed(720, ((2, 4), (3, 2), (5, 1)))
        cache.record_computed(2, ((2, 1),))
        cache.save()
        first = path.read_text()

        reloaded = FactorCache(path)
        assert len(reloaded) == 3
        entry = reloaded.get(720)
        assert entry.factors == ((2, 4), (3, 2), (5, 1))
        assert entry.complete
        assert entry.provenance == "ingested"  # re-verified on load
        reloaded.save()
        assert path.read_text() == first

    def test_cache_env_var_default(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "envcache.txt"
        monkeypatch.setenv("JACOBSTHAL_FACTOR_CACHE", str(path))
        code, _, _ = run(capsys, "lehmer", "--m", "1105")
        assert code == 0
        assert path.exists()
        assert "1105=5,13,17" in path.read_text()

    def test_cache_speeds_up_restricted_budget(self, capsys, tmp_path):
        from jacobsthal.cache import FactorCache
        from jacobsthal.numtheory import FactorBudget, factorize

        m = 1000003 * 1000033  # both prime, beyond a crippled budget
        path = tmp_path / "cache.txt"
        cache = FactorCache(path)
        full = factorize(m, cache=cache)
        assert full.complete
        cache.save()

        starved = FactorBudget(trial_limit=2, rho_iterations=1)
        assert not factorize(m, starved).complete
        warm = FactorCache(path)
        assert factorize(m, starved, warm).complete

    def test_corrupt_cache_exit_2(self, capsys, tmp_path):
        path = tmp_path / "cache.txt"
        path.write_text("# jacobsthal factor cache v1\n65=5,12\n")
        code, _, err = run(capsys, "lehmer", "--m", "65", "--cache", str(path))
        assert code == 2
        assert "bad cache file" in err


class TestTopLevel:
    def test_no_command_exit_2(self, capsys):
        assert cli.main([]) == 2

    def test_help_exit_0(self, capsys):
        assert cli.main(["--help"]) == 0

    def test_bad_choice_exit_2(self, capsys):
        assert cli.main(["scan", "--seq", "X", "--max", "5", "--mode", "direct"]) == 2
