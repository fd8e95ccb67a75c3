import csv
import io
import json

import pytest

from bickley.cli import main, parse_range, parse_log_range, render


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out) if out else None


class TestRanges:

    def test_inclusive(self):
        assert parse_range("0.5:1.5:0.5") == pytest.approx([0.5, 1.0, 1.5])

    def test_single_point(self):
        assert parse_range("1:1:1") == [1.0]
        assert parse_range("2:2:0") == [2.0]

    @pytest.mark.parametrize("text", ["1:2", "a:2:1", "2:1:0.5", "1:2:0", "1:2:-1"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_range(text)

    def test_log_range(self):
        assert parse_log_range("0.1:10:3") == pytest.approx([0.1, 1.0, 10.0])
        with pytest.raises(ValueError):
            parse_log_range("0:10:3")


class TestEval:

    def test_json(self, capsys):
        code, doc = run_json(capsys, "eval", "--alpha", "0", "--x", "1")
        assert code == 0
        assert doc['schema'] == 1
        assert doc['command'] == 'eval'
        row = doc['rows'][0]
        assert row['value'] == pytest.approx(0.42102443824070834, rel=1e-10)
        assert row['rel_tol_used'] == 1e-12

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "eval", "--alpha", "2", "--x", "1", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        assert float(rows[0]['value']) > 0

    def test_deterministic(self, capsys):
        first = run(capsys, "eval", "--alpha", "1.5", "--x", "0.3")[1]
        second = run(capsys, "eval", "--alpha", "1.5", "--x", "0.3")[1]
        assert first == second

    def test_domain_error(self, capsys):
        code, out, err = run(capsys, "eval", "--alpha", "1", "--x", "-1")
        assert code == 2
        assert out == ''
        assert 'x must be positive' in err

    def test_bad_tolerance(self, capsys):
        assert run(capsys, "eval", "--alpha", "1", "--x", "1", "--rel-tol", "2")[0] == 2

    def test_convergence_failure(self, capsys):
        code, _, _ = run(capsys, "eval", "--alpha", "0", "--x", "1e-3",
                         "--rel-tol", "1e-15", "--max-refinements", "1")
        assert code == 3

    def test_missing_argument(self):
        with pytest.raises(SystemExit) as info:
            main(["eval", "--alpha", "1"])
        assert info.value.code == 2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "value.json"
        code, out, _ = run(capsys, "eval", "--alpha", "1", "--x", "1", "--out", str(path))
        assert code == 0
        assert out == ''
        assert json.loads(path.read_text())['rows'][0]['alpha'] == 1.0


class TestTable:

    def test_rows_match_eval(self, capsys):
        code, doc = run_json(capsys, "table", "--alpha", "1", "--x-range", "0.5:1.5:0.5")
        assert code == 0
        values = [r['value'] for r in doc['rows']]
        assert len(values) == 3
        assert values[0] > values[1] > values[2]
        _, single = run_json(capsys, "eval", "--alpha", "1", "--x", "1.0")
        assert single['rows'][0]['value'] == values[1]

    def test_alpha_range(self, capsys):
        code, doc = run_json(capsys, "table", "--alpha-range", "0:2:1", "--x-log-range", "0.1:10:3")
        assert code == 0
        assert len(doc['rows']) == 9
        assert [r['alpha'] for r in doc['rows'][:3]] == [0.0, 0.0, 0.0]

    def test_malformed_range(self, capsys):
        assert run(capsys, "table", "--alpha", "1", "--x-range", "1:2")[0] == 2

    def test_missing_x(self, capsys):
        assert run(capsys, "table", "--alpha", "1")[0] == 2


class TestVerify:

    def test_turan_tiny(self, capsys):
        code, doc = run_json(capsys, "verify", "--suite", "turan", "--grid", "tiny")
        assert code == 0
        assert doc['passed']
        assert doc['rows'][0]['name'] == 'turan'

    def test_unknown_suite(self, capsys):
        code, out, err = run(capsys, "verify", "--suite", "turan,bogus", "--grid", "tiny")
        assert code == 2
        assert 'bogus' in err

    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "chebyshev,gruss", "--grid", "tiny",
                           "--format", "csv")
        assert code == 0
        names = [r['name'] for r in csv.DictReader(io.StringIO(out))]
        assert names == ['chebyshev', 'gruss']

    @pytest.mark.slow
    def test_output_independent_of_workers(self, capsys):
        argv = ("verify", "--suite", "all", "--grid", "tiny")
        first = run(capsys, *argv, "--workers", "1")
        again = run(capsys, *argv, "--workers", "1")
        pooled = run(capsys, *argv, "--workers", "4")
        assert first[0] == 0
        assert first[1] == again[1]
        assert first[1] == pooled[1]


class TestGram:

    def test_small_battery(self, capsys):
        code, doc = run_json(capsys, "gram", "--count", "5", "--max-n", "3", "--seed", "1")
        assert code == 0
        assert len(doc['rows']) == 10
        assert doc['failure_count'] == 0

    def test_same_seed_same_bytes(self, capsys):
        argv = ("gram", "--count", "4", "--max-n", "3", "--seed", "7")
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        assert first
        assert first == second


class TestDet:

    def test_quadrature_oracle(self, capsys):
        code, doc = run_json(capsys, "det", "--alpha", "2", "--n", "1", "--x-range", "0.5:1.5:0.5")
        assert code == 0
        assert all(r['agrees'] for r in doc['rows'])
        assert doc['cm_probe']['holds']

    def test_order_zero(self, capsys):
        code, doc = run_json(capsys, "det", "--alpha", "1", "--n", "0", "--x", "1")
        assert code == 0
        assert doc['rows'][0]['discrepancy'] == 0.0
        assert doc['cm_probe'] is None

    def test_quadrature_needs_size_one(self, capsys):
        assert run(capsys, "det", "--alpha", "2", "--n", "2", "--x", "1")[0] == 2

    def test_monte_carlo_small_sample_is_report_only(self, capsys):
        code, doc = run_json(capsys, "det", "--alpha", "2", "--n", "1", "--x", "1",
                             "--oracle", "mc", "--samples", "2000", "--seed", "3")
        assert code == 0
        assert doc['rows'][0]['asserted'] is False
        assert doc['rows'][0]['samples'] == 2000

    def test_monte_carlo_deterministic(self, capsys):
        argv = ("det", "--alpha", "2", "--n", "2", "--x", "1", "--oracle", "mc",
                "--samples", "3000", "--batch", "1000")
        first = run(capsys, *argv, "--workers", "1")[1]
        second = run(capsys, *argv, "--workers", "3")[1]
        assert first
        assert first == second


def test_render_csv_formats_floats():
    doc = {'columns': ['a', 'b', 'c'], 'rows': [{'a': 0.1, 'b': True, 'c': None}]}
    assert render(doc, 'csv') == "a,b,c\n0.10000000000000001,true,\n"
