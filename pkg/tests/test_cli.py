import csv
import io
import json

import pytest

from treecontours import counters
from treecontours.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_MISMATCH, EXIT_USAGE, main, parse_family


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def failure(expected, *argv):
    code, _, err = run(*argv)
    assert code == expected, err
    data = json.loads(err)
    assert data["exit_code"] == expected and data["message"]
    return data


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="g.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


class TestCount:
    def test_dary(self):
        data = ok("count", "--family", "dary:2", "--n-max", "6")
        assert data == {"counts": {"1": "0", "2": "1", "3": "2", "4": "5", "5": "14", "6": "42"}}

    def test_big_numbers_are_strings(self):
        data = ok("count", "--family", "dary:2", "--n-max", "60")
        assert data["counts"]["60"] == str(counters.count_dary(2, 60))

    def test_rooted(self):
        data = ok("count", "--family", "regular:3", "--n-max", "4", "--rooted")
        assert data["counts"]["4"] == "3"

    def test_infinite(self, write):
        data = ok("count", "--grammar", write({"root": "R", "classes": {"R": ["P", "P"], "P": ["P"]}}),
                  "--n-max", "3")
        assert data["counts"]["2"] == "infinite"
        assert data["notes"]

    def test_csv(self):
        code, out, _ = run("count", "--family", "dary:3", "--n-max", "5", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == ["n", "count"] and rows[-1] == ["5", "3"]


class TestEnumerate:
    def test_lists_contours(self):
        data = ok("enumerate", "--family", "dary:2", "--n-max", "3")
        assert data["counts"] == {"1": "0", "2": "1", "3": "2"}
        assert len(data["contours"]["3"]) == 2

    def test_depth_below_bound(self):
        failure(EXIT_INPUT, "enumerate", "--family", "dary:2", "--n-max", "6", "--depth", "2")

    def test_budget(self):
        failure(EXIT_BUDGET, "enumerate", "--family", "dary:2", "--n-max", "8", "--budget", "50")

    def test_budget_env(self, monkeypatch):
        monkeypatch.setenv("CONTOUR_BUDGET", "100")
        failure(EXIT_BUDGET, "verify", "--family", "dary:2", "--n-max", "8")


class TestVerify:
    def test_agree(self):
        data = ok("verify", "--family", "dary:3", "--n-max", "7")
        assert data["agree"] and all(r["agree"] for r in data["sizes"])
        assert data["backend"] in ("cython", "python")

    def test_grammar_file(self, write):
        data = ok("verify", "--grammar", write({"root": "A", "classes": {"A": ["S", "S"], "S": ["A"]}}),
                  "--n-max", "4")
        assert [r["enumerated"] for r in data["sizes"]] == ["0", "4", "16", "80"]

    def test_stored_mismatch(self, write):
        stored = ok("count", "--family", "dary:2", "--n-max", "6")
        assert ok("verify", "--family", "dary:2", "--n-max", "6", "--expected", write(stored))["agree"]
        stored["counts"]["5"] = "15"
        code, out, err = run("verify", "--family", "dary:2", "--n-max", "6", "--expected", write(stored, "bad.json"))
        assert code == EXIT_MISMATCH
        assert json.loads(err)["exit_code"] == EXIT_MISMATCH
        # the report is still printed, with the bad row marked
        rows = {r["n"]: r for r in json.loads(out)["sizes"]}
        assert rows["5"]["stored"] == "15" and not rows["5"]["agree"]

    def test_stored_extra_size(self, write):
        failure(EXIT_MISMATCH, "verify", "--family", "dary:2", "--n-max", "3",
                "--expected", write({"counts": {"9": "1430"}}))

    def test_stored_report_unreadable(self, write):
        failure(EXIT_INPUT, "verify", "--family", "dary:2", "--n-max", "3", "--expected", write("{"))
        failure(EXIT_INPUT, "verify", "--family", "dary:2", "--n-max", "3", "--expected", write({"x": 1}))

    def test_csv(self):
        code, out, _ = run("verify", "--family", "dary:2", "--n-max", "4", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["n", "formula", "enumerated", "direct", "agree"]
        assert rows[-1] == ["4", "5", "5", "5", "true"]


class TestAnalyze:
    def test_zlike(self, write):
        data = ok("analyze", "--grammar", write({"root": "R", "classes": {"R": ["P", "P"], "P": ["P"]}}))
        assert data["has_infinite_path"] and not data["infinitely_many_sizes"]
        assert data["infinite_sizes_found"] == [2]
        assert data["witness"] == {"class_cycle": ["P"], "entry_path": ["R", "P"]}

    def test_comb(self, write):
        data = ok("analyze", "--grammar", write({"root": "C", "classes": {"C": ["C", "L"], "L": ["L"]}}),
                  "--probe-bound", "5")
        assert data["infinitely_many_sizes"] and data["infinite_sizes_found"] == [2, 3, 4, 5]

    def test_finite(self):
        data = ok("analyze", "--family", "dary:2")
        assert data["witness"] is None and not data["has_infinite_path"]


class TestBadInput:
    @pytest.mark.parametrize("grammar", [
        {"root": "A", "classes": {"A": []}},
        {"root": "A", "classes": {"A": ["B"]}},
        {"root": "B", "classes": {"A": ["A"]}},
        {"root": "A", "classes": {"A": ["A", "A"]}, "extra": 1},
        {"classes": {"A": ["A"]}},
        {"root": "A", "classes": {"A": "AA"}},
        [1, 2],
    ])
    def test_grammar_rejected(self, write, grammar):
        failure(EXIT_INPUT, "count", "--grammar", write(grammar), "--n-max", "3")

    def test_bad_json(self, write):
        data = failure(EXIT_INPUT, "count", "--grammar", write('{"root": "A",'), "--n-max", "3")
        assert "invalid JSON" in data["message"]

    def test_missing_file(self, tmp_path):
        failure(EXIT_INPUT, "count", "--grammar", str(tmp_path / "nope.json"), "--n-max", "3")

    @pytest.mark.parametrize("spec", ["dary:1", "dary", "regular:2", "tree:3", "dary:x"])
    def test_bad_family(self, spec):
        failure(EXIT_INPUT, "count", "--family", spec, "--n-max", "3")

    def test_parse_family(self):
        assert parse_family("regular:5") == ("regular", 5)


class TestUsage:
    @pytest.mark.parametrize("argv", [
        (),
        ("count", "--family", "dary:2"),
        ("count", "--n-max", "3"),
        ("count", "--family", "dary:2", "--grammar", "x.json", "--n-max", "3"),
        ("count", "--family", "dary:2", "--n-max", "0"),
        ("count", "--family", "dary:2", "--n-max", "three"),
        ("frobnicate",),
        ("peierls", "--family", "dary:2", "--n-max", "5"),
        ("peierls", "--family", "dary:2", "--n-max", "5", "--activity", "x"),
        ("peierls", "--family", "dary:2", "--n-max", "5", "--beta", "0"),
        ("peierls", "--family", "dary:2", "--n-max", "5", "--beta", "1", "--precision-bits", "32"),
        ("analyze", "--family", "dary:2", "--probe-bound", "0"),
        ("binarize", "--family", "dary:2"),
    ])
    def test_usage_errors(self, argv):
        failure(EXIT_USAGE, *argv)


class TestPeierls:
    def test_activity(self):
        data = ok("peierls", "--family", "dary:2", "--n-max", "3", "--activity", "1/8")
        assert data["partial_sum"]["exact"] == "5/256"
        assert data["partial_sum"]["lower"] == data["partial_sum"]["upper"] == "5/256"
        assert data["growth_rate"] is None
        crit = data["critical_activity"]
        assert 0.1839 < float(crit["approx"]) < 0.184

    def test_beta(self):
        data = ok("peierls", "--family", "dary:2", "--n-max", "40", "--beta", "2")
        total = data["partial_sum"]
        assert "exact" not in total
        lo = [int(x) for x in total["lower"].split("/")]
        hi = [int(x) for x in total["upper"].split("/")]
        assert lo[0] * hi[1] <= hi[0] * lo[1]
        assert data["growth_rate"] is not None

    def test_infinite_multiplicity(self, write):
        failure(EXIT_INPUT, "peierls", "--grammar", write({"root": "R", "classes": {"R": ["P", "P"], "P": ["P"]}}),
                "--n-max", "3", "--activity", "1/10")


class TestBounds:
    def test_dary(self):
        data = ok("bounds", "--family", "dary:2", "--n-max", "5")
        assert data["min_children"] == 2
        row = data["bounds"]["4"]
        assert row["count"] == "5" and row["lower"] == "2" and row["bollobas"] == "15"

    def test_csv(self):
        code, out, _ = run("bounds", "--family", "regular:3", "--n-max", "4", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["n", "count", "lower", "upper", "bollobas"]
        assert rows[4][1] == "3" and rows[4][2] == ""


class TestTransforms:
    def test_binarize(self):
        data = ok("binarize", "--family", "dary:3", "--depth", "1")
        assert data["input"]["children"][0] == [1, 2, 3]
        assert data["tree"]["children"][0] == [1, 2]
        assert sum(data["tree"]["open_end"]) == 3
        assert len(data["edge_map"]) == 3

    def test_binarize_one_child(self, write):
        failure(EXIT_INPUT, "binarize", "--grammar", write({"root": "R", "classes": {"R": ["P", "P"], "P": ["P"]}}),
                "--depth", "2")

    def test_contract(self, write):
        data = ok("contract", "--grammar", write({"root": "R", "classes": {"R": ["P", "P"], "P": ["P"]}}),
                  "--depth", "4")
        assert data["tree"]["children"] == [[1, 2], [], []]
        assert data["edge_length"] == [[0, 1, 4], [0, 2, 4]]
        assert len(data["edge_map"]) == 8


@pytest.mark.parametrize("argv", [
    ("count", "--family", "regular:4", "--n-max", "30"),
    ("enumerate", "--family", "dary:2", "--n-max", "5"),
    ("verify", "--family", "dary:3", "--n-max", "7", "--format", "csv"),
    ("peierls", "--family", "dary:3", "--n-max", "30", "--beta", "1/3"),
])
def test_deterministic(argv):
    assert run(*argv) == run(*argv)
