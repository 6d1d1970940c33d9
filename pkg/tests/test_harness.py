import csv
import io
import json

import pytest

from iwasawa_biquad import cli, harness


def _strip_timing(text):
    doc = json.loads(text)
    doc["summary"].pop("timing")
    return doc


def test_search_examples():
    rows = harness.search(1, 30)
    pairs = {(t.role("q"), t.role("r")) for t in rows}
    assert {(3, 5), (3, 13), (7, 3)} <= pairs
    assert harness.search(5, 3) == []


def test_search_case2_small_bound():
    for t in harness.search(2, 20):
        q, r, s = t.role("q"), t.role("r"), t.role("s")
        assert max(q, r, s) < 20


def test_unknown_case():
    with pytest.raises(harness.UnknownCase):
        harness.search(30)


def test_verify_small_campaign_agrees():
    rep = harness.verify([1, 2, 10], bound=60)
    assert rep.rows and rep.all_agree
    rank0 = [r for r in rep.rows if r["pred_rank"] == 0 and r["h2_K"] is not None]
    assert rank0 and all(r["h2_K"] == 1 for r in rank0)


def test_determinism_and_parallel_equivalence():
    a = harness.to_json(harness.verify(2, bound=50))
    b = harness.to_json(harness.verify(2, bound=50))
    c = harness.verify(2, bound=50, workers=2)
    assert _strip_timing(a) == _strip_timing(b)
    da, dc = _strip_timing(a), _strip_timing(harness.to_json(c))
    assert da["rows"] == dc["rows"]


def test_json_round_trip_and_csv():
    rep = harness.verify(1, bound=20)
    text = harness.to_json(rep)
    back = harness.from_json(text)
    assert harness.to_json(back) == text
    rows = list(csv.reader(io.StringIO(harness.to_csv(rep))))
    assert tuple(rows[0]) == harness.CSV_HEADER
    assert len(rows) - 1 == len(rep.rows)


def test_empty_report():
    rep = harness.VerificationReport(config={})
    doc = json.loads(harness.to_json(rep))
    assert set(doc) == {"schema_version", "config", "rows", "summary"} and doc["rows"] == []
    assert harness.to_csv(rep).strip() == ",".join(harness.CSV_HEADER)


def test_per_tuple_errors_are_rows():
    good = harness.search(2, 40)[0]
    bad = harness.CaseTuple(2, "C1", "A", (("q", 4), ("r", 5), ("s", 7)), (4, 35, 35), 35, (5, 7))
    row = harness.verify_tuple(bad)
    assert row["agree"] is False and "error" in row["diagnostics"]
    assert harness.verify_tuple(good, disc_cap=10)["agree"]  # h_2 cells skipped, ranks still checked


def test_structure_campaign_orders_match():
    rep = harness.structure_campaign(bound=60)
    fam = [r for r in rep.rows if r["group"]]
    assert fam and rep.all_agree


def test_cli_round_trip(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert cli.main(["verify", "--case", "1", "--bound", "20", "--out", str(out)]) == 0
    assert cli.main(["report", str(out), "--format", "csv"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == ",".join(harness.CSV_HEADER)
    assert cli.main(["search", "--case", "99"]) == 2


def test_search_report_renders_without_verdicts(capsys):
    assert cli.main(["search", "--case", "10", "--bound", "20", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"schema_version", "config", "rows", "summary"}
    assert doc["rows"] and doc["summary"]["disagree"] == 0
    assert all(r["pred_rank"] == 0 for r in doc["rows"])
