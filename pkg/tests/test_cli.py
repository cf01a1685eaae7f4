"""Command-line surface: file formats, subcommands, exit codes, determinism."""

import json

import pytest

from unlearn_lab.cli import main


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def thr4_file(tmp_path):
    return _write(tmp_path / "thr4.json", {"generator": {"kind": "thresholds", "m": 4}})


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dims_thresholds(thr4_file, capsys):
    code, out, _ = _run(capsys, ["dims", thr4_file])
    assert code == 0
    doc = json.loads(out)
    assert (doc["vc"], doc["littlestone"], doc["star"], doc["hollow_star"], doc["eluder"], doc["mis"]) == (
        1, 2, 2, 2, 4, 4,
    )


def test_dims_halfspace_class(tmp_path, capsys):
    path = _write(
        tmp_path / "hs.json",
        {"generator": {"kind": "halfspace", "d": 1}, "domain": [[0], [1], [2], [3], [4]]},
    )
    code, out, _ = _run(capsys, ["dims", path, "--cap", "4"])
    assert code == 0
    doc = json.loads(out)
    assert doc["hollow_star"] == 3
    assert doc["littlestone"] is None and doc["mis"] is None


def test_dims_witness_flag(thr4_file, capsys):
    code, out, _ = _run(capsys, ["dims", thr4_file, "--witness"])
    doc = json.loads(out)
    assert code == 0 and "witnesses" in doc


def test_vs_encode_and_merge(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 1, "y": 1}, {"x": 2, "y": 1}]})
    code, out, _ = _run(capsys, ["vs-encode", thr4_file, data])
    assert code == 0
    doc = json.loads(out)
    assert doc["encoding"] == {"kind": "realizable", "pairs": [[1, 1]]}
    assert doc["pair_count"] == 1

    enc_a = _write(tmp_path / "a.json", {"kind": "realizable", "pairs": [[0, 1]]})
    enc_b = _write(tmp_path / "b.json", {"kind": "realizable", "pairs": [[1, 0]]})
    code, out, _ = _run(capsys, ["merge", thr4_file, enc_a, enc_b])
    assert code == 0
    merged = json.loads(out)["encoding"]
    assert merged["kind"] == "unrealizable"


def test_scheme_run_bounded(tmp_path, thr4_file, capsys):
    data = _write(
        tmp_path / "d.json",
        {"items": [{"x": 0, "y": 1}, {"x": 1, "y": 0}, {"x": 2, "y": 1}, {"x": 3, "y": 0}]},
    )
    queries = _write(
        tmp_path / "q.json",
        {"queries": [{"indices": [2, 4]}, {"indices": [1]}, {"indices": []}]},
    )
    code, out, _ = _run(
        capsys,
        ["scheme", "run", "--scheme", "bounded", "--k", "2",
         "--class", thr4_file, "--dataset", data, "--queries", queries],
    )
    assert code == 0
    doc = json.loads(out)
    assert [a["answer"] for a in doc["answers"]] == ["yes", "no", "no"]
    assert doc["bound_ok"] is True
    assert doc["bound"]["dims"] == {"hollow_star": 2}


def test_scheme_run_merkle_records(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": i % 4, "y": 1} for i in range(8)]})
    queries = _write(tmp_path / "q.json", {"indices": [5]})
    record = tmp_path / "rec.json"
    code, out, _ = _run(
        capsys,
        ["scheme", "run", "--scheme", "merkle", "--class", thr4_file,
         "--dataset", data, "--queries", queries, "--record", str(record)],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["aux_bits"] == 1
    assert doc["max_ticket_bits"] > 0
    stored = json.loads(record.read_text())
    assert stored["kind"] == "scheme-run" and stored["bound_ok"] is True


def test_scheme_run_chain_requires_tilu_class(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 0, "y": 1}]})
    code, _, err = _run(
        capsys,
        ["scheme", "run", "--scheme", "chain", "--class", thr4_file, "--dataset", data],
    )
    assert code == 2 and "tilu-ub" in err


def test_scheme_run_chain(tmp_path, capsys):
    cls = _write(tmp_path / "c.json", {"generator": {"kind": "tilu-ub", "d": 2, "domain_size": 4}})
    data = _write(
        tmp_path / "d.json",
        {"items": [{"x": 0, "y": 0}, {"x": 0, "y": 1}, {"x": 2, "y": 1}, {"x": 3, "y": 0}]},
    )
    queries = _write(tmp_path / "q.json", {"queries": [{"indices": [1, 3]}, {"indices": []}]})
    code, out, _ = _run(
        capsys,
        ["scheme", "run", "--scheme", "chain", "--class", cls, "--dataset", data, "--queries", queries],
    )
    assert code == 0
    doc = json.loads(out)
    assert [a["answer"] for a in doc["answers"]] == ["yes", "no"]


def test_scheme_run_erm_merkle(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 1, "y": 1}, {"x": 2, "y": 1}]})
    queries = _write(tmp_path / "q.json", {"indices": [1]})
    code, out, _ = _run(
        capsys,
        ["scheme", "run", "--scheme", "erm-merkle", "--class", thr4_file,
         "--dataset", data, "--queries", queries],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["answers"][0]["answer"] == 0


def test_scheme_run_erm_merkle_unrealizable_is_domain_error(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 0, "y": 1}, {"x": 1, "y": 0}]})
    code, _, err = _run(
        capsys,
        ["scheme", "run", "--scheme", "erm-merkle", "--class", thr4_file, "--dataset", data],
    )
    assert code == 1 and "realizable" in err


def test_lb_demo_fixed_secret(capsys):
    code, out, _ = _run(
        capsys,
        ["lb", "demo", "--instance", "vclb", "--params", '{"m": 4}', "--secret", "1001"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["recovered"] == "1001" and doc["exact"] is True
    assert len(doc["transcript"]) == 4


def test_lb_demo_erm_whitebox(capsys):
    code, out, _ = _run(
        capsys,
        ["lb", "demo", "--instance", "erm-whitebox", "--params", '{"m": 4}',
         "--scheme", "trivial-erm", "--secret", "0101"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["exact"] is True


def test_lb_demo_scheme_task_mismatch(capsys):
    code, _, err = _run(
        capsys,
        ["lb", "demo", "--instance", "erm-whitebox", "--scheme", "trivial"],
    )
    assert code == 2


def test_lb_demo_env_seeded_secret(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("UNLEARN_LAB_SEED", "7")
    code, out1, _ = _run(capsys, ["lb", "demo", "--instance", "shatter", "--params", '{"m": 3}'])
    code2, out2, _ = _run(capsys, ["lb", "demo", "--instance", "shatter", "--params", '{"m": 3}'])
    assert code == code2 == 0
    assert json.loads(out1)["secret"] == json.loads(out2)["secret"]


def test_report_is_deterministic(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 1, "y": 1}]})
    rec1 = tmp_path / "r1.json"
    rec2 = tmp_path / "r2.json"
    _run(capsys, ["scheme", "run", "--scheme", "trivial", "--class", thr4_file,
                  "--dataset", data, "--record", str(rec1)])
    _run(capsys, ["scheme", "run", "--scheme", "merkle", "--class", thr4_file,
                  "--dataset", data, "--record", str(rec2)])
    out_a = tmp_path / "report_a.json"
    out_b = tmp_path / "report_b.json"
    code, _, err = _run(capsys, ["report", str(rec1), str(rec2), "--out", str(out_a)])
    assert code == 0
    assert "scheme" in err  # the text table goes to stderr
    code, _, _ = _run(capsys, ["report", str(rec2), str(rec1), "--out", str(out_b)])
    assert code == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_missing_file_exits_2(capsys):
    code, _, err = _run(capsys, ["dims", "/nonexistent/class.json"])
    assert code == 2 and "not found" in err


def test_malformed_json_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(capsys, ["dims", str(bad)])
    assert code == 1 and "line" in err


def test_bad_usage_exits_2(capsys):
    code, _, _ = _run(capsys, ["no-such-command"])
    assert code == 2


def test_dataset_point_out_of_domain_exits_1(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 9, "y": 1}]})
    code, _, err = _run(capsys, ["vs-encode", thr4_file, data])
    assert code == 1 and "outside domain" in err


def test_query_unknown_item_exits_1(tmp_path, thr4_file, capsys):
    data = _write(tmp_path / "d.json", {"items": [{"x": 1, "y": 1}]})
    queries = _write(tmp_path / "q.json", {"indices": [5]})
    code, _, err = _run(
        capsys,
        ["scheme", "run", "--scheme", "trivial", "--class", thr4_file,
         "--dataset", data, "--queries", queries],
    )
    assert code == 1 and "unknown items" in err
