import json

import pytest

from oddred import serialize as ser
from oddred.cli import EXIT_CERT, EXIT_DATA, EXIT_NO_ODD_RED, EXIT_NO_PM, EXIT_OK, EXIT_USAGE, main, run
from oddred.graphs import RedBlueGraph, complete_bipartite, complete_graph, doubled_graph
from oddred.labels import cubic_graphs


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(*argv):
    report, code = run([str(a) for a in argv])
    return report, code


def test_certify_dominant_example():
    report, code = _run("facet", "certify-dominant", "--n", 7, "--cycle", "0,1,2,3,4")
    assert code == EXIT_OK and report.outcome == "certified"
    assert report.payload["certificate"]["face_dim"] == 20
    assert report.payload["certificate"]["is_facet"] is True


def test_counterexample_verify():
    report, code = _run("label", "counterexample", "--verify")
    assert code == EXIT_OK
    p = report.payload
    assert p["y_in_Q"] is True and p["y_in_P"] is False and p["labelings"] == 512
    assert p["edge_v3_v7_in_some_odd_red_pm"] is False and p["separator"] is not None


def test_solve_missing_file(tmp_path):
    _, code = _run("solve", "--graph", tmp_path / "missing.json")
    assert code == EXIT_DATA


def test_usage_errors():
    assert _run("frobnicate")[1] == EXIT_USAGE
    assert _run("facet", "certify-dominant")[1] == EXIT_USAGE
    assert _run("facet", "certify-dominant", "--n", "x")[1] == EXIT_USAGE
    assert _run("facet", "certify-dominant", "--n", 7, "--cycle", "a,b")[1] == EXIT_USAGE
    assert _run("reduce", "maxcut", "--graph", "g.json")[1] in (EXIT_USAGE, EXIT_DATA)


def test_data_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run("solve", "--graph", bad)[1] == EXIT_DATA
    assert _run("facet", "certify-dominant", "--n", 6)[1] == EXIT_DATA
    g = _write(tmp_path / "k5.json", ser.graph_to_json(complete_graph(5)))
    assert _run("solve", "--graph", g)[1] == EXIT_DATA
    assert _run("reduce", "maxcut", "--graph", g, "--k", 3)[1] == EXIT_DATA


def test_solve_exit_codes(tmp_path):
    found = _write(tmp_path / "a.json", ser.graph_to_json(doubled_graph(complete_graph(3))))
    report, code = _run("solve", "--graph", found)
    assert code == EXIT_OK and report.payload["red_count"] == 3
    blue = _write(tmp_path / "b.json", ser.graph_to_json(RedBlueGraph(complete_bipartite(2, 2))))
    assert _run("solve", "--graph", blue)[1] == EXIT_NO_ODD_RED
    star = _write(tmp_path / "c.json", ser.graph_to_json(RedBlueGraph(complete_bipartite(1, 3))))
    assert _run("solve", "--graph", star)[1] == EXIT_NO_PM


def test_certification_failure(tmp_path):
    report, _ = _run("facet", "build-c-induced", "--n", 7)
    c = dict(report.payload["constraint"])
    c["rhs"] = "6/1"
    path = _write(tmp_path / "c.json", c)
    report, code = _run("facet", "certify-dominant", "--n", 7, "--constraint", path)
    assert code == EXIT_CERT and report.outcome == "invalid"


def test_determinism(tmp_path):
    args = ["complexity", "check", "--n", 9, "--samples", 200, "--seed", 3]
    a = ser.dumps(run([str(x) for x in args])[0].to_json())
    b = ser.dumps(run([str(x) for x in args])[0].to_json())
    assert a == b and '"seed": 3' in a
    s1 = run(["complexity", "search", "--n", "7", "--iterations", "200", "--seed", "5"])[0].to_json()
    s2 = run(["complexity", "search", "--n", "7", "--iterations", "200", "--seed", "5"])[0].to_json()
    assert s1 == s2 and s1["payload"]["optimal"] is False


def test_constraint_round_trip(tmp_path):
    out = tmp_path / "c.json"
    assert _run("facet", "build-c-induced", "--n", 5, "--out", out)[1] == EXIT_OK
    assert _run("facet", "certify-dominant", "--n", 5, "--constraint", out)[1] == EXIT_OK
    t = tmp_path / "t.json"
    report, code = _run("transfer", "canonical", "--constraint", out, "--out", t)
    assert code == EXIT_OK
    report, code = _run("transfer", "certify", "--constraint", t)
    assert code == EXIT_OK and report.payload["certificate"]["polytope_dim"] == 16
    report, code = _run("transfer", "certify", "--n", 5)
    assert code == EXIT_OK and report.payload["hypotheses"]["hold"] is True


def test_reduced_constraint_is_still_a_facet(tmp_path):
    out = tmp_path / "r.json"
    report, code = _run("complexity", "reduce", "--n", 7, "--out", out)
    assert code == EXIT_OK and report.payload["same_face"] is True and report.payload["within_bound"] is True
    assert _run("transfer", "certify", "--constraint", out)[1] == EXIT_OK


def test_label_round_trips(tmp_path):
    ce = tmp_path / "ce.json"
    assert _run("label", "counterexample", "--out", ce)[1] == EXIT_OK
    report, code = _run("label", "membership", "--graph", ce, "--point", ce, "--threads", 2)
    assert code == EXIT_OK and report.outcome == "inside"
    g = _write(tmp_path / "k4.json", ser.graph_to_json(cubic_graphs(4)[0]))
    red = tmp_path / "red.json"
    report, code = _run("reduce", "maxcut", "--graph", g, "--k", 4, "--verify", "--out", red)
    assert code == EXIT_OK and report.payload["agree"] is True and report.payload["max_cut"] == 4
    report, _ = _run("label", "membership", "--graph", red, "--point", red)
    assert report.outcome == "label_violation"


def test_bimodular_round_trips(tmp_path):
    g = _write(tmp_path / "g.json", ser.graph_to_json(RedBlueGraph(complete_bipartite(1, 1), {(0, 1)})))
    s = tmp_path / "s.json"
    report, code = _run("bimodular", "build", "--graph", g, "--out", s)
    assert code == EXIT_OK and report.payload["shape"] == [3, 2]
    report, code = _run("bimodular", "check", "--system", s)
    assert code == EXIT_OK and report.payload["ok"] is True
    k22 = _write(tmp_path / "k22.json", ser.graph_to_json(RedBlueGraph(complete_bipartite(2, 2), {(0, 2)})))
    report, code = _run("bimodular", "check", "--graph", k22)
    assert code == EXIT_CERT and report.payload["y_column_ok"] is True
    coeffs = _write(tmp_path / "a.json", ser.point_to_json(((0, 1),), (0,)))
    report, code = _run("bimodular", "translate", "--graph", g, "--coeffs", coeffs, "--c", "2", "--b", "0")
    assert code == EXIT_OK and report.payload["constraint"]["coeffs"] == {"0-1": "1/1"}
    assert report.payload["constraint"]["rhs"] == "1/1"


def test_main_streams(capsys):
    code = main(["facet", "build-c-induced", "--n", "5"])
    out, err = capsys.readouterr()
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "facet build-c-induced" and data["inputs_digest"].startswith("sha256:")
    assert "wall_time" not in data and "exit 0" in err


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(["--help"]))
    assert exc.value.code == 0
    assert "usage" in capsys.readouterr().out
