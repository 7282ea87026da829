from pathlib import Path

import pytest

from forestdecomp.cli import emit_decomposition, main, parse_decomposition
from forestdecomp.decomposer import KfDecomposition, constructive_decompose, exact_decompose
from forestdecomp.graphio import GraphParseError, format_graph, parse_graph, resolve_instance_caps
from forestdecomp.multigraph import Instance, Multigraph

FIXTURES = Path(__file__).parent / "fixtures"
GRAPHS = sorted(FIXTURES.glob("*.graph"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_examples():
    gf = parse_graph("graph 2\nedge 0 1 3\n")
    assert gf.graph.edges == ((0, 1, 3),) and gf.caps is None and gf.params is None
    gf = parse_graph("graph 4\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 0\nparams 1 1\n")
    assert gf.graph.num_edges == 4 and gf.params == (1, 1)
    gf = parse_graph("# c\ngraph 3  # three\nedge 0 1\nedge 1 0 2\ncap 2 0\n")
    assert gf.graph.mult(0, 1) == 3 and gf.caps == {2: 0}
    assert resolve_instance_caps(gf, 4) == (4, 4, 0)


@pytest.mark.parametrize("text, line, words", [
    ("graph 2\nedge 0 0\n", 2, "loop"),
    ("graph 2\nedge 0 2\n", 2, "out of range"),
    ("edge 0 1\n", 1, "before 'graph'"),
    ("graph 2\nedge 0 x\n", 2, "integers"),
    ("graph 2\nvertex 1\n", 2, "unknown"),
    ("graph 2\ngraph 3\n", 2, "duplicate"),
    ("graph 2\ncap 0 1\ncap 0 2\n", 3, "twice"),
    ("# nothing\n", 0, "missing"),
])
def test_parse_errors(text, line, words):
    with pytest.raises(GraphParseError) as info:
        parse_graph(text)
    assert info.value.line == line and words in str(info.value)


@pytest.mark.parametrize("path", GRAPHS, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    text = path.read_text()
    gf = parse_graph(text)
    assert format_graph(gf.graph, gf.caps, gf.params) == text


def test_emit_decomposition_format():
    g = Multigraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    inst = Instance.uniform(g, 1, 1)
    dec, _ = constructive_decompose(inst)
    text, ok = emit_decomposition(dec, inst)
    lines = text.splitlines()
    assert ok and len(lines) == 5 and lines[-1] == "ok"
    assert lines[:-1] == sorted(lines[:-1])
    assert parse_decomposition(text, 1) == dec
    empty = Instance.uniform(Multigraph(3), 1, 1)
    assert emit_decomposition(KfDecomposition.from_labels(1, {}), empty) == ("ok\n", True)


def test_emit_flags_invalid():
    g = Multigraph(2, [(0, 1, 2)])
    inst = Instance.uniform(g, 1, 1)
    bad = KfDecomposition((frozenset({(0, 1, 0), (0, 1, 1)}),), frozenset())
    text, ok = emit_decomposition(bad, inst)
    assert not ok and text.splitlines()[-1].startswith("invalid F1: cycle")


def test_arb_and_checks(capsys):
    code, out, _ = run(capsys, "arb", FIXTURES / "c4.graph")
    assert code == 0 and out.strip() == "arb=4/3 witness=0,1,2,3"
    code, out, _ = run(capsys, "check", FIXTURES / "k4.graph", "--what", "ndt")
    assert code == 1 and out.startswith("verdict=false")
    code, out, _ = run(capsys, "check", FIXTURES / "triple.graph", "--what", "overfull", "--k", "1")
    assert code == 1 and "witness=0,1" in out
    code, out, _ = run(capsys, "check", FIXTURES / "caps.graph", "--what", "feasible")
    assert code == 0 and out.strip() == "verdict=true"
    code, out, _ = run(capsys, "check", FIXTURES / "c4.graph", "--what", "sparse")
    assert code == 0


def test_forests(capsys):
    code, out, _ = run(capsys, "forests", FIXTURES / "k4.graph", "--k", "2")
    assert code == 0 and out.splitlines()[-1] == "ok" and len(out.splitlines()) == 7
    code, out, _ = run(capsys, "forests", FIXTURES / "c4.graph")
    assert code == 1 and out.startswith("witness=0,1,2,3")


@pytest.mark.parametrize("mode", ["exact", "constructive"])
def test_decompose(capsys, mode):
    code, out, _ = run(capsys, "decompose", FIXTURES / "c4.graph", "--mode", mode, "--trace")
    lines = out.splitlines()
    assert code == 0 and "ok" in lines
    if mode == "constructive":
        assert lines[-1].startswith("# base")


def test_decompose_outside_hypotheses(capsys):
    code, out, _ = run(capsys, "decompose", FIXTURES / "k4.graph", "--mode", "exact")
    assert code == 1 and out.strip() == "none"
    code, _, err = run(capsys, "decompose", FIXTURES / "k4.graph")
    assert code == 2 and "infeasible" in err


@pytest.mark.parametrize("path", GRAPHS, ids=lambda p: p.name)
def test_modes_agree_on_fixtures(path):
    gf = parse_graph(path.read_text())
    k, d = gf.params or (1, 1)
    inst = Instance(gf.graph, k, d, resolve_instance_caps(gf, d))
    exact = exact_decompose(inst)
    try:
        constructive_decompose(inst)
        constructive_ok = True
    except ValueError:
        constructive_ok = False
    if constructive_ok:
        assert exact is not None


def test_verify_decomposition(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose", FIXTURES / "bridge.graph")
    assert code == 0
    good = tmp_path / "good.txt"
    good.write_text(out)
    code, out, _ = run(capsys, "verify-decomposition", FIXTURES / "bridge.graph", good)
    assert code == 0 and out.strip() == "ok"
    # put every copy into the first forest: the triangles become cycles
    bad = tmp_path / "bad.txt"
    bad.write_text("".join(" ".join(line.split()[:3]) + " F1\n" for line in good.read_text().splitlines()[:-1]))
    code, out, _ = run(capsys, "verify-decomposition", FIXTURES / "bridge.graph", bad)
    assert code == 1 and out.startswith("invalid")


def test_discharge(capsys):
    code, out, _ = run(capsys, "discharge", FIXTURES / "c4.graph")
    assert code == 0 and "conserved=true" in out.splitlines()[0]


def test_verify_and_sharpness(capsys):
    code, out, _ = run(capsys, "verify", "--k", "1", "--d", "1", "--max-n", "4")
    assert code == 0 and "failures=0" in out
    code, out, _ = run(capsys, "sharpness", "--k", "1", "--d", "1", "--max-n", "4")
    assert code == 0 and "violations=0" in out


def test_input_errors(capsys):
    code, _, err = run(capsys, "arb", FIXTURES / "loop.bad")
    assert code == 2 and "line 2: loop" in err
    code, _, err = run(capsys, "arb", FIXTURES / "missing.graph")
    assert code == 2
    code, _, err = run(capsys, "decompose", FIXTURES / "triple.graph")
    assert code == 2 and "k and d" in err
    with pytest.raises(SystemExit) as info:
        main(["check", str(FIXTURES / "c4.graph")])
    assert info.value.code == 2
