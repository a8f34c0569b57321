from __future__ import annotations

import json

import pytest

from reasm.cli import main, verify_bundle
from reasm.errors import InvalidTree
from reasm.generators import gen_hfk
from reasm.plane_graph import graph_to_json
from reasm.reassembly import alpha_measure, left_comb, tree_to_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cube_file(tmp_path, capsys):
    path = tmp_path / "cube.json"
    assert run(capsys, "gen", "--family", "corpus:cube", "--out", path)[0] == 0
    return path


def test_ks_then_verify(cube_file, tmp_path, capsys):
    tree = tmp_path / "out.json"
    code, out, _ = run(capsys, "ks", cube_file, "--tree", tree)
    assert code == 0
    assert json.loads(tree.read_text())["alpha"] == 4
    code, out, _ = run(capsys, "verify", cube_file, tree)
    assert code == 0
    assert out.strip() == "valid, alpha=4, bound 2k=4: OK"


def test_ks_trace_and_snapshots(cube_file, tmp_path, capsys):
    snaps = tmp_path / "snaps"
    code, _, _ = run(capsys, "ks", cube_file, "--tree", tmp_path / "t.json", "--trace", tmp_path / "tr.json", "--snapshots", snaps)
    assert code == 0
    assert json.loads((tmp_path / "tr.json").read_text())["rounds"] == 2
    assert sorted(p.name for p in snaps.iterdir()) == ["snapshot_000.dot", "snapshot_001.dot"]


def test_path_rejected(tmp_path, capsys):
    path = tmp_path / "path4.json"
    path.write_text(json.dumps({
        "vertices": [{"id": i, "x": i, "y": 0} for i in range(4)],
        "edges": [[0, 1], [1, 2], [2, 3]],
    }))
    code, _, err = run(capsys, "ks", path, "--tree", tmp_path / "t.json")
    assert code == 1
    assert "NotThreeRegular" in err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "ks")[0] == 2
    assert run(capsys, "gen", "--family", "hfk", "--out", tmp_path / "x.json")[0] == 2
    assert run(capsys, "decompose", tmp_path / "missing.json")[0] == 2


def test_lifted_flag(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(capsys, "gen", "--family", "corpus:fig-3reg-30v", "--out", g)
    assert run(capsys, "ks", g, "--tree", tmp_path / "t.json")[0] == 1
    assert run(capsys, "ks", g, "--tree", tmp_path / "t.json", "--lifted")[0] == 0
    code, out, _ = run(capsys, "verify", g, tmp_path / "t.json")
    assert code == 0 and out.strip().endswith(": OK")


def test_verify_hfk(tmp_path, capsys):
    g = tmp_path / "h.json"
    run(capsys, "gen", "--family", "hfk", "--k", "4", "--f", "7", "--out", g)
    run(capsys, "ks", g, "--tree", tmp_path / "t.json")
    rep = verify_bundle(g, tmp_path / "t.json")
    assert (rep.alpha, rep.k, rep.ok) == (8, 4, True)


def test_verify_tampered(cube_file, tmp_path, capsys):
    tree = tmp_path / "t.json"
    run(capsys, "ks", cube_file, "--tree", tree)
    data = json.loads(tree.read_text())
    leaves = [r for r in data["nodes"] if "leaf" in r]
    leaves[0]["leaf"] = leaves[1]["leaf"]
    tree.write_text(json.dumps(data))
    with pytest.raises(InvalidTree):
        verify_bundle(cube_file, tree)
    code, _, err = run(capsys, "verify", cube_file, tree)
    assert code == 1 and "InvalidTree" in err


def test_verify_violation(tmp_path, capsys):
    g = gen_hfk(4, 7)
    gp = tmp_path / "h.json"
    gp.write_text(json.dumps(graph_to_json(g)))
    # adding vertices in id order walks the cycles outermost first
    t = left_comb(range(g.n))
    assert alpha_measure(g, t).alpha == 9
    tp = tmp_path / "bad.json"
    # a stale stored alpha must not be trusted
    tp.write_text(json.dumps(tree_to_json(t, 1)))
    code, out, _ = run(capsys, "verify", gp, tp)
    assert code == 1
    assert out.strip() == "valid, alpha=9, bound 2k=8: bound VIOLATED"


def test_oracle_and_convert(cube_file, tmp_path, capsys):
    w = tmp_path / "w.json"
    code, out, _ = run(capsys, "oracle", cube_file, "--witness", w)
    assert code == 0 and json.loads(out)["alpha_opt"] == 4
    c = tmp_path / "c.json"
    assert run(capsys, "convert", "--to", "carving", w, "--out", c)[0] == 0
    assert len(json.loads(c.read_text())["branches"]) == 13
    t = tmp_path / "t.json"
    assert run(capsys, "convert", "--to", "tree", c, "--out", t)[0] == 0
    assert run(capsys, "verify", cube_file, t)[0] == 0
    assert run(capsys, "oracle", cube_file, "--max-n", "4")[0] == 1


def test_decompose_and_expand(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(capsys, "gen", "--family", "constant", "--k", "3", "--c", "4", "--out", g)
    code, out, _ = run(capsys, "decompose", g)
    assert code == 0 and json.loads(out)["k"] == 3
    e = tmp_path / "e.json"
    assert run(capsys, "expand", g, "--out", e)[0] == 0
    assert json.loads(e.read_text()) == json.loads(g.read_text())


@pytest.mark.parametrize(
    "gen_args,lifted",
    [
        (["--family", "corpus:cube"], False),
        (["--family", "corpus:hfk-4-7"], False),
        (["--family", "corpus:const-5-3"], False),
        (["--family", "corpus:fig-4reg-expanded"], False),
        (["--family", "corpus:bridged-cubes"], True),
        (["--family", "hfk", "--k", "5", "--f", "12"], False),
        (["--family", "constant", "--k", "6", "--c", "4"], False),
    ],
)
def test_round_trip_is_deterministic(gen_args, lifted, tmp_path, capsys):
    g = tmp_path / "g.json"
    assert run(capsys, "gen", *gen_args, "--out", g)[0] == 0
    extra = ["--lifted"] if lifted else []
    outs = []
    for i in range(2):
        t = tmp_path / f"t{i}.json"
        tr = tmp_path / f"tr{i}.json"
        assert run(capsys, "ks", g, "--tree", t, "--trace", tr, *extra)[0] == 0
        outs.append((t.read_bytes(), tr.read_bytes()))
    assert outs[0] == outs[1]
    code, out, _ = run(capsys, "verify", g, tmp_path / "t0.json")
    assert code == 0 and out.strip().endswith(": OK")
