import json
from fractions import Fraction

import pytest

from efkx import serialize
from efkx.cli import main
from efkx.generate import gen_random
from efkx.model import Allocation
from efkx.orientations import Orientation, counterexample_family


def run(argv):
    return main(argv)


def read(path):
    with open(path) as fh:
        return json.load(fh)


# --- serialization round-trips ---------------------------------------------

def test_instance_round_trip():
    inst = gen_random(3, 7, 50, seed=5)
    assert serialize.instance_from_dict(serialize.instance_to_dict(inst)) == inst


def test_instance_round_trip_with_fractions():
    from efkx.model import Instance
    inst = Instance.from_rows([[Fraction(1, 3), 2], [1, Fraction(7, 2)]])
    d = serialize.instance_to_dict(inst)
    assert d["values"][0][0] == "1/3" and d["values"][0][1] == 2
    assert serialize.instance_from_dict(d) == inst


def test_allocation_round_trip():
    alloc = Allocation.make([{0, 2}, {1}], 5)
    d = serialize.allocation_to_dict(alloc)
    assert d["bundles"] == [[0, 2], [1]] and d["pool"] == [3, 4]
    assert serialize.allocation_from_dict(d) == alloc


def test_graph_and_orientation_round_trips():
    g = counterexample_family(1)
    assert serialize.graph_from_dict(serialize.graph_to_dict(g)) == g
    o = Orientation(tuple(e.u for e in g.edges))
    assert serialize.orientation_from_dict(serialize.orientation_to_dict(o)) == o


# --- subcommands and exit codes ---------------------------------------------

def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["gen", "random", "--n", "4", "--m", "9", "--seed", "7",
                    "--output", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_then_verify_passes(tmp_path):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "4", "--m", "10", "--seed", "3",
         "--output", str(inst)])
    assert run(["solve", str(inst), "--k", "2", "--output", str(alloc)]) == 0
    assert run(["verify", str(inst), str(alloc),
                "--alpha", "3/4", "--k", "2"]) == 0


def test_solve_k1_uses_two_thirds_pipeline(tmp_path):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "6", "--m", "14", "--seed", "11",
         "--output", str(inst)])
    assert run(["solve", str(inst), "--k", "1", "--output", str(alloc)]) == 0
    assert run(["verify", str(inst), str(alloc),
                "--alpha", "2/3", "--k", "1"]) == 0


def test_verify_failure_exits_one(tmp_path, capsys):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "2", "--m", "4", "--seed", "0",
         "--output", str(inst)])
    # give everything to agent 0: agent 1 will generally envy
    serialize.dump(Allocation.make([{0, 1, 2, 3}, set()], 4), alloc)
    code = run(["verify", str(inst), str(alloc), "--alpha", "1", "--k", "1"])
    assert code == 1
    assert "witness" in capsys.readouterr().out


def test_bad_alpha_exits_two(tmp_path):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "2", "--m", "4", "--seed", "0",
         "--output", str(inst)])
    serialize.dump(Allocation.make([{0, 1}, {2, 3}], 4), alloc)
    assert run(["verify", str(inst), str(alloc),
                "--alpha", "5/4", "--k", "1"]) == 2


def test_missing_file_exits_two(tmp_path):
    assert run(["solve", str(tmp_path / "nope.json"), "--k", "2"]) == 2


def test_oracle_budget_exits_three(tmp_path):
    inst = tmp_path / "inst.json"
    run(["gen", "random", "--n", "8", "--m", "20", "--seed", "0",
         "--output", str(inst)])
    assert run(["oracle", str(inst), "--k", "1", "--best-alpha",
                "--budget", "1000"]) == 3


def test_orient_counterexample_reports_none(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(["gen", "counterexample", "--k", "1", "--output", str(g)])
    assert run(["orient", str(g), "--k", "1", "--alpha", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["orientation"] == "none"


def test_gen_reduce_pipeline(tmp_path):
    base, out = tmp_path / "base.json", tmp_path / "reduced.json"
    from efkx.orientations import Edge, GraphInstance
    serialize.dump(GraphInstance(3, (Edge(0, 1, Fraction(2), Fraction(2)),
                                     Edge(1, 2, Fraction(3), Fraction(3)),
                                     Edge(0, 2, Fraction(4), Fraction(4)))),
                   base)
    assert run(["gen", "reduce", "--k", "2", "--input", str(base),
                "--output", str(out)]) == 0
    reduced = serialize.graph_from_dict(read(out))
    assert any(e.label == "solid" for e in reduced.edges)


def test_rr_and_props(tmp_path):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "3", "--m", "9", "--seed", "2",
         "--output", str(inst)])
    assert run(["rr", str(inst), "--k", "2", "--output", str(alloc)]) == 0
    assert run(["verify", str(inst), str(alloc),
                "--alpha", "2/3", "--k", "2"]) == 0


def test_bench_reports_full_pass(tmp_path, capsys):
    assert run(["bench", "--k", "2", "--count", "10", "--seed", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pass_rate"] == "10/10"


def test_solve_trace_is_json_lines_friendly(tmp_path):
    inst, alloc = tmp_path / "inst.json", tmp_path / "alloc.json"
    run(["gen", "random", "--n", "3", "--m", "8", "--seed", "4",
         "--output", str(inst)])
    run(["solve", str(inst), "--k", "2", "--trace", "--output", str(alloc)])
    payload = read(alloc)
    assert isinstance(payload["trace"], list)
    assert all({"iteration", "step", "agents", "goods"} <= set(ev)
               for ev in payload["trace"])
