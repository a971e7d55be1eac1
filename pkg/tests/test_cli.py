"""End-to-end command-line behavior through main(argv)."""
import json

import pytest

from fuelstring.cli import main
from fuelstring.scenario_io import parse_plan, parse_scenario


def write_scenario(path, tau=0.0, extra=None):
    doc = {
        "world": {"width": 50.0, "height": 50.0},
        "depot": {"x": 0.0, "y": 0.0},
        "vehicle": {"v_uav": 2.0, "v_ugv": 1.0, "fuel_capacity": 50.0,
                    "fuel_per_meter": 1.0},
        "targets": [
            {"id": 1, "x": 10.0, "y": 0.0, "tau": tau},
            {"id": 2, "x": 30.0, "y": 0.0, "tau": 0.0},
        ],
        "cost_model": {"kind": "explicit"},
    }
    if extra:
        doc.update(extra)
    path.write_text(json.dumps(doc))
    return path


def test_generate_writes_deterministic_scenario(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", "--n", "7", "--seed", "4", "--out", str(out1)]) == 0
    assert main(["generate", "--n", "7", "--seed", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    sc = parse_scenario(out1.read_text())
    assert len(sc.targets) == 7


def test_generate_cost_spec_controls_taus(tmp_path):
    out = tmp_path / "s.json"
    assert main(["generate", "--n", "5", "--seed", "1", "--cost", "uniform:0,0",
                 "--out", str(out)]) == 0
    sc = parse_scenario(out.read_text())
    assert all(t.tau == 0.0 for t in sc.targets)


def test_generate_rejects_bad_cost_spec(tmp_path):
    with pytest.raises(SystemExit):
        main(["generate", "--n", "3", "--seed", "1", "--cost", "weird:1"])


def test_plan_emits_parseable_plan(tmp_path):
    sp = write_scenario(tmp_path / "s.json")
    pp = tmp_path / "p.json"
    assert main(["plan", "--scenario", str(sp), "--plan-out", str(pp)]) == 0
    plan = parse_plan(pp.read_text())
    assert plan.segments[0].path.vertices[0].as_list() == [0.0, 0.0]


def test_simulate_writes_trace_and_metrics(tmp_path):
    sp = write_scenario(tmp_path / "s.json", tau=5.0)
    tp, mp = tmp_path / "t.jsonl", tmp_path / "m.txt"
    rc = main(["simulate", "--scenario", str(sp),
               "--trace-out", str(tp), "--metrics-out", str(mp)])
    assert rc == 0
    text = mp.read_text()
    assert "status = 'completed'" in text
    assert "mission_time = " in text
    lines = tp.read_text().splitlines()
    assert lines
    for line in lines:
        json.loads(line)


def test_simulate_stored_plan_matches_inline_planning(tmp_path):
    sp = write_scenario(tmp_path / "s.json", tau=5.0)
    pp = tmp_path / "p.json"
    main(["plan", "--scenario", str(sp), "--plan-out", str(pp)])
    t1, t2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["simulate", "--scenario", str(sp), "--trace-out", str(t1),
          "--metrics-out", str(tmp_path / "m1.txt")])
    main(["simulate", "--scenario", str(sp), "--plan", str(pp),
          "--trace-out", str(t2), "--metrics-out", str(tmp_path / "m2.txt")])
    assert t1.read_bytes() == t2.read_bytes()


def test_simulate_timeout_exit_code(tmp_path):
    # tau far beyond what refuel cycles can absorb before the time cap
    sp = write_scenario(tmp_path / "s.json", tau=1000.0)
    mp = tmp_path / "m.txt"
    assert main(["simulate", "--scenario", str(sp),
                 "--metrics-out", str(mp)]) == 3
    text = mp.read_text()
    assert "status = 'timeout'" in text
    assert "unprocessed = [1, 2]" in text


def test_validate_fresh_plan_ok(tmp_path, capsys):
    sp = write_scenario(tmp_path / "s.json")
    assert main(["validate", "--scenario", str(sp)]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_flags_corrupt_plan(tmp_path, capsys):
    sp = write_scenario(tmp_path / "s.json")
    pp = tmp_path / "p.json"
    main(["plan", "--scenario", str(sp), "--plan-out", str(pp)])
    doc = json.loads(pp.read_text())
    doc["segments"][0]["vertices"][0] = [3.0, 3.0]  # no longer starts at depot
    pp.write_text(json.dumps(doc))
    assert main(["validate", "--scenario", str(sp), "--plan", str(pp)]) == 2
    assert "depot" in capsys.readouterr().out


def test_bad_scenario_file_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--scenario", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_subcommand_usage_error():
    with pytest.raises(SystemExit):
        main([])


def test_batch_csv_to_file(tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["batch", "--sweep-targets", "3", "--sweep-fuel", "50",
               "--sweep-ratio", "0.5,1.0", "--seeds", "1", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("n_targets,fuel_capacity,speed_ratio,seed,status")
    assert len(lines) == 9


def test_stdout_default_sink(tmp_path, capsys):
    sp = write_scenario(tmp_path / "s.json")
    assert main(["plan", "--scenario", str(sp)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["segments"]
