import json

import pytest

from dyncolor.cli import main
from dyncolor.coloring import emit_coloring
from dyncolor.embedding import c3c3_torus, emit_rotation
from dyncolor.families import complete, cycle, petersen, random_tree, subdivision
from dyncolor.graph import emit_graph6

import random


@pytest.fixture()
def petersen_file(tmp_path):
    p = tmp_path / "petersen.g6"
    p.write_text(emit_graph6(petersen()) + "\n")
    return str(p)


@pytest.fixture()
def grid_rot(tmp_path):
    p = tmp_path / "grid.rot"
    p.write_text(emit_rotation(c3c3_torus()))
    return str(p)


def test_chi_r_petersen(petersen_file, capsys):
    assert main(["chi-r", "--r", "3", petersen_file]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_verify_exit_codes(tmp_path, petersen_file, capsys):
    good = tmp_path / "good.col"
    good.write_text(emit_coloring({v: v + 1 for v in range(10)}))
    assert main(["verify", "--r", "3", "--coloring", str(good), petersen_file]) == 0
    bad = tmp_path / "bad.col"
    bad.write_text(emit_coloring({v: 1 + (v % 2) for v in range(10)}))
    assert main(["verify", "--r", "3", "--coloring", str(bad), petersen_file]) == 1


def test_paint_game_and_sandwich(tmp_path, capsys):
    c5 = tmp_path / "c5.g6"
    c5.write_text(emit_graph6(cycle(5)))
    assert main(["paint", "--r", "1", str(c5)]) == 0
    assert capsys.readouterr().out.startswith("3")
    assert main(["paint", "--r", "1", "--tokens", "2", str(c5)]) == 1
    assert main(["paint", "--r", "1", "--tokens", "3", str(c5)]) == 0


def test_paint_interval_for_large_graph(petersen_file, capsys):
    code = main(["paint", "--r", "3", "--genus", "1", petersen_file])
    out = capsys.readouterr().out
    assert code == 0  # the sandwich closes: chromatic 10 meets the torus bound
    assert out.startswith("10")


def test_list_check(tmp_path, capsys):
    c5 = tmp_path / "c5.g6"
    c5.write_text(emit_graph6(cycle(5)))
    lists = tmp_path / "lists.txt"
    lists.write_text("".join(f"{v}: 1 2 3 4\n" for v in range(5)))
    assert main(["list-check", "--r", "2", "--lists", str(lists), str(c5)]) == 1
    assert capsys.readouterr().out.strip() == "unsatisfiable"


def test_find_config_and_reduce(grid_rot, capsys):
    assert main(["find-config", grid_rot]) == 0
    out = capsys.readouterr().out
    assert "all-4s-quad-face" in out
    assert main(["reduce", "--kind", "all-4s-quad-face", grid_rot]) == 0
    out = capsys.readouterr().out
    assert "S = " in out and "triggers" in out


def test_discharge_and_unavoidable(grid_rot, capsys):
    assert main(["discharge", grid_rot]) == 0
    capsys.readouterr()
    assert main(["discharge", "--json", grid_rot]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["total"] == "0"
    assert set(data["vertices"]) == {"0"}
    assert main(["unavoidable", grid_rot]) == 0


def test_genus_command(grid_rot, capsys):
    assert main(["genus", grid_rot]) == 0
    assert "genus 1" in capsys.readouterr().out


def test_bound_and_mad(tmp_path, capsys):
    assert main(["bound", "--genus", "1", "--r", "3"]) == 0
    assert "omega 15" in capsys.readouterr().out
    p4 = tmp_path / "p4.txt"
    p4.write_text("0 1\n1 2\n2 3\n")
    assert main(["mad", str(p4)]) == 0
    assert capsys.readouterr().out.strip() == "3/2"


def test_kp_check_and_replay(tmp_path, capsys):
    g = subdivision(complete(4))
    gf = tmp_path / "sub.g6"
    gf.write_text(emit_graph6(g))
    cert = tmp_path / "cert.txt"
    assert main(["kp-check", "--out", str(cert), str(gf)]) == 0
    capsys.readouterr()
    assert main(["replay", "--certificate", str(cert), str(gf)]) == 0
    assert "matches" in capsys.readouterr().out


def test_contract_color_and_replay(tmp_path, capsys):
    tree = random_tree(20, random.Random(0))
    gf = tmp_path / "tree.el"
    gf.write_text("".join(f"{u} {v}\n" for u, v in tree.edges()))
    trace = tmp_path / "trace.txt"
    col = tmp_path / "col.txt"
    assert main(["contract-color", "--r", "11", "--genus", "0",
                 "--trace-out", str(trace), "--coloring-out", str(col),
                 str(gf), "--format", "edge-list"]) == 0
    capsys.readouterr()
    assert main(["replay", "--certificate", str(trace), str(gf),
                 "--format", "edge-list"]) == 0


def test_budget_exit_code(tmp_path):
    big = tmp_path / "big.el"
    tree = random_tree(30, random.Random(1))
    big.write_text("".join(f"{u} {v}\n" for u, v in tree.edges()))
    assert main(["chi-r", "--r", "2", "--max-n", "16", str(big)]) == 3


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.g6"
    bad.write_text("A")
    assert main(["chi-r", "--r", "1", str(bad)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_jobs_flag_accepted(grid_rot, capsys):
    assert main(["--jobs", "4", "genus", grid_rot]) == 0


def test_witness_roundtrips_through_verify(tmp_path, capsys):
    c5 = tmp_path / "c5.g6"
    c5.write_text(emit_graph6(cycle(5)))
    assert main(["chi-r", "--r", "2", "--witness", str(c5)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "5"
    wfile = tmp_path / "w.col"
    wfile.write_text("\n".join(out[1:]) + "\n")
    assert main(["verify", "--r", "2", "--coloring", str(wfile), str(c5)]) == 0


def test_time_limit_flag(tmp_path):
    from dyncolor.families import random_connected_graph

    big = tmp_path / "big.el"
    g = random_connected_graph(16, 0.5, random.Random(2))
    big.write_text("".join(f"{u} {v}\n" for u, v in g.edges()))
    assert main(["chi-r", "--r", "3", "--time-limit", "0.0", str(big)]) == 3
