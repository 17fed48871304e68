import json

import pytest

from discrepancy_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_constants_json(capsys):
    code, out = run(capsys, "constants", "--grid-step", "1e-4")
    assert code == 0
    payload = json.loads(out)
    assert payload["eta"] == pytest.approx(0.017357345245295124, abs=1e-12)
    assert payload["epsilon_max"] == pytest.approx(0.0694293809811805, abs=1e-12)
    assert payload["identity_residual"] <= 1e-15
    assert payload["active_terms"] == [1, 3]


def test_gen_and_disc(tmp_path, capsys):
    pts = tmp_path / "vdc.txt"
    code, _ = run(capsys, "gen", "--kind", "vanDerCorput", "--n-points", "4",
                  "--dimension", "1", "--out", str(pts))
    assert code == 0
    code, out = run(capsys, "disc", "exact", "--points", str(pts))
    assert code == 0
    payload = json.loads(out)
    assert set(payload) >= {"value", "witness", "semantics"}
    code, out = run(capsys, "disc", "l2", "--points", str(pts))
    assert code == 0
    assert json.loads(out)["value"] > 0


def test_disc_example_midpoint(tmp_path, capsys):
    pts = tmp_path / "p.txt"
    pts.write_text("0.5\n")
    code, out = run(capsys, "disc", "exact", "--points", str(pts))
    assert code == 0
    assert json.loads(out)["value"] == 0.5


def test_graphs_enum(capsys):
    code, out = run(capsys, "graphs", "enum", "--vertices", "2")
    assert code == 0
    assert json.loads(out)["count"] == 3


def test_graphs_classify_and_beckgain(tmp_path, capsys):
    graph = json.dumps({
        "vertices": [1, 2],
        "edges": [{"u": 1, "v": 2, "color": 2}],
    })
    code, out = run(capsys, "graphs", "classify", "--graph", graph)
    assert code == 0
    assert json.loads(out) == {"class": "T", "t": 0}
    results = tmp_path / "results.csv"
    code, out = run(capsys, "graphs", "beckgain", "--graph", graph,
                    "--n", "6", "--q", "2", "--l", "1",
                    "--results", str(results))
    assert code == 0
    assert json.loads(out)["ratio"] > 0
    header, row = results.read_text().strip().splitlines()
    assert header.startswith("version,")
    assert row.startswith("1,")


def test_certify_halasz(tmp_path, capsys):
    pts = tmp_path / "vdc2.txt"
    run(capsys, "gen", "--kind", "vanDerCorput", "--n-points", "16",
        "--dimension", "2", "--out", str(pts))
    code, out = run(capsys, "certify", "halasz2d", "--points", str(pts),
                    "--gamma", "0.5", "--with-star")
    assert code == 0
    payload = json.loads(out)
    assert payload["sound"]
    assert payload["lower_bound"] <= payload["exact_star"] + 1e-9


def test_certify_riesz3d_with_results(tmp_path, capsys):
    pts = tmp_path / "h3.txt"
    run(capsys, "gen", "--kind", "hammersley", "--n-points", "16",
        "--dimension", "3", "--out", str(pts))
    results = tmp_path / "riesz.csv"
    code, out = run(capsys, "certify", "riesz3d", "--points", str(pts),
                    "--n", "4", "--q", "2", "--with-star",
                    "--results", str(results))
    assert code == 0
    payload = json.loads(out)
    assert payload["sound"]
    lines = results.read_text().strip().splitlines()
    assert lines[0].split(",")[:6] == ["version", "n", "q", "a", "b", "epsilon"]
    assert len(lines) == 2


def test_haar_spectrum(tmp_path, capsys):
    pts = tmp_path / "p.txt"
    pts.write_text("0.5\n")
    code, out = run(capsys, "haar-spectrum", "--points", str(pts),
                    "--max-total", "1")
    assert code == 0
    rows = json.loads(out)
    assert any(r["coefficient_exact"] == "-1/4" for r in rows)


def test_exit_codes(tmp_path, capsys):
    # usage: unknown subcommand
    assert main(["nonsense"]) == 2
    # usage: missing file contents
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert main(["disc", "exact", "--points", str(empty)]) == 2
    # budget exceeded
    pts = tmp_path / "many.txt"
    pts.write_text("\n".join(f"0.{i:03d}" for i in range(100)))
    assert main(["disc", "exact", "--points", str(pts),
                 "--budget-corners", "5"]) == 3
    # domain error: b >= 1/4
    pts3 = tmp_path / "p3.txt"
    pts3.write_text("0.1 0.2 0.3\n")
    assert main(["certify", "riesz3d", "--points", str(pts3),
                 "--n", "4", "--q", "2", "--b", "0.25"]) == 4


def test_deterministic_output(capsys):
    code, out1 = run(capsys, "constants", "--grid-step", "1e-3")
    _, out2 = run(capsys, "constants", "--grid-step", "1e-3")
    assert code == 0 and out1 == out2


def test_json_reparses_everywhere(tmp_path, capsys):
    pts = tmp_path / "r.txt"
    run(capsys, "gen", "--kind", "random", "--n-points", "6",
        "--dimension", "2", "--seed", "3", "--out", str(pts))
    for argv in (
        ["disc", "exact", "--points", str(pts)],
        ["disc", "l2", "--points", str(pts)],
        ["haar-spectrum", "--points", str(pts), "--max-total", "2"],
        ["lemma5", "--v", "6", "--l", "2", "--k", "1"],
        ["sumchain", "--v", "4,6", "--n", "64", "--alpha", "0.35", "--q", "2"],
    ):
        code, out = run(capsys, *argv)
        assert code == 0
        json.loads(out)
