import csv
import io
import json

import pytest

from bisplit.cli import main
from bisplit.core import Variant, verify_solution
from bisplit.figures import fixture_text, load_fixture
from bisplit.generate import GenSpec, gen_planted
from bisplit.textio import parse_graph, read_witness


@pytest.fixture
def fig_files(tmp_path):
    def write(name):
        g = tmp_path / f"{name}.graph"
        g.write_text(fixture_text(name))
        return g
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_writes_verifiable_witness(tmp_path, fig_files, capsys):
    g = fig_files("fig1")
    w = tmp_path / "fig1.witness"
    code, out, _ = run(capsys, "solve", "--input", g, "-k", 1, "--witness", w)
    assert code == 0 and out.strip() == "yes 1"
    assert w.read_text() == "split L3 | R1 R2 | R4 R5\n"
    assert run(capsys, "verify", "--input", g, "--witness", w, "-k", 1)[0] == 0


def test_solve_no_exit_code(capsys):
    code, out, _ = run(capsys, "solve", "--input", "fixture:fig2b", "-k", 6)
    assert code == 1 and out.strip() == "no"


def test_solve_stats_json(tmp_path, capsys):
    stats = tmp_path / "stats.json"
    code, _, _ = run(capsys, "solve", "--input", "fixture:fig3", "-k", 4, "--variant", "one-sided",
                     "--stats-json", stats, "--threads", 2)
    data = json.loads(stats.read_text())
    assert code == 0 and data["opt_cost"] == 4
    for key in ("kernel", "candidates_explored", "pruned_branches", "wall_time"):
        assert key in data


@pytest.mark.parametrize("variant", ["two-sided", "one-sided"])
def test_every_yes_witness_verifies(tmp_path, capsys, variant):
    for seed in range(5):
        inst = gen_planted(GenSpec(3, 3, 1, 3, overlap_vertices=1, noise_edits=2, seed=seed))
        g = tmp_path / f"g{seed}.graph"
        g.write_text(inst.to_text())
        w = tmp_path / f"g{seed}.witness"
        code, _, _ = run(capsys, "solve", "--input", g, "-k", 4, "--variant", variant, "--witness", w)
        if code == 0:
            ops = read_witness(w)
            assert verify_solution(inst.graph, ops, 4, Variant(variant))
            assert run(capsys, "verify", "--input", g, "--witness", w, "-k", 4, "--variant", variant)[0] == 0


def test_verify_messages(tmp_path, fig_files, capsys):
    g = fig_files("fig1")
    w = tmp_path / "w"
    w.write_text(fixture_text("fig1", "witness"))
    code, out, _ = run(capsys, "verify", "--input", g, "--witness", w, "-k", 0)
    assert code == 1 and out.strip() == "length 1 exceeds budget 0"
    w.write_text("split R1 | L1 L2 | L3\n")
    code, out, _ = run(capsys, "verify", "--input", g, "--witness", w, "-k", 2, "--variant", "one-sided")
    assert code == 1 and "variant violation" in out


def test_verify_parse_error(tmp_path, fig_files, capsys):
    g = fig_files("fig1")
    w = tmp_path / "w"
    w.write_text("del L1 R1\nsplit nonsense\n")
    code, _, err = run(capsys, "verify", "--input", g, "--witness", w, "-k", 2)
    assert code == 2 and "line 2" in err


def test_bad_graph_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("p bsplit 1 1 1\ne 1 2\n")
    code, _, err = run(capsys, "solve", "--input", bad, "-k", 1)
    assert code == 2 and "line 2" in err
    assert run(capsys, "solve", "--input", tmp_path / "missing", "-k", 1)[0] == 2
    assert run(capsys, "solve", "--input", bad)[0] == 2
    assert run(capsys, "solve", "--input", "fixture:fig1", "-k", -1)[0] == 2


def test_kernelize(tmp_path, capsys):
    out = tmp_path / "k.graph"
    stats = tmp_path / "k.json"
    code, text, _ = run(capsys, "kernelize", "--input", "fixture:fig2b", "-k", 2, "--output", out,
                        "--stats-json", stats)
    assert code == 0 and text.strip() == "reduced"
    assert parse_graph(out.read_text()).n == 12
    assert set(json.loads(stats.read_text())) >= {
        "classes_before", "classes_after", "vertices_removed_rule1", "vertices_removed_rule2"
    }


def test_kernelize_trivially_no(tmp_path, capsys):
    out = tmp_path / "k.graph"
    src = tmp_path / "p4s.graph"
    from bisplit.kernel import no_instance
    from bisplit.textio import format_graph

    src.write_text(format_graph(no_instance(4)))
    code, text, _ = run(capsys, "kernelize", "--input", src, "-k", 2, "--output", out)
    assert code == 1 and text.strip() == "trivially-no"
    g = parse_graph(out.read_text())
    assert run(capsys, "solve", "--input", out, "-k", 2)[0] == 1 and g.n == 12


def test_oracle_cmd(capsys):
    assert run(capsys, "oracle", "--input", "fixture:fig1", "-k", 1)[:2] == (0, "yes 1\n")
    assert run(capsys, "oracle", "--input", "fixture:fig1", "-k", 1, "--no-split")[0] == 1
    assert run(capsys, "oracle", "--input", "fixture:fig2a", "-k", 2, "--mode", "bfs")[0] == 2
    assert run(capsys, "oracle", "--input", "fixture:fig2a", "-k", 1, "--mode", "bfs", "--force")[0] == 1


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for path in (a, b):
        run(capsys, "gen", "--left-clusters", 3, "--overlap", 2, "--seed", 17, "--output", path)
    assert a.read_bytes() == b.read_bytes()
    assert "planted certificate cost 2" in a.read_text()
    assert run(capsys, "solve", "--input", a, "-k", 2)[0] == 0
    assert run(capsys, "gen", "--left-clusters", 1, "--overlap", 9)[0] == 2


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_fig3(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "fig3.graph").write_text(fixture_text("fig3"))
    (corpus / "broken.graph").write_text("nonsense\n")
    code, out, err = run(capsys, "bench", "--corpus", corpus, "-k", 4)
    rows = read_csv(out)
    assert code == 0 and "broken.graph" in err and len(rows) == 1
    row = rows[0]
    assert (row["kernel_classes"], row["bound_6k"], row["decision"], row["opt_cost"]) == ("12", "24", "yes", "4")


def test_bench_empty_corpus(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "--corpus", tmp_path, "-k", 1)
    assert code == 0 and out.count("\n") == 1 and out.startswith("instance,k,n,m,")


def test_bench_generated_corpus_within_bound(tmp_path, capsys):
    for seed in range(10):
        run(capsys, "gen", "--left-clusters", 3, "--overlap", 1, "--noise", 1, "--seed", seed,
            "--output", tmp_path / f"s{seed}.graph")
    json_out = tmp_path / "out.json"
    run(capsys, "bench", "--corpus", tmp_path, "-k", 1, 2, "--json", "--output", json_out)
    rows = json.loads(json_out.read_text())
    assert len(rows) == 20
    for row in rows:
        if row["kernel_classes"] != "":
            assert row["kernel_classes"] <= 6 * row["k"]
    assert [r["instance"] for r in rows] == sorted(r["instance"] for r in rows)


def test_fixtures_cmd(capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0 and out.split() == ["fig1", "fig2a", "fig2b", "fig3"]
    code, out, _ = run(capsys, "fixtures", "fig3")
    assert parse_graph(out) == load_fixture("fig3")
    assert run(capsys, "fixtures", "nope")[0] == 2
