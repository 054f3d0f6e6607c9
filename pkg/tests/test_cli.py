import json
import subprocess
import sys

import pytest

from hjwitness.cli import (
    EXIT_FAILS,
    EXIT_INCONCLUSIVE,
    EXIT_INFEASIBLE,
    EXIT_IO,
    EXIT_OK,
    EXIT_THRESHOLD,
    EXIT_USAGE,
    main,
)
from hjwitness.graphs import Digraph
from hjwitness.io import format_digraph, parse_graph

from oracles import brute_alpha, random_digraph


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_digraph(path, d):
    path.write_text(format_digraph(d))
    return path


def test_sample_empty(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, stdout, _ = run(["sample", "--n", 10, "--p", 0, "--seed", 1, "--out", out], capsys)
    assert code == EXIT_OK
    assert out.read_text() == "10 0\n"
    assert "n=10 m=0 seed=1" in stdout


def test_sample_complete(tmp_path, capsys):
    out = tmp_path / "g.txt"
    run(["sample", "--n", 4, "--p", 1, "--seed", 7, "--out", out], capsys)
    assert out.read_text() == "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


def test_sample_repeatable(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["sample", "--n", 30, "--p", 0.3, "--seed", 5, "--out", a], capsys)
    run(["sample", "--n", 30, "--p", 0.3, "--seed", 5, "--out", b], capsys)
    assert a.read_bytes() == b.read_bytes()
    assert parse_graph(a.read_text()).n == 30


def test_sample_rejects_bad_p(capsys):
    code, _, err = run(["sample", "--n", 3, "--p", 2], capsys)
    assert code == EXIT_USAGE and "error" in err


def test_estimate_clique_count(capsys):
    code, stdout, _ = run(["estimate", "clique-count", "--n", 12, "--k", 3, "--p", 0.3,
                           "--trials", 20000, "--seed", 1], capsys)
    data = json.loads(stdout)
    assert data["closed_form"] == pytest.approx(5.94, rel=1e-12)
    assert data["pass"] is True and code == EXIT_OK
    assert abs(data["mean"] - 5.94) <= 4 * data["stderr"]


def test_estimate_no_clique_prob_certain_clique(capsys):
    code, stdout, _ = run(["estimate", "no-clique-prob", "--u", 3, "--k", 3, "--p", 1, "--trials", 10], capsys)
    assert json.loads(stdout)["mean"] == 0 and code == EXIT_OK


def test_estimate_delta_pairs(capsys):
    code, stdout, err = run(["estimate", "delta-pairs", "--u", 10, "--k", 3], capsys)
    data = json.loads(stdout)
    assert data["overlaps"] == [{"i": 2, "enumerated": 2520, "closed_form": 2520, "match": True}]
    assert code == EXIT_OK and "2520 == 2520" in err


def test_estimate_delta_pairs_too_large(capsys):
    code, _, _ = run(["estimate", "delta-pairs", "--u", 40, "--k", 6], capsys)
    assert code == EXIT_INFEASIBLE


def test_estimate_missing_flags(capsys):
    assert run(["estimate", "clique-count", "--k", 3], capsys)[0] == EXIT_USAGE


def test_construct_small_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["construct", "--k", 2, "--n", 5, "--p", 0.4, "--seed", 3, "--canonical", "--out"]
    assert run(argv + [a], capsys)[0] == EXIT_OK
    assert run(argv + [b], capsys)[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["schema"] == "1" and data["success"] is True and "timing" not in data


def test_construct_rejects_k1(capsys):
    code, _, err = run(["construct", "--k", 1, "--n", 5, "--p", 0.5], capsys)
    assert code == EXIT_USAGE and "verify" in err


def test_construct_paper_mode_needs_multiple_of_2k(capsys):
    code, _, err = run(["construct", "--k", 3, "--paper-mode", "--n", 121], capsys)
    assert code == EXIT_USAGE and "multiple" in err


@pytest.mark.slow
def test_construct_paper_mode_records_p(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["construct", "--k", 3, "--paper-mode", "--n", 120, "--attempts", 1, "--out", out], capsys)
    data = json.loads(out.read_text())
    assert data["params"]["p"] == pytest.approx(20 * 120 ** (-2 / 3), rel=1e-15)
    assert data["params"]["mode"] == "paper"
    assert code in (EXIT_OK, EXIT_THRESHOLD)


def test_construct_threshold_failure_exit_code(tmp_path, capsys):
    code, _, _ = run(["construct", "--k", 2, "--n", 12, "--p", 0.7, "--max-cliques", 0,
                      "--attempts", 2, "--out", tmp_path / "r.json"], capsys)
    assert code == EXIT_THRESHOLD


def test_verify_two_isolated_vertices_fails(tmp_path, capsys):
    f = write_digraph(tmp_path / "d.txt", Digraph(2, (0, 0)))
    code, stdout, _ = run(["verify", f, "--k", 2], capsys)
    data = json.loads(stdout)
    assert code == EXIT_FAILS and data["outcome"] == "fails"
    assert data["counterexample"]["remaining_stability"] == 1


def test_verify_tournament_k1_holds(tmp_path, capsys):
    f = write_digraph(tmp_path / "d.txt", Digraph.transitive_tournament(5))
    code, stdout, _ = run(["verify", f, "--k", 1], capsys)
    assert code == EXIT_OK and json.loads(stdout)["outcome"] == "holds-exhaustive"


def test_verify_budget_exhaustion(tmp_path, capsys):
    f = write_digraph(tmp_path / "d.txt", Digraph.from_arcs(4, [(0, 1), (2, 3)]))
    assert run(["verify", f, "--k", 2, "--budget", 0], capsys)[0] == EXIT_INCONCLUSIVE


def test_verify_adversarial_mode(tmp_path, capsys):
    f = write_digraph(tmp_path / "d.txt", Digraph(6, (0,) * 6))
    code, stdout, _ = run(["verify", f, "--k", 2, "--mode", "adversarial", "--budget", 20], capsys)
    assert code == EXIT_OK and json.loads(stdout)["outcome"] == "holds-no-counterexample"


def test_verify_construct_report_matches_embedded_check(tmp_path, capsys):
    rep = tmp_path / "r.json"
    run(["construct", "--k", 2, "--n", 5, "--p", 0.4, "--seed", 3, "--out", rep], capsys)
    report = json.loads(rep.read_text())
    embedded = report["candidate"]["stage_stats"]["path_deletion"]
    code, stdout, _ = run(["verify", rep, "--k", 2], capsys)
    assert json.loads(stdout)["outcome"] == embedded
    assert code == (EXIT_FAILS if embedded == "fails" else EXIT_OK)


def test_verify_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    assert run(["verify", bad, "--k", 1], capsys)[0] == EXIT_IO
    assert run(["verify", tmp_path / "none.txt", "--k", 1], capsys)[0] == EXIT_IO


def test_partition_commands(tmp_path, capsys):
    f = write_digraph(tmp_path / "t.txt", Digraph.transitive_tournament(6))
    code, stdout, err = run(["partition", f], capsys)
    assert code == EXIT_OK and json.loads(stdout)["count"] == 1 and "1 paths" in err
    f = write_digraph(tmp_path / "e.txt", Digraph(6, (0,) * 6))
    assert json.loads(run(["partition", f], capsys)[1])["count"] == 6


def test_partition_random_digraph_within_alpha(tmp_path, capsys, rng):
    for _ in range(10):
        d = random_digraph(rng, 9, 0.3)
        f = write_digraph(tmp_path / "r.txt", d)
        assert json.loads(run(["partition", f], capsys)[1])["count"] <= brute_alpha(d)


def test_search_commands(capsys):
    code, stdout, _ = run(["search", "--k", 1, "--max-n", 3], capsys)
    data = json.loads(stdout)
    assert code == EXIT_OK and data["status"] == "found" and data["witness"]["n"] == 1
    code, stdout, _ = run(["search", "--k", 2, "--max-n", 4, "--budget", 0], capsys)
    data = json.loads(stdout)
    assert code == EXIT_FAILS and data["status"] == "none-found" and data["coverage"] == []


def test_json_and_quiet_flags(tmp_path, capsys):
    out = tmp_path / "p.json"
    f = write_digraph(tmp_path / "t.txt", Digraph.transitive_tournament(3))
    code, stdout, err = run(["partition", f, "--out", out, "--quiet"], capsys)
    assert stdout == "" and err == "" and out.exists()
    code, stdout, _ = run(["partition", f, "--out", out, "--json", "--quiet"], capsys)
    assert json.loads(stdout) == json.loads(out.read_text())


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "hjwitness", "sample", "--n", "4", "--p", "1", "--quiet"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith("4 6\n")
    res = subprocess.run([sys.executable, "-m", "hjwitness", "nosuch"], capture_output=True, text=True)
    assert res.returncode == EXIT_USAGE
