import json
from pathlib import Path

import pytest

from cyclecontainers.cli import (
    EXIT_BUDGET,
    EXIT_INVALID,
    EXIT_INVARIANT,
    EXIT_OK,
    cli_dispatch,
)
from cyclecontainers.graphs import complete, complete_bipartite, write_edge_list


@pytest.fixture
def k4_path(tmp_path):
    p = tmp_path / "k4.edges"
    p.write_text(write_edge_list(complete(4)))
    return p


@pytest.fixture
def k33_path(tmp_path):
    p = tmp_path / "k33.edges"
    p.write_text(write_edge_list(complete_bipartite(3, 3)))
    return p


def run(capsys, *argv):
    code = cli_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_free_count(capsys):
    code, out, _ = run(capsys, "free-count", "--n", "4", "--ell", "2")
    assert code == EXIT_OK
    assert out.strip() == "54"


def test_enumerate_cycles_k4(capsys, k4_path):
    code, out, _ = run(capsys, "enumerate-cycles", "--graph", str(k4_path), "--ell", "2")
    assert code == EXIT_OK
    lines = [ln for ln in out.splitlines() if ln]
    assert len(lines) == 3
    for ln in lines:
        ids = [int(x) for x in ln.split()]
        assert len(ids) == 4 and len(set(ids)) == 4


def test_enumerate_cycles_budget_refusal(capsys, k33_path):
    code, _, err = run(
        capsys, "enumerate-cycles", "--graph", str(k33_path), "--ell", "2",
        "--budget", "2",
    )
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_missing_graph_file(capsys):
    code, _, err = run(capsys, "enumerate-cycles", "--graph", "/nonexistent.edges",
                       "--ell", "2")
    assert code == EXIT_INVALID


def test_unknown_subcommand(capsys):
    assert cli_dispatch(["frobnicate"]) == EXIT_INVALID
    capsys.readouterr()


def test_sweep_requires_seed(capsys):
    code = cli_dispatch(["sweep", "--ell", "2", "--n", "6", "--p", "0.5"])
    capsys.readouterr()
    assert code == EXIT_INVALID


def test_supersat_random_instance_requires_seed(capsys):
    code, _, err = run(capsys, "build-supersat", "--n", "6", "--k", "1.0",
                       "--ell", "2", "--delta", "0.2")
    assert code == EXIT_INVALID
    assert "seed" in err


def test_workers_must_be_positive(capsys):
    code, _, _ = run(capsys, "--workers", "0", "free-count", "--n", "3", "--ell", "2")
    assert code == EXIT_INVALID


def test_out_writes_manifest_sidecar(capsys, tmp_path, k4_path):
    out = tmp_path / "cycles.txt"
    code, _, _ = run(capsys, "enumerate-cycles", "--graph", str(k4_path),
                     "--ell", "2", "--out", str(out))
    assert code == EXIT_OK
    man = json.loads(Path(str(out) + ".manifest.json").read_text())
    assert man["command"] == "enumerate-cycles"
    assert man["version"]
    assert str(k4_path) in man["inputs"]
    assert len(man["inputs"][str(k4_path)]) == 64  # sha256 hex digest


def test_replay_is_byte_identical(capsys, tmp_path, k33_path):
    args = ["build-supersat", "--graph", str(k33_path), "--ell", "2",
            "--k", "3", "--delta", "0.05", "--budget", "9"]
    first = tmp_path / "a.hg"
    second = tmp_path / "b.hg"
    assert cli_dispatch(args + ["--out", str(first)]) == EXIT_OK
    assert cli_dispatch(args + ["--out", str(second)]) == EXIT_OK
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


def test_supersat_build_and_audit(capsys, tmp_path, k33_path):
    hg = tmp_path / "k33.hg"
    code, out, _ = run(capsys, "build-supersat", "--graph", str(k33_path),
                       "--ell", "2", "--k", "3", "--delta", "0.05",
                       "--budget", "9", "--out", str(hg))
    assert code == EXIT_OK
    assert "hyperedges=9" in out and "met=True" in out
    code, out, _ = run(capsys, "audit", str(hg), "--graph", str(k33_path),
                       "--delta", "0.05", "--k", "3", "--ell", "2")
    assert code == EXIT_OK
    assert "ok" in out


def test_audit_flags_corruption(capsys, tmp_path, k33_path):
    hg = tmp_path / "k33.hg"
    run(capsys, "build-supersat", "--graph", str(k33_path), "--ell", "2",
        "--k", "3", "--delta", "0.05", "--budget", "9", "--out", str(hg))
    lines = hg.read_text().splitlines()
    lines[-1] = "0 0 0 0"  # repeated edge ids: not a valid hyperedge
    hg.write_text("\n".join(lines) + "\n")
    code, out, err = run(capsys, "audit", str(hg))
    assert code == EXIT_INVARIANT


def test_containers_roundtrip_and_audit(capsys, tmp_path, k4_path):
    out = tmp_path / "k4.containers"
    code, _, _ = run(capsys, "containers", "--graph", str(k4_path), "--ell", "2",
                     "--delta", "0.2", "--out", str(out))
    assert code == EXIT_OK
    code, text, _ = run(capsys, "audit", str(out))
    assert code == EXIT_OK and "ok" in text


def test_iterate_summary(capsys):
    code, out, _ = run(capsys, "iterate", "--n", "5", "--ell", "2", "--k", "1.0",
                       "--delta", "0.2")
    assert code == EXIT_OK
    assert "nodes=" in out and "leaves=" in out


def test_encode_rejects_non_free_input(capsys, tmp_path, k4_path):
    # K4 contains a 4-cycle, so it is not C4-free
    code, _, err = run(capsys, "encode", "--graph", str(k4_path), "--ell", "2",
                       "--k", "2.0", "--delta", "0.2")
    assert code == EXIT_INVALID


def test_encode_free_graph(capsys, tmp_path):
    path = tmp_path / "path.edges"
    from cyclecontainers.graphs import build_graph

    path.write_text(write_edge_list(build_graph(4, [(0, 1), (1, 2), (2, 3)])))
    code, out, _ = run(capsys, "encode", "--graph", str(path), "--ell", "2",
                       "--k", "2.0", "--delta", "0.2")
    assert code == EXIT_OK
    # the chain dump starts with "n levels"; summary reports the final container
    assert out.splitlines()[0].startswith("4 ")
    assert "levels=" in out and "final_edges=" in out


def test_blowup_roundtrip(capsys, tmp_path, k4_path):
    # a single edge is C4-free; its blow-up stays C4-free
    edge = tmp_path / "edge.edges"
    from cyclecontainers.graphs import build_graph

    edge.write_text(write_edge_list(build_graph(2, [(0, 1)])))
    code, out, _ = run(capsys, "blowup", "--graph", str(edge), "--ell", "2",
                       "--b", "3", "--seed", "5")
    assert code == EXIT_OK
    first = out.splitlines()[0].split()
    assert first[0] == "6"  # 2 vertices, blocks of 3


def test_sweep_output_table(capsys):
    code, out, _ = run(capsys, "sweep", "--ell", "2", "--n", "6", "--p", "0.1,0.5",
                       "--trials", "1", "--seed", "3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].split() == [
        "n", "p", "ell", "trial", "edges_sampled", "ex_exact", "ex_greedy",
        "regime", "bound_value", "fitted_C",
    ]
    assert len(lines) == 3


def test_kst_build(capsys, tmp_path, k33_path):
    pairs = tmp_path / "k33.pairs"
    code, out, _ = run(capsys, "kst-build", "--graph", str(k33_path), "--s", "2",
                       "--t", "2", "--delta", "10", "--budget", "50",
                       "--out", str(pairs))
    assert code == EXIT_OK
    assert "pairs=18" in out
    code, out, _ = run(capsys, "audit", str(pairs))
    assert code == EXIT_OK and "ok" in out
