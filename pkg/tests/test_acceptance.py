"""End-to-end acceptance checks, one test per criterion.

Each test records a ``[PASS]``/``[FAIL]`` line that is printed in the
"acceptance criteria" section of the terminal summary.
"""

import csv
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_graphs, small_fixtures, two_triangles
from mospecg import (ClusterVectors, GammaPair, MemeticParams, Partition, SolutionSet,
                     build_bw, consensus_from_partitions, eigen_top_abs, evolve, make_context,
                     move_gain, nmi, pair_agreement, qw_exact, qw_spectral,
                     run_mospecg, run_specg_ec, specg_ec)
from mospecg.datasets import DatasetNotFound, dolphins
from mospecg.memetic import Individual, local_search
from mospecg.sweep import SolutionEntry, gamma_grid

SEEDS = range(10)
REAL = MemeticParams(local_search_iters=5)  # IT = 5 for real networks
HALF = GammaPair(0.5, 0.5)


def report(request, number, ok, summary, elapsed=None, bound=None):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary}"
    if elapsed is not None:
        line += f" ({elapsed:.2f} s, bound {bound} s)"
    request.config.acceptance_lines.append(line)
    print(line)
    return ok


def dolphins_or_fail(request, number):
    try:
        return dolphins()
    except DatasetNotFound as exc:
        report(request, number, False, f"Dolphins data unavailable ({exc})")
        pytest.fail(f"Dolphins data unavailable: {exc}")


def test_criterion_1_karate_specg_ec(request, karate_data):
    g, truth = karate_data
    t0 = time.perf_counter()
    scores, ks = [], []
    for seed in SEEDS:
        part, _ = specg_ec(g, memetic=REAL, p_spec=0.1, rng_seed=seed)
        scores.append(nmi(part, truth))
        ks.append(part.k)
    elapsed = time.perf_counter() - t0
    ok = np.mean(scores) >= 0.99 and set(ks) == {2} and elapsed < 10
    report(request, 1, ok, f"Karate SpecG-EC mean NMI {np.mean(scores):.3f}, k {sorted(set(ks))}",
           elapsed, 10)
    assert np.mean(scores) >= 0.99
    assert set(ks) == {2}
    assert elapsed < 10


def test_criterion_2_karate_k_estimate(request, karate_data):
    g, _ = karate_data
    t0 = time.perf_counter()
    ctx = make_context(g, HALF, 3)
    elapsed = time.perf_counter() - t0
    ok = abs(ctx.chi - 4.977) <= 1e-3 and ctx.k_estimate == 3 and elapsed < 1
    report(request, 2, ok, f"Karate chi {ctx.chi:.4f}, estimate_k {ctx.k_estimate}", elapsed, 1)
    assert ctx.chi == pytest.approx(4.977, abs=1e-3)
    assert ctx.k_estimate == 3
    assert elapsed < 1


def test_criterion_3_dolphins_sweep(request):
    g, truth = dolphins_or_fail(request, 3)
    t0 = time.perf_counter()
    sweeps = [run_mospecg(g, nf=11, memetic=REAL, p_spec=0.1, rng_seed=s, truth=truth)
              for s in SEEDS]
    elapsed = time.perf_counter() - t0
    low = [s.entry_for(0.0) for s in sweeps]
    ok_a = all(e.k_found == 1 and e.nmi == 0.0 and e.q == 0.0 for e in low)
    mid = [s.entry_for(0.5) for s in sweeps]
    ok_b = sum(abs(e.q - 0.483) <= 0.005 and e.k_found == 3 for e in mid) >= 7
    hits = {g1: sum(s.entry_for(g1).nmi >= 0.85 for s in sweeps) for g1 in (0.7, 0.8)}
    ok_c = all(h >= 7 for h in hits.values())
    ok = ok_a and ok_b and ok_c and elapsed < 60
    report(request, 3, ok, f"Dolphins sweep (a) {ok_a} (b) {ok_b} (c) {hits}", elapsed, 60)
    assert ok_a and ok_b and ok_c
    assert elapsed < 60


def test_criterion_4_dolphins_specg_ec(request):
    g, truth = dolphins_or_fail(request, 4)
    t0 = time.perf_counter()
    parts = [specg_ec(g, memetic=REAL, p_spec=0.1, rng_seed=s)[0] for s in SEEDS]
    elapsed = time.perf_counter() - t0
    mean = float(np.mean([nmi(p, truth) for p in parts]))
    ks = {p.k for p in parts}
    ok = abs(mean - 0.889) <= 0.03 and ks == {2} and elapsed < 60
    report(request, 4, ok, f"Dolphins SpecG-EC mean NMI {mean:.3f}, k {sorted(ks)}", elapsed, 60)
    assert mean == pytest.approx(0.889, abs=0.03)
    assert ks == {2}
    assert elapsed < 60


def test_criterion_5_pair_agreement(request):
    try:
        _, truth = dolphins()
        source = "Dolphins truth"
    except DatasetNotFound:
        truth = Partition(np.r_[np.zeros(42, int), np.ones(20, int)])
        source = "42/20 partition with the Dolphins truth sizes (file not present)"
    got = pair_agreement(Partition.whole(truth.n), truth)
    ok = got == (1051, 840)
    report(request, 5, ok, f"one cluster vs {source}: {got[0]} together / {got[1]} wrong")
    assert got == (1051, 840)


def test_criterion_6_oracle_equivalence(request):
    from mospecg.oracle import enumerate_optimal

    graphs = [two_triangles(), *random_connected_graphs(20)]
    t0 = time.perf_counter()
    worst = 10
    for g in graphs:
        best, _ = enumerate_optimal(g, HALF)
        ctx = make_context(g, HALF, g.n)
        hits = sum(abs(evolve(ctx, g.n, MemeticParams(rng_seed=s)).fitness - best) <= 1e-9
                   for s in SEEDS)
        worst = min(worst, hits)
    elapsed = time.perf_counter() - t0
    ok = worst >= 8 and elapsed < 120
    report(request, 6, ok, f"{len(graphs)} graphs, worst graph optimal in {worst}/10 seeds",
           elapsed, 120)
    assert worst >= 8
    assert elapsed < 120


def test_criterion_7_spectral_consistency(request, karate_data):
    fixtures = [*small_fixtures(), karate_data[0]]
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    err_q = err_move = err_res = err_orth = 0.0
    moves = 0
    for g in fixtures:
        gamma = GammaPair.from_gamma1(float(rng.uniform()))
        ctx = make_context(g, gamma, g.n)
        for _ in range(100):
            k = int(rng.integers(1, g.n + 1))
            labels = rng.integers(0, k, g.n)
            cv = ClusterVectors.from_labels(ctx, labels, k)
            err_q = max(err_q, abs(qw_spectral(ctx, cv) - qw_exact(g, gamma, labels)))
        bw = build_bw(g, gamma)
        vals, vecs = eigen_top_abs(bw, g.n)
        err_res = max(err_res, np.abs(bw @ vecs - vecs * vals).max() / np.linalg.norm(bw))
        err_orth = max(err_orth, np.abs(vecs.T @ vecs - np.eye(g.n)).max())
    per_graph = -(-1000 // len(fixtures))
    for g in fixtures:
        ctx = make_context(g, HALF, g.n)
        k = min(4, g.n)
        labels = rng.integers(0, k, g.n)
        for _ in range(per_graph):
            cv = ClusterVectors.from_labels(ctx, labels, k)
            i, to = int(rng.integers(g.n)), int(rng.integers(k))
            gain = move_gain(ctx, cv, i, labels[i], to)
            before = qw_spectral(ctx, cv)
            labels[i] = to
            after = qw_spectral(ctx, ClusterVectors.from_labels(ctx, labels, k))
            err_move = max(err_move, abs(gain - (after - before)))
            moves += 1
    elapsed = time.perf_counter() - t0
    ok = (err_q <= 1e-8 and err_move <= 1e-10 and err_res <= 1e-8 and err_orth <= 1e-8
          and elapsed < 30)
    report(request, 7, ok, f"max errors qw {err_q:.1e}, {moves} moves {err_move:.1e}, "
                           f"residual {err_res:.1e}, orthonormality {err_orth:.1e}", elapsed, 30)
    assert err_q <= 1e-8 and err_move <= 1e-10
    assert err_res <= 1e-8 and err_orth <= 1e-8
    assert elapsed < 30


@st.composite
def problems(draw):
    g = draw(st.sampled_from(small_fixtures()))
    params = MemeticParams(n_generations=draw(st.integers(1, 8)), pop_size=draw(st.integers(2, 6)),
                           offspring_pct=draw(st.integers(1, 99)),
                           local_search_iters=draw(st.integers(0, 3)),
                           rng_seed=draw(st.integers(0, 2**31)))
    return (g, GammaPair.from_gamma1(draw(st.floats(0, 1))), draw(st.integers(1, g.n)),
            draw(st.integers(1, g.n)), params)


def _strip_runtime(path):
    with open(path, newline="") as fh:
        return [{k: v for k, v in r.items() if k != "runtime_seconds"} for r in csv.DictReader(fh)]


def test_criterion_8_algorithmic_invariants(request, tmp_path):
    t0 = time.perf_counter()

    @settings(max_examples=80, deadline=None, database=None)
    @given(problems())
    def invariants(problem):
        g, gamma, p, k, params = problem
        ctx = make_context(g, gamma, p)
        rng = np.random.default_rng(params.rng_seed)
        ind = Individual.from_labels(ctx, rng.integers(0, k, g.n), k)
        for _ in range(3):
            before = qw_spectral(ctx, ClusterVectors.from_labels(ctx, ind.labels, k))
            local_search(ind, ctx, 1)
            assert qw_spectral(ctx, ClusterVectors.from_labels(ctx, ind.labels, k)) >= before

        sizes, best = [], []
        result = evolve(ctx, k, params, callback=lambda gen, pop: (
            sizes.append(len(pop)), best.append(max(i.fitness for i in pop))))
        assert sizes == [params.pop_size] * (params.n_generations + 1)
        assert all(b >= a for a, b in zip(best, best[1:]))
        again = evolve(make_context(g, gamma, p), k, params)
        assert result.labels.tobytes() == again.labels.tobytes()
        assert result.fitness == again.fitness

    invariants()
    g = random_connected_graphs(1, seed=5)[0]
    outputs = []
    for name in ("a", "b"):
        sols = run_mospecg(g, nf=5, memetic=MemeticParams(n_generations=10), p_spec=g.n, rng_seed=1)
        sols.write(tmp_path / name)
        outputs.append({f.name: f.read_bytes() for f in (tmp_path / name).glob("*.membership")})
    assert outputs[0] == outputs[1]
    assert _strip_runtime(tmp_path / "a" / "solutions.csv") == \
        _strip_runtime(tmp_path / "b" / "solutions.csv")
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60
    report(request, 8, ok, "local search monotone, population size constant, elitism, "
                           "byte-identical reruns", elapsed, 60)
    assert elapsed < 60


def test_criterion_9_consensus_properties(request):
    t0 = time.perf_counter()

    @settings(max_examples=200, deadline=None, database=None)
    @given(st.integers(2, 15).flatmap(lambda n: st.lists(
        st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=1, max_size=9)),
        st.floats(0, 1))
    def properties(parts, tau):
        cm = consensus_from_partitions([np.array(p) for p in parts], tau)
        e, raw = cm.e, cm.raw
        assert np.array_equal(e, e.T)
        assert e.min() >= 0.0 and e.max() <= 1.0
        assert np.all((e > 0).sum(axis=1) >= 1)
        off_e, off_raw = e.copy(), raw.copy()
        np.fill_diagonal(off_e, 0.0)
        np.fill_diagonal(off_raw, 0.0)
        np.testing.assert_array_equal(off_e.max(axis=1), off_raw.max(axis=1))

    properties()
    g = two_triangles()
    common = Partition([0, 0, 0, 1, 1, 1])
    entries = [SolutionEntry.evaluate(g, gm, common, 1) for gm in gamma_grid(11)]
    sols = SolutionSet(entries, g)
    part, cm = run_specg_ec(g, sols, p_spec=g.n, rng_seed=0, return_consensus=True)
    assert set(np.unique(cm.e)) <= {0.0, 1.0}
    assert part.same_clustering(common)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 10
    report(request, 9, ok, "consensus symmetric, in [0, 1], protected rows nonzero, "
                           "unanimity recovers the common partition", elapsed, 10)
    assert elapsed < 10

