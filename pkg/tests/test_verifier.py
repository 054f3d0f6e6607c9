from itertools import combinations, combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjwitness.cliques import greedy_disjoint_cliques
from hjwitness.graphs import Digraph, Layering, LayeredDigraph, UGraph, build_layered_digraph, is_directed_path
from hjwitness.verifier import (
    FAILS,
    HOLDS_EXHAUSTIVE,
    HOLDS_NO_COUNTEREXAMPLE,
    INCONCLUSIVE,
    check_layer_path_property,
    gallai_milgram_partition,
    iter_paths,
    lower_bound_remaining,
    maximal_paths,
    recheck_counterexample,
    validate_partition,
    verify_adversarial,
    verify_exhaustive,
)

from oracles import (
    all_path_vertex_sets,
    brute_alpha,
    brute_is_stable,
    digraph_alpha_table,
    naive_property_holds,
    random_digraph,
    random_graph,
)

ARC_PROBS = (0.1, 0.2, 0.3, 0.5)


def naive_disjoint_property_holds(d: Digraph, k: int) -> bool:
    """Like naive_property_holds, but only pairwise vertex-disjoint families of at most k-1 paths."""
    table = digraph_alpha_table(d)
    full = (1 << d.n) - 1
    if table[full] != k:
        return False
    sets = sorted(all_path_vertex_sets(d))

    def rec(start, used, left):
        if table[full & ~used] < k:
            return False
        if left == 0:
            return True
        return all(rec(i + 1, used | sets[i], left - 1)
                   for i in range(start, len(sets)) if not sets[i] & used)

    return rec(0, 0, k - 1)


def arcless(n):
    return Digraph(n, (0,) * n)


# ---------------------------------------------------------------- partition

def test_partition_transitive_tournament_is_one_path():
    for n in range(1, 9):
        part = gallai_milgram_partition(Digraph.transitive_tournament(n))
        assert len(part) == 1 and validate_partition(Digraph.transitive_tournament(n), part.paths)


def test_partition_arcless_is_singletons():
    part = gallai_milgram_partition(arcless(6))
    assert part.paths == tuple((v,) for v in range(6))
    assert sorted(part.stable_witness) == list(range(6))


def test_partition_directed_five_cycle():
    d = Digraph.directed_cycle(5)
    assert brute_alpha(d) == 2
    part = gallai_milgram_partition(d)
    assert len(part) <= 2 and validate_partition(d, part.paths)


def test_partition_empty_digraph():
    part = gallai_milgram_partition(arcless(0))
    assert part.paths == () and part.stable_witness == ()


def test_partition_bound_on_random_digraphs(rng):
    for _ in range(150):
        n = int(rng.integers(1, 10))
        d = random_digraph(rng, n, float(rng.choice(ARC_PROBS)))
        part = gallai_milgram_partition(d)
        assert validate_partition(d, part.paths)
        assert len(part) <= brute_alpha(d)
        # the witness certifies the bound without the solver
        assert len(part.stable_witness) == len(part) and brute_is_stable(d, part.stable_witness)


def test_partition_is_deterministic(rng):
    d = random_digraph(rng, 9, 0.3)
    assert gallai_milgram_partition(d) == gallai_milgram_partition(d)


def test_validate_partition_rejects_bad_covers():
    d = Digraph.directed_cycle(4)
    assert validate_partition(d, [(0, 1, 2, 3)])
    assert not validate_partition(d, [(0, 1), (1, 2, 3)])
    assert not validate_partition(d, [(0, 1)])
    assert not validate_partition(d, [(1, 0), (2, 3)])


# ---------------------------------------------------------------- layer structure

def test_layer_path_property_on_built_digraphs(rng):
    for _ in range(20):
        g = random_graph(rng, 12, 0.6)
        dg = build_layered_digraph(g, greedy_disjoint_cliques(g, 2))
        assert check_layer_path_property(dg) == (True, None)


def test_layer_path_property_negative_control():
    lay = Layering.of([[0, 1], [2, 3]], 2)
    dg = LayeredDigraph(4, lay, frozenset({(0, 2), (0, 1)}))
    assert check_layer_path_property(dg) == (False, (0, 1))
    back = LayeredDigraph(4, lay, frozenset({(3, 1)}))
    assert check_layer_path_property(back) == (False, (3, 1))


def test_layer_path_property_without_arcs():
    dg = LayeredDigraph(4, Layering.of([[0, 1], [2, 3]], 2), frozenset())
    assert check_layer_path_property(dg) == (True, None)


def test_lower_bound_remaining_examples():
    layers = [[3 * i, 3 * i + 1, 3 * i + 2] for i in range(4)]
    dg = LayeredDigraph(12, Layering.of(layers, 3), frozenset())
    assert lower_bound_remaining(dg, 3) == 4
    for k in range(1, 6):
        one = LayeredDigraph(k, Layering.of([list(range(k))], k), frozenset())
        assert lower_bound_remaining(one, k) == 1
    with pytest.raises(ValueError):
        lower_bound_remaining(dg, 2)


def _min_remaining(compact: Digraph, k: int) -> int:
    """Fewest vertices left after deleting any k-1 paths, by trying every path."""
    sets = sorted(all_path_vertex_sets(compact))
    best = compact.n
    for combo in combinations_with_replacement(sets, k - 1):
        union = 0
        for s in combo:
            union |= s
        best = min(best, compact.n - union.bit_count())
    return best


def test_lower_bound_remaining_against_brute_force(rng):
    for _ in range(40):
        k = int(rng.integers(2, 4))
        t = int(rng.integers(1, 9 // k + 1))
        n = k * t
        layers = [list(range(i * k, i * k + k)) for i in range(t)]
        # cross edges of g become non-arcs of d
        edges = [(u, v) for u, v in combinations(range(n), 2)
                 if u // k == v // k or rng.random() < 0.3]
        dg = build_layered_digraph(UGraph.from_edges(n, edges), Layering.of(layers, k))
        compact, _ = dg.to_digraph()
        assert _min_remaining(compact, k) >= lower_bound_remaining(dg, k)
    # with every cross pair an arc the bound is attained
    for k in (2, 3):
        for t in range(1, 9 // k + 1):
            layers = [list(range(i * k, i * k + k)) for i in range(t)]
            dg = build_layered_digraph(
                UGraph.from_edges(k * t, [(u, v) for u, v in combinations(range(k * t), 2) if u // k == v // k]),
                Layering.of(layers, k))
            compact, _ = dg.to_digraph()
            assert _min_remaining(compact, k) == lower_bound_remaining(dg, k) == t


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), st.sampled_from(ARC_PROBS), st.integers(0, 2**32), st.data())
def test_stability_is_monotone_under_deletion(n, p, seed, data):
    import numpy as np

    d = random_digraph(np.random.default_rng(seed), n, p)
    table = digraph_alpha_table(d)
    full = (1 << n) - 1
    y = data.draw(st.integers(0, full))
    x = data.draw(st.integers(0, full)) & y
    assert table[full & ~y] <= table[full & ~x]


# ---------------------------------------------------------------- path enumeration

def test_maximal_paths_of_directed_cycle():
    d = Digraph.directed_cycle(5)
    paths = maximal_paths(d)
    assert len(paths) == 5 and all(len(p) == 5 for p in paths)


def test_iter_paths_matches_brute_force(rng):
    for _ in range(30):
        d = random_digraph(rng, int(rng.integers(1, 7)), 0.4)
        found = list(iter_paths(d))
        assert all(is_directed_path(d, p) for p in found)
        assert {sum(1 << v for v in p) for p in found} == all_path_vertex_sets(d)
        assert len(found) == len(set(found))


# ---------------------------------------------------------------- exhaustive

def test_exhaustive_two_isolated_vertices_fails():
    d = arcless(2)
    v = verify_exhaustive(d, 2)
    assert v.outcome == FAILS and v.counterexample is not None
    assert len(v.counterexample.paths) == 1 and len(v.counterexample.paths[0]) == 1
    assert v.counterexample.remaining_stability == 1
    assert recheck_counterexample(d, v.counterexample, 2)


def test_exhaustive_directed_five_cycle_fails():
    d = Digraph.directed_cycle(5)
    v = verify_exhaustive(d, 2)
    assert v.outcome == FAILS
    assert len(v.counterexample.paths[0]) == 5 and v.counterexample.remaining == ()
    assert recheck_counterexample(d, v.counterexample, 2)


def test_exhaustive_tournaments_hold_at_k1():
    for n in range(1, 7):
        v = verify_exhaustive(Digraph.transitive_tournament(n), 1)
        assert v.outcome == HOLDS_EXHAUSTIVE and v.holds
    assert verify_exhaustive(Digraph.directed_cycle(3), 1).outcome == HOLDS_EXHAUSTIVE


def test_exhaustive_alpha_mismatch_fails_with_reason():
    v = verify_exhaustive(arcless(3), 2)
    assert v.outcome == FAILS and "stability number is 3" in v.reason
    assert v.counterexample.paths == ()
    assert recheck_counterexample(arcless(3), v.counterexample, 2)


def test_exhaustive_budget_gives_inconclusive():
    d = Digraph.from_arcs(4, [(0, 1), (2, 3)])
    assert brute_alpha(d) == 2
    full = verify_exhaustive(d, 2)
    v = verify_exhaustive(d, 2, budget=0)
    assert v.outcome == INCONCLUSIVE and not v.holds and v.work == 0
    assert full.outcome == FAILS


def test_exhaustive_agrees_with_naive_oracle(rng):
    checked = 0
    for _ in range(150):
        n = int(rng.integers(1, 8))
        d = random_digraph(rng, n, float(rng.choice(ARC_PROBS)))
        for k in (1, 2, 3):
            v = verify_exhaustive(d, k)
            assert v.holds == naive_property_holds(d, k), (d, k)
            if v.outcome == FAILS:
                assert recheck_counterexample(d, v.counterexample, k)
            checked += 1
    assert checked == 450


def test_exhaustive_disjoint_mode_agrees_with_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(1, 8))
        d = random_digraph(rng, n, float(rng.choice(ARC_PROBS)))
        for k in (2, 3):
            v = verify_exhaustive(d, k, disjoint=True)
            assert v.method == "exhaustive-disjoint" and v.disjoint
            assert v.holds == naive_disjoint_property_holds(d, k), (d, k)
            if v.outcome == FAILS and v.counterexample.paths:
                masks = [sum(1 << x for x in p) for p in v.counterexample.paths]
                assert all(not a & b for a, b in combinations(masks, 2))


def test_exhaustive_on_layered_input_reports_original_ids():
    lay = Layering.of([[4, 9], [2, 7]], 2)
    dg = LayeredDigraph(10, lay, frozenset({(4, 2), (9, 7), (4, 7), (9, 2)}))
    v = verify_exhaustive(dg, 2)
    assert v.outcome == FAILS
    assert set(v.counterexample.paths[0]) <= {2, 4, 7, 9}
    assert recheck_counterexample(dg, v.counterexample, 2)


def test_search_found_witness_passes_naive_oracle():
    from hjwitness.search import search_small

    res = search_small(2, 6, 100_000)
    assert res.status == "found"
    compact, _ = res.witness.to_digraph()
    assert naive_property_holds(compact, 2)
    assert verify_exhaustive(res.witness, 2).outcome == HOLDS_EXHAUSTIVE


# ---------------------------------------------------------------- adversarial

def test_adversarial_arcless_holds():
    for k in (2, 3):
        for n in range(2 * k, 2 * k + 3):
            v = verify_adversarial(arcless(n), k, budget=50, seed=1)
            assert v.outcome == HOLDS_NO_COUNTEREXAMPLE and v.alpha == n


def test_adversarial_zero_budget():
    v = verify_adversarial(Digraph.from_arcs(4, [(0, 1), (2, 3)]), 2, budget=0, seed=0)
    assert v.outcome == HOLDS_NO_COUNTEREXAMPLE and v.work == 0


def test_adversarial_never_claims_exhaustive(rng):
    for _ in range(30):
        d = random_digraph(rng, 6, 0.3)
        v = verify_adversarial(d, 2, budget=20, seed=3)
        assert v.outcome in (FAILS, HOLDS_NO_COUNTEREXAMPLE)
        assert v.method == "adversarial"


def test_adversarial_finds_what_exhaustive_finds(rng):
    fails = 0
    for i in range(200):
        n = int(rng.integers(2, 9))
        d = random_digraph(rng, n, float(rng.choice(ARC_PROBS)))
        for k in (2, 3):
            ex = verify_exhaustive(d, k)
            if ex.outcome != FAILS:
                continue
            if brute_alpha(d) > k:
                # the adversarial search keeps going past an oversized alpha
                continue
            adv = verify_adversarial(d, k, budget=3000, seed=i)
            fails += 1
            assert adv.outcome == FAILS, (d, k)
            assert recheck_counterexample(d, adv.counterexample, k)
    assert fails > 50


def test_adversarial_is_deterministic(rng):
    d = random_digraph(rng, 8, 0.2)
    assert verify_adversarial(d, 2, 100, seed=5) == verify_adversarial(d, 2, 100, seed=5)


def test_recheck_rejects_forged_counterexamples():
    from hjwitness.verifier import Counterexample

    d = Digraph.from_arcs(4, [(0, 1), (2, 3)])
    bogus_path = Counterexample(((1, 0),), (2, 3), 1, (2,))
    assert not recheck_counterexample(d, bogus_path, 2)
    harmless = Counterexample(((0, 1),), (2, 3), 1, (2,))
    # deleting 0->1 leaves 2->3, stability 1 < 2: genuine
    assert recheck_counterexample(d, harmless, 2)
    too_many = Counterexample(((0,), (2,)), (1, 3), 1, (1,))
    assert not recheck_counterexample(d, too_many, 2)
