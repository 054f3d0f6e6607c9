from itertools import product

from hjwitness.graphs import Digraph
from hjwitness.search import search_small
from hjwitness.verifier import HOLDS_EXHAUSTIVE, check_layer_path_property, verify_exhaustive

from oracles import naive_property_holds


def test_k1_single_vertex():
    res = search_small(1, 3, 10)
    assert res.status == "found"
    assert res.witness.n == 1 and not res.witness.arcs and res.examined == 1


def test_k2_up_to_four_vertices_golden():
    res = search_small(2, 4, 100_000)
    assert res.status == "none-found" and res.witness is None
    assert res.examined == 17
    assert res.coverage == [
        {"t": 1, "n": 2, "total": 1, "examined": 1, "inconclusive": 0},
        {"t": 2, "n": 4, "total": 16, "examined": 16, "inconclusive": 0},
    ]


def test_k2_up_to_four_vertices_by_naive_oracle():
    # one layer {0,1}: no arcs, deleting one vertex leaves one
    assert not naive_property_holds(Digraph(2, (0, 0)), 2)
    cross = [(0, 2), (0, 3), (1, 2), (1, 3)]
    for bits in product((0, 1), repeat=4):
        d = Digraph.from_arcs(4, [a for a, b in zip(cross, bits) if b])
        assert not naive_property_holds(d, 2)


def test_k2_six_vertices_witness():
    res = search_small(2, 6, 100_000)
    assert res.status == "found" and res.witness.n == 6 and res.witness.layering.t == 3
    assert check_layer_path_property(res.witness) == (True, None)
    compact, _ = res.witness.to_digraph()
    assert naive_property_holds(compact, 2)
    assert verify_exhaustive(res.witness, 2).outcome == HOLDS_EXHAUSTIVE


def test_budget_zero():
    res = search_small(2, 4, 0)
    assert res.status == "none-found" and res.examined == 0 and res.coverage == []


def test_budget_exhausted_reports_coverage():
    res = search_small(2, 6, 5)
    assert res.status == "budget-exhausted" and res.examined == 5
    assert sum(row["examined"] for row in res.coverage) == 5


def test_to_dict_shape():
    data = search_small(1, 1, 5).to_dict()
    assert data["schema"] == "1" and data["status"] == "found"
    assert data["witness"]["layers"] == [[0]]
