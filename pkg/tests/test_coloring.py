import random

import pytest

from dyncolor.coloring import (
    ch_r_lower_bound_from_lists,
    chi_r_exact,
    chi_r_via_square,
    emit_coloring,
    is_L_colorable_r_dynamic,
    parse_coloring,
    parse_lists,
    r_dynamic_coloring,
    verify_r_dynamic,
)
from dyncolor.errors import BudgetExceeded, PartialInput, RNotSaturating
from dyncolor.families import (
    complete,
    cycle,
    path,
    petersen,
    random_connected_graph,
    star,
    subdivided_k4,
)
from dyncolor.graph import Graph, graph_power


def test_verify_rainbow_petersen():
    assert verify_r_dynamic(petersen(), {v: v + 1 for v in range(10)}, 3).ok


def test_verify_c5_bad_2_dynamic():
    # 1,2,1,2,3 around the cycle: the vertices between equal colors see one color
    rep = verify_r_dynamic(cycle(5), {0: 1, 1: 2, 2: 1, 3: 2, 4: 3}, 2)
    assert rep.proper and not rep.ok
    assert set(rep.violations) == {1, 2}


def test_verify_improper():
    rep = verify_r_dynamic(Graph(2, [(0, 1)]), {0: 1, 1: 1}, 1)
    assert not rep.proper and not rep.ok


def test_verify_partial_input():
    with pytest.raises(PartialInput):
        verify_r_dynamic(cycle(3), {0: 1}, 1)


def test_chi_small_cases():
    assert chi_r_exact(cycle(5), 1).value == 3
    assert chi_r_exact(cycle(4), 1).value == 2
    assert chi_r_exact(cycle(5), 2).value == 5
    assert chi_r_exact(complete(4), 1).value == 4
    assert chi_r_exact(star(5), 2).value == 3  # leaves need 1, center needs 2


def test_chi_witness_always_verifies():
    rng = random.Random(0)
    for _ in range(25):
        g = random_connected_graph(rng.randrange(2, 9), 0.4, rng)
        r = rng.randrange(1, 4)
        res = chi_r_exact(g, r)
        assert verify_r_dynamic(g, res.witness, r).ok
        assert res.value <= g.n  # rainbow upper bound
        assert r_dynamic_coloring(g, r, res.value - 1) is None or res.value == 1


def test_chi_monotone_in_r():
    rng = random.Random(1)
    for _ in range(20):
        g = random_connected_graph(rng.randrange(2, 9), 0.4, rng)
        values = [chi_r_exact(g, r).value for r in (1, 2, 3)]
        assert values == sorted(values)


def test_square_equivalence_cross_oracle():
    rng = random.Random(2)
    for _ in range(50):
        g = random_connected_graph(rng.randrange(2, 10), 0.35, rng)
        delta = g.max_degree()
        direct = chi_r_exact(g, max(delta, 1)).value
        squared = chi_r_exact(graph_power(g, 2), 1).value
        assert direct == squared


def test_chi_via_square():
    assert chi_r_via_square(cycle(5), 2) == 5
    assert chi_r_via_square(petersen(), 3) == 10
    assert chi_r_via_square(path(3), 2) == 3
    with pytest.raises(RNotSaturating):
        chi_r_via_square(petersen(), 2)


def test_chi_budget_cap():
    with pytest.raises(BudgetExceeded):
        chi_r_exact(random_connected_graph(17, 0.3, random.Random(3)), 1)


def test_list_coloring_cases():
    assert is_L_colorable_r_dynamic(
        cycle(5), {v: {1, 2, 3, 4} for v in range(5)}, 2) is None
    assert is_L_colorable_r_dynamic(
        Graph(2, [(0, 1)]), {0: {1}, 1: {2}}, 1) == {0: 1, 1: 2}
    witness = is_L_colorable_r_dynamic(cycle(4), {v: {1, 2} for v in range(4)}, 1)
    assert witness == {0: 1, 1: 2, 2: 1, 3: 2}


def test_list_witness_respects_lists():
    rng = random.Random(4)
    for _ in range(25):
        g = random_connected_graph(rng.randrange(2, 8), 0.4, rng)
        lists = {v: set(rng.sample(range(1, 9), rng.randrange(2, 5)))
                 for v in g.vertices()}
        w = is_L_colorable_r_dynamic(g, lists, 2)
        if w is not None:
            assert all(w[v] in lists[v] for v in g.vertices())
            assert verify_r_dynamic(g, w, 2).ok


def test_ch_lower_bound_refuter():
    # identical 4-lists refute, so ch_2(C5) >= 5
    assert ch_r_lower_bound_from_lists(cycle(5), 2, 4)
    assert not ch_r_lower_bound_from_lists(cycle(5), 2, 5)


def test_subdivided_k4():
    assert chi_r_exact(subdivided_k4(), 3).value == 7


def test_coloring_file_roundtrip():
    c = {0: 3, 1: 1, 5: 2}
    assert parse_coloring(emit_coloring(c)) == c
    lists = parse_lists("0: 1 2 3\n1: 2 4\n")
    assert lists == {0: {1, 2, 3}, 1: {2, 4}}


def brute_chi_r(g, r):
    """Independent oracle: scan every coloring by increasing palette size."""
    from itertools import product

    for k in range(1, g.n + 1):
        for assignment in product(range(1, k + 1), repeat=g.n):
            coloring = dict(enumerate(assignment))
            if verify_r_dynamic(g, coloring, r).ok:
                return k
    raise AssertionError("rainbow always works")


def test_chi_against_full_scan():
    rng = random.Random(11)
    for _ in range(15):
        g = random_connected_graph(rng.randrange(2, 6), 0.45, rng)
        r = rng.randrange(1, 4)
        assert chi_r_exact(g, r).value == brute_chi_r(g, r)
