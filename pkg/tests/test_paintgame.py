import json
import random

import pytest

from dyncolor.coloring import verify_r_dynamic
from dyncolor.errors import IllegalMark, IllegalResponse
from dyncolor.families import complete, cycle, path, random_connected_graph
from dyncolor.graph import Graph
from dyncolor.paintgame import (
    GameState,
    PaintSolver,
    RejectionRule,
    TreePainter,
    certify_painter,
    dull_rule,
    normalize_tokens,
    play_round,
    run_gprime_first,
    run_transcript,
    solve_xp_r,
    strategy_tree,
    xp_r_number,
)


def test_play_round_mechanics():
    g = complete(2)
    s = GameState(normalize_tokens(g, 2))
    s1 = play_round(g, s, {0, 1}, {0})
    assert s1.tokens == (1, 1)
    assert s1.colored == {0}
    assert not s1.lister_won
    # marking the other vertex again: spends its last token, gets colored
    s2 = play_round(g, s1, {1}, {1})
    assert s2.tokens == (1, 0)
    assert s2.uncolored(g) == frozenset()


def test_play_round_zero_token_mark_loses():
    g = complete(2)
    s = GameState((0, 1))
    out = play_round(g, s, {0}, set())
    assert out.lister_won


def test_play_round_empty_response_allowed():
    g = complete(2)
    s = GameState((2, 2))
    out = play_round(g, s, {0}, set())
    assert out.tokens == (1, 2)
    assert not out.lister_won


def test_play_round_validation():
    g = complete(3)
    s = GameState((2, 2, 2))
    with pytest.raises(IllegalMark):
        play_round(g, s, set(), set())
    with pytest.raises(IllegalResponse):
        play_round(g, s, {0, 1}, {0, 1})  # adjacent pair
    with pytest.raises(IllegalResponse):
        play_round(g, s, {0}, {1})  # not a subset
    colored = play_round(g, s, {0}, {0})
    with pytest.raises(IllegalMark):
        play_round(g, colored, {0}, set())


def test_solver_known_values():
    assert solve_xp_r(cycle(4), 1, 2).painter_wins
    assert not solve_xp_r(cycle(5), 1, 2).painter_wins
    assert solve_xp_r(cycle(5), 1, 3).painter_wins
    assert not solve_xp_r(complete(2), 1, 1).painter_wins
    assert solve_xp_r(complete(2), 1, 2).painter_wins


def test_xp_numbers():
    assert xp_r_number(cycle(4), 1).value == 2
    assert xp_r_number(cycle(5), 1).value == 3
    assert xp_r_number(complete(3), 2).value == 3
    assert xp_r_number(cycle(5), 2).value == 5


def test_memo_agrees_with_reference_solver():
    rng = random.Random(0)
    for _ in range(25):
        g = random_connected_graph(rng.randrange(2, 6), 0.5, rng)
        r = rng.randrange(1, 3)
        k = rng.randrange(1, 4)
        fast = solve_xp_r(g, r, k, memo=True).painter_wins
        slow = solve_xp_r(g, r, k, memo=False).painter_wins
        assert fast == slow


def test_token_monotonicity():
    rng = random.Random(1)
    for _ in range(15):
        g = random_connected_graph(rng.randrange(2, 6), 0.5, rng)
        r = rng.randrange(1, 3)
        k = rng.randrange(1, 4)
        if solve_xp_r(g, r, k).painter_wins:
            assert solve_xp_r(g, r, k + 1).painter_wins


def test_strategies_survive_exhaustive_lister():
    for g, r, k in ((cycle(4), 1, 2), (cycle(5), 1, 3), (complete(3), 2, 3)):
        verdict = solve_xp_r(g, r, k)
        assert verdict.painter_wins
        report = certify_painter(g, r, k, verdict.strategy())
        assert report.ok, report.reason


def test_exhaustive_lister_finds_wins_below_threshold():
    # against one fewer token everywhere the adversary beats even the solver
    g = cycle(5)
    verdict = solve_xp_r(g, 1, 3)
    painter = verdict.strategy()

    class Stubborn:
        def respond(self, state, marked):
            try:
                return painter.respond(state, marked)
            except Exception:
                return frozenset()

    report = certify_painter(g, 1, 2, Stubborn())
    assert not report.ok
    assert report.losing_line


def test_transcript_format_and_rejections():
    g = path(3)  # 0 - 1 - 2
    verdict = solve_xp_r(g, 1, 2)
    assert verdict.painter_wins
    tr = run_transcript(g, 1, verdict.strategy(), [{0, 1, 2}, {1}, {2}], 2)
    text = tr.render()
    assert text.splitlines()[0].startswith("round 1 | marked: 0 1 2 | colored:")
    data = json.loads(tr.to_json())
    assert data["outcome"] in ("painter", "unfinished")
    assert tr.rejections  # somebody was rejected in round one


def test_strategy_tree_roundtrip():
    g = cycle(4)
    verdict = solve_xp_r(g, 1, 2)
    tree = strategy_tree(g, 1, 2, verdict.solver)
    blob = json.dumps(tree)
    painter = TreePainter(json.loads(blob))
    report = certify_painter(g, 1, 2, painter)
    assert report.ok, report.reason


def test_gprime_first_pendant_example():
    # pendant 0 on the edge 1-2; the inner game runs on the edge
    g = Graph(3, [(0, 1), (1, 2)])
    triggers = {0: (RejectionRule("colored_any", frozenset({1}), note="u colored"),
                    dull_rule(g, 1))}
    report = run_gprime_first(g, 1, {1, 2}, {(1, 2)}, triggers, 3,
                              s_order=[0])
    assert report.ok
    assert report.max_rejections[0] <= 2


def test_gprime_first_empty_t_behaves_as_inner():
    g = complete(2)
    report = run_gprime_first(g, 1, {0, 1}, {(0, 1)}, {}, 2, s_order=[])
    assert report.ok


def test_gprime_first_truncated_triggers_fail():
    g = Graph(3, [(0, 1), (1, 2)])
    triggers = {0: (RejectionRule("colored_any", frozenset({1}), note="u colored"),)}
    report = run_gprime_first(g, 3, {1, 2}, {(1, 2)}, triggers, 3,
                              s_order=[0])
    assert not report.ok


def test_gprime_final_colorings_dynamic_on_all_lines():
    g = Graph(3, [(0, 1), (1, 2)])
    triggers = {0: (RejectionRule("colored_any", frozenset({1}), note="u colored"),
                    dull_rule(g, 1))}
    report = run_gprime_first(g, 3, {1, 2}, {(1, 2)}, triggers, 3,
                              s_order=[0])
    assert report.ok  # certify checks verify_r_dynamic on every complete line


def test_final_partition_checked_with_verifier():
    g = cycle(5)
    solver = PaintSolver(g, 1)
    bad = frozenset({frozenset({0, 2}), frozenset({1, 3}), frozenset({4})})
    coloring = {}
    for i, cls in enumerate(sorted(bad, key=sorted)):
        for v in cls:
            coloring[v] = i + 1
    assert solver._final_ok(bad) == verify_r_dynamic(g, coloring, 1).ok


def test_sandwich_chromatic_below_paint():
    rng = random.Random(7)
    for _ in range(12):
        g = random_connected_graph(rng.randrange(2, 6), 0.5, rng)
        r = rng.randrange(1, 3)
        from dyncolor.coloring import chi_r_exact

        chromatic = chi_r_exact(g, r).value
        paint = xp_r_number(g, r).value
        assert chromatic <= paint


def test_exhaustive_adversary_deterministic():
    g = cycle(4)
    verdict = solve_xp_r(g, 1, 2)
    a = certify_painter(g, 1, 2, verdict.strategy())
    b = certify_painter(g, 1, 2, verdict.strategy())
    assert (a.ok, a.states, a.max_rejections) == (b.ok, b.states, b.max_rejections)
    bad = certify_painter(g, 1, 1, verdict.strategy())
    bad2 = certify_painter(g, 1, 1, verdict.strategy())
    assert bad.losing_line == bad2.losing_line


def test_scripted_gprime_budget_violation():
    from dyncolor.errors import BudgetViolated

    g = Graph(3, [(0, 1), (1, 2)])
    # vetoes on every round: vertex 0 can never be colored
    always = RejectionRule("few_colors", watch=frozenset({0, 1, 2}),
                           observe=frozenset({0, 1, 2}), threshold=99)
    with pytest.raises(BudgetViolated):
        run_gprime_first(g, 1, {1, 2}, {(1, 2)}, {0: (always,)}, 2,
                         lister=[{0, 1}, {0, 2}, {0}], s_order=[0])


def test_solver_single_vertex():
    assert solve_xp_r(Graph(1), 1, 1).painter_wins


def test_token_monotonicity_pointwise():
    rng = random.Random(8)
    for _ in range(12):
        g = random_connected_graph(rng.randrange(2, 5), 0.6, rng)
        r = rng.randrange(1, 3)
        base = [rng.randrange(1, 4) for _ in g.vertices()]
        if solve_xp_r(g, r, list(base)).painter_wins:
            bumped = list(base)
            bumped[rng.randrange(g.n)] += 1
            assert solve_xp_r(g, r, bumped).painter_wins


def test_time_limit_budget():
    from dyncolor.errors import BudgetExceeded

    g = random_connected_graph(7, 0.5, random.Random(9))
    with pytest.raises(BudgetExceeded):
        solve_xp_r(g, 2, 5, time_limit=0.0)


def reference_game_value(g, r, tokens):
    """Independent definition: colors are literal round indices, no
    position abstraction or memoization."""
    from itertools import combinations as combos

    from dyncolor.coloring import verify_r_dynamic

    def independent_subsets(marked):
        out = [frozenset()]
        for v in marked:
            nv = set(g.neighbors(v))
            out.extend(s | {v} for s in list(out) if not (s & nv))
        return out

    def painter_wins(tokens, coloring, round_no):
        uncolored = [v for v in g.vertices() if v not in coloring]
        if not uncolored:
            return verify_r_dynamic(g, coloring, r).ok
        for size in range(1, len(uncolored) + 1):
            for marked in combos(uncolored, size):
                if any(tokens[v] == 0 for v in marked):
                    return False
                nt = list(tokens)
                for v in marked:
                    nt[v] -= 1
                good = False
                for resp in independent_subsets(marked):
                    nc = dict(coloring)
                    for v in resp:
                        nc[v] = round_no
                    if painter_wins(tuple(nt), nc, round_no + 1):
                        good = True
                        break
                if not good:
                    return False
        return True

    return painter_wins(tuple(tokens), {}, 1)


def test_solver_against_round_indexed_reference():
    rng = random.Random(10)
    for _ in range(15):
        g = random_connected_graph(rng.randrange(2, 5), 0.6, rng)
        r = rng.randrange(1, 3)
        k = rng.randrange(1, 3)
        assert (solve_xp_r(g, r, k).painter_wins
                == reference_game_value(g, r, [k] * g.n))
