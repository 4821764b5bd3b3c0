"""
Pruebas del verificador: anidamiento, métricas de escalera, track
layouts, queue layouts y el oráculo exhaustivo.
"""

import itertools
from types import SimpleNamespace

import pytest
from hypothesis import given, strategies as st

from conftest import PROPERTY_SETTINGS
from ladder.errors import InvalidInput, TooLarge, UnplacedVertex
from ladder.verify import (
    QueueLayout,
    TrackLayout,
    greedy_queue_count,
    intra_track_colouring,
    max_nesting,
    measure,
    min_queue_oracle,
    refine_to_track_layout,
    track_to_queue,
    validate_queue_layout,
    validate_track_layout,
)


def complete(n):
    return list(itertools.combinations(range(n), 2))


def ladder(track_of, pos_of):
    return SimpleNamespace(track_of=track_of, pos_of=pos_of)


@st.composite
def ordered_graphs(draw, max_n=9):
    n = draw(st.integers(min_value=2, max_value=max_n))
    edges = draw(st.lists(st.sampled_from(complete(n)), unique=True, max_size=15))
    order = draw(st.permutations(range(n)))
    return list(order), edges


class TestNesting:
    def test_three_nested(self):
        size, witness = max_nesting(range(1, 7), [(1, 6), (2, 5), (3, 4)])
        assert size == 3
        assert witness == [(1, 6), (2, 5), (3, 4)]

    def test_disjoint(self):
        assert max_nesting(range(1, 5), [(1, 2), (3, 4)])[0] == 1

    def test_shared_endpoint_does_not_nest(self):
        assert max_nesting(range(1, 5), [(1, 3), (1, 4)])[0] == 1

    @PROPERTY_SETTINGS
    @given(ordered_graphs())
    def test_greedy_matches_nesting(self, case):
        order, edges = case
        assert greedy_queue_count(order, edges) == max_nesting(order, edges)[0]

    @PROPERTY_SETTINGS
    @given(ordered_graphs())
    def test_nesting_matches_brute_force(self, case):
        order, edges = case
        index = {v: i for i, v in enumerate(order)}
        spans = [tuple(sorted((index[u], index[v]))) for u, v in edges]
        size, witness = max_nesting(order, edges)
        if size <= 1:
            assert not any(a < c and d < b for (a, b), (c, d) in itertools.permutations(spans, 2))
        else:
            chain = [tuple(sorted((index[u], index[v]))) for u, v in witness]
            assert all(a < c and d < b for (a, b), (c, d) in zip(chain, chain[1:]))


class TestMeasure:
    def test_distance(self):
        metrics = measure(ladder({0: 2, 1: 5}, {0: 0, 1: 0}), [(0, 1)])
        assert metrics.D == 3
        assert metrics.Q == 0
        assert metrics.X == 1

    def test_x_crossing(self):
        layout = ladder({0: 1, 1: 1, 2: 2, 3: 2}, {0: 0, 1: 1, 3: 0, 2: 1})
        metrics = measure(layout, [(0, 2), (1, 3)])
        assert metrics.X == 2
        assert metrics.per_pair_X == {'1-2': 2}

    def test_unplaced(self):
        with pytest.raises(UnplacedVertex):
            measure(ladder({0: 1}, {0: 0}), [(0, 1)])


class TestTrackLayout:
    def test_crossing_witness(self):
        tl = TrackLayout.from_order([[1, 2], [3, 4]])
        verdict = validate_track_layout(tl, [(1, 4), (2, 3)])
        assert not verdict
        assert verdict.witness == ((1, 4), (2, 3))

    def test_path_passes(self):
        tl = TrackLayout.from_order([[1, 3], [2, 4]])
        assert validate_track_layout(tl, [(1, 2), (2, 3), (3, 4)])

    def test_same_colour_edge(self):
        assert not validate_track_layout(TrackLayout.from_order([[0, 1]]), [(0, 1)])

    @PROPERTY_SETTINGS
    @given(st.data())
    def test_agrees_with_all_pairs(self, data):
        n = data.draw(st.integers(min_value=2, max_value=8))
        colours = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        rows = [[v for v in range(n) if colours[v] == c] for c in range(3)]
        tl = TrackLayout.from_order(rows)
        candidates = [e for e in complete(n) if colours[e[0]] != colours[e[1]]]
        if not candidates:
            return
        edges = data.draw(st.lists(st.sampled_from(candidates), unique=True, max_size=10))
        position = tl.position_of()

        def oriented(e):
            u, v = e
            return (u, v) if colours[u] < colours[v] else (v, u)

        crossing = False
        for e, f in itertools.combinations(edges, 2):
            (a, b), (c, d) = oriented(e), oriented(f)
            if (colours[a], colours[b]) != (colours[c], colours[d]):
                continue
            if (position[a] - position[c]) * (position[b] - position[d]) < 0:
                crossing = True
        assert bool(validate_track_layout(tl, edges)) == (not crossing)


class TestRefine:
    def test_crossing_free_ladder_is_kept(self):
        tl = refine_to_track_layout(ladder({0: 1, 1: 2}, {0: 0, 1: 0}), [(0, 1)])
        assert tl.order == [[0], [1]]
        assert tl.origin == [1, 2]

    def test_nested_pair_is_split(self):
        layout = ladder({v: 1 for v in range(4)}, {v: v for v in range(4)})
        edges = [(0, 3), (1, 2)]
        tl = refine_to_track_layout(layout, edges)
        assert validate_track_layout(tl, edges)
        assert tl.track_count == 3
        assert tl.split_counts() == {1: 3}

    def test_x_crossing_is_split(self):
        layout = ladder({0: 1, 1: 1, 2: 2, 3: 2}, {0: 0, 1: 1, 2: 0, 3: 1})
        edges = [(0, 3), (1, 2)]
        tl = refine_to_track_layout(layout, edges)
        assert tl.order == [[0, 1], [2], [3]]
        assert tl.origin == [1, 2, 2]

    @PROPERTY_SETTINGS
    @given(ordered_graphs(), st.data())
    def test_any_ladder_becomes_a_track_layout(self, case, data):
        order, edges = case
        tracks = data.draw(st.lists(st.integers(1, 3), min_size=len(order), max_size=len(order)))
        layout = ladder({v: tracks[i] for i, v in enumerate(order)}, {v: i for i, v in enumerate(order)})
        tl = refine_to_track_layout(layout, edges)
        assert validate_track_layout(tl, edges)
        assert sorted(tl.color_of) == sorted(order)
        assert set(tl.origin) <= set(tracks)

    @PROPERTY_SETTINGS
    @given(ordered_graphs())
    def test_colours_per_track_bounded_by_nesting(self, case):
        order, edges = case
        layout = ladder({v: 1 for v in order}, {v: i for i, v in enumerate(order)})
        colours = intra_track_colouring(layout, edges)[1]
        q = max_nesting(order, edges)[0]
        assert len(set(colours.values())) <= max(1, 4 * q)
        assert all(colours[u] != colours[v] for u, v in edges)


class TestMonotonicity:
    @PROPERTY_SETTINGS
    @given(ordered_graphs(), st.data())
    def test_adding_an_edge_never_lowers_q_or_x(self, case, data):
        order, edges = case
        missing = [e for e in complete(len(order)) if e not in edges]
        if not missing:
            return
        extra = data.draw(st.sampled_from(missing))
        tracks = data.draw(st.lists(st.integers(1, 3), min_size=len(order), max_size=len(order)))
        layout = ladder({v: tracks[i] for i, v in enumerate(order)}, {v: i for i, v in enumerate(order)})
        before = measure(layout, edges)
        after = measure(layout, edges + [extra])
        assert after.Q >= before.Q
        assert after.X >= before.X
        assert after.D >= before.D

    @PROPERTY_SETTINGS
    @given(ordered_graphs(max_n=6), st.data())
    def test_adding_an_edge_never_lowers_the_oracle(self, case, data):
        order, edges = case
        n = len(order)
        missing = [e for e in complete(n) if e not in edges]
        if not missing:
            return
        extra = data.draw(st.sampled_from(missing))
        before = min_queue_oracle(edges, n).value
        assert min_queue_oracle(edges + [extra], n).value >= before


class TestQueue:
    def test_two_tracks_one_queue(self):
        ql = track_to_queue(TrackLayout.from_order([[0], [1]]), [(0, 1)])
        assert ql.queue_of == {(0, 1): 0}
        assert ql.queue_count == 1

    def test_rejects_invalid_tracks(self):
        with pytest.raises(InvalidInput):
            track_to_queue(TrackLayout.from_order([[1, 2], [3, 4]]), [(1, 4), (2, 3)])

    def test_k4_on_four_colours(self):
        edges = complete(4)
        tl = TrackLayout.from_order([[0], [1], [3], [2]])
        ql = track_to_queue(tl, edges)
        assert ql.queue_count == 3
        assert validate_queue_layout(ql, edges)

    def test_nested_queue_rejected(self):
        ql = QueueLayout([0, 1, 2, 3], {(0, 3): 0, (1, 2): 0})
        verdict = validate_queue_layout(ql, [(0, 3), (1, 2)])
        assert not verdict
        assert verdict.witness == ((0, 3), (1, 2))


class TestOracle:
    def test_path(self):
        assert min_queue_oracle([(0, 1), (1, 2), (2, 3), (3, 4)], 5).value == 1

    def test_cycle(self):
        assert min_queue_oracle([(i, (i + 1) % 6) for i in range(6)], 6).value == 1

    @pytest.mark.parametrize('n', range(3, 9))
    def test_complete_graph(self, n):
        result = min_queue_oracle(complete(n), n)
        assert result.value == n // 2
        assert max_nesting(result.order, complete(n))[0] == result.value

    def test_too_large(self):
        with pytest.raises(TooLarge):
            min_queue_oracle(complete(10), 10)
