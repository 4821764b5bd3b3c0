"""
Pruebas de la colocación en escalera, la reinserción y el plegado.
"""

import pytest

from conftest import layered
from ladder.errors import ConfigInvalid, DistanceExceedsD, LedgerMismatch
from ladder.layering import OUTER, DeletedEdgeLedger, reform
from ladder.placement import (
    LadderLayout,
    LadderPlacer,
    PlacementConfig,
    derive_config,
    place,
    reinsert_deleted,
    reinsertion_report,
    wrap,
)
from ladder.verify import measure
from test_fans import EDGES, ROWS

CFG = PlacementConfig(2, 1)


def hand_layout(track_of, pos_of, active=()):
    return LadderLayout(
        track_of=dict(track_of),
        pos_of=dict(pos_of),
        wrapped=False,
        config=CFG,
        edge_classes={'kept': frozenset(active)},
        active=frozenset(active),
    )


class TestPlacementConfig:
    def test_parse(self):
        cfg = PlacementConfig.parse("Z=3,J=1")
        assert (cfg.Z, cfg.J, cfg.D) == (3, 1, 7)

    @pytest.mark.parametrize('text', ["Z=1,J=1", "Z=3", "Z=x,J=1", "Z=3;J=1", "Z=3,J=0"])
    def test_rejects(self, text):
        with pytest.raises(ConfigInvalid):
            PlacementConfig.parse(text)


class TestPlace:
    def test_k4(self, k4):
        rr = reform(k4)
        cfg = derive_config(rr.cl, rr.ledger)
        assert cfg == CFG
        layout = place(rr.cl, rr.ledger, cfg)
        assert layout.track_of == {0: 4, 1: 4, 2: 5, 3: 6}
        assert layout.tracks()[3:] == [[0, 1], [2], [3]]
        assert not layout.violations
        assert (0, 3) not in layout.active
        metrics = measure(layout, layout.active)
        assert (metrics.Q, metrics.X, metrics.D) == (1, 1, 2)

    def test_wheel(self, w6):
        rr = reform(w6)
        cfg = derive_config(rr.cl, rr.ledger)
        assert cfg == CFG
        layout = place(rr.cl, rr.ledger, cfg)
        assert layout.track_of == {1: 4, 2: 4, 5: 5, 4: 5, 3: 5, 0: 6}
        assert layout.tracks() == [[], [], [], [1, 2], [5, 4, 3], [0]]
        metrics = measure(layout, layout.active)
        assert (metrics.Q, metrics.X, metrics.D) == (1, 1, 2)
        assert metrics.per_track_Q == {4: 1, 5: 1, 6: 0}
        assert metrics.per_pair_X == {'4-5': 1, '4-6': 1, '5-6': 1}

    def test_boundary_sits_z_minus_one_tracks_above_outer_skeletons(self, k4):
        rr = reform(k4)
        placer = LadderPlacer(rr.cl, rr.ledger, CFG)
        assert placer.boundary_track(0) == CFG.Z + 2
        assert placer.boundary_track(3) == CFG.Z + 3
        for v in rr.cl.vertices:
            assert placer.track_for(v, OUTER) - placer.boundary_track(v) == CFG.Z - 1

    def test_skeleton_block_goes_right_of_boundary(self):
        cl = layered(ROWS, EDGES)
        layout = place(cl, DeletedEdgeLedger(), CFG)
        assert layout.track_of == {0: 4, 3: 4, 4: 5, 6: 6, 1: 5, 2: 5, 5: 6}
        assert layout.tracks() == [[], [], [], [0, 3], [4, 1, 2], [6, 5]]
        assert not layout.violations
        assert measure(layout, layout.active).D <= 2 * CFG.Z

    def test_to_dict(self, w6):
        rr = reform(w6)
        data = place(rr.cl, rr.ledger, CFG).to_dict()
        assert data['config'] == {'Z': 2, 'J': 1, 'D': 5}
        assert set(data['edge_classes']) == {'kept', 'wires', 'bridges', 'piles', 'dummy'}


class TestReinsertion:
    def test_wires_that_cross(self):
        layout = hand_layout({0: 1, 1: 1, 2: 2, 3: 2}, {0: 0, 1: 1, 2: 0, 3: 1})
        ledger = DeletedEdgeLedger(wires={0: {(0, 3)}, 1: {(1, 2)}})
        restored = reinsert_deleted(layout, ledger)
        assert restored.active == frozenset({(0, 3), (1, 2)})
        findings = reinsertion_report(restored, ledger)
        assert findings == ["Wires (0, 3) and (1, 2) X-cross"]

    def test_nested_bridges(self):
        layout = hand_layout({v: 1 for v in range(4)}, {v: v for v in range(4)})
        ledger = DeletedEdgeLedger(bridges=[((2, 0), (0, 3)), ((2, 1), (1, 2))])
        findings = reinsertion_report(reinsert_deleted(layout, ledger), ledger)
        assert findings == ["Bridges (0, 3) and (1, 2) of spine 2 nest"]

    def test_unplaced_endpoint(self):
        layout = hand_layout({0: 1}, {0: 0})
        ledger = DeletedEdgeLedger(wires={0: {(0, 9)}})
        with pytest.raises(LedgerMismatch):
            reinsert_deleted(layout, ledger)

    def test_dummies_leave_the_active_set(self):
        layout = hand_layout({0: 1, 1: 2}, {0: 0, 1: 0}, active=[(0, 1)])
        ledger = DeletedEdgeLedger(dummy_added={(0, 1)})
        assert reinsert_deleted(layout, ledger).active == frozenset()


class TestWrap:
    def test_folds_tracks_modulo_2d(self):
        layout = hand_layout({0: 1, 1: 2, 2: 7}, {0: 0, 1: 0, 2: 0}, active=[(0, 1)])
        wrapped = wrap(layout, 3)
        assert wrapped.wrapped
        assert wrapped.track_of == {0: 1, 1: 2, 2: 1}
        assert wrapped.tracks() == [[0, 2], [1]]

    def test_distance_must_be_below_d(self):
        layout = hand_layout({0: 1, 2: 7}, {0: 0, 2: 0}, active=[(0, 2)])
        with pytest.raises(DistanceExceedsD):
            wrap(layout, 3)

    def test_keeps_metrics(self, w6):
        rr = reform(w6)
        layout = place(rr.cl, rr.ledger, CFG)
        wrapped = wrap(layout, CFG.D)
        before, after = measure(layout, layout.active), measure(wrapped, wrapped.active)
        assert (before.Q, before.X) == (after.Q, after.X)
        assert wrapped.track_count <= 2 * CFG.D


class TestRestricted:
    def test_drops_vertices_and_their_edges(self):
        layout = hand_layout({0: 1, 1: 1, 2: 2, 5: 2}, {0: 0, 1: 1, 5: 0, 2: 1}, active=[(0, 2), (1, 5)])
        kept = layout.restricted([0, 1, 2])
        assert kept.track_of == {0: 1, 1: 1, 2: 2}
        assert kept.pos_of == {0: 0, 1: 1, 2: 0}
        assert kept.active == frozenset({(0, 2)})
        assert kept.edge_classes['kept'] == frozenset({(0, 2)})
