"""
Pruebas del pipeline completo y de la línea de comandos.
"""

import os

import pytest

import main
from config import Config
from conftest import cycle_graph
from ladder.drawing3d import check_crossings
from ladder.errors import BadParams
from ladder.formats import dumps, write_graph
from ladder.generators import random_triangulation
from ladder.pipeline import STAGES, PipelineOptions, run_pipeline
from ladder.plane_graph import PlaneGraph
from ladder.verify import validate_queue_layout, validate_track_layout


class TestRunPipeline:
    def test_k4(self, k4):
        result = run_pipeline(k4, 'k4')
        report = result.report
        assert report.passed
        assert report.stages_run == list(STAGES)
        assert report.metrics.D < report.config.D
        assert report.queue_count <= report.track_count - 1
        assert report.volume[0] == report.track_count
        assert result.final_edges == k4.edge_set
        assert set(result.track_layout.color_of) == set(range(4))

    def test_wheel(self, w6):
        report = run_pipeline(w6, 'w6').report
        assert report.passed
        assert report.config.Z == report.config.J + 1
        assert report.queue_count <= report.track_count - 1

    def test_dummy_edges_are_not_drawn(self):
        c6 = cycle_graph(6)
        result = run_pipeline(c6, 'c6')
        assert result.final_edges == c6.edge_set
        edges = sorted(result.final_edges)
        assert validate_track_layout(result.track_layout, edges)
        assert validate_queue_layout(result.queue_layout, edges)
        assert check_crossings(result.drawing, edges)

    @pytest.mark.parametrize('n, seed', [(10, 1), (25, 2), (40, 3), (30, 8), (30, 14), (30, 29), (30, 34), (30, 37)])
    def test_random_triangulations(self, n, seed):
        g = random_triangulation(n, seed)
        result = run_pipeline(g, f'tri-{n}')
        assert result.report.passed
        assert result.final_edges == g.edge_set
        edges = sorted(g.edge_set)
        assert set(result.track_layout.color_of) == set(range(n))
        assert set(result.queue_layout.order) == set(range(n))
        assert set(result.drawing.coords) == set(range(n))
        assert validate_track_layout(result.track_layout, edges)
        assert validate_queue_layout(result.queue_layout, edges)
        assert result.queue_layout.queue_count <= result.track_layout.track_count - 1
        assert check_crossings(result.drawing, edges)

    def test_subdivision_vertices_stay_out_of_the_output(self):
        g = random_triangulation(30, 8)
        result = run_pipeline(g, 'tri-30')
        assert result.reform.graph.vertex_count >= g.vertex_count
        assert max(result.track_layout.color_of) == g.vertex_count - 1
        assert sum(len(row) for row in result.track_layout.order) == g.vertex_count

    @pytest.mark.parametrize('neighbors, outer', [
        ([[1, 2, 3], [0], [0], [0]], (0, 1, 0, 2, 0, 3)),
        ([[1], [0, 2], [1, 3], [2]], (0, 1, 2, 3, 2, 1)),
    ], ids=['star', 'path'])
    def test_trees(self, neighbors, outer):
        g = PlaneGraph.from_neighbor_rotation(4, neighbors, outer)
        result = run_pipeline(g, 'tree')
        assert result.report.passed
        edges = sorted(g.edge_set)
        assert validate_track_layout(result.track_layout, edges)
        assert check_crossings(result.drawing, edges)

    def test_lifts_are_reported(self):
        result = run_pipeline(random_triangulation(40, 3), 'tri-40')
        lifted = [f for f in result.report.findings if f.startswith("3D repair lifted")]
        assert bool(lifted) == (result.drawing.lifts > 0)
        assert result.artifacts()['drawing.json']['lifts'] == result.drawing.lifts

    def test_refine_origin_covers_every_track(self):
        result = run_pipeline(random_triangulation(40, 3), 'tri-40')
        tl = result.track_layout
        assert len(tl.origin) == tl.track_count
        assert sum(tl.split_counts().values()) == tl.track_count

    def test_stop_after_reform(self, w6):
        result = run_pipeline(w6, 'w6', PipelineOptions(stop_after='reform'))
        assert result.report.stages_run == ['validate', 'triangulate', 'reform']
        assert set(result.artifacts()) == {'reform.json'}

    def test_unknown_stage(self):
        with pytest.raises(BadParams):
            PipelineOptions(stop_after='render')

    def test_deterministic(self):
        g = random_triangulation(30, 3)
        first = {k: dumps(v) for k, v in run_pipeline(g, 'tri').artifacts().items()}
        second = {k: dumps(v) for k, v in run_pipeline(g, 'tri').artifacts().items()}
        assert first == second

    def test_report_serializes(self, k4):
        data = run_pipeline(k4, 'k4').report.to_dict()
        assert data['input'] == 'k4'
        assert data['passed'] is True
        assert data['wrapped']['X'] == data['X']
        assert data['track_count'] >= 1
        assert 'timings' not in data


@pytest.fixture
def cli(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, 'LOG_DIR', str(tmp_path / 'logs'))
    monkeypatch.setattr(Config, 'OUTPUT_DIR', str(tmp_path / 'out'))
    return tmp_path


def write(path, g):
    path.write_text(write_graph(g), encoding='utf-8')
    return str(path)


class TestCli:
    def test_run_writes_artifacts(self, cli, k4):
        source = write(cli / 'k4.txt', k4)
        out = cli / 'run'
        assert main.main(['run', source, '--svg', '--obj', '-o', str(out)]) == 0
        assert sorted(os.listdir(out)) == [
            'k4.drawing.json', 'k4.layout.json', 'k4.metrics.json', 'k4.obj', 'k4.reform.json', 'k4.svg',
        ]

    def test_stop_after_reform(self, cli, w6):
        source = write(cli / 'w6.txt', w6)
        out = cli / 'run'
        assert main.main(['run', source, '--stop-after', 'reform', '-o', str(out)]) == 0
        assert os.listdir(out) == ['w6.reform.json']

    def test_config_override(self, cli, w6):
        source = write(cli / 'w6.txt', w6)
        assert main.main(['run', source, '--config', 'Z=3,J=1', '-o', str(cli / 'run')]) == 0
        assert main.main(['run', source, '--config', 'Z=1,J=1']) == 1

    def test_bad_input_exits_with_1(self, cli):
        bad = cli / 'bad.txt'
        bad.write_text("3 3\n0 1\n", encoding='utf-8')
        assert main.main(['run', str(bad)]) == 1
        assert main.main(['run', str(cli / 'missing.txt')]) == 1

    def test_gen_then_oracle(self, cli):
        target = cli / 'gen' / 'w5.txt'
        assert main.main(['gen', 'wheel', '5', '-o', str(target)]) == 0
        assert target.exists()
        assert main.main(['oracle', str(target)]) == 0

    def test_oracle_too_large(self, cli):
        source = write(cli / 'tri.txt', random_triangulation(12, 0))
        assert main.main(['oracle', source]) == 1
