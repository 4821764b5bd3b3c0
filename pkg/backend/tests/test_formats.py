"""
Pruebas de lectura y escritura de grafos.
"""

import pytest

from ladder.errors import GraphFormatError, MalformedRotation
from ladder.formats import dumps, parse_graph, read_graph, write_graph
from ladder.plane_graph import validate_embedding

K3_TEXT = """\
# triángulo
3 3
0 1
1 2
0 2

0 2
0 1
1 2
0 2 1
"""


class TestParseText:
    def test_triangle(self):
        g = parse_graph(K3_TEXT)
        assert g.vertex_count == 3
        assert g.edges == ((0, 1), (0, 2), (1, 2))
        report = validate_embedding(g)
        assert report.passed
        assert report.face_count == 2

    def test_edge_ids_follow_sorted_order(self):
        g = parse_graph(K3_TEXT)
        assert g.cw_neighbors[1] == (0, 2)
        assert g.cw_neighbors[2] == (1, 0)

    def test_empty_rotation_row(self):
        g = parse_graph("1 0\n-\n0\n")
        assert g.rotation == ((),)

    def test_line_count_checked(self):
        with pytest.raises(GraphFormatError, match="non-empty lines"):
            parse_graph("3 3\n0 1\n")

    def test_non_integer(self):
        with pytest.raises(GraphFormatError, match="integer"):
            parse_graph("a b\n")

    def test_unknown_edge_in_rotation(self):
        with pytest.raises(GraphFormatError, match="unknown edge"):
            parse_graph("2 1\n0 1\n0\n5\n0 1\n")

    def test_duplicate_edges_reach_validation(self):
        g = parse_graph("2 2\n0 1\n0 1\n0 1\n0 1\n0 1\n")
        with pytest.raises(MalformedRotation, match="parallel"):
            validate_embedding(g)


class TestParseJson:
    def test_matches_text(self):
        g = parse_graph(K3_TEXT)
        assert parse_graph(write_graph(g, 'json')) == g

    def test_missing_keys(self):
        with pytest.raises(GraphFormatError, match="rotation"):
            parse_graph('{"n": 3, "edges": [], "outer_face": []}')

    def test_invalid_json(self):
        with pytest.raises(GraphFormatError, match="Invalid JSON"):
            parse_graph('{"n": ')


class TestWrite:
    def test_text_round_trip(self, w6):
        assert parse_graph(write_graph(w6)) == w6

    def test_unknown_format(self, k4):
        with pytest.raises(GraphFormatError):
            write_graph(k4, 'yaml')

    def test_dumps_is_stable(self):
        assert dumps({'b': 1, 'a': [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_read_graph(tmp_path):
    path = tmp_path / 'k3.txt'
    path.write_text(K3_TEXT, encoding='utf-8')
    assert read_graph(path).vertex_count == 3
    with pytest.raises(GraphFormatError, match="Cannot read"):
        read_graph(tmp_path / 'missing.txt')
