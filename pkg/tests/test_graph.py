"""Clump graph construction, JSON and DOT rendering, components."""

import os
import random

import pytest

from bundlegen import random_bundle, random_config
from dct.detector import DetectorConfig, detect_occurrences
from dct.errors import InvalidReport
from dct.extractor import extract_project
from dct.graph import (
    ClumpGraph,
    build_graph,
    components,
    graph_to_doc,
    to_dot,
    write_graph,
)
from dct.jsonio import loads_document
from dct.model import AstBundle
from dct.report import DataClumpsReport, build_report

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def _report_for(bundle, config=None):
    config = config or DetectorConfig()
    return build_report(bundle, config, detect_occurrences(bundle, config))


def _empty_report():
    bundle = AstBundle(classes={}, project_name="empty", source_root=".")
    return _report_for(bundle)


def _single_f2f_report():
    from test_detector import XYZ, _cls  # crafted-bundle helpers

    a = _cls("p.A", fields=XYZ)
    b = _cls("p.B", fields=XYZ)
    return _report_for(AstBundle.from_class_infos([a, b]))


# ---------------------------------------------------------------------------
# build_graph
# ---------------------------------------------------------------------------

def test_empty_report_gives_empty_graph():
    graph = build_graph(_empty_report())
    assert graph.nodes == ()
    assert graph.edges == ()


def test_single_f2f_node_and_edge_census():
    graph = build_graph(_single_f2f_report())
    kinds = {}
    for node in graph.nodes:
        kinds[node.kind] = kinds.get(node.kind, 0) + 1
    assert kinds == {"file": 2, "class": 2, "variable": 6}
    edge_kinds = {}
    for edge in graph.edges:
        edge_kinds[edge.kind] = edge_kinds.get(edge.kind, 0) + 1
    assert edge_kinds == {"contains": 8, "clump": 1}


def test_variable_nodes_attach_to_their_endpoint():
    graph = build_graph(_single_f2f_report())
    by_id = {n.id: n for n in graph.nodes}
    assert by_id["p.A/x"].parent == "p.A"
    assert by_id["p.B/z"].parent == "p.B"
    containment = {(e.source, e.target) for e in graph.edges if e.kind == "contains"}
    assert ("p.A", "p.A/x") in containment
    assert ("p.A/x", "p.A") not in containment


def test_method_endpoints_add_method_nodes():
    bundle = extract_project(os.path.join(FIXTURES, "clumpy"))
    graph = build_graph(_report_for(bundle))
    method_nodes = [n for n in graph.nodes if n.kind == "method"]
    assert any(n.id == "shop.Labeler#format(String,String,String)" for n in method_nodes)
    by_id = {n.id: n for n in graph.nodes}
    assert by_id["shop.Labeler#format(String,String,String)"].parent == "shop.Labeler"


def test_clump_edges_carry_occurrence_keys():
    report = _single_f2f_report()
    graph = build_graph(report)
    clump_edges = [e for e in graph.edges if e.kind == "clump"]
    assert len(clump_edges) == len(report.occurrences)
    for edge in clump_edges:
        assert edge.occurrence_key in report.keys()
        assert edge.id == f"clump:{edge.occurrence_key}"


def test_contains_edge_id_shape():
    graph = build_graph(_single_f2f_report())
    for edge in graph.edges:
        if edge.kind == "contains":
            assert edge.id == f"contains:{edge.source}->{edge.target}"


def test_nodes_and_edges_sorted_by_id():
    bundle = extract_project(os.path.join(FIXTURES, "clumpy"))
    graph = build_graph(_report_for(bundle))
    node_ids = [n.id for n in graph.nodes]
    edge_ids = [e.id for e in graph.edges]
    assert node_ids == sorted(node_ids)
    assert edge_ids == sorted(edge_ids)


def test_build_graph_rejects_duplicate_keys():
    report = _single_f2f_report()
    doubled = DataClumpsReport(
        report_version=report.report_version,
        detector_name=report.detector_name,
        detector_version=report.detector_version,
        config=report.config,
        project_name=report.project_name,
        number_of_classes=report.number_of_classes,
        number_of_methods=report.number_of_methods,
        occurrences=report.occurrences + report.occurrences,
    )
    with pytest.raises(InvalidReport):
        build_graph(doubled)


def test_referential_integrity():
    rng = random.Random(6021)
    for _ in range(25):
        bundle = random_bundle(rng)
        graph = build_graph(_report_for(bundle, random_config(rng)))
        ids = {n.id for n in graph.nodes}
        assert len(ids) == len(graph.nodes)
        for node in graph.nodes:
            if node.parent is not None:
                assert node.parent in ids
        edge_ids = set()
        for edge in graph.edges:
            assert edge.source in ids
            assert edge.target in ids
            edge_ids.add(edge.id)
        assert len(edge_ids) == len(graph.edges)


def test_graph_build_is_deterministic():
    rng = random.Random(17)
    bundle = random_bundle(rng)
    report = _report_for(bundle)
    assert write_graph(build_graph(report)) == write_graph(build_graph(report))


# ---------------------------------------------------------------------------
# JSON document
# ---------------------------------------------------------------------------

def test_graph_document_shape():
    doc = loads_document(write_graph(build_graph(_single_f2f_report())))
    assert doc["graph_version"] == "1.0"
    assert len(doc["nodes"]) == 10
    assert len(doc["edges"]) == 9
    for node in doc["nodes"]:
        assert set(node) <= {"id", "kind", "label", "parent"}
    for edge in doc["edges"]:
        assert set(edge) <= {"id", "kind", "source", "target", "occurrence_key"}
        assert ("occurrence_key" in edge) == (edge["kind"] == "clump")


def test_empty_graph_document():
    doc = graph_to_doc(build_graph(_empty_report()))
    assert doc == {"graph_version": "1.0", "nodes": [], "edges": []}


# ---------------------------------------------------------------------------
# DOT rendering
# ---------------------------------------------------------------------------

def test_empty_dot():
    assert to_dot(build_graph(_empty_report())) == "digraph clumps {\n}\n"


def test_dot_statement_counts():
    graph = build_graph(_single_f2f_report())
    dot = to_dot(graph)
    lines = dot.splitlines()
    assert lines[0] == "digraph clumps {"
    assert lines[-1] == "}"
    node_lines = [l for l in lines if " [label=" in l and "->" not in l]
    edge_lines = [l for l in lines if "->" in l]
    assert len(node_lines) == len(graph.nodes)
    assert len(edge_lines) == len(graph.edges)


def test_dot_marks_clump_edges():
    dot = to_dot(build_graph(_single_f2f_report()))
    clump_lines = [l for l in dot.splitlines() if "style=bold" in l]
    assert len(clump_lines) == 1
    assert "color=crimson" in clump_lines[0]
    assert 'kind="clump"' in clump_lines[0]
    contains_lines = [
        l for l in dot.splitlines() if 'kind="contains"' in l
    ]
    assert len(contains_lines) == 8
    assert all("style=bold" not in l for l in contains_lines)


def test_dot_quotes_special_characters():
    dot = to_dot(build_graph(_single_f2f_report()))
    assert '"p.A" [' in dot
    # every id appears quoted
    assert '"clump:' not in dot  # edge ids are not emitted, endpoints are


def test_dot_is_deterministic():
    report = _single_f2f_report()
    assert to_dot(build_graph(report)) == to_dot(build_graph(report))


# ---------------------------------------------------------------------------
# components
# ---------------------------------------------------------------------------

def test_components_of_empty_graph():
    assert components(build_graph(_empty_report())) == []


def test_components_single_clump():
    clusters = components(build_graph(_single_f2f_report()))
    assert clusters == [["p.A", "p.B"]]


def test_components_merge_via_shared_endpoint():
    bundle = extract_project(os.path.join(FIXTURES, "clumpy"))
    clusters = components(build_graph(_report_for(bundle)))
    # all three classes share variables street/city/zip, one cluster
    assert len(clusters) == 1
    assert "shop.Customer" in clusters[0]
    assert "shop.Labeler#format(String,String,String)" in clusters[0]


def test_components_are_disjoint_and_sorted():
    rng = random.Random(90)
    for _ in range(20):
        bundle = random_bundle(rng)
        graph = build_graph(_report_for(bundle, DetectorConfig(min_clump_size=2)))
        clusters = components(graph)
        seen = set()
        for cluster in clusters:
            assert cluster == sorted(cluster)
            assert not (set(cluster) & seen)
            seen.update(cluster)
        firsts = [c[0] for c in clusters]
        assert firsts == sorted(firsts)
        # every clustered id is an endpoint of some clump edge
        endpoint_ids = set()
        for edge in graph.edges:
            if edge.kind == "clump":
                endpoint_ids.add(edge.source)
                endpoint_ids.add(edge.target)
        assert seen == endpoint_ids
