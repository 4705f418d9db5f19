import math

import pytest

from symorb.combinatorics import burnside_count
from symorb.errors import ResourceLimitError
from symorb.orbits import (
    enumerate_orbits,
    normalizer_classes,
    orbit_diagram_dot,
    reduction_report,
    theorem2_reductions,
)
from symorb.perm import Subset, act_subset, preset


def test_enumerate_orbits_c8_pairs():
    part = enumerate_orbits(preset("C8"), 2)
    assert part.count == 4
    assert part.reps() == [Subset([1, 2]), Subset([1, 3]), Subset([1, 4]), Subset([1, 5])]


def test_enumerate_orbits_t4_single():
    part = enumerate_orbits(preset("T4"), 2)
    assert part.count == 1
    assert len(part.orbits[0][1]) == 6


def test_enumerate_orbits_o6_edges_and_antipodes():
    part = enumerate_orbits(preset("O6"), 2)
    assert part.count == 2
    by_rep = {rep: members for rep, members in part.orbits}
    assert len(by_rep[Subset([1, 2])]) == 3  # antipodal pairs
    assert len(by_rep[Subset([1, 3])]) == 12  # edges


@pytest.mark.parametrize("name", ["C5", "C8", "D6", "T4", "O6", "O8", "I12"])
def test_orbit_counts_match_burnside_and_cover(name):
    G = preset(name)
    for m in range(G.n + 1):
        part = enumerate_orbits(G, m)
        assert part.count == burnside_count(G, m)
        covered = [x for _, members in part.orbits for x in members]
        assert len(covered) == math.comb(G.n, m)
        assert len(set(covered)) == len(covered)
        for rep, members in part.orbits:
            assert rep == min(members)


def test_orbits_closed_under_action():
    G = preset("O8")
    part = enumerate_orbits(G, 3)
    for _, members in part.orbits:
        mset = set(members)
        for x in members:
            for g in G.elements:
                assert act_subset(g, x) in mset


def test_orbit_complement_bijection():
    G = preset("D8")
    for m in (2, 3):
        part_m = enumerate_orbits(G, m)
        part_c = enumerate_orbits(G, G.n - m)
        comp_reps = set()
        for rep, members in part_m.orbits:
            images = {x.complement(G.n) for x in members}
            comp_reps.add(min(images))
        assert comp_reps == set(part_c.reps())


def test_enumeration_point_limit():
    with pytest.raises(ResourceLimitError):
        enumerate_orbits(preset("C13"), 2)


def test_normalizer_classes_c8():
    for m, expected in ((2, 3), (3, 4), (4, 6)):
        report = normalizer_classes(preset("C8"), m)
        assert report.class_count == expected
    # {1,2} and {1,4} merge (spread by alpha=3); {1,3} and {1,5} stay apart
    report = normalizer_classes(preset("C8"), 2)
    reps = report.g_orbits.reps()
    merged = [cls for cls in report.normalizer_classes if len(cls) > 1]
    assert len(merged) == 1
    assert {reps[i] for i in merged[0]} == {Subset([1, 2]), Subset([1, 4])}


def test_normalizer_classes_refine_orbits():
    report = normalizer_classes(preset("C8"), 3)
    indices = sorted(i for cls in report.normalizer_classes for i in cls)
    assert indices == list(range(report.orbit_count))


def test_normalizer_classes_i12():
    report = normalizer_classes(preset("I12"), 2)
    assert report.orbit_count == 3
    assert report.class_count == 2
    reps = report.g_orbits.reps()
    merged = [cls for cls in report.normalizer_classes if len(cls) == 2]
    assert len(merged) == 1
    # the two non-antipodal classes merge; the antipodal class {1,7} stays
    assert Subset([1, 7]) not in {reps[i] for i in merged[0]}


def test_theorem2_c8_pairs():
    G = preset("C8")
    entries = theorem2_reductions(G, 2)
    part = enumerate_orbits(G, 2)
    reps = part.reps()
    reducible = {reps[e.orbit_index] for e in entries}
    assert reducible == {Subset([1, 3]), Subset([1, 5])}
    # {1,5} via the order-2 subgroup (blocks {i, i+4}), {1,3} via order 4
    orders = {
        (tuple(reps[e.orbit_index]), e.subgroup.order()) for e in entries
    }
    assert ((1, 5), 2) in orders
    assert ((1, 3), 4) in orders


def test_theorem2_o6_antipodal_via_inversion():
    entries = theorem2_reductions(preset("O6"), 2)
    part = enumerate_orbits(preset("O6"), 2)
    reps = part.reps()
    via_c2 = [e for e in entries if e.subgroup.order() == 2]
    assert via_c2
    assert all(reps[e.orbit_index] == Subset([1, 2]) for e in via_c2)
    assert all(len(e.block) == 2 for e in via_c2)


def test_theorem2_o8_face_diagonal_via_tetrahedral():
    entries = theorem2_reductions(preset("O8"), 2)
    part = enumerate_orbits(preset("O8"), 2)
    reps = part.reps()
    tetra = [
        e
        for e in entries
        if e.subgroup.order() == 24 and set(e.block) in ({1, 3, 6, 8}, {2, 4, 5, 7})
    ]
    assert tetra
    assert {reps[e.orbit_index] for e in tetra} == {Subset([1, 3])}
    assert all(e.restricted.order() == 24 for e in tetra)


def test_theorem2_entries_inside_blocks():
    for name in ("C8", "O6", "O8"):
        for m in (2, 3):
            for e in theorem2_reductions(preset(name), m):
                assert set(e.member) <= set(e.block)


def test_reduction_report_c8_pipeline():
    expected = {2: (28, 4, 3, 1), 3: (56, 7, 4, 3), 4: (70, 10, 6, 5)}
    for m, pipeline in expected.items():
        report = reduction_report(preset("C8"), m)
        assert report.pipeline() == pipeline


def test_reduction_report_t4():
    report = reduction_report(preset("T4"), 2)
    # V4 <| S4 is transitive, so the single orbit is reducible: 0 unique
    assert report.pipeline() == (6, 1, 1, 0)


def test_reduction_report_json_and_dot():
    report = reduction_report(preset("O6"), 2)
    data = report.to_json()
    assert data["pipeline"]["orbits"] == 2
    dot = orbit_diagram_dot(report)
    assert dot.startswith("graph orbits {")
    assert "cluster_0" in dot and "cluster_1" in dot
    assert "fillcolor" in dot
    # every vertex appears in every cluster
    assert dot.count("o0_v") >= 6


def test_dot_ring_layout():
    report = reduction_report(preset("C4"), 2)
    dot = orbit_diagram_dot(report)
    assert 'pos="' in dot
