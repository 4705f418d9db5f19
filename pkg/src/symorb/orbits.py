"""Explicit enumeration of X_m, its orbit partition under G (the distinct
entanglements), the classes merged by the normalizer, and the
normal-subgroup reducibility report: the full reduction pipeline

    |X_m|  ->  |X_m/G|  ->  |X_m/N_G|  ->  unique maxima

as reproducible data, with optional DOT diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .combinatorics import burnside_count
from .errors import InvalidInputError, ResourceLimitError
from .grouptheory import normal_subgroups, normalizer, point_orbits, restrict
from .perm import PermGroup, Subset, act_subset

ENUMERATION_POINT_LIMIT = 12


@dataclass(frozen=True)
class OrbitPartition:
    """G-orbits of all m-subsets; orbit reps are lexicographically least
    members and orbits are sorted by rep, so output order is deterministic."""

    group: PermGroup
    m: int
    orbits: tuple[tuple[Subset, tuple[Subset, ...]], ...]

    @property
    def count(self) -> int:
        return len(self.orbits)

    def reps(self) -> list[Subset]:
        return [rep for rep, _ in self.orbits]

    def orbit_index_of(self, x: Subset) -> int:
        for i, (_, members) in enumerate(self.orbits):
            if x in members:
                return i
        raise InvalidInputError(f"{tuple(x)} is not an m-subset of this partition")

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "m": self.m,
            "orbits": [
                {"rep": list(rep), "size": len(members), "members": [list(s) for s in members]}
                for rep, members in self.orbits
            ],
        }


def enumerate_orbits(G: PermGroup, m: int) -> OrbitPartition:
    """Partition all C(n, m) subsets into G-orbits by closure under the
    generators."""
    n = G.n
    if n > ENUMERATION_POINT_LIMIT:
        raise ResourceLimitError(f"orbit enumeration limited to n <= {ENUMERATION_POINT_LIMIT}")
    if not 0 <= m <= n:
        raise InvalidInputError(f"m={m} out of range 0..{n}")
    seen: set[Subset] = set()
    orbits = []
    for combo in combinations(range(1, n + 1), m):
        x = Subset(combo)
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in G.generators:
                    z = act_subset(g, y)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        seen |= orbit
        members = tuple(sorted(orbit))
        orbits.append((members[0], members))
    orbits.sort(key=lambda pair: pair[0])
    partition = OrbitPartition(G, m, tuple(orbits))
    expected = burnside_count(G, m)
    if partition.count != expected:
        raise AssertionError(
            f"enumerated {partition.count} orbits but Burnside says {expected}"
        )
    return partition


@dataclass(frozen=True)
class Theorem2Entry:
    """One reducibility witness: some member of the orbit fits inside a
    single point-orbit block Y of a proper nontrivial normal subgroup H,
    so its maximum already occurs in the restricted problem H|Y."""

    orbit_index: int
    subgroup: PermGroup
    block: tuple[int, ...]
    restricted: PermGroup
    member: Subset

    def to_json(self) -> dict:
        return {
            "orbit": self.orbit_index,
            "subgroup_order": self.subgroup.order(),
            "subgroup_generators": [g.cycle_string() for g in self.subgroup.generators],
            "block": list(self.block),
            "restricted_order": self.restricted.order(),
            "member": list(self.member),
        }


@dataclass(frozen=True)
class ReductionReport:
    """The full reduction pipeline for (G, m)."""

    group: PermGroup
    m: int
    g_orbits: OrbitPartition
    normalizer_group: PermGroup
    normalizer_classes: tuple[tuple[int, ...], ...]
    theorem2_entries: tuple[Theorem2Entry, ...] = field(default=())
    with_theorem2: bool = True

    @property
    def total_subsets(self) -> int:
        return math.comb(self.group.n, self.m)

    @property
    def orbit_count(self) -> int:
        return self.g_orbits.count

    @property
    def class_count(self) -> int:
        return len(self.normalizer_classes)

    def reducible_orbits(self) -> set[int]:
        return {e.orbit_index for e in self.theorem2_entries}

    @property
    def unique_count(self) -> int:
        """Normalizer classes none of whose orbits admit a Theorem-2 entry."""
        reducible = self.reducible_orbits()
        return sum(
            1
            for cls in self.normalizer_classes
            if not any(i in reducible for i in cls)
        )

    def pipeline(self) -> tuple[int, int, int, int]:
        return (self.total_subsets, self.orbit_count, self.class_count, self.unique_count)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "m": self.m,
            "pipeline": {
                "subsets": self.total_subsets,
                "orbits": self.orbit_count,
                "normalizer_classes": self.class_count,
                "unique": self.unique_count,
            },
            "orbits": [
                {"rep": list(rep), "size": len(members)}
                for rep, members in self.g_orbits.orbits
            ],
            "normalizer": {
                "order": self.normalizer_group.order(),
                "generators": [
                    g.cycle_string() for g in self.normalizer_group.generators
                ],
            },
            "classes": [list(cls) for cls in self.normalizer_classes],
            "theorem2": [e.to_json() for e in self.theorem2_entries],
        }


def normalizer_classes(G: PermGroup, m: int, N: Optional[PermGroup] = None) -> ReductionReport:
    """Group the G-orbits into N_G-orbits (Theorem 1 merges their maxima)."""
    partition = enumerate_orbits(G, m)
    if N is None:
        N = normalizer(G)
    n_partition = enumerate_orbits(N, m)
    class_of: dict[int, list[int]] = {}
    for gi, (rep, _) in enumerate(partition.orbits):
        class_of.setdefault(n_partition.orbit_index_of(rep), []).append(gi)
    classes = tuple(tuple(sorted(v)) for _, v in sorted(class_of.items()))
    expected = burnside_count(N, m)
    if len(classes) != expected:
        raise AssertionError(
            f"{len(classes)} normalizer classes but Burnside says {expected}"
        )
    return ReductionReport(
        group=G,
        m=m,
        g_orbits=partition,
        normalizer_group=N,
        normalizer_classes=classes,
        with_theorem2=False,
    )


def theorem2_reductions(G: PermGroup, m: int) -> tuple[Theorem2Entry, ...]:
    """All reducibility witnesses: for every proper nontrivial H normal in
    G and every block Y of [n]/H with |Y| >= m, each orbit with a member
    inside Y gets one entry (the least such member is recorded)."""
    partition = enumerate_orbits(G, m)
    entries = []
    for H in normal_subgroups(G):
        if H.order() in (1, G.order()):
            continue
        blocks = point_orbits(H)
        for block in blocks.blocks:
            if len(block) < m:
                continue
            block_set = set(block)
            restricted, _ = restrict(H, block)
            for oi, (_, members) in enumerate(partition.orbits):
                inside = [x for x in members if set(x) <= block_set]
                if inside:
                    entries.append(
                        Theorem2Entry(
                            orbit_index=oi,
                            subgroup=H,
                            block=block,
                            restricted=restricted,
                            member=inside[0],
                        )
                    )
    return tuple(entries)


def reduction_report(G: PermGroup, m: int) -> ReductionReport:
    """Full pipeline |X_m| -> |X_m/G| -> |X_m/N_G| -> unique count."""
    staged = normalizer_classes(G, m)
    entries = theorem2_reductions(G, m)
    return ReductionReport(
        group=G,
        m=m,
        g_orbits=staged.g_orbits,
        normalizer_group=staged.normalizer_group,
        normalizer_classes=staged.normalizer_classes,
        theorem2_entries=entries,
    )


# --- DOT diagrams ------------------------------------------------------------
#
# 2-D drawing coordinates, fixed constants of the package:
#   C(n)/D(n): vertex i on the unit ring at angle 90 - 360*(i-1)/n degrees
#     (clockwise from the top), matching the ring labeling.
#   Polyhedra: the documented 3-D vertex coordinates projected by
#     (x, y, z) -> (x + 0.45 z, y + 0.35 z).
# Edges drawn are nearest-neighbour pairs of the solid (ring edges for the
# ring groups).

_PHI = (1 + math.sqrt(5)) / 2

_SOLID_COORDS = {
    "T4": [(0.0, 0.0, 1.0), (0.943, 0.0, -0.333), (-0.471, 0.816, -0.333), (-0.471, -0.816, -0.333)],
    "O6": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    "O8": [
        (1, 1, 1), (-1, -1, -1), (1, -1, -1), (-1, 1, 1),
        (1, -1, 1), (-1, 1, -1), (1, 1, -1), (-1, -1, 1),
    ],
    "I12": [
        (0, 1, _PHI), (0, -1, _PHI), (_PHI, 0, 1), (1, _PHI, 0), (-1, _PHI, 0), (-_PHI, 0, 1),
        (0, -1, -_PHI), (0, 1, -_PHI), (-_PHI, 0, -1), (-1, -_PHI, 0), (1, -_PHI, 0), (_PHI, 0, -1),
    ],
}


def _layout(G: PermGroup) -> tuple[list[tuple[float, float]], list[tuple[int, int]]]:
    name = (G.name or "").split("-")[0]
    n = G.n
    if name in _SOLID_COORDS:
        pts3 = _SOLID_COORDS[name]
        pos = [(x + 0.45 * z, y + 0.35 * z) for x, y, z in pts3]
        dist2 = [
            (sum((a - b) ** 2 for a, b in zip(pts3[i], pts3[j])), i + 1, j + 1)
            for i in range(n)
            for j in range(i + 1, n)
        ]
        shortest = min(d for d, _, _ in dist2)
        edges = [(i, j) for d, i, j in dist2 if abs(d - shortest) < 1e-9]
    else:
        pos = [
            (
                math.cos(math.radians(90 - 360 * k / n)),
                math.sin(math.radians(90 - 360 * k / n)),
            )
            for k in range(n)
        ]
        edges = [(k + 1, k % n + 2) for k in range(n)] if n > 2 else []
        if G.name is None:
            edges = []  # generator-specified groups carry no geometry
    return pos, edges


def _diagram_dot(G: PermGroup, orbits, class_of: dict, reducible, with_theorem2: bool) -> str:
    pos, edges = _layout(G)
    lines = [
        "graph orbits {",
        '  layout="neato";',
        "  node [shape=circle, fontsize=10, width=0.3, fixedsize=true];",
    ]
    scale = 1.4
    for oi, (rep, members) in enumerate(orbits):
        tags = [f"class {class_of[oi]}"] if oi in class_of else []
        if with_theorem2:
            tags.append("reducible" if oi in reducible else "unique to G")
        label = f"orbit {oi}: rep {{{','.join(map(str, rep))}}}, size {len(members)}"
        if tags:
            label += " [" + ", ".join(tags) + "]"
        lines.append(f"  subgraph cluster_{oi} {{")
        lines.append(f'    label="{label}";')
        for v in range(1, G.n + 1):
            x, y = pos[v - 1]
            style = ', style=filled, fillcolor="gray70"' if v in rep else ""
            lines.append(
                f'    o{oi}_v{v} [label="{v}", pos="{scale * x:.3f},{scale * y:.3f}!"{style}];'
            )
        for a, b in edges:
            lines.append(f"    o{oi}_v{a} -- o{oi}_v{b};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def orbit_diagram_dot(report: ReductionReport) -> str:
    """DOT rendering: one cluster per G-orbit showing all vertices with the
    orbit's representative subset highlighted; cluster labels carry the
    normalizer class and reducibility annotations."""
    class_of = {}
    for ci, cls in enumerate(report.normalizer_classes):
        for oi in cls:
            class_of[oi] = ci
    return _diagram_dot(
        report.group,
        report.g_orbits.orbits,
        class_of,
        report.reducible_orbits(),
        report.with_theorem2,
    )


def partition_diagram_dot(partition: OrbitPartition) -> str:
    """DOT rendering of a bare orbit partition (no reduction annotations)."""
    return _diagram_dot(partition.group, partition.orbits, {}, set(), False)
