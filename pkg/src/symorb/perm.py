"""Permutations of party labels, finitely generated subgroups of S_n, and
the canonical symmetry-group presets (rings and platonic solids).

Labels are 1-based at every interface.  A permutation stores the tuple
``images`` with ``images[i-1] = g(i)``.
"""

from __future__ import annotations

import json
import re
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInputError, ResourceLimitError

DEFAULT_ELEMENT_CAP = 10**6


class Permutation:
    """A bijection of the labels 1..n, stored in one-line notation."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(v) for v in images)
        n = len(imgs)
        if n == 0:
            raise InvalidInputError("permutation needs at least one label")
        if sorted(imgs) != list(range(1, n + 1)):
            raise InvalidInputError(f"not a bijection of 1..{n}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InvalidInputError(f"label {i} out of range 1..{self.n}")
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        return self.cycle_string()

    def inverse(self) -> "Permutation":
        out = [0] * self.n
        for i, v in enumerate(self.images):
            out[v - 1] = i + 1
        return Permutation(out)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def order(self) -> int:
        k = 1
        p = self
        while not p.is_identity():
            p = compose(self, p)
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycle decomposition, fixed points omitted; each cycle
        starts at its least label, cycles sorted by that label."""
        seen = [False] * self.n
        out = []
        for i in range(1, self.n + 1):
            if seen[i - 1]:
                continue
            cyc = [i]
            seen[i - 1] = True
            j = self(i)
            while j != i:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Multiset of cycle lengths including fixed points, sorted descending."""
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (self.n - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in cyc)

    def to_json(self) -> list[int]:
        return list(self.images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse cycle notation like ``"(2 8 6 11)(3 10 5 9)(4 7)"`` into a
    permutation of 1..n.  Commas and spaces both separate labels; ``"()"``
    and the empty string give the identity."""
    stripped = text.replace(",", " ").strip()
    body = _CYCLE_RE.sub("", stripped).strip()
    if body:
        at = text.find(body[0])
        raise InvalidInputError(
            f"unbalanced or stray text {body!r} in cycles at position {at}"
        )
    imgs = list(range(1, n + 1))
    for grp in _CYCLE_RE.findall(stripped):
        labels = [int(tok) for tok in grp.split()]
        if not labels:
            continue
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"repeated label in cycle ({grp})")
        for v in labels:
            if not 1 <= v <= n:
                raise InvalidInputError(f"label {v} out of range 1..{n}")
        for a, b in zip(labels, labels[1:] + labels[:1]):
            if imgs[a - 1] != a:
                raise InvalidInputError(f"label {a} appears in two cycles")
            imgs[a - 1] = b
    return Permutation(imgs)


def identity(n: int) -> Permutation:
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    return Permutation(range(1, n + 1))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply q first, then p: result(i) = p(q(i))."""
    if p.n != q.n:
        raise InvalidInputError(f"size mismatch: {p.n} vs {q.n}")
    pi = p.images
    return Permutation(tuple(pi[v - 1] for v in q.images))


def act_tuple(g: Permutation, t: Sequence) -> tuple:
    """Permute an n-tuple: position j of the result holds t[g^-1(j)]."""
    if len(t) != g.n:
        raise InvalidInputError(f"tuple length {len(t)} != {g.n}")
    gi = g.inverse().images
    return tuple(t[gi[j] - 1] for j in range(g.n))


class Subset(tuple):
    """A disordered m-tuple of distinct labels from 1..n, kept sorted."""

    def __new__(cls, labels: Iterable[int], n: Optional[int] = None):
        vals = sorted(int(v) for v in labels)
        if len(set(vals)) != len(vals):
            raise InvalidInputError(f"repeated labels in subset {vals}")
        if vals and vals[0] < 1:
            raise InvalidInputError(f"labels must be >= 1, got {vals[0]}")
        if n is not None and vals and vals[-1] > n:
            raise InvalidInputError(f"label {vals[-1]} out of range 1..{n}")
        return super().__new__(cls, vals)

    @property
    def m(self) -> int:
        return len(self)

    def complement(self, n: int) -> "Subset":
        return Subset(set(range(1, n + 1)) - set(self))


def act_subset(g: Permutation, x: Subset) -> Subset:
    if x and max(x) > g.n:
        raise InvalidInputError(f"subset {tuple(x)} exceeds n={g.n}")
    return Subset(g(i) for i in x)


class PermGroup:
    """A subgroup of S_n given by generators; the element set is computed on
    first use (breadth-first closure) and cached, sorted lexicographically."""

    def __init__(
        self,
        n: int,
        generators: Iterable[Permutation],
        name: Optional[str] = None,
        element_cap: int = DEFAULT_ELEMENT_CAP,
        _elements: Optional[tuple[Permutation, ...]] = None,
    ):
        if n < 1:
            raise InvalidInputError("n must be >= 1")
        gens = tuple(generators)
        for g in gens:
            if g.n != n:
                raise InvalidInputError(f"generator size {g.n} != n={n}")
        self.n = n
        self.generators = gens
        self.name = name
        self.element_cap = element_cap
        if _elements is not None:
            self.__dict__["elements"] = _elements

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        els = {identity(self.n)}
        frontier = list(els)
        while frontier:
            new = []
            for g in self.generators:
                for h in frontier:
                    c = compose(g, h)
                    if c not in els:
                        els.add(c)
                        new.append(c)
                        if len(els) > self.element_cap:
                            raise ResourceLimitError(
                                f"group closure exceeded cap {self.element_cap}"
                            )
            frontier = new
        return tuple(sorted(els))

    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in set(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PermGroup)
            and self.n == other.n
            and set(self.elements) == set(other.elements)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.elements))

    def __repr__(self) -> str:
        label = self.name or f"{len(self.generators)} generators"
        return f"PermGroup(n={self.n}, {label})"

    def identity(self) -> Permutation:
        return identity(self.n)

    def is_transitive(self) -> bool:
        reached = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for i in frontier:
                for g in self.generators:
                    j = g(i)
                    if j not in reached:
                        reached.add(j)
                        nxt.append(j)
            frontier = nxt
        return len(reached) == self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": [g.to_json() for g in self.generators],
            "name": self.name,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "PermGroup":
        if isinstance(data, str):
            data = json.loads(data)
        gens = [Permutation(imgs) for imgs in data["generators"]]
        return cls(int(data["n"]), gens, name=data.get("name"))


def generate(
    n: int,
    generators: Iterable[Permutation],
    name: Optional[str] = None,
    element_cap: int = DEFAULT_ELEMENT_CAP,
) -> PermGroup:
    group = PermGroup(n, generators, name=name, element_cap=element_cap)
    group.elements  # materialize eagerly so closure errors surface here
    return group


def is_member(G: PermGroup, p: Permutation) -> bool:
    if p.n != G.n:
        raise InvalidInputError(f"size mismatch: {p.n} vs {G.n}")
    return p in G


def _cyc(n: int, *cycles: tuple[int, ...]) -> Permutation:
    imgs = list(range(1, n + 1))
    for c in cycles:
        for i, a in enumerate(c):
            imgs[a - 1] = c[(i + 1) % len(c)]
    return Permutation(imgs)


# Canonical vertex labelings (these are fixed constants of the package; all
# derived results quote them):
#
# C(n), D(n): points 1..n clockwise on a ring.  D(n) adds the reflection
#   fixing point 1 (i -> n+2-i).
#
# T4: tetrahedron vertices 1..4; the full symmetry group acts as all of S_4,
#   the rotations as A_4.
#
# O6: octahedron vertices on the coordinate axes, antipodal pairs (1,2),
#   (3,4), (5,6):  1=+x, 2=-x, 3=+y, 4=-y, 5=+z, 6=-z.
#   Generators: 90-degree rotations about z and x, plus the inversion.
#
# O8: cube vertices (+-1,+-1,+-1) labeled so antipodal pairs are (2k-1,2k)
#   and the two inscribed tetrahedra are {1,3,6,8} and {2,4,5,7}:
#     1=(+,+,+)  2=(-,-,-)  3=(+,-,-)  4=(-,+,+)
#     5=(+,-,+)  6=(-,+,-)  7=(+,+,-)  8=(-,-,+)
#   Generators: 90-degree rotations about z and x, plus the inversion.
#
# I12: icosahedron with vertex 1 = (0, 1, phi) (phi the golden ratio),
#   vertices 2..6 its five neighbours in rotation order around the 1-axis,
#   and i+6 antipodal to i:
#     1=(0,+1,+phi)   2=(0,-1,+phi)   3=(+phi,0,+1)   4=(+1,+phi,0)
#     5=(-1,+phi,0)   6=(-phi,0,+1)   7..12 = negatives of 1..6
#   Generators: the 72-degree rotation about the 1-axis, the 120-degree
#   rotation about the face (1,2,3), plus the inversion.

_PRESET_RE = re.compile(r"^([CD])\(?(\d+)\)?$")


def _preset_parts(name: str) -> tuple[str, int]:
    key = name.strip().upper().replace(" ", "")
    m = _PRESET_RE.match(key)
    if m:
        return m.group(1), int(m.group(2))
    if key in ("T4", "O6", "O8", "I12"):
        return key, int(key[1:])
    raise InvalidInputError(f"unknown preset {name!r}")


def preset(name: str, rotations_only: bool = False) -> PermGroup:
    """Build a canonical symmetry group: C(n), D(n), T4, O6, O8 or I12.

    Full symmetry groups (rotations and reflections) by default;
    ``rotations_only`` selects the rotation subgroup.
    """
    kind, n = _preset_parts(name)
    if kind in ("C", "D") and n < 3:
        raise InvalidInputError(f"{kind}(n) needs n >= 3, got {n}")
    rot_ring = _cyc(n, tuple(range(1, n + 1)))
    if kind == "C":
        gens = [rot_ring]
        label = f"C{n}"
    elif kind == "D":
        if rotations_only:
            gens = [rot_ring]
        else:
            reflect = Permutation([1] + list(range(n, 1, -1)))
            gens = [rot_ring, reflect]
        label = f"D{n}"
    elif kind == "T4":
        if rotations_only:
            gens = [_cyc(4, (1, 2, 3)), _cyc(4, (1, 2), (3, 4))]
        else:
            gens = [_cyc(4, (1, 2)), _cyc(4, (1, 2, 3, 4))]
        label = "T4"
    elif kind == "O6":
        gens = [_cyc(6, (1, 3, 2, 4)), _cyc(6, (3, 5, 4, 6))]
        if not rotations_only:
            gens.append(_cyc(6, (1, 2), (3, 4), (5, 6)))
        label = "O6"
    elif kind == "O8":
        gens = [_cyc(8, (1, 4, 8, 5), (2, 3, 7, 6)), _cyc(8, (1, 5, 3, 7), (2, 6, 4, 8))]
        if not rotations_only:
            gens.append(_cyc(8, (1, 2), (3, 4), (5, 6), (7, 8)))
        label = "O8"
    else:  # I12
        gens = [
            _cyc(12, (2, 3, 4, 5, 6), (8, 9, 10, 11, 12)),
            _cyc(12, (1, 2, 3), (4, 6, 11), (5, 10, 12), (7, 8, 9)),
        ]
        if not rotations_only:
            gens.append(_cyc(12, (1, 7), (2, 8), (3, 9), (4, 10), (5, 11), (6, 12)))
        label = "I12"
    if rotations_only:
        label += "-rot"
    return generate(n, gens, name=label)


def parse_group_spec(spec: str, n: Optional[int] = None) -> PermGroup:
    """Parse a CLI group spec: a preset name ("C8", "I12") or generator
    cycles like ``"(1 2)(3 4); (1 3)"`` (semicolon-separated, needs n)."""
    spec = spec.strip()
    try:
        return preset(spec)
    except InvalidInputError:
        pass
    if "(" not in spec:
        raise InvalidInputError(f"unknown preset {spec!r}")
    if n is None:
        raise InvalidInputError("generator specs need an explicit n")
    gens = [parse_cycles(part, n) for part in spec.split(";") if part.strip()]
    return generate(n, gens, name=None)
