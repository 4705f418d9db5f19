"""Structural group computations behind the two reduction theorems:
conjugacy classes, normal subgroups, the normalizer in S_n, point orbits,
restriction of an action to an invariant label set, and one-dimensional
characters with exact rational phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidInputError, ResourceLimitError
from .perm import PermGroup, Permutation, Subset, act_subset, compose, generate, identity

NORMALIZER_POINT_LIMIT = 12
AUTOMORPHISM_BUDGET = 2 * 10**5


def conjugacy_classes(G: PermGroup) -> list[frozenset[Permutation]]:
    """Disjoint conjugacy classes covering G; the identity class comes
    first, the rest are ordered by (size, least element)."""
    elements = list(G.elements)
    inverses = {g: g.inverse() for g in elements}
    remaining = set(elements)
    classes = []
    while remaining:
        x = min(remaining)
        cls = frozenset(compose(compose(g, x), inverses[g]) for g in elements)
        remaining -= cls
        classes.append(cls)
    ident = G.identity()
    classes.sort(key=lambda c: (ident not in c, len(c), min(c)))
    return classes


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """True if H is a subgroup of G invariant under conjugation by G."""
    if H.n != G.n:
        raise InvalidInputError("point count mismatch")
    h_set = set(H.elements)
    if not h_set <= set(G.elements):
        return False
    return all(
        compose(compose(g, h), g.inverse()) in h_set
        for g in G.generators or [G.identity()]
        for h in H.elements
    )


def _generating_subset(elements: list[Permutation], n: int) -> list[Permutation]:
    """Small generating set for a known element list (greedy closure)."""
    gens: list[Permutation] = []
    have = {identity(n)}
    for x in sorted(elements):
        if x in have:
            continue
        gens.append(x)
        have = set(generate(n, gens).elements)
        if len(have) == len(elements):
            break
    return gens


def normal_subgroups(G: PermGroup) -> list[PermGroup]:
    """All H with gHg^-1 = H, as unions of conjugacy classes containing the
    identity that are closed under composition; sorted by order (trivial
    group first, G last)."""
    classes = conjugacy_classes(G)
    ident_class = classes[0]
    rest = classes[1:]
    order = G.order()
    found: list[PermGroup] = []
    k = len(rest)
    for mask in range(1 << k):
        chosen = [rest[i] for i in range(k) if mask >> i & 1]
        size = 1 + sum(len(c) for c in chosen)
        if order % size:
            continue
        members = set(ident_class)
        for c in chosen:
            members |= c
        if not _is_closed(members):
            continue
        gens = _generating_subset(sorted(members), G.n)
        found.append(
            PermGroup(G.n, gens, _elements=tuple(sorted(members)))
        )
    found.sort(key=lambda H: (H.order(), H.elements))
    return found


def _is_closed(members: set[Permutation]) -> bool:
    for a in members:
        for b in members:
            if compose(a, b) not in members:
                return False
    return True


# --- normalizer in S_n -----------------------------------------------------
#
# Naive scans of S_n are infeasible at n = 12, so the search runs in two
# stages.  Stage 1 enumerates Aut(G) by backtracking over generator images
# (restricted to elements of equal order and conjugacy-class size, then
# validated as full homomorphisms via BFS words).  Stage 2 finds, for each
# automorphism a, every point permutation nu with nu g nu^-1 = a(g): the
# pointwise condition nu(g(i)) = a(g)(nu(i)) propagates assignments along
# G-orbits, so backtracking only branches on one seed point per orbit.
# Every element of the normalizer realizes exactly one automorphism, so the
# union over automorphisms is the whole normalizer.


def _bfs_words(G: PermGroup) -> dict[Permutation, Optional[tuple[int, Permutation]]]:
    """Map each element to (generator index, parent) along a BFS tree."""
    ident = G.identity()
    word: dict[Permutation, Optional[tuple[int, Permutation]]] = {ident: None}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(G.generators):
                y = compose(g, x)
                if y not in word:
                    word[y] = (gi, x)
                    nxt.append(y)
        frontier = nxt
    return word


def automorphisms(G: PermGroup, budget: int = AUTOMORPHISM_BUDGET) -> list[dict]:
    """All automorphisms of G as dicts element -> element."""
    elements = list(G.elements)
    if len(elements) == 1:
        return [{elements[0]: elements[0]}]
    gens = list(G.generators)
    classes = conjugacy_classes(G)
    class_size = {}
    for c in classes:
        for x in c:
            class_size[x] = len(c)
    orders = {x: x.order() for x in elements}
    word = _bfs_words(G)
    bfs_order = list(word)
    candidates = [
        [
            h
            for h in elements
            if orders[h] == orders[g] and class_size[h] == class_size[g]
        ]
        for g in gens
    ]

    autos: list[dict] = []
    attempts = 0

    def extend(images: list[Permutation]) -> Optional[dict]:
        phi = {bfs_order[0]: bfs_order[0]}
        for x in bfs_order[1:]:
            gi, parent = word[x]
            phi[x] = compose(images[gi], phi[parent])
        if len(set(phi.values())) != len(elements):
            return None
        for gi, g in enumerate(gens):
            img = images[gi]
            for x in elements:
                if phi[compose(g, x)] != compose(img, phi[x]):
                    return None
        return phi

    def descend(i: int, images: list[Permutation]):
        nonlocal attempts
        if i == len(gens):
            attempts += 1
            if attempts > budget:
                raise ResourceLimitError("automorphism search budget exceeded")
            phi = extend(images)
            if phi is not None:
                autos.append(phi)
            return
        for h in candidates[i]:
            descend(i + 1, images + [h])

    descend(0, [])
    return autos


def _realizers(G: PermGroup, phi: dict) -> list[Permutation]:
    """All nu in S_n with nu g nu^-1 = phi(g) for every generator g."""
    n = G.n
    gens = list(G.generators)
    gen_images = [phi[g] for g in gens]
    results: list[Permutation] = []

    def propagate(assign: dict[int, int]) -> Optional[dict[int, int]]:
        stack = list(assign)
        used = set(assign.values())
        while stack:
            i = stack.pop()
            for g, pg in zip(gens, gen_images):
                j = g(i)
                target = pg(assign[i])
                if j in assign:
                    if assign[j] != target:
                        return None
                elif target in used:
                    return None
                else:
                    assign[j] = target
                    used.add(target)
                    stack.append(j)
        return assign

    def descend(assign: dict[int, int]):
        unassigned = [i for i in range(1, n + 1) if i not in assign]
        if not unassigned:
            results.append(Permutation(tuple(assign[i] for i in range(1, n + 1))))
            return
        i = unassigned[0]
        used = set(assign.values())
        for target in range(1, n + 1):
            if target in used:
                continue
            trial = propagate({**assign, i: target})
            if trial is not None:
                descend(trial)

    seed: dict[int, int] = {} if gens else {}
    if not gens:
        # trivial group: every permutation conjugates it to itself
        from itertools import permutations as _perms

        return [Permutation(p) for p in _perms(range(1, n + 1))]
    descend(seed)
    return results


def normalizer(G: PermGroup, budget: int = AUTOMORPHISM_BUDGET) -> PermGroup:
    """N_G = { nu in S_n : nu G nu^-1 = G }, with a generating set.

    Limited to n <= 12; for the cyclic groups the closed affine form
    (``cyclic_normalizer``) has no such limit."""
    if G.n > NORMALIZER_POINT_LIMIT:
        raise ResourceLimitError(
            f"normalizer search limited to n <= {NORMALIZER_POINT_LIMIT}"
        )
    members: set[Permutation] = set()
    for phi in automorphisms(G, budget=budget):
        members.update(_realizers(G, phi))
    members.update(G.elements)
    elements = tuple(sorted(members))
    gens = _generating_subset(list(elements), G.n)
    name = f"N({G.name})" if G.name else None
    return PermGroup(G.n, gens, name=name, _elements=elements)


def cyclic_normalizer(n: int) -> PermGroup:
    """The normalizer of C_n in S_n in its closed affine form: all maps
    i -> a*i + b mod n with gcd(a, n) = 1.  Order n * phi(n)."""
    if n < 3:
        raise InvalidInputError("n must be >= 3")
    shift = Permutation([i % n + 1 for i in range(1, n + 1)])
    gens = [shift]
    for a in range(2, n):
        if math.gcd(a, n) == 1:
            gens.append(Permutation([(a * i - 1) % n + 1 for i in range(1, n + 1)]))
    return generate(n, gens, name=f"N(C{n})")


def find_normalizer_witness(
    G: PermGroup, x1: Subset, x2: Subset
) -> Optional[Permutation]:
    """Some nu in N_G taking x1 into the G-orbit of x2, or None.

    The identity is tried first, so x1 = x2 always yields the identity."""
    if len(x1) != len(x2):
        raise InvalidInputError("subsets must have equal size")
    orbit2 = {x2}
    frontier = [x2]
    while frontier:
        nxt = []
        for y in frontier:
            for g in G.generators:
                z = act_subset(g, y)
                if z not in orbit2:
                    orbit2.add(z)
                    nxt.append(z)
        frontier = nxt
    for nu in normalizer(G).elements:
        if act_subset(nu, x1) in orbit2:
            return nu
    return None


@dataclass(frozen=True)
class PointPartition:
    """Disjoint label blocks covering 1..n, each block sorted, blocks
    ordered by least label."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(v for b in self.blocks for v in b)
        if seen != list(range(1, self.n + 1)):
            raise InvalidInputError("blocks must partition 1..n")

    def block_of(self, label: int) -> tuple[int, ...]:
        for b in self.blocks:
            if label in b:
                return b
        raise InvalidInputError(f"label {label} out of range")

    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def point_orbits(H: PermGroup) -> PointPartition:
    """The partition [n]/H of party labels into H-orbits."""
    n = H.n
    seen = [False] * (n + 1)
    blocks = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        seen[start] = True
        while frontier:
            nxt = []
            for i in frontier:
                for g in H.generators:
                    j = g(i)
                    if not seen[j]:
                        seen[j] = True
                        orbit.add(j)
                        nxt.append(j)
            frontier = nxt
        blocks.append(tuple(sorted(orbit)))
    return PointPartition(n, tuple(blocks))


def restrict(H: PermGroup, Y) -> tuple[PermGroup, dict[int, int]]:
    """The action of H restricted to an H-invariant label set Y, relabeled
    to 1..|Y| in ascending order.  Returns (H|Y, label map global->local)."""
    labels = sorted(set(int(v) for v in Y))
    if not labels:
        raise InvalidInputError("Y must be nonempty")
    label_map = {v: i + 1 for i, v in enumerate(labels)}
    blocks = point_orbits(H)
    covered = set()
    for b in blocks.blocks:
        if b[0] in set(labels):
            covered |= set(b)
    if covered != set(labels):
        raise InvalidInputError(f"Y={labels} is not a union of H-orbits")
    restricted = set()
    for h in H.elements:
        restricted.add(Permutation(tuple(label_map[h(v)] for v in labels)))
    elements = tuple(sorted(restricted))
    gens = _generating_subset(list(elements), len(labels))
    name = f"{H.name}|{{{','.join(map(str, labels))}}}" if H.name else None
    return PermGroup(len(labels), gens, name=name, _elements=elements), label_map


# --- one-dimensional characters --------------------------------------------


class Character:
    """A homomorphism from G into the unit circle, stored as exact rational
    turns: ``turns(g)`` is theta_g / (2*pi) as a Fraction in [0, 1)."""

    def __init__(self, group: PermGroup, values: dict[Permutation, Fraction]):
        self.group = group
        self.values = {g: Fraction(v) % 1 for g, v in values.items()}

    def turns(self, g: Permutation) -> Fraction:
        return self.values[g]

    def phase(self, g: Permutation) -> complex:
        import cmath

        return cmath.exp(2j * cmath.pi * float(self.values[g]))

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def signature(self) -> tuple[Fraction, ...]:
        return tuple(self.values[g] for g in self.group.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Character)
            and self.group.elements == other.group.elements
            and self.signature() == other.signature()
        )

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        kind = "trivial" if self.is_trivial else "nontrivial"
        return f"Character({self.group!r}, {kind})"


def commutator_subgroup(G: PermGroup) -> PermGroup:
    """[G, G]: closure of all commutators a b a^-1 b^-1."""
    elements = list(G.elements)
    commutators = set()
    for a in elements:
        ai = a.inverse()
        for b in elements:
            commutators.add(compose(compose(a, b), compose(ai, b.inverse())))
    gens = _generating_subset(sorted(commutators), G.n)
    closed = generate(G.n, gens)
    return PermGroup(G.n, gens, _elements=closed.elements)


def characters(G: PermGroup) -> list[Character]:
    """All one-dimensional characters of G (equivalently of G/[G,G]).

    The trivial character comes first; the rest are sorted by their value
    tuples over the sorted element list.  The count is |G/[G,G]|."""
    comm = set(commutator_subgroup(G).elements)
    elements = list(G.elements)
    # cosets of [G,G]
    coset_of: dict[Permutation, int] = {}
    reps: list[Permutation] = []
    for x in elements:
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for c in comm:
            coset_of[compose(x, c)] = idx
    q = len(reps)
    # multiplication table and element orders of the quotient
    mul = [[coset_of[compose(a, b)] for b in reps] for a in reps]
    ident_idx = coset_of[G.identity()]

    def coset_order(i: int) -> int:
        k, j = 1, i
        while j != ident_idx:
            j = mul[i][j]
            k += 1
        return k

    # greedy generating set of the quotient
    gen_idx: list[int] = []
    reachable = {ident_idx}
    for i in range(q):
        if i in reachable:
            continue
        gen_idx.append(i)
        frontier = list(reachable)
        while frontier:
            nxt = []
            for a in frontier:
                for gi in gen_idx:
                    b = mul[gi][a]
                    if b not in reachable:
                        reachable.add(b)
                        nxt.append(b)
            frontier = nxt

    results: list[dict[int, Fraction]] = []

    def assign(k: int, partial: dict[int, Fraction]):
        if k == len(gen_idx):
            results.append(dict(partial))
            return
        gi = gen_idx[k]
        d = coset_order(gi)
        for num in range(d):
            trial = dict(partial)
            trial[gi] = Fraction(num, d)
            # close under multiplication; check consistency
            ok = True
            frontier = list(trial)
            while frontier and ok:
                nxt = []
                for a in frontier:
                    for b in list(trial):
                        c = mul[a][b]
                        val = (trial[a] + trial[b]) % 1
                        if c in trial:
                            if trial[c] != val:
                                ok = False
                                break
                        else:
                            trial[c] = val
                            nxt.append(c)
                    if not ok:
                        break
                frontier = nxt
            if ok:
                assign(k + 1, trial)

    assign(0, {ident_idx: Fraction(0)})
    if len(results) != q:
        raise AssertionError(
            f"expected {q} characters, found {len(results)}; quotient not abelian?"
        )
    chars = []
    for table in results:
        values = {x: table[coset_of[x]] for x in elements}
        chars.append(Character(G, values))
    chars.sort(key=lambda c: (not c.is_trivial, c.signature()))
    return chars
