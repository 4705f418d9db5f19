import math
from fractions import Fraction
from itertools import permutations as all_perms

import pytest

from symorb.combinatorics import totient
from symorb.errors import InvalidInputError, ResourceLimitError
from symorb.grouptheory import (
    characters,
    commutator_subgroup,
    conjugacy_classes,
    cyclic_normalizer,
    find_normalizer_witness,
    is_normal,
    normal_subgroups,
    normalizer,
    point_orbits,
    restrict,
)
from symorb.perm import Permutation, Subset, compose, generate, parse_cycles, preset


def brute_normalizer_elements(G):
    n = G.n
    gset = set(G.elements)
    out = []
    for imgs in all_perms(range(1, n + 1)):
        nu = Permutation(imgs)
        nui = nu.inverse()
        if all(compose(compose(nu, g), nui) in gset for g in G.generators):
            out.append(nu)
    return set(out)


def test_conjugacy_classes_abelian():
    classes = conjugacy_classes(preset("C4"))
    assert len(classes) == 4
    assert all(len(c) == 1 for c in classes)


def test_conjugacy_classes_s3():
    classes = conjugacy_classes(preset("D3"))  # D3 = S3
    assert sorted(len(c) for c in classes) == [1, 2, 3]
    assert sum(len(c) for c in classes) == 6
    # identity class first
    assert preset("D3").identity() in classes[0]
    # brute-force conjugation table agreement
    G = preset("D3")
    for cls in classes:
        x = min(cls)
        brute = {compose(compose(g, x), g.inverse()) for g in G.elements}
        assert brute == set(cls)


def test_normal_subgroups_c8():
    orders = [H.order() for H in normal_subgroups(preset("C8"))]
    assert orders == [1, 2, 4, 8]


def test_normal_subgroups_octahedron_inversion():
    G = preset("O6")
    subs = normal_subgroups(G)
    inv = parse_cycles("(1 2)(3 4)(5 6)", 6)
    order2 = [H for H in subs if H.order() == 2]
    assert any(inv in H for H in order2)
    assert all(is_normal(G, H) for H in subs)


def test_normal_subgroups_cube_tetrahedral():
    G = preset("O8")
    subs = normal_subgroups(G)
    tetra = [
        H
        for H in subs
        if H.order() == 24
        and all({g(i) for i in (1, 3, 6, 8)} == {1, 3, 6, 8} for g in H.elements)
    ]
    assert len(tetra) == 1
    # its action on one inscribed tetrahedron is all of S_4
    R, label_map = restrict(tetra[0], [1, 3, 6, 8])
    assert R.order() == 24 and R.n == 4


def test_normal_subgroups_all_pass_is_normal():
    for name in ("C6", "D4", "T4", "I12"):
        G = preset(name)
        for H in normal_subgroups(G):
            assert is_normal(G, H)


@pytest.mark.parametrize("n", range(3, 13))
def test_normalizer_cyclic_order(n):
    N = normalizer(preset(f"C{n}"))
    assert N.order() == n * totient(n)


def test_normalizer_cyclic_is_affine():
    n = 8
    N = normalizer(preset(f"C{n}"))
    affine = set()
    for a in range(1, n + 1):
        if math.gcd(a, n) != 1:
            continue
        for b in range(n):
            affine.add(Permutation([(a * i + b - 1) % n + 1 for i in range(1, n + 1)]))
    assert set(N.elements) == affine
    assert set(cyclic_normalizer(n).elements) == affine


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_normalizer_matches_brute_force(n):
    G = preset(f"C{n}")
    assert set(normalizer(G).elements) == brute_normalizer_elements(G)


def test_normalizer_contains_group_and_is_normal_inside():
    for name in ("C6", "D4", "O6"):
        G = preset(name)
        N = normalizer(G)
        assert set(G.elements) <= set(N.elements)
        assert is_normal(N, G)


def test_normalizer_polyhedra():
    assert normalizer(preset("O6")).order() == 48
    assert normalizer(preset("O8")).order() == 48


def test_normalizer_icosahedron_twice_group_order():
    G = preset("I12")
    N = normalizer(G)
    assert N.order() == 240 == 2 * G.order()


def test_normalizer_point_limit():
    with pytest.raises(ResourceLimitError):
        normalizer(preset("C13"))


def test_cyclic_normalizer_large_n():
    for n in (13, 16):
        assert cyclic_normalizer(n).order() == n * totient(n)


def test_find_normalizer_witness_identity_case():
    G = preset("C8")
    x = Subset([2, 5])
    assert find_normalizer_witness(G, x, x).is_identity()


def test_find_normalizer_witness_absent():
    G = preset("C8")
    assert find_normalizer_witness(G, Subset([1, 2]), Subset([1, 4])) is not None
    assert find_normalizer_witness(G, Subset([1, 2]), Subset([1, 3])) is None


def test_point_orbits():
    inv_in_o6 = generate(6, [parse_cycles("(1 2)(3 4)(5 6)", 6)])
    assert point_orbits(inv_in_o6).blocks == ((1, 2), (3, 4), (5, 6))
    trivial = generate(5, [])
    assert point_orbits(trivial).blocks == ((1,), (2,), (3,), (4,), (5,))
    assert point_orbits(preset("C8")).blocks == (tuple(range(1, 9)),)


def test_point_orbits_equal_blocks_under_normal_subgroups():
    for name in ("C8", "O6", "O8", "I12"):
        G = preset(name)
        for H in normal_subgroups(G):
            sizes = point_orbits(H).block_sizes()
            assert len(set(sizes)) == 1
            # G permutes the blocks whole
            blocks = [set(b) for b in point_orbits(H).blocks]
            for g in G.elements:
                for b in blocks:
                    assert {g(i) for i in b} in blocks


def test_restrict_shift_subgroup():
    H = generate(8, [parse_cycles("(1 5)(2 6)(3 7)(4 8)", 8)])
    R, label_map = restrict(H, [1, 5])
    assert R.order() == 2 and R.n == 2
    assert label_map == {1: 1, 5: 2}


def test_restrict_full_set_is_same_group():
    H = preset("D4")
    R, label_map = restrict(H, [1, 2, 3, 4])
    assert set(R.elements) == set(H.elements)
    assert label_map == {1: 1, 2: 2, 3: 3, 4: 4}


def test_restrict_rejects_non_invariant():
    H = preset("C4")
    with pytest.raises(InvalidInputError):
        restrict(H, [1, 2])


def test_restrict_order_divides():
    G = preset("O8")
    for H in normal_subgroups(G):
        for block in point_orbits(H).blocks:
            R, _ = restrict(H, block)
            assert H.order() % R.order() == 0


def test_characters_cyclic():
    for n in (3, 4, 6, 8):
        G = preset(f"C{n}")
        chars = characters(G)
        assert len(chars) == n
        assert chars[0].is_trivial
        rot = G.generators[0]
        assert sorted(c.turns(rot) for c in chars) == [
            Fraction(k, n) for k in range(n)
        ]


def test_characters_dihedral_counts():
    assert len(characters(preset("D5"))) == 2
    assert len(characters(preset("D6"))) == 4


def test_characters_s4_trivial_and_sign():
    G = preset("T4")
    chars = characters(G)
    assert len(chars) == 2
    sign = chars[1]
    transposition = parse_cycles("(1 2)", 4)
    assert sign.turns(transposition) == Fraction(1, 2)


def test_characters_are_homomorphisms():
    for name in ("C6", "D4", "T4", "O6"):
        G = preset(name)
        for chi in characters(G):
            for a in G.elements:
                for b in G.elements:
                    assert chi.turns(compose(a, b)) == (
                        chi.turns(a) + chi.turns(b)
                    ) % 1
            assert chi.turns(G.identity()) == 0


def test_commutator_subgroup_s4_is_a4():
    K = commutator_subgroup(preset("T4"))
    assert K.order() == 12


def test_normalizer_idempotent_growth():
    G = preset("C6")
    N = normalizer(G)
    NN = normalizer(N)
    assert set(N.elements) <= set(NN.elements)
