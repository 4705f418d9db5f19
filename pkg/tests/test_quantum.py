import numpy as np
import pytest

from symorb.errors import InvalidInputError, ResourceLimitError
from symorb.grouptheory import characters, normal_subgroups, point_orbits, restrict
from symorb.perm import Subset, act_subset, compose, generate, parse_cycles, preset
from symorb.quantum import (
    DensityMatrix,
    Measure,
    StateVector,
    bell_state,
    concurrence,
    entropy_of_bipartition,
    ghz_state,
    is_invariant,
    ket_index,
    negativity,
    partial_trace,
    permutation_matrix,
    permute_state,
    sector_basis,
    w_state,
    weave_state,
)


def product_state(n, digits):
    amps = np.zeros(2**n, dtype=complex)
    amps[ket_index(digits, 2)] = 1.0
    return StateVector(n, 2, amps)


def random_state(rng, n, d=2):
    amps = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return StateVector(n, d, amps, normalize=True)


def test_state_vector_validation():
    with pytest.raises(InvalidInputError):
        StateVector(2, 2, [1, 0, 0])  # wrong length
    with pytest.raises(InvalidInputError):
        StateVector(2, 2, [1, 1, 0, 0])  # not normalized
    with pytest.raises(ResourceLimitError):
        StateVector(30, 2, [])


def test_permute_state_basis_ket():
    g = parse_cycles("(1 2 3)", 3)
    psi = product_state(3, (2, 1, 1))  # |100>
    out = permute_state(g, psi)
    # U_g|i> = |g(i)>, and g shifts the excitation from slot 1 to slot 2
    assert abs(out.amplitude((1, 2, 1)) - 1.0) < 1e-12


def test_permute_state_identity_and_homomorphism():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        psi = random_state(rng, n)
        e = parse_cycles("()", n)
        assert np.allclose(permute_state(e, psi).amplitudes, psi.amplitudes)
        imgs1 = list(rng.permutation(n) + 1)
        imgs2 = list(rng.permutation(n) + 1)
        from symorb.perm import Permutation

        g, h = Permutation(imgs1), Permutation(imgs2)
        lhs = permute_state(compose(g, h), psi)
        rhs = permute_state(g, permute_state(h, psi))
        assert np.allclose(lhs.amplitudes, rhs.amplitudes, atol=1e-12)


def test_permute_state_preserves_norm():
    rng = np.random.default_rng(6)
    psi = random_state(rng, 5)
    g = parse_cycles("(1 4)(2 5 3)", 5)
    assert abs(np.linalg.norm(permute_state(g, psi).amplitudes) - 1) < 1e-12


def test_sector_dimensions_cyclic():
    G = preset("C4")
    chars = characters(G)
    dims = [sector_basis(G, 2, chi).dim for chi in chars]
    assert dims[0] == 6  # binary necklaces of length 4
    assert sum(dims) == 2**4


@pytest.mark.parametrize("n", [3, 5, 6])
def test_sector_dimension_sum_is_full_space(n):
    G = preset(f"C{n}")
    total = sum(sector_basis(G, 2, chi).dim for chi in characters(G))
    assert total == 2**n


def test_sector_c2_symmetric_dimension():
    C2 = generate(2, [parse_cycles("(1 2)", 2)])
    chars = characters(C2)
    sym = sector_basis(C2, 2, chars[0])
    assert sym.dim == 3
    anti = sector_basis(C2, 2, chars[1])
    assert anti.dim == 1  # the singlet


def test_sector_vectors_orthonormal_and_symmetric():
    G = preset("C6")
    for chi in characters(G)[:3]:
        basis = sector_basis(G, 2, chi)
        for j in range(basis.dim):
            vj = basis.basis_state(j).amplitudes
            assert abs(np.vdot(vj, vj) - 1) < 1e-12
            for k in range(j + 1, basis.dim):
                assert abs(np.vdot(vj, basis.basis_state(k).amplitudes)) < 1e-12
        # coefficient constraint a_i = a_{g(i)} e^{i theta_g}
        rng = np.random.default_rng(7)
        psi = basis.state_from_coefficients(
            rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        )
        for g in G.elements:
            residual = permute_state(g, psi).amplitudes - chi.phase(g) * psi.amplitudes
            assert np.abs(residual).max() < 1e-12


def test_is_invariant_w_state():
    for n in (3, 5):
        chi = is_invariant(w_state(n), preset(f"C{n}"))
        assert chi is not None and chi.is_trivial


def test_is_invariant_non_invariant_ket():
    C2 = generate(2, [parse_cycles("(1 2)", 2)])
    assert is_invariant(product_state(2, (1, 2)), C2) is None


def test_is_invariant_singlet_sign_character():
    C2 = generate(2, [parse_cycles("(1 2)", 2)])
    amps = np.zeros(4, dtype=complex)
    amps[ket_index((1, 2), 2)] = 1 / np.sqrt(2)
    amps[ket_index((2, 1), 2)] = -1 / np.sqrt(2)
    chi = is_invariant(StateVector(2, 2, amps), C2)
    assert chi is not None and not chi.is_trivial


def test_partial_trace_product_state_is_pure():
    rng = np.random.default_rng(8)
    single = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    single /= np.linalg.norm(single)
    amps = np.kron(np.kron(single, single), single)
    psi = StateVector(3, 2, amps)
    rho = partial_trace(psi, Subset([1, 3]))
    assert abs(rho.purity() - 1.0) < 1e-10


def test_partial_trace_bell_is_maximally_mixed():
    rho = partial_trace(bell_state(), Subset([1]))
    assert np.allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)


def test_w3_pair_concurrence_known_value():
    rho = partial_trace(w_state(3), Subset([1, 2]))
    assert abs(concurrence(rho) - 2 / 3) < 1e-10


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_w_state_all_pairs_2_over_n(n):
    psi = w_state(n)
    from itertools import combinations

    for pair in combinations(range(1, n + 1), 2):
        rho = partial_trace(psi, Subset(pair))
        assert abs(concurrence(rho) - 2 / n) < 1e-10


def test_concurrence_bell_and_product():
    amps = np.zeros(4, dtype=complex)
    amps[ket_index((1, 2), 2)] = amps[ket_index((2, 1), 2)] = 1 / np.sqrt(2)
    assert abs(concurrence(partial_trace(StateVector(2, 2, amps), Subset([1, 2]))) - 1) < 1e-12
    prod = product_state(2, (1, 2))
    assert concurrence(partial_trace(prod, Subset([1, 2]))) == 0.0


def test_concurrence_swap_symmetric():
    rng = np.random.default_rng(9)
    for _ in range(20):
        psi = random_state(rng, 4)
        rho_a = partial_trace(psi, Subset([2, 4]))
        swap = parse_cycles("(2 4)", 4)
        rho_b = partial_trace(permute_state(swap, psi), Subset([2, 4]))
        assert abs(concurrence(rho_a) - concurrence(rho_b)) < 1e-10


def test_concurrence_dimension_guard():
    rho = partial_trace(w_state(3), Subset([1]))
    with pytest.raises(InvalidInputError):
        concurrence(rho)


def test_negativity_bell():
    rho = partial_trace(bell_state(), Subset([1, 2]))
    assert abs(negativity(rho, [1]) - 0.5) < 1e-12
    assert abs(negativity(rho, [2]) - negativity(rho, [1])) < 1e-12


def test_negativity_separable_mixture_zero():
    # equal mixture of |01><01| and |10><10| is separable (PPT for 2x2)
    mat = np.zeros((4, 4), dtype=complex)
    mat[1, 1] = mat[2, 2] = 0.5
    rho = DensityMatrix(Subset([1, 2]), 2, mat)
    assert negativity(rho, [1]) < 1e-12


def test_negativity_bad_bipartition():
    rho = partial_trace(bell_state(), Subset([1, 2]))
    with pytest.raises(InvalidInputError):
        negativity(rho, [1, 2])
    with pytest.raises(InvalidInputError):
        negativity(rho, [])


def test_entropy_product_bell_ghz():
    assert entropy_of_bipartition(product_state(3, (1, 2, 1)), Subset([2])) < 1e-12
    assert abs(entropy_of_bipartition(bell_state(), Subset([1])) - 1) < 1e-10
    g4 = ghz_state(4)
    for cut in ([1], [1, 2], [2, 4], [3]):
        assert abs(entropy_of_bipartition(g4, Subset(cut)) - 1.0) < 1e-10
    # entropy of x equals entropy of the complement
    rng = np.random.default_rng(10)
    psi = random_state(rng, 5)
    x = Subset([2, 5])
    assert abs(
        entropy_of_bipartition(psi, x) - entropy_of_bipartition(psi, x.complement(5))
    ) < 1e-10


def test_w_state_small():
    psi = w_state(2)
    assert abs(psi.amplitude((2, 1)) - 1 / np.sqrt(2)) < 1e-12
    assert abs(psi.amplitude((1, 2)) - 1 / np.sqrt(2)) < 1e-12


def test_measure_orbit_equality_under_group_action():
    # E_{g(x)}(psi) = E_x(U_{g^-1} psi); for sector states both reduce to E_x(psi)
    G = preset("C6")
    chi = characters(G)[2]
    basis = sector_basis(G, 2, chi)
    rng = np.random.default_rng(11)
    psi = basis.state_from_coefficients(
        rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    )
    x = Subset([1, 2])
    measures = [
        Measure.concurrence(),
        Measure.negativity([min(x)]),
        Measure.entropy(),
    ]
    for g in G.elements:
        gx = act_subset(g, x)
        for meas in measures:
            m2 = meas if meas.kind != "negativity" else Measure.negativity([min(gx)])
            assert abs(meas.evaluate(psi, x) - m2.evaluate(psi, gx)) < 1e-10


def test_weave_single_block_is_input():
    psi = w_state(4)
    blocks = point_orbits(preset("C4"))
    woven = weave_state(psi, blocks, 4)
    assert np.allclose(woven.amplitudes, psi.amplitudes, atol=1e-12)


def test_weave_bell_pairs_on_octahedron():
    G = preset("O6")
    inversion = generate(6, [parse_cycles("(1 2)(3 4)(5 6)", 6)])
    blocks = point_orbits(inversion)
    woven = weave_state(bell_state(), blocks, 6)
    for pair in ([1, 2], [3, 4], [5, 6]):
        assert abs(concurrence(partial_trace(woven, Subset(pair))) - 1.0) < 1e-10
    assert is_invariant(woven, G) is not None


def test_weave_w4_on_cube_tetrahedra():
    G = preset("O8")
    tetra = [H for H in normal_subgroups(G) if H.order() == 24][0:]
    tetra = [
        H
        for H in tetra
        if point_orbits(H).blocks == ((1, 3, 6, 8), (2, 4, 5, 7))
    ]
    assert len(tetra) == 1
    blocks = point_orbits(tetra[0])
    woven = weave_state(w_state(4), blocks, 8)
    chi = is_invariant(woven, G)
    assert chi is not None and chi.is_trivial
    # same-tetrahedron pairs (face diagonals) have concurrence 1/2
    from itertools import combinations

    for block in blocks.blocks:
        for pair in combinations(block, 2):
            value = concurrence(partial_trace(woven, Subset(pair)))
            assert abs(value - 0.5) < 1e-10


def test_weave_size_mismatch():
    with pytest.raises(InvalidInputError):
        weave_state(bell_state(), point_orbits(preset("C4")), 4)


def test_rho_block_commutes_with_restricted_action():
    # for psi in a G-sector and H <| G with block Y, rho_Y commutes with U_h
    G = preset("C8")
    H = generate(8, [parse_cycles("(1 3 5 7)(2 4 6 8)", 8)])
    blocks = point_orbits(H)
    Y = blocks.blocks[0]
    restricted, _ = restrict(H, Y)
    rng = np.random.default_rng(12)
    for chi in characters(G)[:4]:
        basis = sector_basis(G, 2, chi)
        psi = basis.state_from_coefficients(
            rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        )
        rho = partial_trace(psi, Subset(Y))
        for h in restricted.elements:
            U = permutation_matrix(h, 2)
            comm = U @ rho.matrix - rho.matrix @ U
            assert np.abs(comm).max() < 1e-10


def test_concurrence_convexity_spot_check():
    rng = np.random.default_rng(13)
    for _ in range(10):
        states = [random_state(rng, 2) for _ in range(3)]
        weights = rng.random(3)
        weights /= weights.sum()
        mixed = sum(
            w * np.outer(s.amplitudes, s.amplitudes.conj())
            for w, s in zip(weights, states)
        )
        rho = DensityMatrix(Subset([1, 2]), 2, mixed)
        pure_avg = sum(
            w * concurrence(partial_trace(s, Subset([1, 2])))
            for w, s in zip(weights, states)
        )
        assert concurrence(rho) <= pure_avg + 1e-10


def test_state_json_roundtrip():
    psi = w_state(3)
    data = psi.to_json()
    back = StateVector.from_json(data)
    assert np.allclose(back.amplitudes, psi.amplitudes)
