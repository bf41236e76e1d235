import numpy as np
import pytest

from stieltjesmp import (
    NotHermitian,
    OrderTooHigh,
    SchemaError,
    build_gamma,
    build_gamma_tilde,
    check_solvable,
    load_moments,
    moment_sequence,
    scalarize,
)
from stieltjesmp.solutions import moments_of_measure, random_discrete_measure


def seq1(*values):
    return moment_sequence([[[float(v)]] for v in values])


# ---------------------------------------------------------------------------
# load_moments


def test_load_two_atom_document():
    seq = load_moments({"N": 1, "moments": [[[2, 0]], [[3, 0]], [[5, 0]]]})
    assert seq.N == 1 and seq.m == 2
    assert seq.moments[2][0, 0] == 5.0


def test_load_single_mass_moment():
    seq = load_moments({"N": 1, "moments": [[[1, 0]]]})
    assert seq.m == 0 and seq.moments[0][0, 0] == 1.0


def test_load_rejects_nonreal_diagonal():
    doc = {"N": 2, "moments": [[[[0, 1], [0, 0]], [[0, 0], [1, 0]]]]}
    with pytest.raises(NotHermitian):
        load_moments(doc)


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {},
        {"N": 1},
        {"N": 0, "moments": [[[1, 0]]]},
        {"N": 1, "moments": []},
        {"N": 1, "moments": [[[1, 0], [2, 0]]]},  # wrong shape
        {"N": 1, "moments": [[["x", 0]]]},
    ],
)
def test_load_rejects_malformed(doc):
    with pytest.raises(SchemaError):
        load_moments(doc)


def test_small_asymmetry_is_symmetrized_with_warning():
    S0 = np.array([[1.0, 0.1 + 1e-14j], [0.1, 1.0]])
    with pytest.warns(UserWarning):
        seq = moment_sequence([S0], N=2)
    assert np.abs(seq.moments[0] - seq.moments[0].conj().T).max() == 0.0


# ---------------------------------------------------------------------------
# block Hankel construction


def test_gamma_two_atoms():
    G = build_gamma(seq1(2, 3, 5), 1).entries
    assert np.allclose(G, [[2, 3], [3, 5]])


def test_gamma_dirac_zero():
    G = build_gamma(seq1(1, 0, 0), 1).entries
    assert np.allclose(G, [[1, 0], [0, 0]])


def test_gamma_block_structure_n2():
    mats = [np.diag([1.0, 2.0**j]) for j in range(3)]
    G = build_gamma(moment_sequence(mats, N=2), 1).entries
    assert G.shape == (4, 4)
    assert np.allclose(G[:2, 2:], np.diag([1.0, 2.0]))
    assert np.allclose(G[2:, 2:], np.diag([1.0, 4.0]))


def test_gamma_order_too_high():
    with pytest.raises(OrderTooHigh):
        build_gamma(seq1(2, 3, 5), 2)


def test_gamma_tilde_examples():
    assert np.allclose(
        build_gamma_tilde(seq1(2, 3, 5, 9), 1).entries, [[3, 5], [5, 9]]
    )
    assert np.allclose(build_gamma_tilde(seq1(1, 0, 0, 0), 1).entries, 0.0)
    assert np.allclose(build_gamma_tilde(seq1(1, 1, 1, 1), 1).entries, 1.0)
    with pytest.raises(OrderTooHigh):
        build_gamma_tilde(seq1(2, 3, 5), 1)


# ---------------------------------------------------------------------------
# scalarization


def test_scalarize_scalar_case_is_hankel():
    g = scalarize(seq1(2, 3, 5))
    assert g.size == 2
    assert np.allclose(g.gamma, [[2, 3], [3, 5]])


def test_scalarize_index_map_n2():
    mats = [np.diag([1.0, 2.0**j]) for j in range(3)]
    g = scalarize(moment_sequence(mats, N=2)).gamma
    assert g[0, 0] == 1 and g[1, 1] == 1
    assert g[0, 2] == 1 and g[1, 3] == 2
    assert g[2, 2] == 1 and g[3, 3] == 4
    assert g[0, 1] == 0 and g[2, 3] == 0


@pytest.mark.parametrize("seed", range(6))
def test_scalarize_shift_symmetry_bit_equal(seed):
    N = seed % 3 + 1
    meas = random_discrete_measure(seed, N, 3, min_sep=0.2)
    seq = moments_of_measure(meas, 4)
    g = scalarize(seq)
    size = g.size
    for a in range(size - N):
        for b in range(size - N):
            assert g.gamma[a + N, b] == g.gamma[a, b + N]


@pytest.mark.parametrize("seed", range(4))
def test_gamma_is_principal_submatrix_of_scalarization(seed):
    N = seed % 2 + 1
    seq = moments_of_measure(random_discrete_measure(seed, N, 2, min_sep=0.2), 4)
    g = scalarize(seq).gamma
    for k in range(seq.n + 1):
        sub = build_gamma(seq, k).entries
        assert np.array_equal(sub, g[: (k + 1) * N, : (k + 1) * N])


# ---------------------------------------------------------------------------
# solvability


def test_solvable_two_atoms():
    assert check_solvable(seq1(2, 3, 5, 9)).verdict == "solvable"


def test_solvable_short_sequence():
    rep = check_solvable(seq1(1, 2))
    assert rep.verdict == "solvable"
    assert rep.plain_min_eigs == (1.0,)
    assert rep.shifted_min_eigs == (2.0,)


def test_not_solvable_negative_shifted_moment():
    rep = check_solvable(seq1(1, -1))
    assert rep.verdict == "not solvable"


def test_marginal_when_rank_deficient():
    # a single atom makes the order-1 Hankel exactly singular
    assert check_solvable(seq1(1, 1, 1)).verdict == "marginal"


@pytest.mark.parametrize("seed", range(10))
def test_generated_measures_are_solvable_up_to_roundoff(seed):
    N = seed % 3 + 1
    count = seed % 3 + 1
    meas = random_discrete_measure(seed, N, count, min_sep=0.3)
    seq = moments_of_measure(meas, 2 * count)
    rep = check_solvable(seq)
    for ev, sc in zip(rep.plain_min_eigs, rep.plain_scales):
        assert ev >= -1e-12 * sc
    for ev, sc in zip(rep.shifted_min_eigs, rep.shifted_scales):
        assert ev >= -1e-12 * sc
    assert rep.verdict != "not solvable"
