import numpy as np
import pytest

from stieltjesmp import (
    BadPoint,
    InconsistentTruncation,
    OrderTooLow,
    PropertyViolated,
    build_shift,
    build_space,
    check_nonneg_hermitian,
    defect_subspace,
    moment_sequence,
    scalarize,
)
from stieltjesmp.shiftop import ShiftOperator
from stieltjesmp.solutions import moments_of_measure, random_discrete_measure


def shift_of(values, n_extra=None, N=1):
    seq = moment_sequence([[[float(v)]] for v in values]) if N == 1 else values
    rep = build_space(scalarize(seq))
    return build_shift(rep)


def test_delta1_shift_is_identity():
    op = shift_of([1, 1, 1])
    assert op.dim == 1
    assert np.isclose(op.matrix[0, 0], 1.0)
    assert op.consistency_residual <= 1e-12


def test_two_atom_shift():
    op = shift_of([2, 3, 5])
    assert op.dim == 2 and op.domain_dim == 1
    assert op.consistency_residual <= 1e-12
    xi0 = op.rep.vector(0)
    assert np.isclose(np.vdot(xi0, op.matrix @ xi0), 3.0)


def test_dirac0_shift_is_zero():
    op = shift_of([1, 0, 0])
    assert op.dim == 1
    assert np.isclose(op.matrix[0, 0], 0.0)


def test_order_too_low():
    seq = moment_sequence([[[1.0]], [[2.0]]])
    rep = build_space(scalarize(seq))
    with pytest.raises(OrderTooLow):
        build_shift(rep)


def test_inconsistent_truncation_detected():
    # kernel relation xi_0 = xi_1 is not respected by the shifted vectors
    seq = moment_sequence([[[1.0]], [[1.0]], [[1.0]], [[1.0]], [[2.0]]])
    rep = build_space(scalarize(seq))
    with pytest.raises(InconsistentTruncation):
        build_shift(rep)


# ---------------------------------------------------------------------------
# sampled operator properties


def test_delta1_properties_pass():
    report = check_nonneg_hermitian(shift_of([1, 1, 1]), trials=32, seed=1)
    assert report["min_rayleigh"] >= -1e-12


def test_two_atom_rayleigh_bounded_by_smallest_atom():
    report = check_nonneg_hermitian(shift_of([2, 3, 5]), trials=64, seed=2)
    # atoms sit at 1 and 2, so the form is bounded below by 1 on the domain
    assert report["min_rayleigh"] >= 1.0 - 1e-9


def test_negative_operator_flagged():
    base = shift_of([1, 1, 1])
    bad = ShiftOperator(
        rep=base.rep,
        domain_basis=np.array([[1.0 + 0j]]),
        matrix=np.array([[-1.0 + 0j]]),
        consistency_residual=0.0,
        N=1,
    )
    with pytest.raises(PropertyViolated):
        check_nonneg_hermitian(bad, trials=8, seed=0)


# ---------------------------------------------------------------------------
# defect subspaces


def test_delta1_defect_trivial():
    dd = defect_subspace(shift_of([1, 1, 1]), 1j)
    assert dd.index == 0


def test_two_atom_defect_one():
    dd = defect_subspace(shift_of([2, 3, 5]), -1.0)
    assert dd.index == 1
    # defect orthogonal to the range
    assert np.abs(dd.defect_basis.conj().T @ dd.range_basis).max() <= 1e-10


@pytest.mark.parametrize("z", [0.0, 1.0, 17.3])
def test_bad_point_on_positive_axis(z):
    with pytest.raises(BadPoint):
        defect_subspace(shift_of([2, 3, 5]), z)


def test_index_conjugation_symmetric():
    op = shift_of([2, 3, 5])
    for z in (1j, -2 + 3j, 0.5 + 0.25j):
        assert defect_subspace(op, z).index == defect_subspace(op, np.conj(z)).index


@pytest.mark.parametrize("seed", range(6))
def test_defect_invariants_on_generated_instances(seed):
    N = seed % 3 + 1
    count = seed % 3 + 1
    seq = moments_of_measure(
        random_discrete_measure(seed, N, count, min_sep=0.4), 2 * count
    )
    rep = build_space(scalarize(seq))
    op = build_shift(rep)
    indices = []
    for z in (1j, -1.0, -2 + 3j):
        dd = defect_subspace(op, z)
        indices.append(dd.index)
        # deficiency bound
        assert dd.index <= N
        # dim H_z + index = d
        assert dd.range_basis.shape[1] + dd.index == rep.dim
        if dd.index and dd.range_basis.shape[1]:
            assert np.abs(dd.defect_basis.conj().T @ dd.range_basis).max() <= 1e-10
        # every coordinate vector splits across range + defect
        for k in range(rep.vectors.shape[1]):
            xi = rep.vector(k)
            pr = dd.range_basis @ (dd.range_basis.conj().T @ xi)
            pd_ = dd.defect_basis @ (dd.defect_basis.conj().T @ xi)
            assert np.linalg.norm(xi - pr - pd_) <= 1e-9 * max(
                1.0, np.linalg.norm(xi)
            )
    # index is the same at every sampled point
    assert len(set(indices)) == 1


def test_shift_identity_recomputed():
    op = shift_of([2, 3, 5])
    X = op.rep.vectors
    n, N = op.rep.gram.n, op.N
    for k in range(n * N):
        assert np.linalg.norm(op.matrix @ X[:, k] - X[:, k + N]) <= 1e-10
