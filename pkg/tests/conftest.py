import numpy as np
import pytest

from stieltjesmp import analyze, moment_sequence, moments_of_measure, solution_measure
from stieltjesmp.solutions import random_discrete_measure


def seq_of_atoms(atoms, order, N=1):
    """Moment sequence of a discrete measure, by direct summation."""
    meas = solution_measure(N, atoms)
    return moments_of_measure(meas, order)


@pytest.fixture(scope="session")
def two_atom_seq():
    # atoms {1, 2} with unit weights: S = [2, 3, 5]
    return moment_sequence([[[2.0]], [[3.0]], [[5.0]]])


@pytest.fixture(scope="session")
def two_atom(two_atom_seq):
    return analyze(two_atom_seq)


@pytest.fixture(scope="session")
def delta1_seq():
    return moment_sequence([[[1.0]], [[1.0]], [[1.0]]])


@pytest.fixture(scope="session")
def delta1(delta1_seq):
    return analyze(delta1_seq)


@pytest.fixture(scope="session")
def dirac0_seq():
    return moment_sequence([[[1.0]], [[0.0]], [[0.0]]])


@pytest.fixture(scope="session")
def dirac0(dirac0_seq):
    return analyze(dirac0_seq)


def _battery_sequences():
    items = {}
    items["two_atom"] = moment_sequence([[[2.0]], [[3.0]], [[5.0]]])
    items["two_atom_m3"] = seq_of_atoms([(1.0, [[1.0]]), (2.0, [[1.0]])], 3)
    items["delta1"] = moment_sequence([[[1.0]], [[1.0]], [[1.0]]])
    items["dirac0"] = moment_sequence([[[1.0]], [[0.0]], [[0.0]]])
    items["atom0_pair"] = seq_of_atoms([(0.0, [[1.0]]), (1.0, [[1.0]])], 2)
    items["n2_diag"] = seq_of_atoms(
        [(1.0, np.diag([1.0, 0.0])), (2.0, np.diag([0.0, 1.0]))], 2, N=2
    )
    items["n2_diag_m4"] = seq_of_atoms(
        [(1.0, np.diag([1.0, 0.0])), (2.0, np.diag([0.0, 1.0]))], 4, N=2
    )
    items["n1_three_m5"] = moments_of_measure(
        random_discrete_measure(3, 1, 3, lam_range=(0.2, 8.0), min_sep=0.8), 5
    )
    items["n2_rand"] = moments_of_measure(
        random_discrete_measure(11, 2, 2, lam_range=(0.5, 6.0), min_sep=1.0), 3
    )
    items["n3_rand"] = moments_of_measure(
        random_discrete_measure(7, 3, 2, lam_range=(0.5, 6.0), min_sep=1.0), 3
    )
    return items


@pytest.fixture(scope="session")
def battery():
    """Named analyses of a representative instance set (session cache)."""
    return {name: analyze(seq) for name, seq in _battery_sequences().items()}


@pytest.fixture(scope="session")
def indeterminate_battery(battery):
    return {
        name: a for name, a in battery.items() if not a.verdict.determinate
    }
