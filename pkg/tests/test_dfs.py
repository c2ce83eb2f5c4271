import numpy as np
import pytest

from blockspin.dfs import (
    AlgebraError,
    OperatorSet,
    algebra_closure,
    block_diagonal_residual,
    collective_noise_generators,
    commutant,
    decompose,
    find_noiseless,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2


def full_matrix_algebra(dim: int) -> OperatorSet:
    units = []
    for i in range(dim):
        for j in range(dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = 1.0
            units.append(m)
    return OperatorSet(dim, units)


class TestClosure:
    def test_identity_only(self):
        ops = OperatorSet(2, [np.eye(2, dtype=complex)])
        basis = algebra_closure(ops)
        assert len(basis) == 1

    def test_pauli_generators_close_to_full_algebra(self):
        ops = OperatorSet(2, [2 * SX, 2 * SZ])
        basis = algebra_closure(ops)
        assert len(basis) == 4

    def test_three_qubit_collective_dimension(self):
        basis = algebra_closure(collective_noise_generators(3))
        assert len(basis) == 20  # 4^2 + 2^2


class TestCommutant:
    def test_full_algebra_scalar_commutant(self):
        basis = algebra_closure(full_matrix_algebra(3))
        comm = commutant(basis)
        assert len(comm) == 1

    def test_scalars_commute_with_everything(self):
        comm = commutant([np.eye(4, dtype=complex)])
        assert len(comm) == 16

    def test_three_qubit_collective_commutant(self):
        basis = algebra_closure(collective_noise_generators(3))
        comm = commutant(basis)
        assert len(comm) == 5  # 1^2 + 2^2


class TestDecompose:
    def test_three_qubit_blocks(self):
        dec = decompose(collective_noise_generators(3))
        blocks = sorted((b.irrep_dim, b.multiplicity) for b in dec.blocks)
        assert blocks == [(2, 2), (4, 1)]
        assert dec.algebra_dim == 20
        assert dec.commutant_dim == 5
        dec.check_dimensions()

    def test_four_qubit_blocks(self):
        dec = decompose(collective_noise_generators(4))
        blocks = sorted((b.irrep_dim, b.multiplicity) for b in dec.blocks)
        assert blocks == [(1, 2), (3, 3), (5, 1)]
        # sum d*m covers the full space
        assert sum(d * m for d, m in blocks) == 16

    def test_residual_small(self):
        ops = collective_noise_generators(3)
        dec = decompose(ops)
        assert block_diagonal_residual(dec, ops) < 1e-8

    def test_isometries_orthonormal(self):
        dec = decompose(collective_noise_generators(3))
        for b in dec.blocks:
            v = b.isometry
            assert np.allclose(
                v.conj().T @ v, np.eye(v.shape[1]), atol=1e-10
            )

    def test_seed_determinism(self):
        d1 = decompose(collective_noise_generators(3), seed=5)
        d2 = decompose(collective_noise_generators(3), seed=5)
        assert [(b.irrep_dim, b.multiplicity) for b in d1.blocks] == [
            (b.irrep_dim, b.multiplicity) for b in d2.blocks
        ]

    def test_identity_generator_single_block(self):
        dec = decompose(OperatorSet(2, [np.eye(2, dtype=complex)]))
        assert len(dec.blocks) == 1
        b = dec.blocks[0]
        assert (b.irrep_dim, b.multiplicity) == (1, 2)


class TestNoiseless:
    def test_three_qubit_subsystem(self):
        dec = decompose(collective_noise_generators(3))
        noiseless = find_noiseless(dec)
        assert len(noiseless) == 1
        nb = noiseless[0]
        assert nb.protected_dim == 2
        assert nb.kind == "subsystem"

    def test_four_qubit_ordering(self):
        dec = decompose(collective_noise_generators(4))
        noiseless = find_noiseless(dec)
        assert [(nb.protected_dim, nb.kind) for nb in noiseless] == [
            (3, "subsystem"),
            (2, "subspace"),
        ]

    def test_full_algebra_empty(self):
        dec = decompose(full_matrix_algebra(3))
        assert find_noiseless(dec) == []

    def test_identity_whole_space_noiseless(self):
        dec = decompose(OperatorSet(2, [np.eye(2, dtype=complex)]))
        noiseless = find_noiseless(dec)
        assert len(noiseless) == 1
        assert noiseless[0].protected_dim == 2


class TestCollectiveGenerators:
    def test_operators_are_collective_spins(self):
        ops = collective_noise_generators(2)
        sx_total = np.kron(SX, np.eye(2)) + np.kron(np.eye(2), SX)
        assert any(np.allclose(m, sx_total) for m in ops.generators)

    def test_dimension_cap(self):
        with pytest.raises(AlgebraError):
            collective_noise_generators(8)
