import math

import numpy as np
import pytest
from scipy.linalg import expm

from gsrep import heisenfock as hf
from gsrep import irreps
from gsrep.errors import NotPSD, SplitInvalid

from conftest import algebra, rng


def character_pair_rep(a=(0.3, -0.5), b=(1.0, 0.25)):
    """Two characters of the commuting translation pair (the center acts by 0)."""
    h = algebra("heis", 2)
    dpi = np.zeros((3, 2, 2), dtype=complex)
    dpi[1] = 1j * np.diag(a)
    dpi[2] = 1j * np.diag(b)
    return irreps.Representation(h, dpi)


def test_truncation_dimension_and_index():
    ft = hf.FockTruncation(2, 4)
    assert ft.dim == math.comb(4 + 2, 2)
    for i, occ in enumerate(ft.occupations):
        assert ft.index[tuple(occ)] == i
    assert ft.occupations.sum(axis=1).max() == 4


def test_zero_mode_truncation():
    ft = hf.FockTruncation(0, 0)
    assert ft.dim == 1
    assert np.allclose(ft.vacuum(), [1.0])


def test_weyl_at_zero_is_identity():
    ft = hf.FockTruncation(1, 12)
    assert np.allclose(hf.weyl_op(ft, [0.0]), np.eye(ft.dim))


def test_weyl_vacuum_overlap():
    ft = hf.FockTruncation(1, 40)
    vac = ft.vacuum()
    for r in (0.25, 0.5, 1.0):
        v = np.array([r * np.exp(0.3j)])
        got = vac.conj() @ hf.weyl_op(ft, v) @ vac
        assert abs(got - math.exp(-r * r / 4.0)) <= 1e-6


def test_displacement_vacuum_overlap():
    ft = hf.FockTruncation(1, 40)
    vac = ft.vacuum()
    x = np.array([0.8 + 0.1j])
    got = vac.conj() @ hf.displacement_op(ft, x) @ vac
    assert abs(got - math.exp(-float(np.abs(x[0])) ** 2 / 2.0)) <= 1e-10


def test_weyl_operators_are_unitary():
    ft = hf.FockTruncation(1, 25)
    W = hf.weyl_op(ft, [0.7 - 0.2j])
    assert np.allclose(W @ W.conj().T, np.eye(ft.dim), atol=1e-10)


def test_weyl_relation_residual_zero_case():
    ft = hf.FockTruncation(1, 10)
    assert hf.weyl_relation_residual(ft, [0.0], [0.0]) <= 1e-12


def test_weyl_relation_residual_reference_point():
    ft = hf.FockTruncation(1, 40)
    assert hf.weyl_relation_residual(ft, [1.0], [1j], 20) <= 1e-6


def test_weyl_relation_residual_collinear():
    ft = hf.FockTruncation(1, 40)
    assert hf.weyl_relation_residual(ft, [1.0], [0.5], 20) <= 1e-6


def test_weyl_relation_monotone_in_cutoff():
    generator = rng(17)
    for _ in range(3):
        v = generator.normal(size=1) + 1j * generator.normal(size=1)
        w = generator.normal(size=1) + 1j * generator.normal(size=1)
        v /= max(1.0, np.linalg.norm(v))
        w /= max(1.0, np.linalg.norm(w))
        residuals = [
            hf.weyl_relation_residual(hf.FockTruncation(1, n), v, w, 5)
            for n in (10, 20, 40)
        ]
        assert residuals[1] <= residuals[0] + 1e-12
        assert residuals[2] <= residuals[1] + 1e-12


def test_exp_vector_overlaps():
    ft = hf.FockTruncation(1, 40)
    generator = rng(5)
    for _ in range(4):
        v = generator.normal(size=1) + 1j * generator.normal(size=1)
        w = generator.normal(size=1) + 1j * generator.normal(size=1)
        v /= max(1.0, np.linalg.norm(v))
        w /= max(1.0, np.linalg.norm(w))
        got = hf.exp_vector(ft, v).conj() @ hf.exp_vector(ft, w)
        assert abs(got - np.exp(np.vdot(v, w))) <= 1e-8


def test_second_quantize_number_operator():
    ft = hf.FockTruncation(1, 3)
    op = hf.second_quantize(ft, np.array([[1.0]], dtype=complex))
    assert np.allclose(op, np.diag([0.0, 1.0, 2.0, 3.0]))


def test_second_quantize_zero_operator():
    ft = hf.FockTruncation(2, 3)
    assert np.allclose(hf.second_quantize(ft, np.zeros((2, 2))), 0.0)


def test_second_quantize_kernel_is_zero_mode_fock_space():
    ft = hf.FockTruncation(2, 6)
    op = hf.second_quantize(ft, np.diag([0.0, 1.0]).astype(complex))
    assert hf.kernel_dimension(op) == hf.truncated_kernel_count(6, 1)
    # kernel states occupy only the zero mode
    w, v = np.linalg.eigh(op)
    kernel = v[:, np.abs(w) <= 1e-10]
    for col in kernel.T:
        support = np.abs(col) > 1e-10
        assert np.all(ft.occupations[support, 1] == 0)


def test_second_quantize_positive_spectrum():
    ft = hf.FockTruncation(2, 4)
    generator = rng(23)
    z = generator.normal(size=(2, 2)) + 1j * generator.normal(size=(2, 2))
    D = z @ z.conj().T  # random PSD
    op = hf.second_quantize(ft, D)
    assert np.linalg.eigvalsh(op).min() >= -1e-10


def test_second_quantize_rejects_negative():
    ft = hf.FockTruncation(1, 3)
    with pytest.raises(NotPSD):
        hf.second_quantize(ft, np.array([[-1.0]]))


def test_second_quantize_kernel_count_is_basis_independent():
    # rotate a rank-one one-particle operator: the kernel count only sees
    # the number of zero modes
    ft = hf.FockTruncation(2, 5)
    theta = 0.7
    u = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex)
    D = u @ np.diag([0.0, 1.0]) @ u.conj().T
    op = hf.second_quantize(ft, D)
    assert hf.kernel_dimension(op) == hf.truncated_kernel_count(5, 1)


def test_symplectic_setup_positivity():
    setup = hf.SymplecticSetup((0.0, 1.0, 2.5))
    setup.validate()
    D = setup.rotation_generator()
    generator = rng(2)
    for _ in range(8):
        v = generator.normal(size=6)
        assert setup.sigma(D @ v, v) >= -1e-12


def test_symplectic_setup_rejects_negative_frequency():
    with pytest.raises(SplitInvalid):
        hf.SymplecticSetup((-1.0, 0.0))


def test_symplectic_split_dimensions():
    setup = hf.SymplecticSetup((0.0, 0.0, 1.0))
    assert setup.fixed_modes == 2 and setup.effective_modes == 1
    D = setup.rotation_generator()
    assert np.linalg.matrix_rank(D) == 2  # V_eff has real dimension 2


def test_factorization_clean_fixture():
    setup = hf.SymplecticSetup((0.0, 1.0))
    ft = hf.FockTruncation(1, 30)
    assert hf.factorization_check(setup, character_pair_rep(), ft, sector=10, tol=1e-5)


def test_factorization_rejects_entangled():
    setup = hf.SymplecticSetup((0.0, 1.0))
    ft = hf.FockTruncation(1, 30)
    coupler = expm(1j * 0.6 * np.kron(np.diag([1.0, -1.0]), ft.total_number()))
    assert not hf.factorization_check(
        setup, character_pair_rep(), ft, sector=10, tol=1e-5, entangler=coupler
    )


def test_factorization_two_fixed_modes():
    # [Z, X1, X2, Y1, Y2] with commuting characters: interleaved coordinates
    # must be reordered into the blocked basis correctly
    h4 = algebra("heis", 4)
    dpi = np.zeros((5, 2, 2), dtype=complex)
    dpi[1] = 1j * np.diag([0.4, -0.2])
    dpi[2] = 1j * np.diag([0.1, 0.6])
    dpi[3] = 1j * np.diag([-0.3, 0.2])
    dpi[4] = 1j * np.diag([0.5, -0.1])
    rep0 = irreps.Representation(h4, dpi)
    setup = hf.SymplecticSetup((0.0, 0.0, 1.0))
    ft = hf.FockTruncation(1, 20)
    assert hf.factorization_check(setup, rep0, ft, sector=6, tol=1e-5)


def test_heisenberg_weyl_reorders_interleaved_coordinates():
    h4 = algebra("heis", 4)
    dpi = np.zeros((5, 1, 1), dtype=complex)
    dpi[1] = 1j * 1.0  # X1
    dpi[4] = 1j * 2.0  # Y2
    rep0 = irreps.Representation(h4, dpi)
    # interleaved (x1, y1, x2, y2) = (1, 0, 0, 1): picks X1 and Y2
    got = hf.heisenberg_weyl(rep0, np.array([1.0, 0.0, 0.0, 1.0]))
    assert np.allclose(got, np.exp(1j * 3.0))


def test_factorization_degenerate_no_effective_part():
    setup = hf.SymplecticSetup((0.0,))
    ft = hf.FockTruncation(0, 0)
    assert hf.factorization_check(setup, character_pair_rep(), ft, sector=0, tol=1e-8)


def test_factorization_effective_ground_line():
    # with a strictly positive frequency the effective factor has a unique
    # minimal-energy ray, the vacuum
    ft = hf.FockTruncation(1, 20)
    op = hf.second_quantize(ft, np.array([[1.0]], dtype=complex))
    assert hf.kernel_dimension(op) == 1
