import itertools

import numpy as np
import pytest

from gsrep import cones, irreps, liealg
from gsrep.errors import NotDiagonalizable

from conftest import algebra, cached_irrep, dominant_box, rng


def split(kind, n, entries):
    g = algebra(kind, n)
    d = liealg.diagonal_element(g, entries)
    return g, d, liealg.spectral_split(g, d)


def test_generators_u3_distinct_differences():
    # one generator per ordered pair with d_n > d_m, namely i(E_mm - E_nn)
    g, d, dd = split("u", 3, [4, 2, 1])
    cone = cones.action_cone_generators(g, dd)
    assert cone.size == 3
    got = set()
    for gen in cone.generators:
        mat = g.matrix(gen)
        diag = np.diag(-1j * mat).real
        scale = np.abs(diag).max()
        got.add(tuple(np.round(diag / scale).astype(int)))
    assert got == {(-1, 1, 0), (-1, 0, 1), (0, -1, 1)}


def test_generators_u3_coincident_differences_stay_in_pair_cone():
    # d = (2,1,0) has a two-dimensional eigenspace at eigenvalue 1; every
    # generator must still be a non-negative combination of the pair rays
    from scipy.optimize import nnls

    g, d, dd = split("u", 3, [2, 1, 0])
    cone = cones.action_cone_generators(g, dd)
    rays = np.array([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]], dtype=float).T
    assert cone.size >= 3
    for gen in cone.generators:
        mat = -1j * g.matrix(gen)
        diag = np.diag(mat).real
        assert np.linalg.norm(mat - np.diag(np.diag(mat))) < 1e-9
        assert np.allclose(diag.sum(), 0, atol=1e-9)
        _, resid = nnls(rays, diag)
        assert resid < 1e-8


def test_generators_empty_for_zero_element():
    g, d, dd = split("u", 2, [0, 0])
    cone = cones.action_cone_generators(g, dd)
    assert cone.size == 0


def test_generator_su2_is_negative_coroot_direction():
    # [e^*, e] = [f, e] = -h for the standard raising/lowering pair
    g, d, dd = split("su", 2, [0.5, -0.5])
    cone = cones.action_cone_generators(g, dd)
    assert cone.size == 1
    gen = cone.generators[0]
    assert gen[0] < 0 and np.allclose(gen[1:], 0)


def test_generators_require_diagonalizable():
    h = algebra("heis", 2)
    D = np.zeros((3, 3))
    D[0, 2] = 1.0  # ad of the X direction: Y -> Z, nilpotent
    dd = liealg.spectral_split(h, D)
    assert not dd.diagonalizable
    with pytest.raises(NotDiagonalizable):
        cones.action_cone_generators(h, dd)


def test_generators_pair_negatively_with_d():
    # the cone points away from the generating direction: the trace pairing
    # tr((-i d)(-i gen)) equals d_m - d_n < 0 for every generator
    g, d, dd = split("u", 3, [2, 1, 0])
    cone = cones.action_cone_generators(g, dd)
    dmat = -1j * g.matrix(d)
    for gen in cone.generators:
        pairing = np.trace(dmat @ (-1j * g.matrix(gen))).real
        assert pairing < -1e-9


def test_positive_cone_membership_defining_u2():
    g = algebra("u", 2)
    rep = cached_irrep("u", 2, (1, 0))
    x = liealg.diagonal_element(g, [1, 0])
    assert cones.in_positive_cone(rep, x)
    assert not cones.in_positive_cone(rep, -x)


def test_positive_cone_trivial_rep():
    rep = cached_irrep("u", 2, (0, 0))
    g = algebra("u", 2)
    generator = rng(3)
    for _ in range(4):
        assert cones.in_positive_cone(rep, generator.normal(size=g.dim))


def test_cone_positivity_defining_u3_compression():
    # compression of the defining action to its low block is extendable
    g, d, dd = split("u", 3, [1, 0, 0])
    pi0 = irreps.centralizer_irrep(g, [1, 0, 0], [(0,), (1, 0)])
    res = cones.check_cone_positivity(g, dd, pi0)
    assert res.verdict
    assert res.sampled  # the positive eigenspace is 2-dimensional


def test_cone_positivity_failure_with_witness():
    g, d, dd = split("u", 3, [1, 0, 0])
    chi = irreps.centralizer_irrep(g, [1, 0, 0], [(1,), (0, 0)])
    res = cones.check_cone_positivity(g, dd, chi)
    assert not res.verdict
    assert res.witness is not None
    # the witness pairs negatively: -i dpi0 of it has a negative eigenvalue
    op = -1j * chi.operator(res.witness.astype(complex))
    assert np.linalg.eigvalsh(op).min() < -1e-9


def test_cone_positivity_zero_derivation():
    g, d, dd = split("u", 2, [0, 0])
    chi = irreps.torus_character(g, (-3, 5))
    assert cones.check_cone_positivity(g, dd, chi).verdict


def test_coroot_condition_examples():
    g = algebra("u", 2)
    rd = liealg.root_datum(g, liealg.diagonal_element(g, [1, 0]))
    assert cones.coroot_condition(irreps.torus_character(g, (0, 1)), rd)
    assert not cones.coroot_condition(irreps.torus_character(g, (1, 0)), rd)
    rd0 = liealg.root_datum(g, liealg.diagonal_element(g, [0, 0]))
    assert cones.coroot_condition(irreps.torus_character(g, (1, 0)), rd0)


@pytest.mark.parametrize("entries", [(2.0, 1.0), (1.0, 3.0)])
def test_equivalence_cone_vs_coroot_regular_u2(entries):
    g, d, dd = split("u", 2, entries)
    rd = liealg.root_datum(g, d)
    for lam in itertools.product(range(-3, 4), repeat=2):
        chi = irreps.torus_character(g, lam)
        assert cones.check_cone_positivity(g, dd, chi).verdict == cones.coroot_condition(chi, rd)


def test_equivalence_cone_vs_coroot_regular_u3():
    g, d, dd = split("u", 3, (2.0, 1.0, 0.0))
    rd = liealg.root_datum(g, d)
    for lam in itertools.product(range(-2, 3), repeat=3):
        chi = irreps.torus_character(g, lam)
        assert cones.check_cone_positivity(g, dd, chi).verdict == cones.coroot_condition(chi, rd)


def test_equivalence_cone_vs_coroot_singular_u3():
    # fixed-point algebra u(1) + u(2): irreducibles are block pairs
    g, d, dd = split("u", 3, (1.0, 0.0, 0.0))
    rd = liealg.root_datum(g, d)
    for a in range(-2, 3):
        for bw in dominant_box(2, -2, 2):
            pi0 = irreps.centralizer_irrep(g, [1, 0, 0], [(a,), bw])
            assert (cones.check_cone_positivity(g, dd, pi0).verdict
                    == cones.coroot_condition(pi0, rd))


def test_equivalence_cone_vs_coroot_regular_su3():
    g = algebra("su", 3)
    d = liealg.diagonal_element(g, [1.3, 0.2, -1.5])
    dd = liealg.spectral_split(g, d)
    rd = liealg.root_datum(g, d)
    for lam in itertools.product(range(-2, 3), repeat=2):
        chi = irreps.torus_character(g, lam)
        assert cones.check_cone_positivity(g, dd, chi).verdict == cones.coroot_condition(chi, rd)


def test_scale_invariance_of_verdicts():
    g = algebra("u", 2)
    for lam in [(0, 1), (1, 0), (2, -1), (-1, -1)]:
        chi = irreps.torus_character(g, lam)
        verdicts = []
        for c in (1.0, 2.0, 7.5):
            d = liealg.diagonal_element(g, [3 * c, 1 * c])
            dd = liealg.spectral_split(g, d)
            verdicts.append(cones.check_cone_positivity(g, dd, chi).verdict)
        assert len(set(verdicts)) == 1


# ---------------------------------------------------------------------------
# the rank-two pseudo-unitary predicates (exact integer arithmetic)


def test_su12_cone_true_but_not_unitarizable():
    assert cones.su12_cone_condition((0, 1, 0)) is True
    assert cones.su12_hw_unitarizable((0, 1, 0)) is False


def test_su12_boundary_weight():
    assert cones.su12_hw_unitarizable((-1, 1, 0)) is True
    assert cones.su12_cone_condition((-1, 1, 0)) is True


def test_su12_interior_weight():
    assert cones.su12_hw_unitarizable((0, 2, 1)) is True


def test_su12_unitarizable_implies_cone():
    for lam in itertools.product(range(-3, 4), repeat=3):
        if cones.su12_hw_unitarizable(lam):
            assert cones.su12_cone_condition(lam)
