"""Invariant positivity cones and the extension tests.

The action cone of a derivation D lives in the fixed-point algebra
``g^0 = ker D`` and, for diagonalizable D, is generated by the elements
``i [z^*, z]`` with z running over the positive eigenspaces of ``-i D``.
A representation of g^0 can arise on a minimal-energy subspace only if
every generator maps to a positive-semidefinite operator; on compact
fixtures this is equivalent to antidominance of the occurring weights
against the d-positive roots, tested here through the coroot operators.

When a positive eigenspace has dimension > 1 the honest generator set is
the full quadratic family {i[z^*, z]}; membership is then decided on the
basis generators plus seeded random samples and the verdict is flagged as
sampled rather than exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NotDiagonalizable
from .irreps import Representation
from .liealg import DerivationData, MatrixLieAlgebra, RootDatum
from .matcore import eig_hermitian

PSD_TOL = 1e-8


@dataclass
class ConeDescription:
    """Finitely generated convex cone in the fixed-point algebra.

    Generators are real coefficient vectors over the ambient algebra basis;
    ``provenance[k]`` records how generator k arose: ``("basis", eig, i)``
    for the i-th orthonormal vector of the eigenspace at ``eig``, and
    ``("mixed", eig, a, b, phase)`` for a two-vector sample.
    """

    algebra: MatrixLieAlgebra
    generators: np.ndarray  # (G, dim) float
    provenance: list[tuple]

    @property
    def size(self) -> int:
        return self.generators.shape[0]


@dataclass
class ConeTestResult:
    verdict: bool
    witness: Optional[np.ndarray] = None
    witness_provenance: Optional[tuple] = None
    sampled: bool = False
    checked: int = 0

    def __bool__(self) -> bool:  # allow `if result:`
        return self.verdict


def _bracket_generator(g: MatrixLieAlgebra, z: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """i [z^*, z] as a real element (imaginary parts must cancel)."""
    gen = 1j * g.bracket(g.star(z), z)
    if np.linalg.norm(gen.imag) > tol * max(1.0, np.linalg.norm(gen)):
        raise ValueError("cone generator is not a real element; inconsistent eigendata")
    return gen.real


def action_cone_generators(g: MatrixLieAlgebra, dd: DerivationData,
                           tol: float = 1e-9) -> ConeDescription:
    """Generators i[z^*, z] over the positive eigenspaces of ``-i D``.

    For each eigenspace an orthonormal basis contributes one generator per
    vector; eigenspaces of dimension > 1 additionally contribute the mixed
    samples (x_a + eps x_b)/sqrt(2) for eps in {1, i}, since basis vectors
    alone do not generate the cone there.
    """
    if not dd.diagonalizable:
        raise NotDiagonalizable("the action cone requires a diagonalizable derivation")
    gens: list[np.ndarray] = []
    prov: list[tuple] = []
    for lam, space in dd.positive():
        r = space.shape[1]
        for a in range(r):
            gens.append(_bracket_generator(g, space[:, a], tol))
            prov.append(("basis", float(lam.real), a))
        for a in range(r):
            for b in range(a + 1, r):
                for phase in (1.0, 1.0j):
                    z = (space[:, a] + phase * space[:, b]) / np.sqrt(2.0)
                    gens.append(_bracket_generator(g, z, tol))
                    prov.append(("mixed", float(lam.real), a, b, "i" if phase == 1.0j else "1"))
    arr = np.stack(gens) if gens else np.zeros((0, g.dim))
    return ConeDescription(g, arr, prov)


def in_positive_cone(rep0: Representation, x: np.ndarray, tol: float = PSD_TOL,
                     ambient: Optional[bool] = None) -> bool:
    """True iff ``-i dpi0(x)`` is positive semidefinite within tolerance."""
    op = -1j * rep0.operator(np.asarray(x, dtype=complex), ambient=ambient)
    w, _ = eig_hermitian(op, 1e-7)
    return bool(w[0] >= -tol * (1.0 + float(np.linalg.norm(op))))


def check_cone_positivity(g: MatrixLieAlgebra, dd: DerivationData, rep0: Representation,
                          tol: float = PSD_TOL, samples: int = 32,
                          seed: int = 0) -> ConeTestResult:
    """Decide whether the action cone maps into the positive cone of rep0.

    Checks every stored generator, plus ``samples`` random unit vectors per
    positive eigenspace of dimension > 1 (quadratic-form robustness).  On
    failure the violating generator is returned as a witness.
    """
    cone = action_cone_generators(g, dd)
    checked = 0
    for gen, tag in zip(cone.generators, cone.provenance):
        checked += 1
        if not in_positive_cone(rep0, gen, tol):
            return ConeTestResult(False, gen, tag, sampled=False, checked=checked)
    sampled = False
    rng = np.random.default_rng(seed)
    for lam, space in dd.positive():
        r = space.shape[1]
        if r <= 1:
            continue
        sampled = True
        for s in range(samples):
            raw = rng.normal(size=r) + 1j * rng.normal(size=r)
            z = space @ (raw / np.linalg.norm(raw))
            gen = _bracket_generator(g, z)
            checked += 1
            if not in_positive_cone(rep0, gen, tol):
                return ConeTestResult(False, gen, ("sample", float(lam.real), s),
                                      sampled=True, checked=checked)
    return ConeTestResult(True, sampled=sampled, checked=checked)


def coroot_condition(rep0: Representation, rd: RootDatum, tol: float = PSD_TOL) -> bool:
    """True iff dpi0 of every d-positive coroot is negative semidefinite.

    The coroot element is stored as i(E_ii - E_jj), so the Hermitian coroot
    operator is ``-i dpi0`` of it; its maximal eigenvalue must not exceed
    the tolerance for any root with positive value on -i d.
    """
    for idx in rd.delta_plus_plus:
        op = -1j * rep0.operator(rd.coroots[idx].astype(complex))
        w, _ = eig_hermitian(op, 1e-7)
        if w[-1] > tol * (1.0 + float(np.linalg.norm(op))):
            return False
    return True


# ---------------------------------------------------------------------------
# the rank-two pseudo-unitary example: pure integer predicates


def su12_cone_condition(lam: Sequence[int]) -> bool:
    """Cone positivity for the 2+1 pseudo-unitary block fixture.

    For the fixed-point group of conjugation by i*diag(1,-1,-1), a weight
    (l1, l2, l3) with l2 > l3 satisfies the cone condition iff l3 >= l1.
    """
    l1, l2, l3 = (int(x) for x in lam)
    return l2 > l3 and l3 >= l1


def su12_hw_unitarizable(lam: Sequence[int]) -> bool:
    """Existence of the corresponding unitary highest-weight representation.

    Strictly stronger than :func:`su12_cone_condition`: requires
    l3 - l1 >= 1 (with l2 > l3), so cone positivity is necessary but not
    sufficient for extendability in this non-compact example.
    """
    l1, l2, l3 = (int(x) for x in lam)
    return l2 > l3 and l3 - l1 >= 1
