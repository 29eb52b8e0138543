"""Minimal-energy analysis of a representation under an inner derivation.

Given a representation pi of g and an element d, the Hamiltonian is
``H = -i dpi(d)``.  The minimal implementing one-parameter group inside the
generated von Neumann algebra shifts H separately on each central block,
so the ground space collects the minimal eigenspace of every central
component; this is what makes the direct-sum law hold.  On that space the
fixed-point algebra ``g^0 = ker(ad d)`` acts by compression, and the
analysis decides cyclicity, the ground-state property, and strictness
(the compressed algebra of the whole group equals the algebra generated
by the fixed-point group).

All unbounded-operator subtleties collapse at finite dimension; reports
record the tolerances actually used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NonInjective, NotIrreducible
from .irreps import Representation, direct_sum
from .liealg import (
    MatrixLieAlgebra,
    centralizer_basis,
    intervals_contain,
    intervals_sum,
    is_elliptic,
    normalize_intervals,
    spectral_split,
    subalgebra,
)
from .matcore import (
    CLUSTER_TOL,
    DEFAULT_TOL,
    algebra_closure,
    cluster_values,
    commutant_basis,
    compress,
    eig_hermitian,
)


@dataclass
class GroundStateReport:
    """Outcome of :func:`analyze`.

    ``m`` is the global minimal eigenvalue of ``-i dpi(d)``; ``central_shifts``
    lists the per-central-block minima whose eigenspaces make up ``h0_basis``.
    ``commutant_dims`` is (dim pi(G)', dim pi0(G0)', dim P0 pi(G)'' P0).
    """

    m: float
    h0_basis: np.ndarray  # (dim, r) orthonormal columns
    pi0: Representation
    cyclic: bool
    ground_state: bool
    strict: bool
    minimal_shift: float
    commutant_dims: tuple[int, int, int]
    central_shifts: tuple[float, ...] = ()
    fixed_algebra: Optional[MatrixLieAlgebra] = None
    tol: float = DEFAULT_TOL

    @property
    def h0_dim(self) -> int:
        return self.h0_basis.shape[1]


def _central_projections(dpi_ops: list[np.ndarray], dim: int, tol: float,
                         seed: int = 7) -> list[np.ndarray]:
    """Minimal central projections of the algebra generated by the operators.

    The center is the commutant of (operators + their commutant); a random
    Hermitian element of it has the minimal central projections as its
    spectral projections (generically, so a couple of retries suffice).
    """
    comm = commutant_basis(dpi_ops, dim=dim, tol=tol)
    if comm.rank == 1:
        return [np.eye(dim, dtype=complex)]
    center = commutant_basis(list(comm.basis) + list(dpi_ops), dim=dim, tol=tol)
    if center.rank == 1:
        return [np.eye(dim, dtype=complex)]
    rng = np.random.default_rng(seed)
    for _ in range(8):
        coeff = rng.normal(size=center.rank)
        X = np.einsum("k,kij->ij", coeff.astype(complex), center.basis)
        X = (X + X.conj().T) / 2.0
        w, v = np.linalg.eigh(X)
        groups = cluster_values(w, CLUSTER_TOL * max(1.0, float(np.abs(w).max())))
        if len(groups) == center.rank:
            return [v[:, grp] @ v[:, grp].conj().T for grp in groups]
    raise NotIrreducible("failed to separate central projections")  # pragma: no cover


def _ground_space(H: np.ndarray, projections: list[np.ndarray], tol: float) -> tuple[float, np.ndarray, list[float]]:
    """Blockwise minimal eigenspaces: the kernel of the minimally shifted H."""
    dim = H.shape[0]
    scale = 1.0 + float(np.linalg.norm(H))
    cols = []
    shifts = []
    for P in projections:
        wp, vp = np.linalg.eigh((P + P.conj().T) / 2.0)
        Q = vp[:, wp > 0.5]  # orthonormal basis of the block range
        Hb = Q.conj().T @ H @ Q
        w, v = np.linalg.eigh((Hb + Hb.conj().T) / 2.0)
        mb = float(w[0])
        shifts.append(mb)
        sel = w <= mb + CLUSTER_TOL * scale
        cols.append(Q @ v[:, sel])
    basis = np.hstack(cols) if cols else np.zeros((dim, 0), dtype=complex)
    # columns from distinct blocks are orthogonal; re-orthonormalize defensively
    q, r = np.linalg.qr(basis)
    keep = np.abs(np.diag(r)) > 1e-10
    return (min(shifts) if shifts else 0.0), q[:, keep], shifts


def _krylov_cyclic(dpi_ops: list[np.ndarray], start: np.ndarray, dim: int,
                   tol: float) -> bool:
    """Does the iterated operator span of the start subspace fill the space?"""
    S = start
    while S.shape[1] < dim:
        cands = np.hstack([op @ S for op in dpi_ops]) if dpi_ops else S[:, :0]
        if cands.shape[1] == 0:
            break
        cands = cands - S @ (S.conj().T @ cands)
        u, s, _ = np.linalg.svd(cands, full_matrices=False)
        keep = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
        if keep == 0:
            break
        S = np.hstack([S, u[:, :keep]])
    return S.shape[1] == dim


def analyze(pi: Representation, d: np.ndarray, tol: float = DEFAULT_TOL,
            strict_method: str = "commutant") -> GroundStateReport:
    """Full minimal-energy analysis of (pi, d).

    Parameters
    ----------
    pi : representation of a matrix Lie algebra.
    d : real coefficient vector of the generating element.
    tol : rank threshold shared by all subspace decisions.
    strict_method : 'commutant' (default) decides strictness by comparing
        the commutant of the compressed fixed-point action with the
        compressed commutant of the whole action, which is equivalent and
        cheap; 'algebra' runs :func:`is_strict` literally.

    The ground-state verdict is cyclicity of the blockwise minimal-energy
    space under the operator algebra of g (at finite dimension the required
    positive shift always exists, blockwise).
    """
    g = pi.algebra
    d = np.asarray(d, dtype=float)
    H = -1j * pi.operator(d, ambient=False)
    w, _ = eig_hermitian(H, 1e-8)
    m_global = float(w[0])
    dpi_ops = list(pi.dpi)
    projections = _central_projections(dpi_ops, pi.dim, tol)
    m, h0, shifts = _ground_space(H, projections, tol)

    g0_rows = centralizer_basis(g, d, tol)
    g0 = subalgebra(g, g0_rows, name=f"fix({g.name})")
    dpi0 = np.einsum("ri,ids->rds", g0_rows.astype(complex), pi.dpi)
    pi0 = Representation(g0, np.einsum("ds,rde,et->rst", h0.conj(), dpi0, h0),
                         ambient_coeffs=g0_rows)

    cyclic = _krylov_cyclic(dpi_ops, h0, pi.dim, tol)
    ground_state = cyclic

    comm_full = commutant_basis(dpi_ops, dim=pi.dim, tol=tol)
    comm_pi0 = commutant_basis(list(pi0.dpi), dim=pi0.dim, tol=tol)
    compressed_comm = compress(h0, comm_full, tol)
    # P0 pi(G)'' P0 is a von Neumann algebra on H0, so it is the commutant
    # of the compressed commutant; no large algebra closure is needed.
    corner = commutant_basis(list(compressed_comm.basis), dim=pi0.dim, tol=tol)
    report = GroundStateReport(
        m=m_global,
        h0_basis=h0,
        pi0=pi0,
        cyclic=cyclic,
        ground_state=ground_state,
        strict=bool(ground_state and comm_pi0.rank == compressed_comm.rank),
        minimal_shift=m,
        commutant_dims=(comm_full.rank, comm_pi0.rank, corner.rank),
        central_shifts=tuple(shifts),
        fixed_algebra=g0,
        tol=tol,
    )
    if strict_method == "algebra":
        report.strict = bool(ground_state and is_strict(pi, report, tol))
    return report


def is_strict(pi: Representation, report: GroundStateReport,
              tol: float = DEFAULT_TOL) -> bool:
    """Literal strictness test by algebra comparison on the ground space.

    Builds the unital algebra generated by the dpi images, compresses it to
    the ground space, and compares its span with the unital algebra
    generated there by the compressed fixed-point action.  Quadratic in the
    full operator-space dimension; :func:`analyze` defaults to the
    equivalent commutant-dimension comparison instead.
    """
    A = algebra_closure(list(pi.dpi), include_identity=True, tol=tol)
    B = compress(report.h0_basis, A, tol)
    ops0 = list(report.pi0.dpi) + [np.eye(report.h0_dim, dtype=complex)]
    C = algebra_closure(ops0, include_identity=True, tol=tol)
    return B.same_span(C, max(tol, 1e-8))


def check_elliptic_implication(pi: Representation, d: np.ndarray,
                               tol: float = DEFAULT_TOL) -> dict:
    """Eigenvector-existence forces ellipticity, for irreducible faithful pi.

    Preconditions: the commutant of the dpi image is scalar (irreducible)
    and dpi is injective on the algebra (discrete-kernel surrogate).  At
    finite dimension eigenvectors always exist, so the implication reduces
    to asserting that the derivation is elliptic.
    """
    g = pi.algebra
    comm = commutant_basis(list(pi.dpi), dim=pi.dim, tol=tol)
    if comm.rank != 1:
        raise NotIrreducible(f"commutant has dimension {comm.rank}")
    flat = pi.dpi.reshape(g.dim, -1)
    _, s, _ = np.linalg.svd(flat)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    if rank != g.dim:
        raise NonInjective("dpi has a kernel on the algebra")
    eigenvector_exists = True  # finite dimension
    elliptic = is_elliptic(g, d)
    return {
        "eigenvector_exists": eigenvector_exists,
        "elliptic": elliptic,
        "implication_holds": (not eigenvector_exists) or elliptic,
    }


def direct_sum_law(reps: Sequence[Representation], d: np.ndarray,
                   tol: float = DEFAULT_TOL) -> bool:
    """Ground-state property of a direct sum vs. its summands.

    Must always return True; a False return signals an implementation bug
    and is surfaced by the property suite.
    """
    reps = list(reps)
    if not reps:
        return True
    whole = analyze(direct_sum(reps), d, tol).ground_state
    parts = all(analyze(r, d, tol).ground_state for r in reps)
    return whole == parts


def spectral_translation_check(pi: Representation, d: np.ndarray, E, F,
                               tol: float = 1e-9) -> bool:
    """dpi of the ad-spectral subspace over E maps H(F) into H(closure(E+F)).

    E and F are finite unions of closed intervals (scalars allowed); the
    spectral subspaces of the Hamiltonian are eigenspace sums.  Verified
    vector by vector with an absolute containment residual.
    """
    g = pi.algebra
    E_iv, F_iv = normalize_intervals(E), normalize_intervals(F)
    EF = intervals_sum(E_iv, F_iv)
    dd = spectral_split(g, np.asarray(d, dtype=float))
    gE_cols = [sp[:, k] for lam, sp in zip(dd.eigenvalues, dd.eigenspaces)
               if intervals_contain(E_iv, float(lam.real)) for k in range(sp.shape[1])]
    H = -1j * pi.operator(d, ambient=False)
    w, v = eig_hermitian(H, 1e-8)
    HF = v[:, [k for k in range(len(w)) if intervals_contain(F_iv, float(w[k]))]]
    HEF = v[:, [k for k in range(len(w)) if intervals_contain(EF, float(w[k]))]]
    for z in gE_cols:
        op = pi.operator(z, ambient=False)
        for c in range(HF.shape[1]):
            u = op @ HF[:, c]
            resid = u - HEF @ (HEF.conj().T @ u)
            if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(u)):
                return False
    return True
