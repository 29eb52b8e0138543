"""Matrix Lie algebras, derivation spectra, root data, spectral subspaces.

An algebra is stored as a real basis of complex matrices together with the
real structure tensor ``c[i,j,k]`` of ``[x_i, x_j] = sum_k c[i,j,k] x_k``.
Elements of the complexification are complex coefficient vectors over the
same basis; the involution ``(x + iy)^* = -x + iy`` becomes
``star(c) = -conj(c)`` in coefficients, and coincides with the matrix
adjoint whenever the basis matrices are anti-Hermitian.

Sign convention, fixed globally: the "positive" part of a triangular split
is the span of eigenspaces of ``-i ad(d)`` with eigenvalue > 0, and roots
of u(n)/su(n) are stored as the integer vectors ``e_i - e_j`` acting on
``-i diag(t_1, ..., t_n)`` coordinates, so all root/weight arithmetic is
integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotDiagonal,
    UnsupportedKind,
)
from .matcore import CLUSTER_TOL, DEFAULT_TOL, cluster_values, vec

Interval = tuple[float, float]


# ---------------------------------------------------------------------------
# algebra container


@dataclass(eq=False)
class MatrixLieAlgebra:
    name: str
    kind: str  # 'u', 'su', 'heis', or 'custom'
    n: int  # matrix size
    basis: np.ndarray  # (dim, n, n) complex, a real basis
    structure: np.ndarray  # (dim, dim, dim) real
    cartan_indices: Optional[tuple[int, ...]] = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Matrix of an element of g (real coeffs) or g_C (complex coeffs)."""
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.dim,):
            raise DimensionMismatch(f"coefficient vector must have length {self.dim}")
        return np.einsum("i,ijk->jk", coeffs.astype(complex), self.basis)

    def coeffs_of(self, mat: np.ndarray, tol: float = 1e-8) -> np.ndarray:
        """Coefficients of a matrix lying in the (complex) span of the basis."""
        flat = self.basis.reshape(self.dim, -1).T  # (n*n, dim)
        sol, *_ = np.linalg.lstsq(flat, vec(mat), rcond=None)
        resid = np.linalg.norm(flat @ sol - vec(mat))
        if resid > tol * max(1.0, np.linalg.norm(mat)):
            raise ValueError("matrix does not lie in the span of the algebra basis")
        return sol

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """[u, v] in coefficients (complex-bilinear over the real structure)."""
        return np.einsum("i,j,ijk->k", np.asarray(u, complex), np.asarray(v, complex), self.structure)

    def star(self, z: np.ndarray) -> np.ndarray:
        return -np.conj(np.asarray(z, complex))

    def ad(self, d: np.ndarray) -> np.ndarray:
        """Matrix of ad(d) on coefficient vectors; real for real d."""
        d = np.asarray(d)
        out = np.einsum("i,ijk->kj", d.astype(complex), self.structure)
        return out.real if np.isrealobj(d) or np.allclose(out.imag, 0) else out

    def is_compact_basis(self, tol: float = 1e-10) -> bool:
        return all(np.linalg.norm(b + b.conj().T) <= tol * max(1, np.linalg.norm(b)) for b in self.basis)


def structure_constants(basis: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Structure tensor from a matrix basis; raises if brackets leave the span."""
    m = basis.shape[0]
    flat = basis.reshape(m, -1).T
    pinv = np.linalg.pinv(flat)
    c = np.zeros((m, m, m))
    for i in range(m):
        for j in range(i, m):
            br = basis[i] @ basis[j] - basis[j] @ basis[i]
            sol = pinv @ vec(br)
            resid = np.linalg.norm(flat @ sol - vec(br))
            if resid > tol * max(1.0, np.linalg.norm(br)):
                raise ValueError(f"bracket [x_{i}, x_{j}] leaves the span (residual {resid:.2e})")
            if np.linalg.norm(sol.imag) > 1e-8:
                raise ValueError("structure constants are not real; basis is not a real basis")
            c[i, j] = sol.real
            c[j, i] = -sol.real
    return c


def bracket_closure_residual(g: MatrixLieAlgebra) -> float:
    """Max deviation between matrix brackets and the structure tensor."""
    worst = 0.0
    for i in range(g.dim):
        for j in range(g.dim):
            br = g.basis[i] @ g.basis[j] - g.basis[j] @ g.basis[i]
            rec = np.einsum("k,kab->ab", g.structure[i, j].astype(complex), g.basis)
            worst = max(worst, float(np.linalg.norm(br - rec)))
    return worst


def jacobi_residual(g: MatrixLieAlgebra) -> float:
    c = g.structure
    # sum over cyclic permutations of c[i,j,m] c[m,k,l]
    t = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = t + np.einsum("jkm,mil->ijkl", c, c) + np.einsum("kim,mjl->ijkl", c, c)
    return float(np.abs(cyc).max())


# ---------------------------------------------------------------------------
# standard algebras


def _eij(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def _u_basis(n: int) -> np.ndarray:
    mats = [1j * _eij(n, k, k) for k in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_eij(n, i, j) - _eij(n, j, i))
            mats.append(1j * (_eij(n, i, j) + _eij(n, j, i)))
    return np.stack(mats)


def _su_basis(n: int) -> np.ndarray:
    mats = [1j * (_eij(n, k, k) - _eij(n, k + 1, k + 1)) for k in range(n - 1)]
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_eij(n, i, j) - _eij(n, j, i))
            mats.append(1j * (_eij(n, i, j) + _eij(n, j, i)))
    return np.stack(mats)


def _heis_basis(two_k: int) -> np.ndarray:
    # (k+2)-dimensional strictly upper-triangular realization:
    # basis order [Z, X_1..X_k, Y_1..Y_k] with [X_i, Y_j] = delta_ij Z.
    k = two_k // 2
    n = k + 2
    mats = [_eij(n, 0, n - 1)]
    mats += [_eij(n, 0, 1 + i) for i in range(k)]
    mats += [_eij(n, 1 + i, n - 1) for i in range(k)]
    return np.stack(mats)


def build_algebra(kind: str, n: int, tol: float = 1e-10) -> MatrixLieAlgebra:
    """Construct u(n), su(n) or heis(2k) with verified structure constants.

    For ``heis`` the argument is the symplectic dimension 2k (even, >= 2)
    and the resulting algebra has dimension 2k + 1 with a one-dimensional
    center spanned by the first basis element.
    """
    kind = kind.lower()
    if kind == "u":
        if n < 1:
            raise UnsupportedKind("u(n) requires n >= 1")
        basis, size, cartan = _u_basis(n), n, tuple(range(n))
    elif kind == "su":
        if n < 2:
            raise UnsupportedKind("su(n) requires n >= 2")
        basis, size, cartan = _su_basis(n), n, tuple(range(n - 1))
    elif kind == "heis":
        if n < 2 or n % 2:
            raise UnsupportedKind("heis takes the symplectic dimension 2k (even, >= 2)")
        basis, size, cartan = _heis_basis(n), n // 2 + 2, None
    else:
        raise UnsupportedKind(f"unknown algebra kind {kind!r}")
    g = MatrixLieAlgebra(f"{kind}({n})", kind, size, basis, structure_constants(basis, tol), cartan)
    if max(bracket_closure_residual(g), jacobi_residual(g)) > tol * 10:
        raise ValueError("structure constant verification failed")  # pragma: no cover
    return g


def subalgebra(g: MatrixLieAlgebra, coeff_rows: np.ndarray, name: str = "sub") -> MatrixLieAlgebra:
    """Subalgebra spanned by rows of real coefficient vectors over g's basis."""
    coeff_rows = np.asarray(coeff_rows, dtype=float)
    mats = np.einsum("ri,ijk->rjk", coeff_rows.astype(complex), g.basis)
    return MatrixLieAlgebra(name, "custom", g.n, mats, structure_constants(mats), None)


def diagonal_element(g: MatrixLieAlgebra, entries: Sequence[float]) -> np.ndarray:
    """Coefficients of i*diag(entries) in u(n) or su(n) (traceless for su)."""
    entries = np.asarray(entries, dtype=float)
    if g.kind == "u":
        if entries.shape != (g.n,):
            raise DimensionMismatch(f"expected {g.n} diagonal entries")
        out = np.zeros(g.dim)
        out[: g.n] = entries
        return out
    if g.kind == "su":
        if entries.shape != (g.n,):
            raise DimensionMismatch(f"expected {g.n} diagonal entries")
        if abs(entries.sum()) > 1e-12:
            raise ValueError("su(n) diagonal entries must sum to zero")
        out = np.zeros(g.dim)
        out[: g.n - 1] = np.cumsum(entries)[:-1]
        return out
    raise UnsupportedKind("diagonal shorthand only applies to u(n)/su(n)")


# ---------------------------------------------------------------------------
# derivation spectra


@dataclass
class DerivationData:
    """Eigendata of ``-i D`` for a derivation D of g, on the complexification.

    ``element`` is the coefficient vector when D = ad(d) is inner, None for
    an outer derivation passed as a matrix.  ``eigenvalues[i]`` pairs with
    ``eigenspaces[i]`` (columns = coefficient vectors of g_C); for
    non-diagonalizable D the spaces are generalized eigenspaces and
    ``diagonalizable`` is False.
    """

    algebra: MatrixLieAlgebra
    element: Optional[np.ndarray]
    derivation: np.ndarray  # (dim, dim) real matrix of D on coefficients
    eigenvalues: np.ndarray  # complex, sorted by (real, imag)
    eigenspaces: list[np.ndarray] = field(default_factory=list)
    diagonalizable: bool = True

    def spaces(self, predicate) -> list[tuple[complex, np.ndarray]]:
        return [(lam, sp) for lam, sp in zip(self.eigenvalues, self.eigenspaces) if predicate(lam)]

    def positive(self, tol: float = CLUSTER_TOL):
        return self.spaces(lambda lam: lam.real > tol)

    def zero_space(self, tol: float = CLUSTER_TOL) -> np.ndarray:
        spaces = [sp for lam, sp in self.spaces(lambda lam: abs(lam) <= tol)]
        if not spaces:
            return np.zeros((self.algebra.dim, 0), dtype=complex)
        return np.hstack(spaces)


def _derivation_matrix(g: MatrixLieAlgebra, d) -> tuple[np.ndarray, Optional[np.ndarray]]:
    d = np.asarray(d, dtype=float) if np.isrealobj(np.asarray(d)) else np.asarray(d)
    if d.ndim == 1:
        if d.shape != (g.dim,):
            raise DimensionMismatch(f"element coefficient vector must have length {g.dim}")
        return g.ad(d), d
    if d.shape != (g.dim, g.dim):
        raise DimensionMismatch("derivation matrix must be (dim, dim)")
    return np.asarray(d, dtype=float), None


def spectral_split(g: MatrixLieAlgebra, d, tol: float = DEFAULT_TOL,
                   cluster_tol: float = CLUSTER_TOL) -> DerivationData:
    """Full eigendata of ``-i D`` on g_C, where D = ad(d) or an explicit matrix.

    Eigenvalues within ``cluster_tol`` are merged into one eigenspace;
    eigenspaces are recomputed as SVD null spaces so they are orthonormal
    and correct even for clustered spectra.  If D is not diagonalizable the
    spaces are generalized eigenspaces (null((A - lam)^dim)) and the flag
    is set accordingly.
    """
    D, element = _derivation_matrix(g, d)
    m = g.dim
    A = -1j * D.astype(complex)
    w = np.linalg.eigvals(A)
    scale = max(1.0, float(np.abs(A).max()))
    clusters = cluster_values(w, cluster_tol * scale)
    eigvals, spaces = [], []
    geo_total = 0
    for grp in clusters:
        lam = complex(np.mean(w[grp]))
        ns = _null_space_cols(A - lam * np.eye(m), tol * scale)
        eigvals.append(lam)
        spaces.append(ns)
        geo_total += ns.shape[1]
    diag = geo_total == m
    if not diag:
        spaces = []
        for lam in eigvals:
            powered = np.linalg.matrix_power(A - lam * np.eye(m), m)
            spaces.append(_null_space_cols(powered, tol * max(1.0, float(np.abs(powered).max()))))
    if diag:
        for lam, sp in zip(eigvals, spaces):
            resid = np.linalg.norm(A @ sp - lam * sp)
            if resid > 1e-8 * scale * max(1, sp.shape[1]):
                raise ValueError(f"eigenvector residual {resid:.2e} at {lam}")  # pragma: no cover
    order = sorted(range(len(eigvals)), key=lambda i: (eigvals[i].real, eigvals[i].imag))
    return DerivationData(
        algebra=g,
        element=element,
        derivation=D,
        eigenvalues=np.array([eigvals[i] for i in order]),
        eigenspaces=[spaces[i] for i in order],
        diagonalizable=diag,
    )


def _null_space_cols(mat: np.ndarray, thr: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > max(thr, s[0] * 1e-12 if s.size else 0.0)))
    return vh[rank:].conj().T


def is_elliptic(g: MatrixLieAlgebra, d, tol: float = CLUSTER_TOL) -> bool:
    """True iff the derivation is diagonalizable with purely imaginary spectrum."""
    dd = spectral_split(g, d)
    if not dd.diagonalizable:
        return False
    return bool(np.max(np.abs(dd.eigenvalues.imag), initial=0.0) <= tol)


def splitting_condition(g: MatrixLieAlgebra, d, tol: float = DEFAULT_TOL) -> bool:
    """True iff ker(D^2) = ker(D): the generalized zero eigenspace collapses.

    This is the finite-dimensional form of the regularity condition needed
    for the fixed-point projection to exist; it holds automatically for
    elliptic derivations and fails for nilpotent ones.
    """
    D, _ = _derivation_matrix(g, d)
    scale = max(1.0, float(np.abs(D).max()))
    k1 = _null_space_cols(D, tol * scale).shape[1]
    k2 = _null_space_cols(D @ D, tol * scale * scale).shape[1]
    return k1 == k2


def centralizer_basis(g: MatrixLieAlgebra, d, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Real orthonormal coefficient rows spanning ker(ad d) (or ker of a matrix D)."""
    D, _ = _derivation_matrix(g, d)
    cols = _null_space_cols(D, tol * max(1.0, float(np.abs(D).max())))
    rows = cols.T
    if np.linalg.norm(rows.imag) > 1e-10:
        raise ValueError("kernel of a real derivation should have a real basis")
    return rows.real


# ---------------------------------------------------------------------------
# root data for u(n) / su(n)


@dataclass
class RootDatum:
    """Roots e_i - e_j of u(n)/su(n) with the d-dependent positive split.

    ``roots`` are integer length-n vectors; ``root_vectors`` are complex
    coefficient vectors of E_ij over the algebra basis; ``coroots`` are real
    coefficient vectors of the element i(E_ii - E_jj), so the Hermitian
    coroot operator of a representation is ``-i dpi(coroot)``.
    ``delta_plus`` is a positive system containing ``delta_plus_plus``,
    completed on the d-null roots by the lexicographic (i, j) tie-break.
    """

    algebra: MatrixLieAlgebra
    d: np.ndarray
    dvec: np.ndarray  # real diagonal of -i * matrix(d)
    pairs: list[tuple[int, int]]
    roots: np.ndarray  # (R, n) int
    root_vectors: np.ndarray  # (R, dim) complex
    coroots: np.ndarray  # (R, dim) float
    delta_plus_plus: tuple[int, ...]
    delta_zero: tuple[int, ...]
    delta_plus: tuple[int, ...]

    def root_value_on_d(self, idx: int) -> float:
        i, j = self.pairs[idx]
        return float(self.dvec[i] - self.dvec[j])


def _root_vector_coeffs(g: MatrixLieAlgebra, i: int, j: int) -> np.ndarray:
    """E_ij (i != j) as a complex coefficient vector over the u/su basis."""
    n = g.n
    ncart = n if g.kind == "u" else n - 1
    a, b = min(i, j), max(i, j)
    # off-diagonal pairs are ordered lexicographically after the Cartan block
    pos = ncart + 2 * sum(n - 1 - r for r in range(a)) + 2 * (b - a - 1)
    out = np.zeros(g.dim, dtype=complex)
    if i < j:
        out[pos] = 0.5
        out[pos + 1] = -0.5j
    else:
        out[pos] = -0.5
        out[pos + 1] = -0.5j
    return out


def _coroot_coeffs(g: MatrixLieAlgebra, i: int, j: int) -> np.ndarray:
    """The element i(E_ii - E_jj) over the u/su basis (real coefficients)."""
    out = np.zeros(g.dim)
    if g.kind == "u":
        out[i] = 1.0
        out[j] = -1.0
        return out
    lo, hi = min(i, j), max(i, j)
    sign = 1.0 if i < j else -1.0
    out[lo:hi] = sign
    return out


def root_datum(g: MatrixLieAlgebra, d, tol: float = 1e-8) -> RootDatum:
    if g.kind not in ("u", "su"):
        raise UnsupportedKind("root data implemented for u(n)/su(n) only")
    d = np.asarray(d, dtype=float)
    mat = g.matrix(d)
    off = mat - np.diag(np.diag(mat))
    if np.linalg.norm(off) > tol * max(1.0, np.linalg.norm(mat)):
        raise NotDiagonal("d must lie in the diagonal Cartan subalgebra")
    dvec = np.diag(-1j * mat).real
    n = g.n
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    roots = np.zeros((len(pairs), n), dtype=int)
    rvecs = np.zeros((len(pairs), g.dim), dtype=complex)
    corts = np.zeros((len(pairs), g.dim))
    for idx, (i, j) in enumerate(pairs):
        roots[idx, i], roots[idx, j] = 1, -1
        rvecs[idx] = _root_vector_coeffs(g, i, j)
        corts[idx] = _coroot_coeffs(g, i, j)
    vals = np.array([dvec[i] - dvec[j] for (i, j) in pairs])
    dpp = tuple(idx for idx in range(len(pairs)) if vals[idx] > tol)
    dzero = tuple(idx for idx in range(len(pairs)) if abs(vals[idx]) <= tol)
    dplus = dpp + tuple(idx for idx in dzero if pairs[idx][0] < pairs[idx][1])
    return RootDatum(g, d, dvec, pairs, roots, rvecs, corts, dpp, dzero, dplus)


# ---------------------------------------------------------------------------
# spectral subspaces for interval unions


def normalize_intervals(E) -> list[Interval]:
    """Accepts a scalar, a (lo, hi) pair, or a list of pairs; +-inf allowed."""
    if np.isscalar(E):
        return [(float(E), float(E))]
    E = list(E)
    if len(E) == 2 and all(np.isscalar(x) for x in E):
        lo, hi = float(E[0]), float(E[1])
        return [(lo, hi)]
    out = []
    for item in E:
        lo, hi = item
        out.append((float(lo), float(hi)))
    return out


def intervals_contain(E: list[Interval], x: float, tol: float = CLUSTER_TOL) -> bool:
    return any(lo - tol <= x <= hi + tol for lo, hi in E)


def intervals_sum(E: list[Interval], F: list[Interval]) -> list[Interval]:
    return [(le + lf, he + hf) for (le, he) in E for (lf, hf) in F]


def spectral_subspace(A, E, tol: float = CLUSTER_TOL) -> np.ndarray:
    """Span of eigenvectors with eigenvalue in the closed set E.

    ``A`` is a Hermitian matrix or a DerivationData; ``E`` is a finite union
    of closed intervals (scalars allowed).  The empty set yields the zero
    subspace.  Returns an orthonormal column basis.
    """
    intervals = normalize_intervals(E) if E is not None else []
    if isinstance(A, DerivationData):
        spaces = [sp for lam, sp in zip(A.eigenvalues, A.eigenspaces)
                  if intervals_contain(intervals, lam.real, tol)]
        dim = A.algebra.dim
        return np.hstack(spaces) if spaces else np.zeros((dim, 0), dtype=complex)
    from .matcore import eig_hermitian

    w, v = eig_hermitian(np.asarray(A, dtype=complex), 1e-8)
    keep = [k for k in range(len(w)) if intervals_contain(intervals, float(w[k]), tol)]
    if not keep:
        return np.zeros((v.shape[0], 0), dtype=complex)
    return v[:, keep]
