"""Dense complex linear algebra for small fixed dimensions.

Everything in this package runs on plain ``numpy.ndarray`` matrices with
``complex128`` entries; the helpers here cover the handful of factorizations
the rest of the library needs (Hermitian eigendecomposition, PSD square
root, 2x2 SVD, Pauli-basis expansion) together with tolerance-aware
comparisons, including equality up to a global phase.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPSD

EIG_CLAMP_TOL = 1e-10

# Single-qubit Pauli matrices, in the conventional (I, X, Y, Z) order.
PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return np.linalg.norm(m - adjoint(m)) <= tol


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    d = m.shape[0]
    return np.linalg.norm(adjoint(m) @ m - np.eye(d)) <= tol


def herm_eig(m: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and unitary ``v``
    such that ``m = v @ diag(w) @ v.conj().T``.

    Raises
    ------
    NotHermitian
        If ``|m - m^dag|_F > tol``.
    """
    m = np.asarray(m, dtype=np.complex128)
    dev = np.linalg.norm(m - adjoint(m))
    if dev > tol:
        raise NotHermitian(f"deviation from Hermiticity {dev:.3e} > tol {tol:.1e}")
    w, v = np.linalg.eigh((m + adjoint(m)) / 2)
    return w, v


def psd_sqrt(m: np.ndarray, tol: float = EIG_CLAMP_TOL) -> np.ndarray:
    """Positive-semidefinite square root.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything below
    ``-tol`` raises ``NotPSD``.
    """
    w, v = herm_eig(m, tol=max(tol, 1e-9))
    if w[0] < -tol:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol:.1e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ adjoint(v)


def svd2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition of a 2x2 matrix.

    Returns ``(u, s, vdag)`` with ``s`` descending and ``m = u @ diag(s) @ vdag``.
    Degenerate singular values (equal within 1e-10) are resolved by the
    polar-like choice ``vdag = I``, ``u = m / s``, so that (near-)unitary
    inputs such as the identity factor as themselves.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DimensionMismatch(f"svd2 expects a 2x2 matrix, got {m.shape}")
    u, s, vdag = np.linalg.svd(m)
    if s[0] - s[1] < 1e-10 and s[0] > 1e-12:
        return m / s[0], np.array([s[0], s[0]]), np.eye(2, dtype=np.complex128)
    if s[0] < 1e-12:  # zero matrix
        return np.eye(2, dtype=np.complex128), s, np.eye(2, dtype=np.complex128)
    return u, s, vdag


def pauli_basis(n_qubits: int = 1) -> list[np.ndarray]:
    """Ordered Pauli operator basis for ``n_qubits``.

    For one qubit the order is (I, X, Y, Z); for more, all tensor products
    in lexicographic order. Normalization: Tr(E_j^dag E_i) = d * delta_ij.
    """
    single = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]
    basis = single
    for _ in range(n_qubits - 1):
        basis = [np.kron(a, b) for a in basis for b in single]
    return basis


def pauli_expand(m: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Expansion coefficients of ``m`` in a Pauli basis.

    ``alpha_i = Tr(E_i^dag m) / d`` so that ``sum_i alpha_i E_i = m``.
    """
    m = np.asarray(m, dtype=np.complex128)
    d = basis[0].shape[0]
    if m.shape != (d, d):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match basis dim {d}")
    return np.array([np.trace(adjoint(e) @ m) / d for e in basis])


def pauli_synthesize(coeffs: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Inverse of :func:`pauli_expand`."""
    if len(coeffs) != len(basis):
        raise DimensionMismatch(
            f"{len(coeffs)} coefficients for a basis of {len(basis)} elements"
        )
    out = np.zeros_like(basis[0])
    for a, e in zip(coeffs, basis):
        out = out + a * e
    return out


def phase_align(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``exp(i theta) * b`` with theta chosen to minimize |a - e^{i theta} b|_F.

    Closed form: theta = arg Tr(b^dag a).
    """
    t = np.trace(adjoint(b) @ a)
    if abs(t) < 1e-300:
        return np.asarray(b, dtype=np.complex128)
    return (t / abs(t)) * b


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance between ``a`` and ``b`` minimized over a global phase."""
    return float(np.linalg.norm(a - phase_align(a, b)))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    return phase_distance(a, b) < tol
