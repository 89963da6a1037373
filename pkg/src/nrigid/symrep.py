"""Phase space of stacked 2n x n matrices Z = [Q; P]: canonical one-form
and symplectic form, the maximizing control, both Hamiltonians, and the
flow field of the symmetric representation of the rigid body."""

from __future__ import annotations

import numpy as np

from .body import InertiaSpec, inertia_apply, inertia_inverse
from .errors import DimensionError
from .matcore import _jmat, inner

__all__ = [
    "FULL_RANK_TOL",
    "phase_point",
    "q_block",
    "p_block",
    "min_singular_value",
    "is_full_rank",
    "symplectic_matrix",
    "symplectic_form",
    "one_form",
    "optimal_control",
    "control_hamiltonian",
    "hamiltonian",
    "symrep_rhs",
]

from .matcore import symplectic_matrix  # noqa: F401  (re-export, same structure matrix)

# Membership threshold for the open set of full-rank phase points.
FULL_RANK_TOL = 1e-10


def _split(z):
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[0] != 2 * z.shape[1]:
        raise DimensionError(f"expected a 2n x n matrix, got shape {z.shape}")
    n = z.shape[1]
    return z[:n], z[n:]


def phase_point(q, p) -> np.ndarray:
    """Stack configuration Q on top of costate P into a 2n x n phase point."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape != p.shape:
        raise DimensionError(
            f"blocks must be square and equal-size, got {q.shape} and {p.shape}"
        )
    return np.vstack([q, p])


def q_block(z) -> np.ndarray:
    """Top n x n block (configuration)."""
    return _split(z)[0]


def p_block(z) -> np.ndarray:
    """Bottom n x n block (costate)."""
    return _split(z)[1]


def min_singular_value(z) -> float:
    _split(z)
    return float(np.linalg.svd(np.asarray(z, dtype=float), compute_uv=False)[-1])


def is_full_rank(z, tol=FULL_RANK_TOL) -> bool:
    """Whether z lies in the open set of full-rank phase points."""
    return min_singular_value(z) > tol


def symplectic_form(x, y) -> float:
    """The flat symplectic form tr(X^T J Y) = tr(Xq^T Yp - Xp^T Yq)."""
    xq, xp = _split(x)
    yq, yp = _split(y)
    if xq.shape != yq.shape:
        raise DimensionError("tangent vectors must have equal shapes")
    return float(np.tensordot(xq, yp) - np.tensordot(xp, yq))


def one_form(z, zdot) -> float:
    """Primitive of the symplectic form: -(1/2) tr(Z^T J Zdot).

    Blockwise this is (1/2) tr(P^T Qdot - Q^T Pdot); the symplectic form is
    minus its exterior derivative.
    """
    q, p = _split(z)
    qd, pd = _split(zdot)
    if q.shape != qd.shape:
        raise DimensionError("point and tangent must have equal shapes")
    return 0.5 * float(np.tensordot(p, qd) - np.tensordot(q, pd))


def _check_spec(spec: InertiaSpec, n: int):
    if spec.n != n:
        raise DimensionError(
            f"inertia is {spec.n}-dimensional but the phase point has n = {n}"
        )


def optimal_control(spec: InertiaSpec, z) -> np.ndarray:
    """The control maximizing the control Hamiltonian: I^{-1}(Q^T P - P^T Q)."""
    q, p = _split(z)
    _check_spec(spec, q.shape[0])
    m = q.T @ p
    return inertia_inverse(spec, m - m.T)


def control_hamiltonian(spec: InertiaSpec, z, u) -> float:
    """tr(P^T Q u) - (1/2) <I u, u>, a concave quadratic in the control u."""
    q, p = _split(z)
    u = np.asarray(u, dtype=float)
    if u.shape != q.shape:
        raise DimensionError(f"control has shape {u.shape}, expected {q.shape}")
    _check_spec(spec, q.shape[0])
    return float(np.tensordot(q.T @ p, u)) - 0.5 * inner(inertia_apply(spec, u), u)


def hamiltonian(spec: InertiaSpec, z) -> float:
    """Phase-space energy (1/2) <Z^T J Z, I^{-1}(Z^T J Z)>.

    Invariant under left multiplication by symplectic matrices.
    """
    z = np.asarray(z, dtype=float)
    n = _split(z)[0].shape[0]
    _check_spec(spec, n)
    w = z.T @ (_jmat(n) @ z)
    return 0.5 * inner(w, inertia_inverse(spec, w))


def symrep_rhs(spec: InertiaSpec, z) -> np.ndarray:
    """Flow field of the symmetric representation: Zdot = Z u*(Z).

    Blockwise Qdot = Q om and Pdot = P om with om the maximizing control;
    this is the Hamiltonian vector field of `hamiltonian` for the flat
    symplectic form.
    """
    z = np.asarray(z, dtype=float)
    return z @ optimal_control(spec, z)
