"""The rigid body on so(n): inertia operator, reduced energy, Euler and
Euler-Poisson vector fields, and the three-dimensional hat/vee dictionary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .matcore import commutator, inner

__all__ = [
    "InertiaSpec",
    "BodyState",
    "inertia_apply",
    "inertia_inverse",
    "reduced_hamiltonian",
    "euler_rhs",
    "euler_poisson_rhs",
    "hat",
    "vee",
]


@dataclass(frozen=True, eq=False)
class InertiaSpec:
    """Diagonal mass-distribution parameters lambda_1..lambda_n.

    The inertia operator acts entrywise on skew matrices,
    (I om)_ij = (lambda_i + lambda_j) om_ij, so every pairwise sum with
    i != j must be positive; this is checked eagerly because the inverse
    divides by those sums.
    """

    lam: np.ndarray

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if lam.ndim != 1 or lam.size < 2:
            raise DimensionError("lambda must be a vector of length >= 2")
        if not np.isfinite(lam).all():
            raise ValueError("lambda entries must be finite")
        sums = lam[:, None] + lam[None, :]
        for i in range(lam.size):
            for j in range(i + 1, lam.size):
                if sums[i, j] <= 1e-12:
                    raise ValueError(
                        f"lambda[{i}] + lambda[{j}] = {sums[i, j]:.6g} "
                        "must be positive"
                    )
        # Diagonal set to 1 so entrywise division is safe; skew matrices
        # are zero there anyway.
        np.fill_diagonal(sums, 1.0)
        sums.flags.writeable = False
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "_pair_sums", sums)

    @property
    def n(self) -> int:
        return self.lam.size


def _check_size(spec: InertiaSpec, m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (spec.n, spec.n):
        raise DimensionError(
            f"expected a {spec.n}x{spec.n} matrix, got shape {m.shape}"
        )
    return m


def inertia_apply(spec: InertiaSpec, omega) -> np.ndarray:
    """Body momentum from body velocity: Lambda om + om Lambda, entrywise (lambda_i + lambda_j) om_ij."""
    omega = _check_size(spec, omega)
    return spec._pair_sums * omega


def inertia_inverse(spec: InertiaSpec, pi) -> np.ndarray:
    """Body velocity from body momentum: entrywise pi_ij / (lambda_i + lambda_j)."""
    pi = _check_size(spec, pi)
    return pi / spec._pair_sums


def reduced_hamiltonian(spec: InertiaSpec, pi) -> float:
    """Kinetic energy (1/2) <pi, I^{-1} pi> of a body momentum."""
    pi = _check_size(spec, pi)
    return 0.5 * inner(pi, inertia_inverse(spec, pi))


def euler_rhs(spec: InertiaSpec, pi) -> np.ndarray:
    """Right-hand side [pi, I^{-1} pi] of the Euler equation on so(n)."""
    pi = _check_size(spec, pi)
    return commutator(pi, inertia_inverse(spec, pi))


@dataclass(frozen=True, eq=False)
class BodyState:
    """Attitude Q together with body momentum pi.

    Shapes and finiteness are enforced; orthogonality of Q is an audited
    quantity of the integrators, never repaired silently.
    """

    q: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        pi = np.asarray(self.pi, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape != pi.shape:
            raise DimensionError(
                f"attitude and momentum must be square and equal-size, "
                f"got {q.shape} and {pi.shape}"
            )
        if not (np.isfinite(q).all() and np.isfinite(pi).all()):
            raise ValueError("body state entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "pi", pi)

    @property
    def n(self) -> int:
        return self.q.shape[0]


def euler_poisson_rhs(spec: InertiaSpec, state: BodyState):
    """Right-hand side (Q om, [pi, om]) with om = I^{-1} pi."""
    omega = inertia_inverse(spec, state.pi)
    return state.q @ omega, commutator(state.pi, omega)


def hat(v) -> np.ndarray:
    """3-vector to skew matrix, with hat(e3)[1, 0] = +1.

    Satisfies hat(u x v) = [hat(u), hat(v)] and <hat(u), hat(v)> = u . v.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != 3:
        raise DimensionError("hat expects a 3-vector")
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def vee(m) -> np.ndarray:
    """Inverse of hat: skew 3x3 matrix to 3-vector."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise DimensionError("vee is only defined for 3x3 matrices")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])
