"""Dense complex-matrix algebra: Hermitian matrix functions, tensor products,
and pure/mixed state bookkeeping that every other module builds on."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DimensionError, EigenDecompositionError, ValidationError

HERMITICITY_ATOL = 1e-12
KRON_DIM_LIMIT = 2**20


def as_square_matrix(m: object) -> np.ndarray:
    """Coerce ``m`` to a finite square complex ndarray (read-only copy)."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValidationError("matrix has non-finite entries")
    a.setflags(write=False)
    return a


class HermitianOperator:
    """A Hermitian matrix with a lazily cached eigendecomposition.

    The cache is written once and never mutated; concurrent readers observe
    either no cache or the completed (eigenvalues, eigenvectors) pair.
    """

    __slots__ = ("mat", "dim", "_eig")

    def __init__(self, mat: object) -> None:
        a = as_square_matrix(mat)
        defect = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
        if defect > HERMITICITY_ATOL:
            raise ValidationError(
                f"matrix is not Hermitian (max |A - A^H| = {defect:.3e})"
            )
        self.mat = a
        self.dim = int(a.shape[0])
        self._eig: tuple[np.ndarray, np.ndarray] | None = None

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues in ascending order and matching orthonormal columns."""
        if self._eig is None:
            try:
                evals, evecs = np.linalg.eigh(self.mat)
            except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
                raise EigenDecompositionError(self.dim, str(exc)) from exc
            evals.setflags(write=False)
            evecs.setflags(write=False)
            self._eig = (evals, evecs)
        return self._eig

    def matfunc(self, f: Callable[[float], complex]) -> np.ndarray:
        """Evaluate ``V diag(f(lambda)) V^H`` for a scalar function ``f``."""
        evals, v = self.eigensystem()
        fl = np.array([complex(f(float(x))) for x in evals])
        return (v * fl) @ v.conj().T

    def norm2(self) -> float:
        """Spectral norm, i.e. the largest eigenvalue magnitude."""
        evals, _ = self.eigensystem()
        return float(np.abs(evals).max())

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


def hermitian_matfunc(h: HermitianOperator, f: Callable[[float], complex]) -> np.ndarray:
    """Matrix function of a Hermitian operator via its eigendecomposition."""
    return h.matfunc(f)


def tensor_product(a: object, b: object) -> np.ndarray:
    """Kronecker product with a guard on the resulting dimension."""
    am = a.mat if isinstance(a, HermitianOperator) else np.asarray(a, dtype=complex)
    bm = b.mat if isinstance(b, HermitianOperator) else np.asarray(b, dtype=complex)
    rows = am.shape[0] * bm.shape[0]
    cols = (am.shape[1] if am.ndim > 1 else 1) * (bm.shape[1] if bm.ndim > 1 else 1)
    if rows > KRON_DIM_LIMIT or cols > KRON_DIM_LIMIT:
        raise DimensionError(
            f"tensor product dimension {rows}x{cols} exceeds limit {KRON_DIM_LIMIT}"
        )
    return np.kron(am, bm)


@dataclass(frozen=True)
class QuantumState:
    """System state: pure (1-D amplitude vector) or mixed (2-D density matrix).

    Construction checks shape and finiteness only; `validate_and_normalize`
    enforces the norm/positivity invariants at protocol boundaries.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.data, dtype=complex)
        if a.ndim not in (1, 2):
            raise DimensionError(f"state must be 1-D or 2-D, got ndim={a.ndim}")
        if a.ndim == 2 and a.shape[0] != a.shape[1]:
            raise DimensionError(f"density matrix must be square, got {a.shape}")
        if a.shape[0] == 0:
            raise DimensionError("empty state")
        if not np.isfinite(a).all():
            raise ValidationError("state has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def dim(self) -> int:
        return int(self.data.shape[0])

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def density(self) -> np.ndarray:
        """Density-matrix view (|psi><psi| for pure input)."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


MatrixLike = Union[HermitianOperator, np.ndarray]


def _matrix_of(h: MatrixLike) -> np.ndarray:
    return h.mat if isinstance(h, HermitianOperator) else np.asarray(h, dtype=complex)


def expectation(state: QuantumState, h: MatrixLike) -> float:
    """<H> for a pure or mixed state; asserts the imaginary residue is tiny."""
    m = _matrix_of(h)
    if m.shape[0] != state.dim:
        raise DimensionError(f"operator dim {m.shape[0]} != state dim {state.dim}")
    if state.is_pure:
        val = complex(np.vdot(state.data, m @ state.data))
    else:
        val = complex(np.einsum("ij,ji->", state.data, m))
    if abs(val.imag) > 1e-9:
        raise ValidationError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def validate_and_normalize(state: QuantumState, tol: float = 1e-6) -> QuantumState:
    """Check the state invariants within ``tol`` and return it exactly normalized."""
    if state.is_pure:
        nrm = float(np.linalg.norm(state.data))
        if abs(nrm - 1.0) > tol:
            raise ValidationError(f"pure-state norm {nrm:.6g} deviates from 1 by more than {tol:g}")
        return QuantumState(state.data / nrm)
    d = state.data
    defect = float(np.abs(d - d.conj().T).max())
    if defect > HERMITICITY_ATOL:
        raise ValidationError(f"density matrix not Hermitian (defect {defect:.3e})")
    tr = float(np.trace(d).real)
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"density trace {tr:.6g} deviates from 1 by more than {tol:g}")
    evmin = float(np.linalg.eigvalsh(d).min())
    if evmin < -tol:
        raise ValidationError(f"density matrix not positive semidefinite (min eigenvalue {evmin:.3e})")
    return QuantumState(d / tr)


def basis_vector(dim: int, index: int) -> QuantumState:
    """Computational-basis pure state |index> in a ``dim``-dimensional space."""
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return QuantumState(v)
