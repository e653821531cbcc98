"""Second-order Trotter construction of the joint cooling unitary, its
gamma decomposition, the primitive system-ancilla couplings, and the
CNOT/analog-block circuit identities that verify the gate decompositions.

Wire convention everywhere: system factors first, ancilla qubit last."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce
from typing import Union

import numpy as np

from .errors import DimensionError, TruncationLeakageError, ValidationError
from .models import I2, PAULI_X, PAULI_Y, PAULI_Z, SumHamiltonian
from .operators import HermitianOperator

_PX_PLUS = (I2 + PAULI_X) / 2  # ancilla sigma-x eigenprojectors
_PX_MINUS = (I2 - PAULI_X) / 2

UNITARITY_ATOL = 1e-10


@dataclass(frozen=True)
class JointUnitary:
    """Unitary on system (x) ancilla, ancilla factor ordered last."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got {a.shape}")
        if a.shape[0] % 2 != 0:
            raise DimensionError("joint dimension must be even (system x ancilla)")
        defect = float(np.abs(a @ a.conj().T - np.eye(a.shape[0])).max())
        if defect > UNITARITY_ATOL:
            raise ValidationError(f"matrix is not unitary (defect {defect:.3e})")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def system_dim(self) -> int:
        return self.dim // 2


# ---------------------------------------------------------------------------
# branch construction of W_gamma(tau) = exp(-i (H + gamma) sigma_x tau)


def _term_exp(term: HermitianOperator, angle: float) -> np.ndarray:
    """exp(-i * angle * term) through the term's cached eigendecomposition."""
    return term.matfunc(lambda lam: cmath.exp(-1j * lam * angle))


def branch_unitaries(
    h: SumHamiltonian, tau: float, r: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """System-space branch unitaries (U_plus, U_minus) of W_gamma(tau).

    U_pm = exp(∓ i (H + gamma) tau) act on the ancilla sigma-x = ±1 branches.
    With ``r`` set, each branch is the r-fold symmetric (second-order)
    Trotter product over the ordered terms, times the exact gamma phase.
    """
    if r is None:
        evals, v = h.total.eigensystem()
        up = (v * np.exp(-1j * (evals + h.gamma) * tau)) @ v.conj().T
        um = (v * np.exp(+1j * (evals + h.gamma) * tau)) @ v.conj().T
        return up, um
    if r < 1:
        raise ValidationError(f"Trotter steps r must be >= 1, got {r}")
    dt = tau / r
    out = []
    for sign in (+1.0, -1.0):
        terms = [term for _, term in h.terms]
        if len(terms) == 1:
            slab = _term_exp(terms[0], sign * dt)
        else:
            halves = [_term_exp(t, sign * dt / 2) for t in terms[:-1]]
            middle = _term_exp(terms[-1], sign * dt)
            left = reduce(np.matmul, halves)
            right = reduce(np.matmul, halves[::-1])
            slab = left @ middle @ right
        u = np.linalg.matrix_power(slab, r) * cmath.exp(-1j * sign * h.gamma * tau)
        out.append(u)
    return out[0], out[1]


def kraus_blocks(u_plus: np.ndarray, u_minus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ancilla |0> -> |0>/|1> blocks of the joint unitary: K0, K1."""
    return (u_plus + u_minus) / 2, (u_plus - u_minus) / 2


def _assemble(u_plus: np.ndarray, u_minus: np.ndarray) -> np.ndarray:
    return np.kron(u_plus, _PX_PLUS) + np.kron(u_minus, _PX_MINUS)


def exact_W(h: SumHamiltonian, tau: float) -> JointUnitary:
    """Exact W_gamma(tau) on system (x) ancilla."""
    return JointUnitary(_assemble(*branch_unitaries(h, tau, None)))


def trotter_W(h: SumHamiltonian, tau: float, r: int) -> JointUnitary:
    """Second-order Trotterized W_gamma(tau); unitary by construction."""
    return JointUnitary(_assemble(*branch_unitaries(h, tau, r)))


def trotter_error(h: SumHamiltonian, tau: float, r: int) -> float:
    """Operator-norm distance between exact and Trotterized W_gamma(tau)."""
    return float(
        np.linalg.norm(exact_W(h, tau).matrix - trotter_W(h, tau, r).matrix, 2)
    )


def ancilla_x_rotation(system_dim: int, angle: float) -> np.ndarray:
    """R_x(angle) on the ancilla, identity on the system: exp(-i angle X/2)."""
    rx = math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * PAULI_X
    return np.kron(np.eye(system_dim), rx)


def wgamma_decompose(h: SumHamiltonian, tau: float) -> tuple[JointUnitary, float]:
    """Split W_gamma(tau) into the gamma-free W(tau) and an ancilla x-rotation.

    Returns (W, angle) with W_gamma(tau) = W(tau) @ R_x^A(angle), angle =
    2 * gamma * tau. The parts commute (both diagonal in ancilla sigma-x).
    """
    w0 = exact_W(h.with_gamma(0.0), tau)
    return w0, 2.0 * h.gamma * tau


# ---------------------------------------------------------------------------
# register layout and primitive couplings


@dataclass(frozen=True)
class RegisterLayout:
    """Wire order: system qubits 0..n-1, optional boson mode, ancilla last.

    Qubit index n (== system_qubits) addresses the ancilla."""

    system_qubits: int
    boson_cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.system_qubits < 0:
            raise ValidationError("system_qubits must be >= 0")
        if self.boson_cutoff is not None and self.boson_cutoff < 2:
            raise ValidationError(f"boson cutoff must be >= 2, got {self.boson_cutoff}")

    @property
    def factor_dims(self) -> tuple[int, ...]:
        boson = (self.boson_cutoff,) if self.boson_cutoff is not None else ()
        return (2,) * self.system_qubits + boson + (2,)

    @property
    def system_dims(self) -> tuple[int, ...]:
        return self.factor_dims[:-1]

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims))

    def qubit_factor(self, qubit: int) -> int:
        """Tensor-factor position of a qubit index (ancilla = system_qubits)."""
        if not 0 <= qubit <= self.system_qubits:
            raise DimensionError(
                f"qubit {qubit} outside layout (ancilla index is {self.system_qubits})"
            )
        if qubit == self.system_qubits:
            return len(self.factor_dims) - 1
        return qubit

    @property
    def boson_factor(self) -> int:
        if self.boson_cutoff is None:
            raise DimensionError("layout has no bosonic mode")
        return self.system_qubits


def _lift(dims: tuple[int, ...], ops: dict[int, np.ndarray]) -> np.ndarray:
    mats = [ops.get(i, np.eye(d)) for i, d in enumerate(dims)]
    return reduce(np.kron, mats) if mats else np.eye(1)


def _mode_x(cutoff: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1)
    return a + a.conj().T


@dataclass(frozen=True)
class ZX:
    """Coupling sigma_z(qubit) * sigma_x(ancilla)."""

    qubit: int


@dataclass(frozen=True)
class NumberX:
    """Coupling n(mode) * sigma_x(ancilla)."""


@dataclass(frozen=True)
class XXX:
    """Coupling sigma_x(q1) sigma_x(q2) * sigma_x(ancilla)."""

    q1: int
    q2: int


@dataclass(frozen=True)
class DipoleXX:
    """Coupling (a + a^dag) sigma_x(qubit) * sigma_x(ancilla)."""

    qubit: int


PrimitiveKind = Union[ZX, NumberX, XXX, DipoleXX]


def _system_coupling(kind: PrimitiveKind, layout: RegisterLayout) -> np.ndarray:
    dims = layout.system_dims
    if isinstance(kind, ZX):
        return _lift(dims, {layout.qubit_factor(kind.qubit): PAULI_Z})
    if isinstance(kind, NumberX):
        return _lift(
            dims, {layout.boson_factor: np.diag(np.arange(layout.boson_cutoff, dtype=float))}
        )
    if isinstance(kind, XXX):
        if kind.q1 == kind.q2:
            raise DimensionError("XXX coupling needs two distinct qubits")
        return _lift(
            dims,
            {layout.qubit_factor(kind.q1): PAULI_X, layout.qubit_factor(kind.q2): PAULI_X},
        )
    if isinstance(kind, DipoleXX):
        return _lift(
            dims,
            {
                layout.boson_factor: _mode_x(layout.boson_cutoff),
                layout.qubit_factor(kind.qubit): PAULI_X,
            },
        )
    raise ValidationError(f"unknown primitive kind {type(kind).__name__}")


def primitive_unitary(kind: PrimitiveKind, phi: float, layout: RegisterLayout) -> JointUnitary:
    """exp(-i (phi/2) O sigma_x^A) for the named system coupling O."""
    if not np.isfinite(phi):
        raise ValidationError(f"phi must be finite, got {phi!r}")
    coupling = HermitianOperator(_system_coupling(kind, layout))
    u_plus = coupling.matfunc(lambda lam: cmath.exp(-1j * phi / 2 * lam))
    u_minus = coupling.matfunc(lambda lam: cmath.exp(+1j * phi / 2 * lam))
    return JointUnitary(_assemble(u_plus, u_minus))


# ---------------------------------------------------------------------------
# gate-level circuits


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


@dataclass(frozen=True)
class SingleQubitRotation:
    """exp(-i angle sigma_axis / 2) on one qubit; axis in {'x','y','z'}."""

    axis: str
    angle: float
    qubit: int


@dataclass(frozen=True)
class MS:
    """Molmer-Sorensen style two-qubit rotation exp(-i angle XX / 2)."""

    angle: float
    qubit_a: int
    qubit_b: int


@dataclass(frozen=True)
class AnalogBlockUR:
    """U_R(phi) = exp(-i (phi/2) (a + a^dag) sigma_x^A) on mode + ancilla."""

    phi: float


Gate = Union[CNOT, SingleQubitRotation, MS, AnalogBlockUR]


@dataclass(frozen=True)
class CircuitSpec:
    """Time-ordered gate list over a register layout."""

    layout: RegisterLayout
    gates: tuple[Gate, ...]


_AXES = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


def _rotation(axis: str, angle: float) -> np.ndarray:
    sigma = _AXES.get(axis)
    if sigma is None:
        raise ValidationError(f"rotation axis must be x/y/z, got {axis!r}")
    if not np.isfinite(angle):
        raise ValidationError(f"rotation angle must be finite, got {angle!r}")
    return math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * sigma


def gate_unitary(gate: Gate, layout: RegisterLayout) -> np.ndarray:
    dims = layout.factor_dims
    if isinstance(gate, SingleQubitRotation):
        return _lift(dims, {layout.qubit_factor(gate.qubit): _rotation(gate.axis, gate.angle)})
    if isinstance(gate, CNOT):
        c, t = layout.qubit_factor(gate.control), layout.qubit_factor(gate.target)
        if c == t:
            raise DimensionError("CNOT control and target must differ")
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        return _lift(dims, {c: p0}) + _lift(dims, {c: p1, t: PAULI_X})
    if isinstance(gate, MS):
        a, b = layout.qubit_factor(gate.qubit_a), layout.qubit_factor(gate.qubit_b)
        if a == b:
            raise DimensionError("MS qubits must differ")
        eye = _lift(dims, {})
        xx = _lift(dims, {a: PAULI_X, b: PAULI_X})
        return math.cos(gate.angle / 2) * eye - 1j * math.sin(gate.angle / 2) * xx
    if isinstance(gate, AnalogBlockUR):
        cutoff = layout.boson_cutoff
        if cutoff is None:
            raise DimensionError("analog block needs a bosonic mode in the layout")
        mode_x = HermitianOperator(_mode_x(cutoff))
        u_plus = mode_x.matfunc(lambda lam: cmath.exp(-1j * gate.phi / 2 * lam))
        u_minus = mode_x.matfunc(lambda lam: cmath.exp(+1j * gate.phi / 2 * lam))
        block = np.kron(u_plus, _PX_PLUS) + np.kron(u_minus, _PX_MINUS)
        pre = int(np.prod(dims[: layout.boson_factor])) if layout.boson_factor else 1
        return np.kron(np.eye(pre), block)
    raise ValidationError(f"unknown gate {type(gate).__name__}")


def circuit_unitary(circuit: CircuitSpec) -> np.ndarray:
    """Compose the time-ordered gate list into one unitary."""
    u = np.eye(circuit.layout.dim, dtype=complex)
    for gate in circuit.gates:
        u = gate_unitary(gate, circuit.layout) @ u
    return u


# ---------------------------------------------------------------------------
# decomposition identities

# V = exp(i pi sigma_y / 4) == R_y(-pi/2); V^H Z V = X, so conjugating each
# wire of the CNOT/Rz phase gadget by V turns exp(-i phi/2 ZZZ) into
# exp(-i phi/2 XXX).
_RY_TO_X = -math.pi / 2


def xxx_circuit(phi: float, *, drop_final_cnot: bool = False) -> CircuitSpec:
    """CNOT + single-qubit-rotation decomposition of exp(-i phi/2 XXX)."""
    layout = RegisterLayout(2)
    anc = 2
    pre = tuple(SingleQubitRotation("y", _RY_TO_X, q) for q in (0, 1, anc))
    core: tuple[Gate, ...] = (
        CNOT(0, anc),
        CNOT(1, anc),
        SingleQubitRotation("z", phi, anc),
        CNOT(1, anc),
        CNOT(0, anc),
    )
    if drop_final_cnot:
        core = core[:-1]
    post = tuple(SingleQubitRotation("y", -_RY_TO_X, q) for q in (0, 1, anc))
    return CircuitSpec(layout, pre + core + post)


def verify_fig2a(phi: float, *, drop_final_cnot: bool = False) -> float:
    """Operator-norm distance of the XXX gate decomposition from its target."""
    layout = RegisterLayout(2)
    u = circuit_unitary(xxx_circuit(phi, drop_final_cnot=drop_final_cnot))
    target = primitive_unitary(XXX(0, 1), phi, layout).matrix
    return float(np.linalg.norm(u - target, 2))


def dipole_circuit(phi: float, cutoff: int, *, drop_cnots: bool = False) -> CircuitSpec:
    """CNOT pair around the analog block: realizes exp(-i phi/2 (a+a^dag) X X).

    The ancilla-controlled CNOTs conjugate the block's sigma_x^A into
    sigma_x^A sigma_x^(system qubit)."""
    layout = RegisterLayout(1, cutoff)
    anc = 1
    gates: tuple[Gate, ...] = (CNOT(anc, 0), AnalogBlockUR(phi), CNOT(anc, 0))
    if drop_cnots:
        gates = (AnalogBlockUR(phi),)
    return CircuitSpec(layout, gates)


def _boson_index_sets(system_qubits: int, cutoff: int, n_max: int) -> np.ndarray:
    """Flat joint-space indices whose boson occupation is below ``n_max``."""
    idxs = []
    for q in range(2**system_qubits):
        for n in range(n_max):
            for a in range(2):
                idxs.append((q * cutoff + n) * 2 + a)
    return np.array(idxs, dtype=int)


def verify_fig2b(phi: float, cutoff: int, *, drop_cnots: bool = False) -> float:
    """Subspace distance of the analog-block decomposition from its target.

    The reference unitary is evaluated at twice the working cutoff and the
    comparison is restricted to a truncation-safe zone of low boson
    occupations, starting at n < cutoff/2 and shrinking until the reference
    leaks at most 1e-8 amplitude out of the working space from those
    columns. (a+a†) is unbounded, so larger phi needs a smaller zone: the
    displacement tail from Fock level n reaches m levels up with amplitude
    ~ (phi/2)^m sqrt(binom(n+m, m)/m!). If no zone with n_safe >= 2 is
    conclusive, raises TruncationLeakageError."""
    if cutoff < 8:
        raise ValidationError(f"cutoff must be >= 8 for a conclusive check, got {cutoff}")
    u = circuit_unitary(dipole_circuit(phi, cutoff, drop_cnots=drop_cnots))
    big = 2 * cutoff
    target = primitive_unitary(DipoleXX(0), phi, RegisterLayout(1, big)).matrix
    rows_small = _boson_index_sets(1, cutoff, cutoff)  # the whole working space
    rows_big = _boson_index_sets(1, big, cutoff)
    outside = np.setdiff1d(np.arange(target.shape[0]), rows_big)
    leakage = math.inf
    for n_safe in range(cutoff // 2, 1, -1):
        cols_big = _boson_index_sets(1, big, n_safe)
        leakage = float(np.linalg.norm(target[np.ix_(outside, cols_big)], 2))
        if leakage <= 1e-8:
            break
    else:
        raise TruncationLeakageError(
            f"reference leaks {leakage:.3e} amplitude above the working cutoff "
            f"{cutoff} at phi={phi} even from the smallest subspace; increase "
            f"the cutoff for a conclusive check"
        )
    cols_small = _boson_index_sets(1, cutoff, n_safe)
    diff = u[np.ix_(rows_small, cols_small)] - target[np.ix_(rows_big, cols_big)]
    return float(np.linalg.norm(diff, 2))
