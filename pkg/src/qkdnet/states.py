"""Dense simulation of small labeled multi-qubit systems.

States carry an ordered tuple of qubit labels ``(owner, slot)``; the first
label is the most significant bit of the amplitude index.  Everything is
plain complex128 numpy; joint systems are capped at ``MAX_QUBITS`` qubits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidArgumentError
from .paulis import PauliOperator

MAX_QUBITS = 14
NORM_ATOL = 1e-12
EIG_CLAMP = -1e-10

QubitLabel = tuple  # (owner, slot)

PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS = "phi+", "phi-", "psi+", "psi-"
CAT_KINDS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)
_CAT_COEF = {PHI_PLUS: 1.0, PHI_MINUS: -1.0, PSI_PLUS: 1j, PSI_MINUS: -1j}


@dataclass
class MeasurementBasis:
    """Single-qubit measurement direction; outcome 0 is the +1 eigenvalue."""

    axis: str

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise InvalidArgumentError(f"unknown axis {self.axis!r}")

    def eigenvectors(self) -> np.ndarray:
        """Rows: the outcome-0 and outcome-1 eigenvectors."""
        s = 1 / np.sqrt(2)
        if self.axis == "X":
            return np.array([[s, s], [s, -s]], dtype=complex)
        if self.axis == "Y":
            return np.array([[s, 1j * s], [s, -1j * s]], dtype=complex)
        return np.eye(2, dtype=complex)


def _as_basis(basis) -> MeasurementBasis:
    if isinstance(basis, MeasurementBasis):
        return basis
    return MeasurementBasis(str(basis))


def _check_labels(labels) -> tuple:
    labels = tuple(tuple(l) for l in labels)
    if len(set(labels)) != len(labels):
        raise InvalidArgumentError("qubit labels must be unique")
    if len(labels) > MAX_QUBITS:
        raise CapacityError(f"{len(labels)} qubits exceeds cap of {MAX_QUBITS}")
    return labels


@dataclass
class PureStateVector:
    labels: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        self.labels = _check_labels(self.labels)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        if len(self.amplitudes) != 2 ** len(self.labels):
            raise InvalidArgumentError("amplitude length must be 2^(#labels)")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidArgumentError(f"state norm {norm} is not 1")

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def axis(self, label) -> int:
        label = tuple(label)
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise InvalidArgumentError(f"unknown label {label!r}") from exc


@dataclass
class DensityMatrix:
    labels: tuple
    matrix: np.ndarray

    def __post_init__(self):
        self.labels = _check_labels(self.labels)
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** len(self.labels)
        if self.matrix.shape != (dim, dim):
            raise InvalidArgumentError("matrix must be 2^q x 2^q")
        if np.abs(self.matrix - self.matrix.conj().T).max() > 1e-9:
            raise InvalidArgumentError("matrix is not Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > 1e-9:
            raise InvalidArgumentError("trace is not 1")

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def axis(self, label) -> int:
        label = tuple(label)
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise InvalidArgumentError(f"unknown label {label!r}") from exc


def default_labels(j: int, owner: str = "q") -> list:
    return [(owner, i) for i in range(j)]


def make_cat(j: int, kind: str, labels=None) -> PureStateVector:
    """The j-qubit cat state (|0..0> + c |1..1>)/sqrt(2), c in {±1, ±i}."""
    if j < 1:
        raise InvalidArgumentError("cat size must be >= 1")
    if kind not in CAT_KINDS:
        raise InvalidArgumentError(f"unknown cat kind {kind!r}")
    if labels is None:
        labels = default_labels(j)
    if len(labels) != j:
        raise InvalidArgumentError("label count must equal j")
    amps = np.zeros(2 ** j, dtype=complex)
    amps[0] = 1 / np.sqrt(2)
    amps[-1] = _CAT_COEF[kind] / np.sqrt(2)
    return PureStateVector(tuple(labels), amps)


def basis_state(bits, labels) -> PureStateVector:
    """Computational basis state with the given bit per label."""
    bits = list(bits)
    amps = np.zeros(2 ** len(bits), dtype=complex)
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    amps[idx] = 1.0
    return PureStateVector(tuple(labels), amps)


def eigenstate(basis, outcome: int, label) -> PureStateVector:
    vec = _as_basis(basis).eigenvectors()[int(outcome)]
    return PureStateVector((tuple(label),), vec.copy())


def tensor(a: PureStateVector, b: PureStateVector) -> PureStateVector:
    labels = a.labels + b.labels
    return PureStateVector(labels, np.kron(a.amplitudes, b.amplitudes))


def to_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    v = state.amplitudes
    return DensityMatrix(state.labels, np.outer(v, v.conj()))


def permute_labels(state: PureStateVector, new_order) -> PureStateVector:
    """Reorder tensor factors; a pure label permutation, amplitudes follow."""
    new_order = tuple(tuple(l) for l in new_order)
    if set(new_order) != set(state.labels) or len(new_order) != len(state.labels):
        raise InvalidArgumentError("new order must be a permutation of the labels")
    q = state.num_qubits
    perm = [state.axis(l) for l in new_order]
    t = state.amplitudes.reshape((2,) * q).transpose(perm)
    return PureStateVector(new_order, t.ravel())


def _bit_parity(arr: np.ndarray) -> np.ndarray:
    v = arr.astype(np.int64).copy()
    for shift in (8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def _masks(state, pauli: PauliOperator, labels):
    q = state.num_qubits
    xmask = 0
    zmask = 0
    for i, lab in enumerate(labels):
        pos = q - 1 - state.axis(lab)
        if pauli.x[i]:
            xmask |= 1 << pos
        if pauli.z[i]:
            zmask |= 1 << pos
    return xmask, zmask


def apply_pauli(state, pauli: PauliOperator, labels=None):
    """Apply a Pauli to the given labels (default: all, in label order)."""
    if labels is None:
        labels = state.labels
    if len(labels) != pauli.num_qubits:
        raise InvalidArgumentError("label count must match Pauli width")
    xmask, zmask = _masks(state, pauli, labels)
    if isinstance(state, PureStateVector):
        dim = len(state.amplitudes)
        idx = np.arange(dim)
        signs = 1 - 2 * _bit_parity(idx & zmask)
        out = np.empty(dim, dtype=complex)
        out[idx ^ xmask] = pauli.phase_value * signs * state.amplitudes
        return PureStateVector(state.labels, out)
    dim = 2 ** state.num_qubits
    idx = np.arange(dim)
    signs = (1 - 2 * _bit_parity(idx & zmask)).astype(complex)
    m = signs[:, None] * state.matrix * signs[None, :]
    out = np.empty_like(m)
    out[np.ix_(idx ^ xmask, idx ^ xmask)] = m
    return DensityMatrix(state.labels, out)


def expectation_pauli(state, pauli: PauliOperator, labels=None) -> complex:
    applied = apply_pauli(state, pauli, labels)
    if isinstance(state, PureStateVector):
        return complex(np.vdot(state.amplitudes, applied.amplitudes))
    return complex(np.trace(applied.matrix))


def measure_pauli(state, pauli: PauliOperator, labels, rng):
    """Projectively measure a Hermitian Pauli; returns (bit, post_state).

    Bit 0 is the +1 eigenvalue.  Labels are kept (the measurement is a
    stabilizer measurement, not a destructive single-qubit read-out).
    """
    if isinstance(state, PureStateVector):
        applied = apply_pauli(state, pauli, labels)
        vplus = (state.amplitudes + applied.amplitudes) / 2
        vminus = (state.amplitudes - applied.amplitudes) / 2
        pplus = float(np.linalg.norm(vplus) ** 2)
        bit = 0 if rng.random() < pplus else 1
        v = vplus if bit == 0 else vminus
        v = v / np.linalg.norm(v)
        return bit, PureStateVector(state.labels, v)
    m = state.matrix
    u_rho = _pauli_matrix_left(m, state, pauli, labels)
    rho_u = _pauli_matrix_left(m.conj().T, state, pauli, labels).conj().T
    u_rho_u = _pauli_matrix_left(u_rho.conj().T, state, pauli, labels).conj().T
    mplus = (m + u_rho + rho_u + u_rho_u) / 4
    pplus = float(np.trace(mplus).real)
    bit = 0 if rng.random() < pplus else 1
    if bit == 0:
        out = mplus / pplus
    else:
        mminus = (m - u_rho - rho_u + u_rho_u) / 4
        out = mminus / np.trace(mminus).real
    return bit, DensityMatrix(state.labels, out)


def _pauli_matrix_left(m, state, pauli, labels):
    """U @ m for the Pauli U embedded on the given labels of ``state``."""
    xmask, zmask = _masks(state, pauli, labels)
    dim = m.shape[0]
    idx = np.arange(dim)
    signs = (1 - 2 * _bit_parity(idx & zmask)).astype(complex)
    out = np.empty_like(m)
    out[idx ^ xmask, :] = pauli.phase_value * signs[:, None] * m
    return out


def measure_qubit(state, label, basis, rng):
    """Destructively measure one qubit; returns (bit, state without label)."""
    basis = _as_basis(basis)
    ax = state.axis(label)
    q = state.num_qubits
    evecs = basis.eigenvectors()
    if isinstance(state, PureStateVector):
        t = np.moveaxis(state.amplitudes.reshape((2,) * q), ax, 0).reshape(2, -1)
        proj = evecs.conj() @ t  # rows: outcome amplitudes on the rest
        probs = np.sum(np.abs(proj) ** 2, axis=1)
        bit = 0 if rng.random() < probs[0] else 1
        rest = proj[bit] / np.sqrt(probs[bit])
        new_labels = tuple(l for l in state.labels if l != tuple(label))
        return bit, PureStateVector(new_labels, rest)
    t = state.matrix.reshape((2,) * (2 * q))
    t = np.moveaxis(t, (ax, q + ax), (0, q))
    t = t.reshape(2, 2 ** (q - 1), 2, 2 ** (q - 1))
    outs = []
    probs = []
    for o in range(2):
        e = evecs[o]
        red = np.einsum("a,aibj,b->ij", e.conj(), t, e)
        outs.append(red)
        probs.append(float(np.trace(red).real))
    bit = 0 if rng.random() < probs[0] else 1
    red = outs[bit] / probs[bit]
    new_labels = tuple(l for l in state.labels if l != tuple(label))
    return bit, DensityMatrix(new_labels, red)


def measurement_probabilities(state: PureStateVector, bases) -> np.ndarray:
    """Joint outcome distribution for measuring every qubit, in label order.

    ``bases`` maps label -> basis (or axis string).  Index bit order matches
    the label order (first label is the most significant outcome bit).
    """
    q = state.num_qubits
    t = state.amplitudes.reshape((2,) * q)
    for ax, lab in enumerate(state.labels):
        u = _as_basis(bases[lab]).eigenvectors().conj()
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [ax])), 0, ax)
    return np.abs(t.ravel()) ** 2


def apply_isometry(state, matrix, in_labels, out_labels):
    """Apply an isometry mapping the in_labels block to a fresh out_labels block.

    ``matrix`` has shape (2^m, 2^k) with k = len(in_labels), m = len(out_labels).
    Output labels are placed first, remaining labels keep their order.
    """
    in_labels = [tuple(l) for l in in_labels]
    out_labels = [tuple(l) for l in out_labels]
    k = len(in_labels)
    mdim = 2 ** len(out_labels)
    if matrix.shape != (mdim, 2 ** k):
        raise InvalidArgumentError("isometry shape mismatch")
    q = state.num_qubits
    rest = [l for l in state.labels if l not in in_labels]
    for l in out_labels:
        if l in rest:
            raise InvalidArgumentError(f"output label {l!r} already present")
    if len(rest) + len(out_labels) > MAX_QUBITS:
        raise CapacityError("isometry output exceeds the qubit cap")
    axes = [state.axis(l) for l in in_labels]
    rest_axes = [state.axis(l) for l in rest]
    if isinstance(state, PureStateVector):
        t = state.amplitudes.reshape((2,) * q).transpose(axes + rest_axes)
        t = t.reshape(2 ** k, -1)
        out = matrix @ t
        return PureStateVector(tuple(out_labels) + tuple(rest), out.ravel())
    t = state.matrix.reshape((2,) * (2 * q))
    perm = axes + rest_axes + [q + a for a in axes] + [q + a for a in rest_axes]
    t = t.transpose(perm).reshape(2 ** k, 2 ** (q - k), 2 ** k, 2 ** (q - k))
    out = np.einsum("pi,iajb,qj->paqb", matrix, t, matrix.conj())
    dim_out = mdim * 2 ** (q - k)
    out = out.reshape(dim_out, dim_out)
    return DensityMatrix(tuple(out_labels) + tuple(rest), out)


def apply_unitary(state, matrix, labels):
    """Apply a unitary on a label subset, preserving the label set."""
    labels = [tuple(l) for l in labels]
    if isinstance(state, PureStateVector):
        k = len(labels)
        q = state.num_qubits
        axes = [state.axis(l) for l in labels]
        rest_axes = [a for a in range(q) if a not in axes]
        t = state.amplitudes.reshape((2,) * q).transpose(axes + rest_axes)
        t = matrix @ t.reshape(2 ** k, -1)
        new_labels = tuple(labels) + tuple(state.labels[a] for a in rest_axes)
        out = PureStateVector(new_labels, t.ravel())
        return permute_labels(out, state.labels)
    tmp = apply_isometry(state, matrix, labels, [("tmp-u", i) for i in range(len(labels))])
    relabeled = DensityMatrix(tuple(labels) + tmp.labels[len(labels):], tmp.matrix)
    return partial_permute_density(relabeled, state.labels)


def partial_permute_density(dm: DensityMatrix, new_order) -> DensityMatrix:
    new_order = tuple(tuple(l) for l in new_order)
    q = dm.num_qubits
    perm = [dm.axis(l) for l in new_order]
    t = dm.matrix.reshape((2,) * (2 * q))
    t = t.transpose(perm + [q + p for p in perm])
    dim = 2 ** q
    return DensityMatrix(new_order, t.reshape(dim, dim))


def partial_trace(state, keep) -> DensityMatrix:
    """Reduced state on the kept labels (order taken from ``keep``)."""
    dm = to_density(state)
    keep = [tuple(l) for l in keep]
    q = dm.num_qubits
    keep_axes = [dm.axis(l) for l in keep]
    drop_axes = [a for a in range(q) if a not in keep_axes]
    k = len(keep_axes)
    t = dm.matrix.reshape((2,) * (2 * q))
    perm = keep_axes + drop_axes + [q + a for a in keep_axes] + [q + a for a in drop_axes]
    t = t.transpose(perm).reshape(2 ** k, 2 ** (q - k), 2 ** k, 2 ** (q - k))
    red = np.einsum("iaja->ij", t)
    return DensityMatrix(tuple(keep), red)


def apply_kraus(state, kraus_ops, labels) -> DensityMatrix:
    """Apply a CPTP map given by Kraus matrices on the label subset."""
    dm = to_density(state)
    labels = [tuple(l) for l in labels]
    k = len(labels)
    q = dm.num_qubits
    axes = [dm.axis(l) for l in labels]
    rest_axes = [a for a in range(q) if a not in axes]
    perm = axes + rest_axes
    t = dm.matrix.reshape((2,) * (2 * q))
    t = t.transpose(perm + [q + p for p in perm])
    t = t.reshape(2 ** k, 2 ** (q - k), 2 ** k, 2 ** (q - k))
    acc = np.zeros_like(t)
    for kmat in kraus_ops:
        acc += np.einsum("pi,iajb,qj->paqb", kmat, t, kmat.conj())
    new_labels = tuple(labels) + tuple(dm.labels[a] for a in rest_axes)
    dim = 2 ** q
    out = DensityMatrix(new_labels, acc.reshape(dim, dim))
    return partial_permute_density(out, dm.labels)


def apply_channel(state: DensityMatrix, channel, targets) -> DensityMatrix:
    """Apply a CPTP channel; ``channel`` is a ChannelSpec-like object
    exposing ``kraus_terms(k)`` or a plain list of Kraus matrices."""
    targets = [tuple(l) for l in targets]
    if hasattr(channel, "kraus_terms"):
        kraus = channel.kraus_terms(len(targets))
    else:
        kraus = list(channel)
    if kraus and kraus[0].shape != (2 ** len(targets),) * 2:
        raise InvalidArgumentError("channel arity does not match target count")
    out = apply_kraus(state, kraus, targets)
    if abs(np.trace(out.matrix).real - 1.0) > 1e-9:
        raise InvalidArgumentError("channel is not trace preserving")
    return out


# --------------------------------------------------------------------------
# fidelity / distance metrics (core versions accept raw square matrices)
# --------------------------------------------------------------------------

def _as_matrix(x) -> np.ndarray:
    if isinstance(x, DensityMatrix):
        return x.matrix
    if isinstance(x, PureStateVector):
        v = x.amplitudes
        return np.outer(v, v.conj())
    return np.asarray(x, dtype=complex)


def _check_same_dim(a, b):
    if a.shape != b.shape:
        raise InvalidArgumentError("dimension mismatch")


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """PSD square root via Hermitian eigendecomposition with clamping."""
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    # zero out round-off eigenvalues: sqrt(1e-16) would otherwise inject 1e-8
    cut = max(float(w.max()), 0.0) * len(w) * np.finfo(float).eps
    w = np.where(w > cut, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(x, y) -> float:
    """Uhlmann fidelity tr(sqrt(sqrt(X) Y sqrt(X)))^2, clipped to [0, 1]."""
    a, b = _as_matrix(x), _as_matrix(y)
    _check_same_dim(a, b)
    sa = sqrtm_psd(a)
    val = float(np.trace(sqrtm_psd(sa @ b @ sa)).real) ** 2
    return min(max(val, 0.0), 1.0)


def trace_distance(x, y) -> float:
    """tr|X - Y| / 2."""
    a, b = _as_matrix(x), _as_matrix(y)
    _check_same_dim(a, b)
    w = np.linalg.eigvalsh(a - b)
    return float(np.abs(w).sum() / 2)


def bures_distance(x, y) -> float:
    """sqrt(2 - 2 sqrt(F))."""
    f = fidelity(x, y)
    return float(np.sqrt(max(2 - 2 * np.sqrt(f), 0.0)))


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _interleave(arr: np.ndarray) -> list:
    flat = arr.ravel()
    out = []
    for c in flat:
        out.append(float(c.real))
        out.append(float(c.imag))
    return out


def state_to_json(state) -> str:
    if isinstance(state, PureStateVector):
        doc = {"kind": "pure",
               "labels": [list(l) for l in state.labels],
               "amplitudes": _interleave(state.amplitudes)}
    else:
        doc = {"kind": "density",
               "labels": [list(l) for l in state.labels],
               "matrix": _interleave(state.matrix)}
    return json.dumps(doc, sort_keys=True)


def state_from_json(text: str):
    doc = json.loads(text)
    labels = tuple(tuple(l) for l in doc["labels"])
    if doc["kind"] == "pure":
        raw = np.array(doc["amplitudes"], dtype=float)
        amps = raw[0::2] + 1j * raw[1::2]
        return PureStateVector(labels, amps)
    raw = np.array(doc["matrix"], dtype=float)
    flat = raw[0::2] + 1j * raw[1::2]
    dim = 2 ** len(labels)
    return DensityMatrix(labels, flat.reshape(dim, dim))
