"""Hilbert-space layout and operator algebra for two three-level atoms and a cavity mode.

Each atom has levels |0>, |1>, |e> (two stable ground states and one excited
state); the cavity is a truncated harmonic mode with Fock states |0>..|n_max>.
Basis states are written |ij;n> where i is the level of atom 1, j the level of
atom 2 and n the photon number.  The composite index runs with atom 1 slowest
and the cavity fastest, so the full dimension is 9 * (n_max + 1).

All operators are dense complex matrices; at these dimensions (tens of basis
states) sparsity buys nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LEVELS = ("0", "1", "e")
_LEVEL_INDEX = {"0": 0, "1": 1, "e": 2}

#: default tolerances for state validation
KET_NORM_TOL = 1e-9
DENSITY_HERM_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-8
DENSITY_EIG_TOL = -1e-8


def _level_index(level) -> int:
    """Map a level label ('0', '1', 'e', or 0..2) to its position."""
    if isinstance(level, str):
        try:
            return _LEVEL_INDEX[level]
        except KeyError:
            raise ValueError(f"unknown atomic level {level!r}, expected one of {LEVELS}")
    idx = int(level)
    if not 0 <= idx <= 2:
        raise ValueError(f"atomic level index {idx} out of range 0..2")
    return idx


@dataclass(frozen=True)
class SpaceLayout:
    """Frozen index layout of the atom-atom-cavity product space.

    Parameters
    ----------
    n_max : int
        Highest retained Fock state of the cavity mode (n_max >= 1).
    """

    n_max: int
    atom_levels: tuple = field(default=LEVELS, init=False)

    @property
    def n_cavity(self) -> int:
        return self.n_max + 1

    @property
    def total_dim(self) -> int:
        return 9 * (self.n_max + 1)

    def index(self, i, j, n: int) -> int:
        """Composite index of |ij;n>."""
        ii = _level_index(i)
        jj = _level_index(j)
        n = int(n)
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside 0..{self.n_max}")
        return (ii * 3 + jj) * self.n_cavity + n

    def labels(self, idx: int) -> tuple[str, str, int]:
        """Inverse of :meth:`index`: (atom1 level, atom2 level, photon number)."""
        idx = int(idx)
        if not 0 <= idx < self.total_dim:
            raise ValueError(f"basis index {idx} outside 0..{self.total_dim - 1}")
        n = idx % self.n_cavity
        a = idx // self.n_cavity
        return LEVELS[a // 3], LEVELS[a % 3], n

    def basis_ket(self, i, j=None, n=None) -> np.ndarray:
        """Unit ket for |ij;n>.  Accepts either (i, j, n) or a label like '01;0'."""
        if j is None:
            i, j, n = parse_basis_label(i)
        ket = np.zeros(self.total_dim, dtype=complex)
        ket[self.index(i, j, n)] = 1.0
        return ket


def parse_basis_label(label: str) -> tuple[str, str, int]:
    """Parse a basis label of the form 'ij;n', e.g. '01;0' or 'e1;2'."""
    try:
        atoms, photon = label.split(";")
        if len(atoms) != 2:
            raise ValueError
        i, j = atoms[0], atoms[1]
        _level_index(i), _level_index(j)
        n = int(photon)
    except (ValueError, AttributeError):
        raise ValueError(f"malformed basis label {label!r}, expected 'ij;n' like '01;0'")
    return i, j, n


def build_space(n_max: int) -> SpaceLayout:
    """Construct the layout for a given cavity truncation.

    Raises
    ------
    ValueError
        If n_max < 1.  A single retained Fock state cannot represent the
        photon-exchange processes this package simulates.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max!r}")
    return SpaceLayout(n_max=int(n_max))


def _single_atom_op(j, m) -> np.ndarray:
    op = np.zeros((3, 3), dtype=complex)
    op[_level_index(j), _level_index(m)] = 1.0
    return op


def atomic_op(layout: SpaceLayout, atom: int, j, m) -> np.ndarray:
    """Embedded transition operator |j><m| acting on one atom.

    Parameters
    ----------
    atom : int
        1 or 2.
    j, m : level labels
        Row and column levels; the result maps |m> to |j> on that atom.
    """
    if atom not in (1, 2):
        raise ValueError(f"atom must be 1 or 2, got {atom}")
    op = _single_atom_op(j, m)
    eye3 = np.eye(3, dtype=complex)
    eye_c = np.eye(layout.n_cavity, dtype=complex)
    if atom == 1:
        return np.kron(np.kron(op, eye3), eye_c)
    return np.kron(np.kron(eye3, op), eye_c)


def cavity_annihilator(layout: SpaceLayout) -> np.ndarray:
    """Truncated annihilation operator, embedded in the full space.

    Truncation removes the raising action out of |n_max> but leaves every
    downward matrix element intact.
    """
    a = np.diag(np.sqrt(np.arange(1, layout.n_cavity, dtype=float)), k=1).astype(complex)
    return np.kron(np.eye(9, dtype=complex), a)


def cavity_number(layout: SpaceLayout) -> np.ndarray:
    """Photon-number operator a^dag a on the full space."""
    n = np.diag(np.arange(layout.n_cavity, dtype=float)).astype(complex)
    return np.kron(np.eye(9, dtype=complex), n)


def ket_to_density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def partial_trace_cavity(state: np.ndarray, layout: SpaceLayout) -> np.ndarray:
    """Trace out the cavity mode, returning the 9x9 two-atom density matrix.

    `state` may be a ket (1d) or a density matrix (2d) on the full space.
    """
    state = np.asarray(state)
    if state.ndim == 1:
        rho = ket_to_density(state)
    elif state.ndim == 2:
        rho = state
    else:
        raise ValueError(f"state must be a ket or density matrix, got ndim={state.ndim}")
    d = layout.total_dim
    if rho.shape != (d, d):
        raise ValueError(f"state dimension {rho.shape} does not match layout dim {d}")
    nc = layout.n_cavity
    return np.einsum("anbn->ab", rho.reshape(9, nc, 9, nc))


def assert_valid_ket(psi: np.ndarray, tol: float = KET_NORM_TOL) -> None:
    """Raise ValueError unless `psi` is a normalized 1d complex vector."""
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError(f"ket must be one-dimensional, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"ket norm {norm} deviates from 1 by more than {tol}")


def assert_valid_density(
    rho: np.ndarray,
    herm_tol: float = DENSITY_HERM_TOL,
    trace_tol: float = DENSITY_TRACE_TOL,
    eig_floor: float = DENSITY_EIG_TOL,
) -> None:
    """Raise ValueError unless `rho` is Hermitian, unit trace and positive.

    Positivity is enforced only down to a small negative floor so that
    integration round-off does not trip the check.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"density matrix asymmetry {herm:.3e} exceeds {herm_tol}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} deviates from 1 by more than {trace_tol}")
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if min_eig < eig_floor:
        raise ValueError(f"density matrix minimum eigenvalue {min_eig:.3e} below {eig_floor}")
