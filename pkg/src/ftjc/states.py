"""Joint atom-field states over the excitation-block decomposition.

A JointState stores, for a photon cutoff n_max, the amplitudes of the
bare states (excited, n photons) and (ground, n+1 photons) for
n = 0..n_max, plus the decoupled (ground, 0 photons) amplitude which
never evolves. Initial-state constructors, evolution over a time grid,
and reduced density matrices live here; scalar observables are in
ftjc.observables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffError, InputError, SectorError
from .evolution import (DysonInit, IDENTITY_INIT, FractionalOrder,
                        UnitaryBlock, block_trajectory)
from .mittag import DEFAULT_TOL

__all__ = [
    "JointState",
    "FieldDensity",
    "TrajectoryResult",
    "init_fock_excited",
    "init_coherent_excited",
    "evolve",
    "evolve_trajectory",
    "field_density",
    "qubit_density",
]

SECTOR_LEAK_TOL = 1e-12
COHERENT_TAIL_TOL = 1e-12


@dataclass
class JointState:
    """Amplitudes of a pure joint state at one time.

    amp_e[n] multiplies (excited, n photons) and amp_g[n] multiplies
    (ground, n+1 photons), n = 0..n_max; amp_g0 multiplies the decoupled
    (ground, 0 photons) state.
    """

    n_max: int
    amp_e: np.ndarray
    amp_g: np.ndarray
    amp_g0: complex = 0j
    t: float = 0.0

    def __post_init__(self):
        if self.n_max < 0:
            raise InputError(f"photon cutoff must be >= 0, got {self.n_max}")
        self.amp_e = np.asarray(self.amp_e, dtype=complex)
        self.amp_g = np.asarray(self.amp_g, dtype=complex)
        if self.amp_e.shape != (self.n_max + 1,) or self.amp_g.shape != (self.n_max + 1,):
            raise InputError("amplitude arrays must have length n_max + 1")
        if not (np.all(np.isfinite(self.amp_e)) and np.all(np.isfinite(self.amp_g))
                and np.isfinite(complex(self.amp_g0))):
            raise InputError("state amplitudes must be finite")

    def norm(self) -> float:
        """Total probability (exactly summed)."""
        parts = [abs(complex(self.amp_g0)) ** 2]
        parts.extend(float(p) for p in np.abs(self.amp_e) ** 2)
        parts.extend(float(p) for p in np.abs(self.amp_g) ** 2)
        return math.fsum(parts)

    def excitation(self) -> float:
        """Mean total excitation number (photons plus excited-atom flag).

        Both bare states of block n carry excitation n + 1 and the
        decoupled state carries 0, so this is conserved exactly by the
        block dynamics.
        """
        w = np.arange(1, self.n_max + 2, dtype=float)
        parts = [float(v) for v in w * (np.abs(self.amp_e) ** 2 + np.abs(self.amp_g) ** 2)]
        return math.fsum(parts)


def init_fock_excited(n_max: int = 4) -> JointState:
    """Excited atom and field vacuum (only block 0 is occupied)."""
    if n_max < 0:
        raise InputError(f"photon cutoff must be >= 0, got {n_max}")
    amp_e = np.zeros(n_max + 1, dtype=complex)
    amp_g = np.zeros(n_max + 1, dtype=complex)
    amp_e[0] = 1.0
    return JointState(n_max=n_max, amp_e=amp_e, amp_g=amp_g)


def init_coherent_excited(beta: complex, n_max: int) -> JointState:
    """Excited atom and coherent field of amplitude beta, truncated at n_max.

    Raises CutoffError when the truncation drops more than 1e-12 of the
    field weight; the retained amplitudes are renormalized.
    """
    if n_max < 0:
        raise InputError(f"photon cutoff must be >= 0, got {n_max}")
    beta = complex(beta)
    if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise InputError("coherent amplitude must be finite")
    w = np.zeros(n_max + 1, dtype=complex)
    w[0] = math.exp(-0.5 * abs(beta) ** 2)
    for n in range(n_max):
        w[n + 1] = w[n] * beta / math.sqrt(n + 1.0)
    kept = math.fsum(float(p) for p in np.abs(w) ** 2)
    tail = 1.0 - kept
    if tail > COHERENT_TAIL_TOL:
        raise CutoffError(
            f"coherent state with |beta|={abs(beta):.3g} drops weight "
            f"{tail:.3e} beyond n_max={n_max} (limit {COHERENT_TAIL_TOL:.0e}); "
            f"increase the cutoff")
    amp_e = w / math.sqrt(kept)
    amp_g = np.zeros(n_max + 1, dtype=complex)
    return JointState(n_max=n_max, amp_e=amp_e, amp_g=amp_g)


def evolve(state: JointState, blocks) -> JointState:
    """Apply one unitary block per excitation sector to a t=0 state.

    blocks must be a sequence of UnitaryBlock with blocks[n].n == n for
    n = 0..n_max, all at the same time. The decoupled amplitude is
    unchanged.
    """
    blocks = list(blocks)
    if len(blocks) != state.n_max + 1:
        raise InputError(
            f"need {state.n_max + 1} blocks for n_max={state.n_max}, "
            f"got {len(blocks)}")
    t = blocks[0].t
    for n, blk in enumerate(blocks):
        if blk.n != n:
            raise InputError(f"block at position {n} has index {blk.n}")
        if blk.t != t:
            raise InputError("all blocks must share the same time")
    amp_e = np.empty(state.n_max + 1, dtype=complex)
    amp_g = np.empty(state.n_max + 1, dtype=complex)
    for n, blk in enumerate(blocks):
        u = blk.matrix()
        amp_e[n] = u[0, 0] * state.amp_e[n] + u[0, 1] * state.amp_g[n]
        amp_g[n] = u[1, 0] * state.amp_e[n] + u[1, 1] * state.amp_g[n]
    return JointState(n_max=state.n_max, amp_e=amp_e, amp_g=amp_g,
                      amp_g0=state.amp_g0, t=t)


@dataclass
class TrajectoryResult:
    """State history over a time grid.

    amp_e and amp_g have shape (len(ts), n_max + 1); amp_g0 is constant.
    refinements maps occupied block index to the number of midpoint
    refinements its phase tracking needed.
    """

    n_max: int
    ts: np.ndarray
    amp_e: np.ndarray
    amp_g: np.ndarray
    amp_g0: complex
    refinements: dict = field(default_factory=dict)

    def state(self, i: int) -> JointState:
        return JointState(n_max=self.n_max, amp_e=self.amp_e[i].copy(),
                          amp_g=self.amp_g[i].copy(), amp_g0=self.amp_g0,
                          t=float(self.ts[i]))


def evolve_trajectory(state: JointState, order: FractionalOrder, mu: float,
                      ts, ml_tol: float = DEFAULT_TOL,
                      init: DysonInit = IDENTITY_INIT) -> TrajectoryResult:
    """Evolve a t=0 state over a time grid.

    Blocks whose initial amplitudes are both zero stay zero and are
    skipped. state.t must be 0 (restarts go through explicit DysonInit
    bookkeeping per block, not through this convenience driver).
    """
    if state.t != 0.0:
        raise InputError("evolve_trajectory expects a state at t=0")
    ts_arr = np.asarray(ts, dtype=float)
    amp_e = np.zeros((ts_arr.size, state.n_max + 1), dtype=complex)
    amp_g = np.zeros((ts_arr.size, state.n_max + 1), dtype=complex)
    refinements: dict[int, int] = {}
    for n in range(state.n_max + 1):
        a0 = complex(state.amp_e[n])
        g0 = complex(state.amp_g[n])
        if a0 == 0 and g0 == 0:
            continue
        bt = block_trajectory(order, mu, n, ts_arr, ml_tol=ml_tol, init=init)
        amp_e[:, n], amp_g[:, n] = bt.evolve_amplitudes(a0, g0)
        refinements[n] = bt.refinements
    return TrajectoryResult(n_max=state.n_max, ts=ts_arr, amp_e=amp_e,
                            amp_g=amp_g, amp_g0=complex(state.amp_g0),
                            refinements=refinements)


@dataclass
class FieldDensity:
    """Reduced field density matrix on photon numbers 0..n_max+1.

    rho is Hermitian with trace equal to the state norm (1 up to
    round-off for evolved states); it has rank at most 2 plus the
    decoupled contribution.
    """

    n_max: int
    rho: np.ndarray


def field_density(state: JointState) -> FieldDensity:
    """Trace out the atom."""
    dim = state.n_max + 2
    psi_e = np.zeros(dim, dtype=complex)
    psi_e[:state.n_max + 1] = state.amp_e
    psi_g = np.zeros(dim, dtype=complex)
    psi_g[0] = state.amp_g0
    psi_g[1:] = state.amp_g
    rho = np.outer(psi_e, psi_e.conj()) + np.outer(psi_g, psi_g.conj())
    return FieldDensity(n_max=state.n_max, rho=rho)


def qubit_density(state: JointState) -> np.ndarray:
    """Two-qubit density matrix of the (atom, zero-or-one photon) sector.

    Returns a 4x4 matrix in the product basis ordered (excited, 0),
    (excited, 1), (ground, 0), (ground, 1), trace-renormalized. Raises
    SectorError when the state has weight beyond one photon above
    1e-12 (the two-qubit picture is then meaningless).
    """
    a = complex(state.amp_e[0])
    b = complex(state.amp_e[1]) if state.n_max >= 1 else 0j
    c = complex(state.amp_g0)
    d = complex(state.amp_g[0])
    v = np.array([a, b, c, d], dtype=complex)
    inside = float(np.sum(np.abs(v) ** 2))
    leak = state.norm() - inside
    if leak > SECTOR_LEAK_TOL:
        raise SectorError(
            f"state has weight {leak:.3e} outside the zero/one-photon "
            f"sector (limit {SECTOR_LEAK_TOL:.0e})")
    if inside <= 0.0:
        raise SectorError("state has no weight in the zero/one-photon sector")
    return np.outer(v, v.conj()) / inside
