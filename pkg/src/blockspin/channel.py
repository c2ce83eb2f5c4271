"""Renormalization as an exact Pauli channel recursion.

One cycle encode -> i.i.d. Pauli noise -> syndrome recovery -> decode acts on
the logical qubit as a Pauli channel.  Iterating the map gives the flow on
channel space; its attractors (identity vs uniform noise) define a {0,1}
order parameter, the unstable fixed point in between is the memory threshold,
and the hashing-bound quality along the flow yields the memory-support
correlation functional.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .codes import CodeError, StabilizerCode
from .pauli import Pauli, commutes, contains, multiply

_LOGICAL_NAMES = ("I", "X", "Y", "Z")


class ChannelError(ValueError):
    """Raised on invalid channel data or enumeration budget overruns."""


class IndeterminateFlowError(RuntimeError):
    """Flow hit the level cap without resolving; signals threshold proximity."""


@dataclass(frozen=True)
class PauliChannel:
    """Probability 4-vector over {I, X, Y, Z}."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        probs = self.as_array()
        if np.any(probs < -1e-12):
            raise ChannelError(f"negative probability in {probs}")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ChannelError(f"probabilities sum to {probs.sum()}, not 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z], dtype=float)

    @classmethod
    def from_array(cls, a) -> "PauliChannel":
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1], a[2], a[3])

    @classmethod
    def identity(cls) -> "PauliChannel":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def uniform(cls) -> "PauliChannel":
        return cls(0.25, 0.25, 0.25, 0.25)

    @classmethod
    def depolarizing(cls, p: float) -> "PauliChannel":
        return cls(1.0 - p, p / 3.0, p / 3.0, p / 3.0)

    @classmethod
    def bit_flip(cls, p: float) -> "PauliChannel":
        return cls(1.0 - p, p, 0.0, 0.0)

    def error_probability(self) -> float:
        return 1.0 - self.p_i

    def quality(self) -> float:
        """Hashing-bound proxy q = 1 - H2(p); 1 at identity, -1 at uniform."""
        h = 0.0
        for p in self.as_array():
            if p > 0.0:
                h -= p * math.log2(p)
        return 1.0 - h


@dataclass
class LogicalActionTable:
    """Precomputed logical class of every n-qubit Pauli error for one code.

    comps[e] holds the base-4 digits of error index e (0=I,1=X,2=Y,3=Z per
    qubit); cls[e] is the logical residual class after lookup recovery.
    """

    code: StabilizerCode
    comps: np.ndarray
    cls: np.ndarray

    @classmethod
    def build(cls, code: StabilizerCode) -> "LogicalActionTable":
        if code.k != 1:
            raise ChannelError("effective channel requires k=1")
        if code.n > 10:
            raise ChannelError("exact enumeration limited to n <= 10")
        n = code.n
        n_err = 4**n
        comps = np.zeros((n_err, n), dtype=np.uint8)
        idx = np.arange(n_err)
        for q in range(n):
            comps[:, n - 1 - q] = (idx // 4**q) % 4
        # X/Z bit content per single-qubit component 0..3 = I,X,Y,Z.
        comp_x = np.array([0, 1, 1, 0], dtype=np.uint8)
        comp_z = np.array([0, 0, 1, 1], dtype=np.uint8)
        xs = comp_x[comps]
        zs = comp_z[comps]
        gens = code.stabilizer.generators
        syn = np.zeros((n_err, len(gens)), dtype=np.uint8)
        for j, g in enumerate(gens):
            syn[:, j] = (xs @ g.z_bits + zs @ g.x_bits) % 2
        # Logical class = class(recovery) xor-composed with class of the error
        # relative to the coset structure; compute directly per error via the
        # symplectic pairing with the logical operators after recovery.
        lx, lz = code.logical_x[0], code.logical_z[0]
        n_syn = 2 ** len(gens)
        pow2 = 2 ** np.arange(len(gens) - 1, -1, -1, dtype=np.int64)
        rec_x_by_syn = np.full((n_syn, n), 255, dtype=np.uint8)
        rec_z_by_syn = np.full((n_syn, n), 255, dtype=np.uint8)
        for s, p in code.recovery_table.items():
            si = int(np.array(s, dtype=np.int64) @ pow2)
            rec_x_by_syn[si] = p.x_bits
            rec_z_by_syn[si] = p.z_bits
        if np.any(rec_x_by_syn == 255):
            raise ChannelError("incomplete recovery table")
        syn_idx = syn.astype(np.int64) @ pow2
        res_x = xs ^ rec_x_by_syn[syn_idx]
        res_z = zs ^ rec_z_by_syn[syn_idx]
        # residual commutes with all checks; logical X content = pairing with
        # Zbar, logical Z content = pairing with Xbar.
        has_x = (res_x @ lz.z_bits + res_z @ lz.x_bits) % 2
        has_z = (res_x @ lx.z_bits + res_z @ lx.x_bits) % 2
        classes = np.zeros(n_err, dtype=np.uint8)
        classes[(has_x == 1) & (has_z == 0)] = 1
        classes[(has_x == 1) & (has_z == 1)] = 2
        classes[(has_x == 0) & (has_z == 1)] = 3
        return cls(code=code, comps=comps, cls=classes)


_table_cache: dict[int, LogicalActionTable] = {}


def _action_table(code: StabilizerCode) -> LogicalActionTable:
    key = id(code)
    if key not in _table_cache:
        _table_cache[key] = LogicalActionTable.build(code)
    return _table_cache[key]


def effective_channel(code: StabilizerCode, ch: PauliChannel) -> PauliChannel:
    """Exact logical channel of one noise + lookup-recovery cycle.

    Enumerates all 4^n i.i.d. Pauli errors, classifies the post-recovery
    residual, and accumulates the probabilities.
    """
    table = _action_table(code)
    p = ch.as_array()
    weights = p[table.comps].prod(axis=1)
    out = np.bincount(table.cls, weights=weights, minlength=4)
    return PauliChannel.from_array(out / out.sum())


def sample_effective_channel(
    code: StabilizerCode, ch: PauliChannel, n_samples: int, seed: int = 0
) -> np.ndarray:
    """Monte Carlo estimate of the logical class distribution (cross-check)."""
    table = _action_table(code)
    rng = np.random.default_rng(seed)
    draws = rng.choice(4, size=(n_samples, code.n), p=ch.as_array())
    pow4 = 4 ** np.arange(code.n - 1, -1, -1, dtype=np.int64)
    codes_idx = draws.astype(np.int64) @ pow4
    counts = np.bincount(table.cls[codes_idx], minlength=4)
    return counts / n_samples


@dataclass
class FlowTrajectory:
    """Channel iterates with their quality values and the final verdict."""

    levels: list[tuple[int, PauliChannel, float]]
    verdict: str  # converged-to-identity | converged-to-noise | max-iterations

    @property
    def channels(self) -> list[PauliChannel]:
        return [c for _, c, _ in self.levels]


def flow(
    code: StabilizerCode,
    ch: PauliChannel,
    max_levels: int = 40,
    tol: float = 1e-12,
) -> FlowTrajectory:
    """Iterate the effective channel until an attractor is resolved.

    Verdict is identity when the total error probability drops below tol,
    noise when the quality stops decreasing while still far from identity.
    """
    levels = [(0, ch, ch.quality())]
    current = ch
    if current.error_probability() < tol:
        return FlowTrajectory(levels, "converged-to-identity")
    for r in range(1, max_levels + 1):
        nxt = effective_channel(code, current)
        levels.append((r, nxt, nxt.quality()))
        if nxt.error_probability() < tol:
            return FlowTrajectory(levels, "converged-to-identity")
        stalled = abs(nxt.quality() - current.quality()) < tol
        if stalled and nxt.quality() < 1.0 - 1e-6:
            return FlowTrajectory(levels, "converged-to-noise")
        current = nxt
    return FlowTrajectory(levels, "max-iterations")


def order_parameter(
    code: StabilizerCode, ch: PauliChannel, max_levels: int = 40
) -> int:
    """1 on the identity basin, 0 on the noise basin; raises near threshold."""
    traj = flow(code, ch, max_levels=max_levels)
    if traj.verdict == "converged-to-identity":
        return 1
    if traj.verdict == "converged-to-noise":
        return 0
    raise IndeterminateFlowError(
        f"flow unresolved after {max_levels} levels (threshold proximity)"
    )


def threshold(
    code: StabilizerCode,
    family,
    p_lo: float,
    p_hi: float,
    width: float = 1e-3,
    max_levels: int = 200,
) -> float:
    """Bisect the order parameter along the one-parameter channel family.

    family: p -> PauliChannel.  Requires order 1 at p_lo and 0 at p_hi.
    Returns the bracket midpoint once the bracket is narrower than width.
    """
    if not p_lo < p_hi:
        raise ChannelError(f"invalid bracket ({p_lo}, {p_hi})")
    if order_parameter(code, family(p_lo), max_levels) != 1:
        raise ChannelError(f"order parameter at p_lo={p_lo} is not 1")
    if order_parameter(code, family(p_hi), max_levels) != 0:
        raise ChannelError(f"order parameter at p_hi={p_hi} is not 0")
    lo, hi = p_lo, p_hi
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        try:
            if order_parameter(code, family(mid), max_levels) == 1:
                lo = mid
            else:
                hi = mid
        except IndeterminateFlowError:
            raise IndeterminateFlowError(
                f"indeterminate at p={mid} with bracket ({lo}, {hi})"
            ) from None
    return 0.5 * (lo + hi)


def linearize(
    code: StabilizerCode, fixed_channel: PauliChannel, delta: float = 1e-6
) -> list[tuple[complex, str]]:
    """Eigenvalues of the recursion Jacobian at a channel, tagged
    relevant (|l| > 1) or irrelevant (|l| < 1).

    Coordinates are (p_X, p_Y, p_Z) on the simplex tangent space; central
    finite differences with step delta.
    """
    if delta <= 0 or delta < 1e-14:
        raise ChannelError("finite-difference step underflow")
    base = fixed_channel.as_array()

    def apply(vec3):
        arr = np.empty(4)
        arr[1:] = vec3
        arr[0] = 1.0 - vec3.sum()
        # polynomial map; evaluated off-simplex during differencing
        table = _action_table(code)
        weights = arr[table.comps].prod(axis=1)
        out = np.bincount(table.cls, weights=weights, minlength=4)
        return out[1:]

    x0 = base[1:]
    jac = np.zeros((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = delta
        jac[:, j] = (apply(x0 + e) - apply(x0 - e)) / (2 * delta)
    evals = np.linalg.eigvals(jac)
    return [
        (complex(ev), "relevant" if abs(ev) > 1.0 else "irrelevant")
        for ev in sorted(evals, key=lambda v: -abs(v))
    ]


INFINITE = math.inf


@dataclass
class MemorySupport:
    """Result of the epsilon-memory-support functional."""

    size: float  # lattice units^d; math.inf when below threshold
    r_star: int | None
    verdict: str

    @property
    def infinite(self) -> bool:
        return math.isinf(self.size)


def memory_support(
    code: StabilizerCode,
    ch: PauliChannel,
    epsilon: float,
    L: float = 1.0,
    d: int = 1,
    max_levels: int = 40,
) -> MemorySupport:
    """Largest lattice volume able to sustain the emergent block spin.

    r* is the first concatenation level whose quality drops below epsilon;
    the supported volume is tile_size^r* * L^d.  Infinite on the identity
    basin.
    """
    if not 0.0 < epsilon < 1.0:
        raise ChannelError("epsilon must lie in (0, 1)")
    traj = flow(code, ch, max_levels=max_levels)
    if traj.verdict == "converged-to-identity":
        return MemorySupport(INFINITE, None, traj.verdict)
    if traj.verdict == "max-iterations":
        raise IndeterminateFlowError("flow unresolved; memory support undefined")
    for r, _, q in traj.levels:
        if q < epsilon:
            return MemorySupport(float(code.n**r * L**d), r, traj.verdict)
    # quality stalled above epsilon without reaching it: keep iterating the
    # stalled value is the noise fixed point, which is below any epsilon < 1
    # for a strictly noisy attractor; if not reached, report the last level.
    r_last = traj.levels[-1][0]
    return MemorySupport(float(code.n**r_last * L**d), r_last, traj.verdict)


@dataclass
class LevelRecord:
    level: int
    residual: list[str]  # logical class per block at this level


def classify_error(
    code: StabilizerCode, levels: int, error: Pauli
) -> tuple[str, list[LevelRecord]]:
    """Deterministic decode of a Pauli error through r concatenation levels.

    Qubits are grouped into consecutive blocks of code.n per level; each
    block's residual logical class becomes the single-qubit component at the
    next level.  Correctable iff the final residual is logical identity.
    """
    if code.k != 1:
        raise ChannelError("classification requires k=1")
    n_phys = code.n**levels
    if error.n != n_phys:
        raise ChannelError(f"error must act on {n_phys} qubits")
    table = _action_table(code)
    # map (x, z) bit pairs to component codes 0..3 = I,X,Y,Z
    bits_to_comp = np.array([0, 1, 3, 2], dtype=np.uint8)
    comps = bits_to_comp[error.x_bits + 2 * error.z_bits]
    records: list[LevelRecord] = []
    pow4 = 4 ** np.arange(code.n - 1, -1, -1, dtype=np.int64)
    for lvl in range(1, levels + 1):
        blocks = comps.reshape(-1, code.n).astype(np.int64)
        idx = blocks @ pow4
        nxt = table.cls[idx]
        records.append(
            LevelRecord(lvl, [_LOGICAL_NAMES[c] for c in nxt])
        )
        comps = nxt.astype(np.uint8)
    verdict = "correctable" if comps[0] == 0 else "fatal"
    return verdict, records
