"""Phase-exact n-qubit Pauli arithmetic in the binary symplectic representation.

A Pauli operator is stored as i^e * prod_j X_j^{x_j} Z_j^{z_j} with e mod 4,
so Y = i*X*Z carries phase exponent 1.  All products, commutators and group
reductions are exact, including the global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_PHASE_STR = {0: "", 1: "i", 2: "-", 3: "-i"}
_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_CHAR = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliError(ValueError):
    """Raised on malformed Pauli input (length mismatch, bad text form)."""


class MinusIdentityError(ValueError):
    """Raised when -1 turns out to be a member of a purported stabilizer group."""


@dataclass(frozen=True)
class Pauli:
    """An n-qubit Pauli operator i^phase_exp * prod X^x Z^z."""

    x_bits: np.ndarray
    z_bits: np.ndarray
    phase_exp: int = 0

    def __post_init__(self):
        x = np.asarray(self.x_bits, dtype=np.uint8) & 1
        z = np.asarray(self.z_bits, dtype=np.uint8) & 1
        if x.shape != z.shape or x.ndim != 1:
            raise PauliError("x_bits and z_bits must be equal-length vectors")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)
        self.x_bits.setflags(write=False)
        self.z_bits.setflags(write=False)

    @property
    def n(self) -> int:
        return self.x_bits.shape[0]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8), 0)

    @classmethod
    def from_string(cls, s: str) -> "Pauli":
        """Parse text form: optional sign prefix (-, i, -i) then I/X/Y/Z per qubit."""
        s = s.strip()
        phase = 0
        if s.startswith("-i"):
            phase, s = 3, s[2:]
        elif s.startswith("i") and len(s) > 1 and s[1] in "IXYZ":
            phase, s = 1, s[1:]
        elif s.startswith("-"):
            phase, s = 2, s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if not s or any(c not in _CHAR_TO_BITS for c in s):
            raise PauliError(f"invalid Pauli string {s!r}")
        x = np.array([_CHAR_TO_BITS[c][0] for c in s], dtype=np.uint8)
        z = np.array([_CHAR_TO_BITS[c][1] for c in s], dtype=np.uint8)
        # Each Y in the text contributes one factor of i to the stored phase.
        n_y = int(np.count_nonzero(x & z))
        return cls(x, z, (phase + n_y) % 4)

    def to_string(self) -> str:
        n_y = int(np.count_nonzero(self.x_bits & self.z_bits))
        head = _PHASE_STR[(self.phase_exp - n_y) % 4]
        body = "".join(
            _BITS_TO_CHAR[(int(a), int(b))] for a, b in zip(self.x_bits, self.z_bits)
        )
        return head + body

    def __str__(self) -> str:
        return self.to_string()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pauli):
            return NotImplemented
        return (
            self.phase_exp == other.phase_exp
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.x_bits.tobytes(), self.z_bits.tobytes(), self.phase_exp))

    def equal_up_to_phase(self, other: "Pauli") -> bool:
        return np.array_equal(self.x_bits, other.x_bits) and np.array_equal(
            self.z_bits, other.z_bits
        )

    def is_identity(self) -> bool:
        return self.phase_exp == 0 and self.weight == 0

    def hermitian_phase(self) -> "Pauli":
        """Same bit content with the phase that makes the operator Hermitian."""
        w = int(np.count_nonzero(self.x_bits & self.z_bits))
        return Pauli(self.x_bits, self.z_bits, w % 2)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (n small); qubit 0 is the most significant bit."""
        if self.n > 12:
            raise PauliError("dense form limited to n <= 12")
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1]], dtype=complex)
        for a, b in zip(self.x_bits, self.z_bits):
            m = np.eye(2, dtype=complex)
            if a:
                m = X @ m
            if b:
                m = m @ Z
            out = np.kron(out, m)
        return (1j ** self.phase_exp) * out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Apply to a dense 2^n state vector without materializing the matrix."""
        n = self.n
        idx = np.arange(2**n, dtype=np.int64)
        zmask = _bits_to_int(self.z_bits)
        xmask = _bits_to_int(self.x_bits)
        signs = (-1.0) ** _popcount(idx & zmask)
        out = np.empty_like(vec, dtype=complex)
        out[idx ^ xmask] = (1j**self.phase_exp) * signs * vec
        return out


def _bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << (len(bits) - 1 - i)
    return out


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.array([bin(int(v)).count("1") for v in a], dtype=np.int64)


def multiply(p: Pauli, q: Pauli) -> Pauli:
    """Exact product p*q including the global phase.

    Per qubit (X^a Z^b)(X^c Z^d) = (-1)^(b c) X^(a+c) Z^(b+d); the signs
    accumulate into the mod-4 phase exponent.
    """
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    sign_flips = int(np.count_nonzero(p.z_bits & q.x_bits)) % 2
    return Pauli(
        p.x_bits ^ q.x_bits,
        p.z_bits ^ q.z_bits,
        (p.phase_exp + q.phase_exp + 2 * sign_flips) % 4,
    )


def inverse(p: Pauli) -> Pauli:
    """The Pauli q with multiply(p, q) = identity (phase included)."""
    self_overlap = int(np.count_nonzero(p.z_bits & p.x_bits)) % 2
    return Pauli(p.x_bits, p.z_bits, (-p.phase_exp - 2 * self_overlap) % 4)


def commutes(p: Pauli, q: Pauli) -> bool:
    """True iff the symplectic inner product vanishes (operators commute)."""
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    form = int(np.count_nonzero(p.x_bits & q.z_bits)) + int(
        np.count_nonzero(p.z_bits & q.x_bits)
    )
    return form % 2 == 0


@dataclass
class StabilizerGroup:
    """A group of commuting Paulis given by an ordered generating set."""

    n: int
    generators: list[Pauli] = field(default_factory=list)

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise PauliError("generator length does not match group size")

    def check_commuting(self) -> None:
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not commutes(gens[i], gens[j]):
                    raise PauliError(
                        f"generators {i} and {j} anticommute: "
                        f"{gens[i]} vs {gens[j]}"
                    )


def _symplectic_row(p: Pauli) -> np.ndarray:
    return np.concatenate([p.x_bits, p.z_bits])


def canonicalize(group: StabilizerGroup) -> tuple[list[Pauli], int]:
    """Row-reduce the generating set over GF(2) with exact phase bookkeeping.

    Pivots scan the X block before the Z block, columns left to right, so the
    output is deterministic.  Raises MinusIdentityError if the reduction finds
    -1 in the group.
    """
    rows = list(group.generators)
    reduced: list[Pauli] = []
    pivots: list[int] = []
    for col in range(2 * group.n):
        pivot = None
        for r in rows:
            if _symplectic_row(r)[col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows.remove(pivot)
        rows = [
            multiply(pivot, r) if _symplectic_row(r)[col] else r for r in rows
        ]
        reduced = [
            multiply(pivot, g) if _symplectic_row(g)[col] else g for g in reduced
        ]
        reduced.append(pivot)
        pivots.append(col)
    for r in rows:
        if r.weight == 0 and r.phase_exp != 0:
            raise MinusIdentityError("group contains a nontrivial multiple of identity")
    # Re-sort rows by pivot column for a canonical ordering.
    order = np.argsort(pivots)
    reduced = [reduced[i] for i in order]
    return reduced, len(reduced)


def contains(group: StabilizerGroup, p: Pauli) -> tuple[str, int]:
    """Decide membership of p in the group generated by group.generators.

    Returns (status, phase_exp) with status one of "member",
    "member_up_to_phase", "not_member".  For a member-up-to-phase,
    i^phase_exp * (some group element) equals p.
    """
    reduced, _ = canonicalize(group)
    pivot_cols = [int(np.flatnonzero(_symplectic_row(g))[0]) for g in reduced]
    r = p
    for g, col in zip(reduced, pivot_cols):
        if _symplectic_row(r)[col]:
            r = multiply(inverse(g), r)
    if r.weight != 0:
        return "not_member", 0
    if r.phase_exp == 0:
        return "member", 0
    return "member_up_to_phase", r.phase_exp


def random_pauli(rng: np.random.Generator, n: int) -> Pauli:
    x = rng.integers(0, 2, size=n, dtype=np.uint8)
    z = rng.integers(0, 2, size=n, dtype=np.uint8)
    return Pauli(x, z, int(rng.integers(0, 4)))


def stabilizer_entropy(
    n: int, generators: Sequence[Pauli], region: Iterable[int]
) -> int:
    """Entanglement entropy in bits of `region` for the pure stabilizer state
    fixed by `generators` (which must have GF(2) rank n).

    S(A) = |A| - log2 |S_A| with S_A the subgroup supported inside A;
    log2 |S_A| = rank(G) - rank(G restricted to the complement of A).
    """
    region = sorted(set(region))
    mat = np.array([_symplectic_row(g) for g in generators], dtype=np.uint8)
    full_rank = gf2_rank(mat)
    if full_rank != n:
        raise ValueError(f"state is not pure: rank {full_rank} != {n}")
    comp = [q for q in range(n) if q not in region]
    cols = [q for q in comp] + [n + q for q in comp]
    sub_rank = gf2_rank(mat[:, cols]) if cols else 0
    # |S_A| = 2^(full_rank - sub_rank): kernel of the restriction to A-complement.
    return len(region) - (full_rank - sub_rank)


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2)."""
    m = (np.array(mat, dtype=np.uint8) & 1).copy()
    rank = 0
    rows, cols = m.shape if m.ndim == 2 else (0, 0)
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank
