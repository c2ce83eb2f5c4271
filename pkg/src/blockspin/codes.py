"""Concrete stabilizer codes and their machinery.

Provides the 5-qubit perfect code, toric codes on an LxL torus, dense
codeword construction, the Knill-Laflamme pairwise correctability check,
syndrome lookup tables, exact Clifford decoder synthesis, and the
tile-Hamiltonian built from the check operators.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import (
    Pauli,
    PauliError,
    StabilizerGroup,
    canonicalize,
    commutes,
    contains,
    gf2_rank,
    inverse,
    multiply,
    stabilizer_entropy,
)


class CodeError(ValueError):
    """Raised on inconsistent code definitions or unsupported queries."""


@dataclass
class StabilizerCode:
    """An [[n, k]] stabilizer code with logical operators and recovery table.

    recovery_table maps syndrome bit tuples to correction Paulis; it always
    contains the zero syndrome -> identity, and is complete only when the
    syndrome space is small enough to tabulate (see build_recovery_table).
    """

    n: int
    k: int
    stabilizer: StabilizerGroup
    logical_x: list[Pauli]
    logical_z: list[Pauli]
    recovery_table: dict[tuple[int, ...], Pauli] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.stabilizer.generators) != self.n - self.k:
            raise CodeError("expected n-k independent stabilizer generators")
        if not self.recovery_table:
            self.recovery_table = {
                (0,) * (self.n - self.k): Pauli.identity(self.n)
            }

    def validate(self) -> None:
        """Check generator independence, commutation, and logical pairing."""
        self.stabilizer.check_commuting()
        mat = np.array(
            [np.concatenate([g.x_bits, g.z_bits]) for g in self.stabilizer.generators],
            dtype=np.uint8,
        )
        if gf2_rank(mat) != self.n - self.k:
            raise CodeError("stabilizer generators are not independent")
        for i, (lx, lz) in enumerate(zip(self.logical_x, self.logical_z)):
            if commutes(lx, lz):
                raise CodeError(f"logical X/Z pair {i} must anticommute")
            for g in self.stabilizer.generators:
                if not (commutes(lx, g) and commutes(lz, g)):
                    raise CodeError(f"logical pair {i} fails to commute with checks")
        for i in range(self.k):
            for j in range(self.k):
                if i == j:
                    continue
                if not commutes(self.logical_x[i], self.logical_z[j]):
                    raise CodeError("cross logical pairs must commute")

    def syndrome(self, error: Pauli) -> tuple[int, ...]:
        return tuple(
            0 if commutes(error, g) else 1 for g in self.stabilizer.generators
        )

    def recover(self, error: Pauli) -> Pauli:
        """Residual Pauli after table lookup recovery, recovery * error."""
        s = self.syndrome(error)
        try:
            correction = self.recovery_table[s]
        except KeyError:
            raise CodeError(f"no recovery entry for syndrome {s}") from None
        return multiply(correction, error)

    def logical_class(self, residual: Pauli) -> str:
        """Classify a syndrome-free Pauli as logical I, X, Y or Z (k=1 only)."""
        if self.k != 1:
            raise CodeError("logical_class requires k=1")
        candidates = {
            "I": residual,
            "X": multiply(self.logical_x[0], residual),
            "Z": multiply(self.logical_z[0], residual),
            "Y": multiply(multiply(self.logical_x[0], self.logical_z[0]), residual),
        }
        for name, op in candidates.items():
            status, _ = contains(self.stabilizer, op)
            if status in ("member", "member_up_to_phase"):
                return name
        raise CodeError(f"{residual} carries a nonzero syndrome")

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k": self.k,
            "generators": [g.to_string() for g in self.stabilizer.generators],
            "logical_x": [p.to_string() for p in self.logical_x],
            "logical_z": [p.to_string() for p in self.logical_z],
            "recovery": {
                "".join(map(str, s)): p.to_string()
                for s, p in sorted(self.recovery_table.items())
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StabilizerCode":
        doc = json.loads(text)
        return cls(
            n=doc["n"],
            k=doc["k"],
            stabilizer=StabilizerGroup(
                doc["n"], [Pauli.from_string(s) for s in doc["generators"]]
            ),
            logical_x=[Pauli.from_string(s) for s in doc["logical_x"]],
            logical_z=[Pauli.from_string(s) for s in doc["logical_z"]],
            recovery_table={
                tuple(int(c) for c in s): Pauli.from_string(p)
                for s, p in doc["recovery"].items()
            },
        )


def _paulis_of_weight(n: int, w: int):
    """All weight-w n-qubit Paulis in lexicographic text order."""
    letters = ("X", "Y", "Z")
    for positions in itertools.combinations(range(n), w):
        for combo in itertools.product(letters, repeat=w):
            chars = ["I"] * n
            for pos, c in zip(positions, combo):
                chars[pos] = c
            yield Pauli.from_string("".join(chars))


def build_recovery_table(
    code: StabilizerCode, max_weight: int | None = None
) -> dict[tuple[int, ...], Pauli]:
    """Minimum-weight coset-leader table, ties broken lexicographically.

    Enumerates Paulis by increasing weight (text order within a weight) and
    keeps the first representative seen for each syndrome.
    """
    n_syn = 2 ** (code.n - code.k)
    if max_weight is None:
        max_weight = code.n
    table: dict[tuple[int, ...], Pauli] = {}
    for w in range(max_weight + 1):
        for p in _paulis_of_weight(code.n, w):
            s = code.syndrome(p)
            if s not in table:
                table[s] = p
                if len(table) == n_syn:
                    return table
    return table


def five_qubit_code() -> StabilizerCode:
    """The [[5,1,3]] perfect code with its standard check operators."""
    gens = [Pauli.from_string(s) for s in ("ZZXIX", "XZZXI", "IXZZX", "XIXZZ")]
    code = StabilizerCode(
        n=5,
        k=1,
        stabilizer=StabilizerGroup(5, gens),
        logical_x=[Pauli.from_string("XXXXX")],
        logical_z=[Pauli.from_string("ZZZZZ")],
    )
    code.recovery_table = build_recovery_table(code, max_weight=1)
    return code


def trivial_code() -> StabilizerCode:
    """[[1,1]] identity encoding; useful as a base case."""
    return StabilizerCode(
        n=1,
        k=1,
        stabilizer=StabilizerGroup(1, []),
        logical_x=[Pauli.from_string("X")],
        logical_z=[Pauli.from_string("Z")],
    )


def steane_code() -> StabilizerCode:
    """The [[7,1,3]] CSS code (optional constructor, same interface)."""
    strings = [
        "IIIXXXX",
        "IXXIIXX",
        "XIXIXIX",
        "IIIZZZZ",
        "IZZIIZZ",
        "ZIZIZIZ",
    ]
    code = StabilizerCode(
        n=7,
        k=1,
        stabilizer=StabilizerGroup(7, [Pauli.from_string(s) for s in strings]),
        logical_x=[Pauli.from_string("XXXXXXX")],
        logical_z=[Pauli.from_string("ZZZZZZZ")],
    )
    code.recovery_table = build_recovery_table(code, max_weight=2)
    return code


def shor_code() -> StabilizerCode:
    """The [[9,1,3]] code (optional constructor, same interface)."""
    strings = [
        "ZZIIIIIII",
        "IZZIIIIII",
        "IIIZZIIII",
        "IIIIZZIII",
        "IIIIIIZZI",
        "IIIIIIIZZ",
        "XXXXXXIII",
        "IIIXXXXXX",
    ]
    code = StabilizerCode(
        n=9,
        k=1,
        stabilizer=StabilizerGroup(9, [Pauli.from_string(s) for s in strings]),
        logical_x=[Pauli.from_string("XXXXXXXXX")],
        logical_z=[Pauli.from_string("ZZZZZZZZZ")],
    )
    code.recovery_table = build_recovery_table(code, max_weight=2)
    return code


def encode_zero(code: StabilizerCode) -> np.ndarray:
    """Dense logical-|0> amplitude vector via the stabilizer projector.

    Applies prod (1+M_i)/2 then (1+Zbar)/2 to |0...0>, normalizes, and fixes
    the global phase so the first nonzero amplitude (the all-zeros component
    when present) is positive real.
    """
    if code.n > 12:
        raise CodeError("dense codewords limited to n <= 12")
    if code.k != 1:
        raise CodeError("encode_zero requires k=1")
    vec = np.zeros(2**code.n, dtype=complex)
    vec[0] = 1.0
    for g in code.stabilizer.generators + [code.logical_z[0]]:
        vec = 0.5 * (vec + g.apply(vec))
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise CodeError("projector annihilates |0...0>")
    vec = vec / norm
    lead = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
    vec = vec * (abs(lead) / lead)
    return vec


def encode_one(code: StabilizerCode) -> np.ndarray:
    zero = encode_zero(code)
    return code.logical_x[0].apply(zero)


def check_correctable(
    code: StabilizerCode, errors: list[Pauli]
) -> tuple[bool, tuple[Pauli, Pauli] | None]:
    """Pairwise correctability criterion.

    The error set is correctable iff for every pair (Ea, Eb) the product
    Ea^dag Eb is either in the stabilizer group or anticommutes with some
    stabilizer generator.  Returns (ok, witness_pair_or_None).
    """
    for i, ea in enumerate(errors):
        for eb in errors[i:]:
            prod = multiply(inverse(ea), eb)
            if any(not commutes(prod, g) for g in code.stabilizer.generators):
                continue
            status, _ = contains(code.stabilizer, prod)
            if status == "not_member":
                return False, (ea, eb)
    return True, None


@dataclass
class CliffordDecoder:
    """A Clifford map taking the code frame to the decoded frame.

    Stored as the images of single-qubit X_j / Z_j under conjugation by the
    decoding unitary U, plus the symplectic frame data needed to build U
    densely: U maps encoded states to (data qubit) x |0...0> on n-1 ancillas.
    """

    n: int
    image_x: list[Pauli]
    image_z: list[Pauli]
    frame_in: list[Pauli]   # Xbar, Zbar, M_1.., D_1.. on the code side
    frame_out: list[Pauli]  # X1, Z1, Z_2.., X_2.. on the decoded side

    def conjugate(self, p: Pauli) -> Pauli:
        """Exact image U p U^dag, phases included."""
        if p.n != self.n:
            raise PauliError("length mismatch")
        out = Pauli.identity(self.n)
        rebuilt = Pauli.identity(self.n)
        for j in range(self.n):
            if p.x_bits[j]:
                out = multiply(out, self.image_x[j])
                rebuilt = multiply(
                    rebuilt, Pauli(_unit(self.n, j), np.zeros(self.n, np.uint8), 0)
                )
            if p.z_bits[j]:
                out = multiply(out, self.image_z[j])
                rebuilt = multiply(
                    rebuilt, Pauli(np.zeros(self.n, np.uint8), _unit(self.n, j), 0)
                )
        # p = i^delta * rebuilt; carry the residual phase over.
        delta = (p.phase_exp - rebuilt.phase_exp) % 4
        return Pauli(out.x_bits, out.z_bits, (out.phase_exp + delta) % 4)

    def to_matrix(self) -> np.ndarray:
        """Dense unitary (n <= 12), mapping code frame to product frame."""
        if self.n > 12:
            raise CodeError("dense decoder limited to n <= 12")
        return _frame_unitary(self.n, self.frame_in, self.frame_out)


def _unit(n: int, j: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.uint8)
    v[j] = 1
    return v


def _solve_gf2(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b over GF(2), or None."""
    a = (np.array(a, dtype=np.uint8) & 1).copy()
    b = (np.array(b, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for rr in range(r, rows):
            if aug[rr, c]:
                pr = rr
                break
        if pr is None:
            continue
        aug[[r, pr]] = aug[[pr, r]]
        for rr in range(rows):
            if rr != r and aug[rr, c]:
                aug[rr] ^= aug[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if aug[rr, -1]:
            return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = aug[i, -1]
    return x


def _destabilizers(code: StabilizerCode) -> list[Pauli]:
    """Hermitian D_i with <D_i, M_j> = delta_ij, commuting with logicals and
    with each other; completes the symplectic frame."""
    n = code.n
    gens = code.stabilizer.generators
    found: list[Pauli] = []
    for i in range(len(gens)):
        rows = []
        rhs = []
        for j, g in enumerate(gens):
            rows.append(np.concatenate([g.z_bits, g.x_bits]))
            rhs.append(1 if i == j else 0)
        for lp in code.logical_x + code.logical_z:
            rows.append(np.concatenate([lp.z_bits, lp.x_bits]))
            rhs.append(0)
        for d in found:
            rows.append(np.concatenate([d.z_bits, d.x_bits]))
            rhs.append(0)
        sol = _solve_gf2(np.array(rows), np.array(rhs))
        if sol is None:
            raise CodeError("destabilizer synthesis failed: inconsistent generators")
        d = Pauli(sol[:n], sol[n:]).hermitian_phase()
        found.append(d)
    return found


def _frame_unitary(
    n: int, frame_in: list[Pauli], frame_out: list[Pauli]
) -> np.ndarray:
    """Dense U with U P_in U^dag = P_out for each symplectic frame pair.

    frame layout: [Xbar-like ops (k of them are at the front paired with
    Zbar-like), ...] -- here concretely [X_L, Z_L, M_1..M_{n-1}, D_1..D_{n-1}]
    mapped to [X_1, Z_1, Z_2..Z_n, X_2..X_n].
    """
    dim = 2**n
    m = (len(frame_in) - 2) // 2
    z_like_in = [frame_in[1]] + frame_in[2 : 2 + m]
    x_like_in = [frame_in[0]] + frame_in[2 + m :]
    # Joint +1 eigenvector of the commuting z-like family = image of |0..0>.
    vec = np.zeros(dim, dtype=complex)
    rng_seed = np.random.default_rng(0)
    # project a generic vector to avoid an accidental zero component
    vec = rng_seed.normal(size=dim) + 1j * rng_seed.normal(size=dim)
    for g in z_like_in:
        vec = 0.5 * (vec + g.apply(vec))
    norm = np.linalg.norm(vec)
    if norm < 1e-9:
        raise CodeError("frame synthesis failed: empty joint eigenspace")
    vec /= norm
    lead = vec[np.flatnonzero(np.abs(vec) > 1e-9)[0]]
    vec *= abs(lead) / lead
    cols = np.zeros((dim, dim), dtype=complex)
    for basis_index in range(dim):
        state = vec
        for bitpos in range(n):
            if (basis_index >> (n - 1 - bitpos)) & 1:
                state = x_like_in[bitpos].apply(state)
        cols[:, basis_index] = state
    # U maps frame_in basis states onto computational basis states.
    return cols.conj().T


def synthesize_decoder(code: StabilizerCode) -> CliffordDecoder:
    """Clifford taking M_i -> Z_{i+1}, Xbar -> X_1, Zbar -> Z_1 exactly."""
    if code.k != 1:
        raise CodeError("decoder synthesis requires k=1")
    n = code.n
    gens = code.stabilizer.generators
    dests = _destabilizers(code)
    frame_in = [code.logical_x[0], code.logical_z[0]] + gens + dests
    frame_out = (
        [Pauli.from_string("X" + "I" * (n - 1)), Pauli.from_string("Z" + "I" * (n - 1))]
        + [
            Pauli.from_string("I" * (i + 1) + "Z" + "I" * (n - i - 2))
            for i in range(n - 1)
        ]
        + [
            Pauli.from_string("I" * (i + 1) + "X" + "I" * (n - i - 2))
            for i in range(n - 1)
        ]
    )
    image_x: list[Pauli] = []
    image_z: list[Pauli] = []
    basis_rows = np.array(
        [np.concatenate([p.x_bits, p.z_bits]) for p in frame_in], dtype=np.uint8
    )
    for j in range(n):
        for kind in ("x", "z"):
            bits = np.zeros(2 * n, dtype=np.uint8)
            if kind == "x":
                bits[j] = 1
            else:
                bits[n + j] = 1
            coeffs = _solve_gf2(basis_rows.T, bits)
            if coeffs is None:
                raise CodeError("frame does not span the Pauli group")
            rebuilt = Pauli.identity(n)
            image = Pauli.identity(n)
            for c, pin, pout in zip(coeffs, frame_in, frame_out):
                if c:
                    rebuilt = multiply(rebuilt, pin)
                    image = multiply(image, pout)
            target = Pauli(bits[:n], bits[n:], 0)
            delta = (target.phase_exp - rebuilt.phase_exp) % 4
            image = Pauli(image.x_bits, image.z_bits, (image.phase_exp + delta) % 4)
            if kind == "x":
                image_x.append(image)
            else:
                image_z.append(image)
    return CliffordDecoder(
        n=n, image_x=image_x, image_z=image_z, frame_in=frame_in, frame_out=frame_out
    )


# ---------------------------------------------------------------------------
# Toric codes


def toric_edge_index(L: int, kind: str, x: int, y: int) -> int:
    """Edge numbering on the LxL torus: horizontal edges first (y*L+x),
    then vertical edges offset by L^2."""
    x %= L
    y %= L
    base = y * L + x
    return base if kind == "h" else L * L + base


def toric_site_generator(L: int, x: int, y: int) -> Pauli:
    """X on the 4 edges incident to vertex (x, y)."""
    n = 2 * L * L
    xb = np.zeros(n, dtype=np.uint8)
    for idx in (
        toric_edge_index(L, "h", x, y),
        toric_edge_index(L, "h", x - 1, y),
        toric_edge_index(L, "v", x, y),
        toric_edge_index(L, "v", x, y - 1),
    ):
        xb[idx] ^= 1
    return Pauli(xb, np.zeros(n, dtype=np.uint8), 0)


def toric_plaquette_generator(L: int, x: int, y: int) -> Pauli:
    """Z on the 4 boundary edges of the face whose lower-left vertex is (x, y)."""
    n = 2 * L * L
    zb = np.zeros(n, dtype=np.uint8)
    for idx in (
        toric_edge_index(L, "h", x, y),
        toric_edge_index(L, "h", x, y + 1),
        toric_edge_index(L, "v", x, y),
        toric_edge_index(L, "v", x + 1, y),
    ):
        zb[idx] ^= 1
    return Pauli(np.zeros(n, dtype=np.uint8), zb, 0)


def toric_code(L: int) -> StabilizerCode:
    """Toric code on 2L^2 edge qubits, k=2.

    The independent generating set drops the site and plaquette at
    (L-1, L-1); the full translation-invariant families are available via
    toric_site_generator / toric_plaquette_generator.
    """
    if L < 2:
        raise CodeError("toric code needs L >= 2")
    n = 2 * L * L
    gens = []
    for y in range(L):
        for x in range(L):
            if (x, y) != (L - 1, L - 1):
                gens.append(toric_site_generator(L, x, y))
    for y in range(L):
        for x in range(L):
            if (x, y) != (L - 1, L - 1):
                gens.append(toric_plaquette_generator(L, x, y))
    zb1 = np.zeros(n, dtype=np.uint8)
    for x in range(L):
        zb1[toric_edge_index(L, "h", x, 0)] = 1
    zb2 = np.zeros(n, dtype=np.uint8)
    for y in range(L):
        zb2[toric_edge_index(L, "v", 0, y)] = 1
    xb1 = np.zeros(n, dtype=np.uint8)
    for y in range(L):
        xb1[toric_edge_index(L, "h", 0, y)] = 1
    xb2 = np.zeros(n, dtype=np.uint8)
    for x in range(L):
        xb2[toric_edge_index(L, "v", x, 0)] = 1
    zeros = np.zeros(n, dtype=np.uint8)
    return StabilizerCode(
        n=n,
        k=2,
        stabilizer=StabilizerGroup(n, gens),
        logical_x=[Pauli(xb1, zeros, 0), Pauli(xb2, zeros, 0)],
        logical_z=[Pauli(zeros, zb1, 0), Pauli(zeros, zb2, 0)],
    )


# ---------------------------------------------------------------------------
# Tile Hamiltonian


@dataclass
class TileHamiltonian:
    """H = -sum_i K_i M_i over pairwise-commuting check operators, K_i > 0."""

    couplings: list[float]
    terms: list[Pauli]

    def __post_init__(self):
        if len(self.couplings) != len(self.terms):
            raise CodeError("one coupling per term required")
        if any(k <= 0 for k in self.couplings):
            raise CodeError("couplings must be positive")
        for i in range(len(self.terms)):
            for j in range(i + 1, len(self.terms)):
                if not commutes(self.terms[i], self.terms[j]):
                    raise CodeError("tile-Hamiltonian terms must commute")


def tile_hamiltonian_spectrum(
    h: TileHamiltonian, atol: float = 1e-10
) -> tuple[float, int]:
    """(ground energy, ground-space dimension) by dense diagonalization."""
    if not h.terms:
        raise CodeError("empty tile-Hamiltonian")
    n = h.terms[0].n
    if n > 12:
        raise CodeError("dense spectrum limited to n <= 12")
    mat = np.zeros((2**n, 2**n), dtype=complex)
    for k, m in zip(h.couplings, h.terms):
        mat -= k * m.to_matrix()
    evals = np.linalg.eigvalsh(mat)
    ground = float(evals[0])
    degeneracy = int(np.count_nonzero(evals < ground + atol))
    return ground, degeneracy


def reduced_state_entropy(code: StabilizerCode, region: list[int]) -> int:
    """Entanglement entropy (bits) of a region of the logical-|0> codeword."""
    gens = code.stabilizer.generators + code.logical_z
    return stabilizer_entropy(code.n, gens, region)
