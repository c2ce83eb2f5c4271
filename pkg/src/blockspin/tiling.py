"""Kadanoff blockings of the periodic square lattice by code tiles.

The plus-pentomino and 5x1 brick tilings both block the torus into 5-site
tiles whose centers form the Gaussian-integer sublattice (2+i)Z[i]; the
blocking rescales the lattice by sqrt(5) and rotates it by +-arctan(1/2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class TilingError(ValueError):
    """Raised for invalid extents, overlaps, gaps, or non-similar centers."""


PLUS_OFFSETS = ((0, 0), (0, 1), (1, 0), (0, -1), (-1, 0))  # center, N, E, S, W
BRICK_OFFSETS = ((0, 0), (1, 0), (2, 0), (3, 0), (4, 0))


@dataclass
class Lattice:
    """Periodic integer lattice, d in {1, 2}, extent L per axis."""

    dimension: int
    extent: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise TilingError("only d=1,2 supported")
        if self.extent < 1:
            raise TilingError("extent must be positive")

    @property
    def sites(self) -> list[tuple[int, ...]]:
        L = self.extent
        if self.dimension == 1:
            return [(x,) for x in range(L)]
        return [(x, y) for y in range(L) for x in range(L)]


@dataclass
class Tiling:
    """Exact cover of the L x L torus by translates of one tile shape.

    assignment maps each site to (tile_id, position index 1..|shape|);
    centers[tile_id] is the tile's anchor site.
    """

    L: int
    tile_shape: tuple[tuple[int, int], ...]
    centers: list[tuple[int, int]]
    assignment: dict[tuple[int, int], tuple[int, int]]
    rescale: float
    rotation: float
    name: str = "custom"

    @property
    def tile_count(self) -> int:
        return len(self.centers)

    def to_json(self) -> str:
        doc = {
            "L": self.L,
            "name": self.name,
            "tile_shape": [list(o) for o in self.tile_shape],
            "centers": [list(c) for c in self.centers],
            "assignment": {
                f"{x},{y}": [t, p] for (x, y), (t, p) in sorted(self.assignment.items())
            },
            "rescale": self.rescale,
            "rotation": self.rotation,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _build_assignment(
    L: int, offsets, centers
) -> dict[tuple[int, int], tuple[int, int]]:
    assignment: dict[tuple[int, int], tuple[int, int]] = {}
    for tid, (cx, cy) in enumerate(centers):
        for pos, (dx, dy) in enumerate(offsets, start=1):
            site = ((cx + dx) % L, (cy + dy) % L)
            if site in assignment:
                raise TilingError(f"overlap at {site}")
            assignment[site] = (tid, pos)
    if len(assignment) != L * L:
        raise TilingError("cover has gaps")
    return assignment


def plus_tiling(L: int, handedness: int = +1) -> Tiling:
    """Plus-pentomino exact cover; centers 2x+y=0 (mod 5) for right-handed,
    x+2y=0 for left-handed.  Rescale sqrt(5), rotation +-arctan(1/2)."""
    if L % 5 != 0:
        raise TilingError("plus tiling needs L = 0 mod 5")
    if handedness not in (+1, -1):
        raise TilingError("handedness must be +1 or -1")
    if handedness == +1:
        centers = [(x, y) for y in range(L) for x in range(L) if (2 * x + y) % 5 == 0]
    else:
        centers = [(x, y) for y in range(L) for x in range(L) if (x + 2 * y) % 5 == 0]
    assignment = _build_assignment(L, PLUS_OFFSETS, centers)
    return Tiling(
        L=L,
        tile_shape=PLUS_OFFSETS,
        centers=centers,
        assignment=assignment,
        rescale=math.sqrt(5.0),
        rotation=handedness * math.atan2(1.0, 2.0),
        name="plus-right" if handedness == +1 else "plus-left",
    )


def brick_tiling(L: int, row_offset: int = 2) -> Tiling:
    """Horizontal 5x1 bricks with origins x = row_offset*y (mod 5).

    row_offset 2 reproduces the right-handed plus center sublattice;
    row_offset 3 gives the mirror.
    """
    if L % 5 != 0:
        raise TilingError("brick tiling needs L = 0 mod 5")
    if row_offset not in (2, 3):
        raise TilingError("row_offset must be 2 or 3")
    centers = [
        (x, y) for y in range(L) for x in range(L) if (x - row_offset * y) % 5 == 0
    ]
    assignment = _build_assignment(L, BRICK_OFFSETS, centers)
    rotation = math.atan2(1.0, 2.0) if row_offset == 2 else -math.atan2(1.0, 2.0)
    return Tiling(
        L=L,
        tile_shape=BRICK_OFFSETS,
        centers=centers,
        assignment=assignment,
        rescale=math.sqrt(5.0),
        rotation=rotation,
        name="brick",
    )


def trivial_tiling(L: int) -> Tiling:
    """1x1 tiles; rescale 1, rotation 0."""
    centers = [(x, y) for y in range(L) for x in range(L)]
    return Tiling(
        L=L,
        tile_shape=((0, 0),),
        centers=centers,
        assignment=_build_assignment(L, ((0, 0),), centers),
        rescale=1.0,
        rotation=0.0,
        name="trivial",
    )


def _signed_rep(v: int, L: int) -> int:
    v %= L
    return v - L if v > L // 2 else v


def validate_tiling(t: Tiling) -> tuple[bool, float, float]:
    """Verify exact cover and fit a similar sublattice basis to the centers.

    Returns (True, rescale, rotation) on success; raises TilingError with a
    distinct message for overlap/gap/non-similar failures.  The reported
    rotation is the representative in (-pi/4, pi/4].
    """
    L = t.L
    seen: set[tuple[int, int]] = set()
    for tid, (cx, cy) in enumerate(t.centers):
        for dx, dy in t.tile_shape:
            site = ((cx + dx) % L, (cy + dy) % L)
            if site in seen:
                raise TilingError(f"overlap at site {site}")
            seen.add(site)
    if len(seen) != L * L:
        missing = next(
            (x, y) for y in range(L) for x in range(L) if (x, y) not in seen
        )
        raise TilingError(f"gap at site {missing}")
    expected = _build_assignment(L, t.tile_shape, t.centers)
    if t.assignment != expected:
        bad = next(s for s in expected if t.assignment.get(s) != expected[s])
        raise TilingError(f"assignment does not cover site {bad} consistently")
    center_set = {(c[0] % L, c[1] % L) for c in t.centers}
    if (0, 0) not in center_set:
        raise TilingError("center sublattice must contain the origin")
    # candidate basis vectors: minimal-norm nonzero centers in signed reps
    reps = sorted(
        {
            (_signed_rep(x, L), _signed_rep(y, L))
            for (x, y) in center_set
            if (x, y) != (0, 0)
        },
        key=lambda v: (v[0] ** 2 + v[1] ** 2, v),
    )
    if not reps:
        raise TilingError("no nonzero centers to fit")
    min_norm = reps[0][0] ** 2 + reps[0][1] ** 2
    candidates = [v for v in reps if v[0] ** 2 + v[1] ** 2 == min_norm]
    best = None
    for a, b in candidates:
        generated = _similar_sublattice(a, b, L)
        if generated == center_set:
            theta = math.atan2(b, a)
            if -math.pi / 4 < theta <= math.pi / 4:
                if best is None or theta > best[2]:
                    best = (a, b, theta)
    if best is None:
        raise TilingError("centers do not form a similar (rotated-scaled) sublattice")
    a, b, theta = best
    return True, math.sqrt(a * a + b * b), theta


def _similar_sublattice(a: int, b: int, L: int) -> set[tuple[int, int]]:
    """All integer combinations of (a, b) and (-b, a) on the torus."""
    out: set[tuple[int, int]] = set()
    frontier = [(0, 0)]
    while frontier:
        x, y = frontier.pop()
        if (x, y) in out:
            continue
        out.add((x, y))
        for dx, dy in ((a, b), (-b, a), (-a, -b), (b, -a)):
            nxt = ((x + dx) % L, (y + dy) % L)
            if nxt not in out:
                frontier.append(nxt)
    return out


@dataclass
class ConcatenatedTiling:
    """r-level hierarchical blocking; each site gets a position path and a
    top-level tile index."""

    base: Tiling
    levels: int
    addresses: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = field(
        default_factory=dict
    )

    @property
    def top_tile_count(self) -> int:
        return len({tid for tid, _ in self.addresses.values()})


def concatenate_tiling(t: Tiling, levels: int) -> ConcatenatedTiling:
    """Iterate the blocking on successive center lattices.

    Supported for the sqrt(5) tilings (plus/brick): the level-j centers form
    (2+i)^j Z[i] on the torus, and the level-(j+1) tile offsets are the base
    offsets scaled by (2+i)^j.  Requires 5^levels | L^2 (enforced as
    L = 0 mod 5^levels).
    """
    if levels < 1:
        raise TilingError("levels must be >= 1")
    if len(t.tile_shape) != 5:
        raise TilingError("concatenation implemented for 5-site tilings")
    L = t.L
    if L % (5**levels) != 0:
        raise TilingError(f"extent {L} not divisible by 5^{levels}")
    # complex scale factor per level: 2+i for right-handed, 2-i for left
    omega = complex(2, 1) if t.rotation >= 0 else complex(2, -1)
    offsets_base = [complex(dx, dy) for dx, dy in t.tile_shape]

    level_centers: list[set[tuple[int, int]]] = [
        {(x, y) for y in range(L) for x in range(L)},
        {(c[0] % L, c[1] % L) for c in t.centers},
    ]
    for j in range(2, levels + 1):
        scale = omega**j
        prev = level_centers[j - 1]
        nxt = {
            c
            for c in prev
            if _divides_on_torus(complex(c[0], c[1]), scale, L)
        }
        level_centers.append(nxt)

    # per level map: site in level j-1 centers -> (parent center, position)
    parent_maps: list[dict[tuple[int, int], tuple[tuple[int, int], int]]] = []
    for j in range(1, levels + 1):
        scale = omega ** (j - 1)
        offs = [scale * o for o in offsets_base]
        pmap: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
        parents = level_centers[j]
        for x, y in level_centers[j - 1]:
            hits = []
            for pos, o in enumerate(offs, start=1):
                px = round((x - o.real) % L)
                py = round((y - o.imag) % L)
                if (px % L, py % L) in parents:
                    hits.append(((px % L, py % L), pos))
            if len(hits) != 1:
                raise TilingError(
                    f"level {j} blocking is not an exact cover at {(x, y)}"
                )
            pmap[(x, y)] = hits[0]
        parent_maps.append(pmap)

    top_index = {c: i for i, c in enumerate(sorted(level_centers[levels]))}
    addresses: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for site in level_centers[0]:
        path = []
        cur = site
        for pmap in parent_maps:
            cur, pos = pmap[cur]
            path.append(pos)
        addresses[site] = (top_index[cur], tuple(path))
    return ConcatenatedTiling(base=t, levels=levels, addresses=addresses)


def _divides_on_torus(c: complex, scale: complex, L: int) -> bool:
    """True iff c = scale * w (mod L) for some Gaussian integer w."""
    norm = int(round((scale * scale.conjugate()).real))
    w = c * scale.conjugate() / norm
    # candidates differ by L/norm * conj(scale) shifts; test the lattice
    for kx in range(norm):
        for ky in range(norm):
            cand = w + (kx * L + 1j * ky * L) * scale.conjugate() / norm
            if abs(cand.real - round(cand.real)) < 1e-9 and abs(
                cand.imag - round(cand.imag)
            ) < 1e-9:
                return True
    return False


def render_svg(t: Tiling, cell: int = 24) -> str:
    """SVG picture: tiles as colored unit squares, centers as rings, and the
    rescaled lattice as overlay lines."""
    L = t.L
    size = L * cell
    palette = [
        "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
        "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    ]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<!-- tiling={t.name} L={L} rescale={t.rescale:.12f} "
        f"rotation={t.rotation:.12f} -->",
    ]
    for (x, y), (tid, _pos) in sorted(t.assignment.items()):
        color = palette[tid % len(palette)]
        px, py = x * cell, (L - 1 - y) * cell
        parts.append(
            f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" '
            f'fill="{color}" stroke="#555" stroke-width="1"/>'
        )
    for cx, cy in t.centers:
        px, py = cx * cell + cell // 2, (L - 1 - cy) * cell + cell // 2
        parts.append(
            f'<circle cx="{px}" cy="{py}" r="{cell // 4}" fill="none" '
            f'stroke="#000" stroke-width="2"/>'
        )
    # rescaled lattice overlay: lines through centers along the fitted basis
    a = t.rescale * math.cos(t.rotation)
    b = t.rescale * math.sin(t.rotation)
    for cx, cy in t.centers:
        x0, y0 = cx * cell + cell // 2, (L - 1 - cy) * cell + cell // 2
        x1, y1 = x0 + a * cell, y0 - b * cell
        parts.append(
            f'<line x1="{x0}" y1="{y0}" x2="{x1:.2f}" y2="{y1:.2f}" '
            f'stroke="#1f6fb5" stroke-width="2" opacity="0.6"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
