"""
Lattice geometry for M x N grids with per-axis periodic or open boundaries.

Basis contract: |s, t, c> has index 4*(s*N + t) + c with c in (L, D, U, R).
The s axis is horizontal (L/R), the t axis vertical (D/U).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import lru_cache
from typing import Dict, List, NamedTuple, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from perqwalk.errors import ConfigError


# ---- Value types ------------------------------------------------------------


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"

    @classmethod
    def parse(cls, raw: Union[str, "Boundary"]) -> "Boundary":
        if isinstance(raw, Boundary):
            return raw
        try:
            return cls(str(raw).strip().lower())
        except ValueError as exc:
            raise ConfigError(
                f"Unknown boundary '{raw}'. "
                f"Known boundaries: {', '.join(b.value for b in cls)}"
            ) from exc


class Direction(IntEnum):
    L = 0
    D = 1
    U = 2
    R = 3

    @property
    def opposite(self) -> "Direction":
        """The involution ~: L<->R, D<->U."""
        return Direction(3 - int(self))

    def __invert__(self) -> "Direction":  # type: ignore[override]
        return self.opposite

    @property
    def delta(self) -> Tuple[int, int]:
        return _DELTAS[int(self)]


_DELTAS: Tuple[Tuple[int, int], ...] = ((-1, 0), (0, -1), (0, 1), (1, 0))
_DS = np.array([dx for dx, _ in _DELTAS], dtype=np.int64)
_DT = np.array([dy for _, dy in _DELTAS], dtype=np.int64)


class Site(NamedTuple):
    s: int
    t: int


@dataclass(frozen=True)
class Edge:
    """
    Undirected lattice edge, named by its canonical endpoint.

    - site: the endpoint with the smaller coordinate along `axis` (before wrap)
    - axis: "s" joins (s,t)-(s+1,t), "t" joins (s,t)-(s,t+1)
    """
    site: Site
    axis: str


class Wall:
    """The exterior of an open boundary. A permanently absent edge."""

    _instance: "Wall | None" = None

    def __new__(cls) -> "Wall":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "WALL"


WALL = Wall()


@dataclass(frozen=True)
class LatticeSpec:
    """
    Lattice dimensions and per-axis boundary type.

    - M: extent along s
    - N: extent along t
    - boundary_s / boundary_t: periodic (torus-like) or open (carpet-like)
    """
    M: int
    N: int
    boundary_s: Boundary = Boundary.PERIODIC
    boundary_t: Boundary = Boundary.PERIODIC

    def __post_init__(self) -> None:
        if self.M < 3 or self.N < 3:
            raise ConfigError(f"lattice extents must be >= 3, got {self.M}x{self.N}")
        object.__setattr__(self, "boundary_s", Boundary.parse(self.boundary_s))
        object.__setattr__(self, "boundary_t", Boundary.parse(self.boundary_t))

    # ---- Derived properties -------------------------------------------------

    @property
    def n_sites(self) -> int:
        return self.M * self.N

    @property
    def dim(self) -> int:
        return 4 * self.M * self.N

    @property
    def periodic_s(self) -> bool:
        return self.boundary_s is Boundary.PERIODIC

    @property
    def periodic_t(self) -> bool:
        return self.boundary_t is Boundary.PERIODIC

    @property
    def is_torus(self) -> bool:
        return self.periodic_s and self.periodic_t

    @property
    def is_carpet(self) -> bool:
        return not (self.periodic_s or self.periodic_t)

    def contains(self, site: Site) -> bool:
        return 0 <= site[0] < self.M and 0 <= site[1] < self.N

    # ---- String form --------------------------------------------------------

    def __str__(self) -> str:
        return f"{self.M}x{self.N}:{self.boundary_s.value},{self.boundary_t.value}"

    @classmethod
    def parse(cls, text: str) -> "LatticeSpec":
        """Parse "MxN:<s-boundary>,<t-boundary>", e.g. "15x16:periodic,periodic"."""
        try:
            size, bounds = text.strip().split(":", 1)
            m, n = (int(x) for x in size.lower().split("x", 1))
            b_s, b_t = bounds.split(",", 1)
        except ValueError as exc:
            raise ConfigError(
                f"cannot parse lattice '{text}', expected 'MxN:<s-boundary>,<t-boundary>'"
            ) from exc
        return cls(m, n, Boundary.parse(b_s), Boundary.parse(b_t))


# ---- Geometry ---------------------------------------------------------------


def _check_site(site: Site, spec: LatticeSpec) -> Site:
    if not spec.contains(site):
        raise ValueError(f"site {tuple(site)} outside lattice {spec}")
    return Site(int(site[0]), int(site[1]))


def neighbor(site: Site, c: Direction, spec: LatticeSpec) -> Union[Site, Wall]:
    """m (+) c, wrapping on periodic axes; WALL when the hop leaves an open axis."""
    s, t = _check_site(site, spec)
    ds, dt = Direction(c).delta
    s2, t2 = s + ds, t + dt
    if not 0 <= s2 < spec.M:
        if not spec.periodic_s:
            return WALL
        s2 %= spec.M
    if not 0 <= t2 < spec.N:
        if not spec.periodic_t:
            return WALL
        t2 %= spec.N
    return Site(s2, t2)


def edge_of(site: Site, c: Direction, spec: LatticeSpec) -> Union[Edge, Wall]:
    """
    The undirected edge crossed by the hop (site, c), or WALL.

    edge_of(m, c) == edge_of(m (+) c, ~c) whenever both are defined.
    """
    target = neighbor(site, c, spec)
    if target is WALL:
        return WALL
    s, t = _check_site(site, spec)
    c = Direction(c)
    if c is Direction.R:
        return Edge(Site(s, t), "s")
    if c is Direction.L:
        return Edge(Site(target.s, t), "s")
    if c is Direction.U:
        return Edge(Site(s, t), "t")
    return Edge(Site(s, target.t), "t")


def basis_index(site: Site, c: Direction, spec: LatticeSpec) -> int:
    s, t = _check_site(site, spec)
    return 4 * (s * spec.N + t) + int(c)


def site_of_index(index: int, spec: LatticeSpec) -> Tuple[Site, Direction]:
    if not 0 <= index < spec.dim:
        raise ValueError(f"basis index {index} outside [0, {spec.dim})")
    cell, c = divmod(int(index), 4)
    s, t = divmod(cell, spec.N)
    return Site(s, t), Direction(c)


# ---- Edge enumeration -------------------------------------------------------


@lru_cache(maxsize=64)
def edges(spec: LatticeSpec) -> Tuple[Edge, ...]:
    """Canonical edge list: site order, s-axis edge before t-axis edge."""
    out: List[Edge] = []
    for s in range(spec.M):
        for t in range(spec.N):
            if spec.periodic_s or s + 1 < spec.M:
                out.append(Edge(Site(s, t), "s"))
            if spec.periodic_t or t + 1 < spec.N:
                out.append(Edge(Site(s, t), "t"))
    return tuple(out)


@lru_cache(maxsize=64)
def edge_index(spec: LatticeSpec) -> Dict[Edge, int]:
    return {edge: k for k, edge in enumerate(edges(spec))}


def edge_count_closed_form(spec: LatticeSpec) -> int:
    """|E| from the lattice shape alone."""
    s_edges = spec.N * (spec.M if spec.periodic_s else spec.M - 1)
    t_edges = spec.M * (spec.N if spec.periodic_t else spec.N - 1)
    return s_edges + t_edges


# ---- Vectorized slot tables -------------------------------------------------


@dataclass(frozen=True)
class SlotTable:
    """
    Per directed basis state x = |m, c> (length d arrays):

    - step: index of |m (+) c, c>, or of the reflect image when x faces a wall
    - reflect: index of |m, ~c>
    - edge: id of the controlling edge, -1 at walls
    """
    step: NDArray[np.int64]
    reflect: NDArray[np.int64]
    edge: NDArray[np.int64]
    n_edges: int

    @property
    def wall(self) -> NDArray[np.bool_]:
        return self.edge < 0


@lru_cache(maxsize=32)
def slot_table(spec: LatticeSpec) -> SlotTable:
    M, N = spec.M, spec.N
    s = np.repeat(np.arange(M), N * 4)
    t = np.tile(np.repeat(np.arange(N), 4), M)
    c = np.tile(np.arange(4), M * N)

    s2 = s + _DS[c]
    t2 = t + _DT[c]
    inside = np.ones(spec.dim, dtype=bool)
    if spec.periodic_s:
        s2 %= M
    else:
        inside &= (s2 >= 0) & (s2 < M)
    if spec.periodic_t:
        t2 %= N
    else:
        inside &= (t2 >= 0) & (t2 < N)

    # Edge ids laid out like edges(spec).
    s_id = -np.ones((M, N), dtype=np.int64)
    t_id = -np.ones((M, N), dtype=np.int64)
    for k, edge in enumerate(edges(spec)):
        (s_id if edge.axis == "s" else t_id)[edge.site] = k

    es = np.where(c == Direction.L, s2, s)
    et = np.where(c == Direction.D, t2, t)
    es_c = np.clip(es, 0, M - 1)
    et_c = np.clip(et, 0, N - 1)
    horizontal = (c == Direction.L) | (c == Direction.R)
    edge = np.where(horizontal, s_id[es_c, et_c], t_id[es_c, et_c])
    edge = np.where(inside, edge, -1)

    reflect = 4 * (s * N + t) + (3 - c)
    hop = 4 * (np.clip(s2, 0, M - 1) * N + np.clip(t2, 0, N - 1)) + c
    step = np.where(inside, hop, reflect)

    for arr in (step, reflect, edge):
        arr.setflags(write=False)
    return SlotTable(step=step, reflect=reflect, edge=edge, n_edges=len(edges(spec)))


# ---- 90 degree relabelling --------------------------------------------------


def transpose_spec(spec: LatticeSpec) -> LatticeSpec:
    """Swap the roles of s and t (M<->N and their boundaries)."""
    return LatticeSpec(spec.N, spec.M, spec.boundary_t, spec.boundary_s)


_TRANSPOSED_DIRECTION = {
    Direction.L: Direction.D,
    Direction.D: Direction.L,
    Direction.U: Direction.R,
    Direction.R: Direction.U,
}


def transpose_site(site: Site, c: Direction) -> Tuple[Site, Direction]:
    """(s, t, c) on a lattice -> (t, s, c') on its transpose, L<->D and R<->U."""
    return Site(site[1], site[0]), _TRANSPOSED_DIRECTION[Direction(c)]
