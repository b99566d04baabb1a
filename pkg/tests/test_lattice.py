import numpy as np
import pytest

from perqwalk.errors import ConfigError
from perqwalk.walk.lattice import (
    WALL,
    Boundary,
    Direction,
    Edge,
    LatticeSpec,
    Site,
    basis_index,
    edge_count_closed_form,
    edge_of,
    edges,
    neighbor,
    site_of_index,
    slot_table,
    transpose_site,
    transpose_spec,
)

VARIANTS = ["open,open", "periodic,periodic", "open,periodic", "periodic,open"]


def test_parse_and_str_round_trip():
    spec = LatticeSpec.parse("15x16:periodic,open")
    assert (spec.M, spec.N) == (15, 16)
    assert spec.boundary_s is Boundary.PERIODIC
    assert spec.boundary_t is Boundary.OPEN
    assert str(spec) == "15x16:periodic,open"
    assert LatticeSpec.parse(str(spec)) == spec
    assert spec.dim == 4 * 15 * 16


@pytest.mark.parametrize("text", ["2x5:open,open", "3x3:open", "3by3:open,open", "3x3:open,closed"])
def test_parse_rejects_bad_lattices(text):
    with pytest.raises(ConfigError):
        LatticeSpec.parse(text)


def test_unknown_boundary_lists_known_ones():
    with pytest.raises(ConfigError, match="periodic, open"):
        Boundary.parse("twisted")


def test_direction_involution_and_deltas():
    assert ~Direction.L is Direction.R
    assert ~Direction.D is Direction.U
    for c in Direction:
        assert ~~c is c
        ds, dt = c.delta
        ods, odt = (~c).delta
        assert (ds + ods, dt + odt) == (0, 0)


def test_neighbor_wraps_on_torus_and_hits_wall_on_carpet():
    torus = LatticeSpec.parse("3x4:periodic,periodic")
    carpet = LatticeSpec.parse("3x4:open,open")
    assert neighbor(Site(0, 0), Direction.L, torus) == Site(2, 0)
    assert neighbor(Site(0, 3), Direction.U, torus) == Site(0, 0)
    assert neighbor(Site(0, 0), Direction.L, carpet) is WALL
    assert neighbor(Site(0, 3), Direction.U, carpet) is WALL
    assert neighbor(Site(1, 1), Direction.R, carpet) == Site(2, 1)


@pytest.mark.parametrize("bounds", VARIANTS)
def test_edge_of_is_symmetric(bounds):
    spec = LatticeSpec.parse(f"3x4:{bounds}")
    for s in range(spec.M):
        for t in range(spec.N):
            for c in Direction:
                edge = edge_of(Site(s, t), c, spec)
                if edge is WALL:
                    continue
                other = neighbor(Site(s, t), c, spec)
                assert edge_of(other, ~c, spec) == edge


@pytest.mark.parametrize("bounds", VARIANTS)
def test_edge_count_matches_closed_form(bounds):
    spec = LatticeSpec.parse(f"3x4:{bounds}")
    assert len(edges(spec)) == edge_count_closed_form(spec)
    assert len(set(edges(spec))) == len(edges(spec))


def test_carpet_3x3_has_twelve_edges(carpet3):
    assert len(edges(carpet3)) == 12
    assert Edge(Site(0, 0), "s") in edges(carpet3)


def test_basis_index_round_trip(torus3):
    for index in range(torus3.dim):
        site, c = site_of_index(index, torus3)
        assert basis_index(site, c, torus3) == index
    with pytest.raises(ValueError):
        site_of_index(torus3.dim, torus3)


@pytest.mark.parametrize("bounds", VARIANTS)
def test_slot_table_invariants(bounds):
    spec = LatticeSpec.parse(f"4x3:{bounds}")
    table = slot_table(spec)
    d = spec.dim
    # every edge controls exactly two directed slots
    assert np.all(np.bincount(table.edge[table.edge >= 0], minlength=table.n_edges) == 2)
    # full configuration and all-broken configuration are permutations
    assert np.array_equal(np.sort(table.step), np.arange(d))
    assert np.array_equal(np.sort(table.reflect), np.arange(d))
    assert np.array_equal(table.reflect[table.reflect], np.arange(d))
    # wall slots reflect
    assert np.array_equal(table.step[table.wall], table.reflect[table.wall])


def test_slot_table_edges_agree_with_edge_of():
    spec = LatticeSpec.parse("3x4:open,periodic")
    table = slot_table(spec)
    index = {edge: k for k, edge in enumerate(edges(spec))}
    for x in range(spec.dim):
        site, c = site_of_index(x, spec)
        edge = edge_of(site, c, spec)
        assert table.edge[x] == (-1 if edge is WALL else index[edge])


def test_transpose():
    spec = LatticeSpec.parse("15x16:open,periodic")
    assert transpose_spec(spec) == LatticeSpec.parse("16x15:periodic,open")
    assert transpose_site(Site(2, 5), Direction.L) == (Site(5, 2), Direction.D)
    assert transpose_site(Site(2, 5), Direction.R) == (Site(5, 2), Direction.U)
