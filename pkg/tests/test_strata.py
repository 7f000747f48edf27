import pytest

from lagrangian_variety.bd import Triple, enumerate_triples
from lagrangian_variety.chevalley import build_lagrangian, intersect_with_diagonal
from lagrangian_variety.lagrlin import twisted_graphs
from lagrangian_variety.rootdata import TorusElement, build_root_system
from lagrangian_variety.strata import (
    OrbitLabel,
    bb_orbit_reps,
    census,
    component_maximality,
    eps_cartan,
    eps_of,
    gdelta_orbit_reps,
    irreducible_components,
    lagr_gh_census,
    orbit_closure,
    orbit_dim,
    realized_parities,
    same_gdelta_orbit,
    stratum_dim,
    torus_sample,
    wonderful_orbits,
)

EMPTY = Triple((), (), ())


def test_sl2_census(A1):
    result = census(A1)

    assert len(result.rows) == 3
    assert len(result.components) == 2
    assert sorted(row.stratum_dim for row in result.components) == [2, 3]
    assert not result.notes


def test_sl2_excluded_stratum_lies_in_the_closed_component(A1):
    result = census(A1)

    containers = component_maximality(A1, result)

    assert containers == {"({},{},-) eps=0": "({a1},{a1},a1>a1) eps=0"}


def test_sl3_census_reports_the_component_count(A2):
    result = census(A2)

    assert len(result.components) == 8
    assert any("usually quoted" in note for note in result.notes)


def test_census_as_dict(A1):
    payload = census(A1).as_dict()

    assert payload["type"] == "A1"
    assert len(payload["triples"]) == 2
    assert set(payload["triples"][0]) == {"S", "T", "d", "eps", "orbitDim", "stratumDim", "isComponent", "boundary"}
    assert len(census(A1).as_dict(strata=True)["triples"]) == 3


@pytest.mark.parametrize("spec", ["A1", "A2", "A3", "B2", "G2"])
def test_stratum_dim_matches_bundle_count(spec):
    rs = build_root_system(spec)
    for triple in enumerate_triples(rs):
        z = rs.rank - len(triple.S)
        assert stratum_dim(rs, triple) == rs.dimension + z * (z - 3) // 2
        assert orbit_dim(rs, triple) == rs.dimension - z


@pytest.mark.parametrize("spec, expected", [("A1", (1, 2)), ("A2", (4, 2)), ("A3", (9, 2))])
def test_lagrangians_of_g_plus_h(spec, expected):
    assert lagr_gh_census(build_root_system(spec)) == expected


def test_both_parities_realized_for_sl2_cartan(A1):
    found = realized_parities(A1, EMPTY)

    assert sorted(found) == [0, 1]


@pytest.mark.parametrize("spec", ["A1", "A2"])
def test_eps_matches_cartan_formula(spec):
    rs = build_root_system(spec)
    for triple in enumerate_triples(rs):
        for V in twisted_graphs(rs, triple.S, triple.T, triple.d):
            assert eps_of(rs, triple, V) == eps_cartan(rs, triple, V)


def test_orbit_closure_of_open_sl3_orbit(A2):
    triple = Triple((0, 1), (0, 1), ((0, 0), (1, 1)))
    (V,) = twisted_graphs(A2, triple.S, triple.T, triple.d)

    closure = orbit_closure(A2, OrbitLabel("GG", triple, V, 0))

    assert [label.dim for label in closure] == [8, 7, 7, 6]
    assert closure[-1].triple == EMPTY


def test_orbit_closure_needs_gg_label(A1):
    with pytest.raises(ValueError):
        orbit_closure(A1, OrbitLabel("Stratum", EMPTY))


def test_unknown_orbit_kind():
    with pytest.raises(ValueError):
        OrbitLabel("Leaf", EMPTY)


def test_wonderful_compactification_orbits(A2):
    orbits = wonderful_orbits(A2, ((0, 0), (1, 1)))

    assert len(orbits) == 4
    assert orbits[0].triple.S == (0, 1)


def test_torus_sample_is_seeded():
    first = torus_sample(2, seed=7, samples=4)

    assert first == torus_sample(2, seed=7, samples=4)
    assert len(first) == 4
    assert not any(m.is_identity for m in first)


def test_same_gdelta_orbit_is_reflexive(A2):
    triple = Triple((0,), (1,), ((0, 1),))
    V = twisted_graphs(A2, triple.S, triple.T, triple.d)[0]
    for m in torus_sample(2, samples=3):
        label = OrbitLabel("GDelta", triple, V, m=m)
        assert same_gdelta_orbit(A2, label, label)


def test_torus_is_absorbed_on_the_closed_orbit(A1):
    V = twisted_graphs(A1, (), (), ())[0]

    labels = gdelta_orbit_reps(A1, EMPTY, V)

    assert [str(label.v) for label in labels] == ["e", "s1"]
    assert all(label.m.is_identity for label in labels)


def test_torus_separates_orbits_on_the_open_orbit(A1, model_A1):
    triple = Triple((0,), (0,), ((0, 0),))
    (V,) = twisted_graphs(A1, triple.S, triple.T, triple.d)
    m = TorusElement((2,))

    assert not same_gdelta_orbit(A1, OrbitLabel("GDelta", triple, V), OrbitLabel("GDelta", triple, V, m=m))
    # dim(l meet g_Delta) is constant on G_Delta-orbits
    plain = intersect_with_diagonal(build_lagrangian(model_A1, triple, V))
    moved = intersect_with_diagonal(build_lagrangian(model_A1, triple, V, m=m))
    assert (plain.dim, moved.dim) == (3, 1)


def test_irreducible_component_labels(A1):
    components = irreducible_components(A1)

    assert {label.kind for label in components} == {"Component"}
    assert sorted(label.dim for label in components) == [2, 3]


def test_bb_orbits_are_w_times_coset_representatives(A2):
    triple = Triple((0,), (1,), ((0, 1),))

    assert len(bb_orbit_reps(A2, triple)) == 6 * 3


def test_sl3_strata_lie_in_component_closures(A2):
    result = census(A2)

    containers = component_maximality(A2, result)

    assert set(containers.values()) <= {f"{row.triple} eps={row.eps}" for row in result.components}
    assert len(containers) == len(result.rows) - len(result.components)
