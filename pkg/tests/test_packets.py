import pytest
from hypothesis import given, settings, strategies as st

from coxeter_packets.alcove import alcove_automorphisms
from coxeter_packets.arith import InadmissibleResidueField, TorusPoint, all_torus_points, center_order
from coxeter_packets.exact import field_of_order
from coxeter_packets.packets import (
    GenericTuple,
    WhittakerTuple,
    base_change_tuple,
    build_packets,
    enumerate_generic,
    enumerate_whittaker,
    generic_members,
    generic_members_direct,
    lambda_action_check,
    permute_tuple,
    rep_classes,
    scaling_fixes,
    torus_act,
    verify_base_change,
    verify_genericity,
)
from coxeter_packets.rootsys import build

INSTANCES = [("A1", 3), ("A1", 5), ("A1", 7), ("A2", 5), ("A2", 7), ("B2", 3), ("B2", 5), ("G2", 5), ("G2", 7)]


def orbit_oracle(d, q):
    """T(k)-orbits and T_ad(k) x Lambda-orbits by plain field arithmetic."""
    F = field_of_order(q)
    tuples = enumerate_generic(d, q)
    t_pts = list(all_torus_points(d, F, "T"))
    ad_pts = list(all_torus_points(d, F, "T_ad"))
    perms = [a.perm for a in alcove_automorphisms(d)]

    def orbit(chi, moves):
        seen, todo = {chi}, [chi]
        while todo:
            x = todo.pop()
            for m in moves:
                y = m(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def partition(moves):
        parts, covered = set(), set()
        for chi in tuples:
            if chi not in covered:
                o = orbit(chi, moves)
                parts.add(o)
                covered |= o
        return parts

    t_moves = [lambda x, t=t: torus_act(t, x) for t in t_pts]
    ext_moves = [lambda x, t=t: torus_act(t, x) for t in ad_pts]
    ext_moves += [lambda x, p=p: permute_tuple(p, x) for p in perms]
    return partition(t_moves), partition(t_moves + ext_moves)


def test_enumerate_examples():
    assert len(enumerate_generic(build("A1"), 5)) == 16
    assert len(enumerate_generic(build("A2"), 5)) == 64
    only = enumerate_generic(build("A1"), 2)
    assert len(only) == 1 and only[0].codes == (1, 1)


def test_enumeration_is_ordered():
    codes = [c.codes for c in enumerate_generic(build("A2"), 5)]
    assert codes == sorted(codes)


def test_tuples_must_be_generic():
    with pytest.raises(ValueError):
        GenericTuple.of("A1", 5, (0, 1))
    with pytest.raises(ValueError):
        GenericTuple.of("A1", 5, (1, 1, 1))
    with pytest.raises(ValueError):
        WhittakerTuple.of("A2", 5, (1, 0))


def test_torus_act_identity():
    d = build("A2")
    F = field_of_order(7)
    chi = GenericTuple.of(d, 7, (3, 5, 6))
    assert torus_act(TorusPoint.identity(d, F), chi) == chi


def test_torus_act_a1_coroot():
    d = build("A1")
    F = field_of_order(5)
    chi = GenericTuple.of(d, 5, (1, 1))
    out = torus_act(TorusPoint(d, "T", (F(2),)), chi)
    assert out.codes == (4, 4)  # 2^2 = 4 and 4^{-1} = 4 in F_5


def test_torus_act_a2_adjoint():
    d = build("A2")
    F = field_of_order(7)
    chi = GenericTuple.of(d, 7, (1, 1, 1))
    out = torus_act(TorusPoint(d, "T_ad", (F(3), F(1))), chi)
    assert out.codes == (3, 1, 5)  # 3^{-1} = 5


def test_torus_act_rejects_mismatched_data():
    chi = GenericTuple.of("A2", 7, (1, 1, 1))
    with pytest.raises(ValueError):
        torus_act(TorusPoint.identity(build("A2"), field_of_order(5)), chi)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("A2", 7), ("B2", 5), ("G2", 7)]), st.data())
def test_torus_action_is_an_action(inst, data):
    name, q = inst
    d = build(name)
    F = field_of_order(q)
    unit = st.integers(1, q - 1).map(F.element)
    lattice = data.draw(st.sampled_from(["T", "T_ad"]))
    s = TorusPoint(d, lattice, tuple(data.draw(unit) for _ in range(d.rank)))
    t = TorusPoint(d, lattice, tuple(data.draw(unit) for _ in range(d.rank)))
    chi = GenericTuple(d, F, tuple(data.draw(unit) for _ in range(d.rank + 1)))
    assert torus_act(s * t, chi) == torus_act(s, torus_act(t, chi))


@pytest.mark.parametrize("name,q,classes", [("A1", 5, 8), ("A1", 2, 1), ("A2", 7, 18)])
def test_rep_class_examples(name, q, classes):
    assert len(rep_classes(build(name), q)) == classes


@pytest.mark.parametrize("name,q", INSTANCES)
def test_classes_and_packets_match_field_oracle(name, q):
    d = build(name)
    classes, packets = orbit_oracle(d, q)
    table = build_packets(d, q)
    # canonical representatives are the least members of the oracle's orbits
    assert sorted(min(o, key=lambda c: c.codes).codes for o in classes) == [c.codes for c in table.classes]
    oracle_packets = sorted(sorted(min(o, key=lambda c: c.codes).codes for o in classes if o <= p)
                            for p in packets)
    assert oracle_packets == sorted(sorted(m.codes for m in p.members) for p in table.packets)


@pytest.mark.parametrize("name,q", INSTANCES)
def test_packet_structure(name, q):
    d = build(name)
    table = build_packets(d, q)
    assert table.report.passed
    assert set(table.packet_sizes) == {center_order(d, q)}
    assert len(table.packets) == q - 1
    assert len(table.classes) * table.class_orbit_size == (q - 1) ** (d.rank + 1)


@pytest.mark.parametrize("name,q,count,size", [("A1", 5, 4, 2), ("A1", 3, 2, 2), ("A2", 5, 4, 1)])
def test_packet_examples(name, q, count, size):
    table = build_packets(build(name), q)
    assert len(table.packets) == count and set(table.packet_sizes) == {size}


def test_build_packets_refuses_bad_q():
    with pytest.raises(InadmissibleResidueField):
        build_packets(build("A2"), 3)


@pytest.mark.parametrize("psi", [(1,), (2,)])
def test_generic_members_a1(psi):
    table = build_packets(build("A1"), 5)
    w = WhittakerTuple.of("A1", 5, psi)
    assert [generic_members(p, w) for p in table.packets] == [1, 1, 1, 1]


@pytest.mark.parametrize("name,q", [("A1", 5), ("A2", 5), ("B2", 3), ("G2", 5)])
def test_generic_members_against_direct_search(name, q):
    d = build(name)
    table = build_packets(d, q)
    for psi in enumerate_whittaker(d, q):
        for p in table.packets:
            assert generic_members(p, psi) == generic_members_direct(p, psi) == 1


@pytest.mark.parametrize("name,q", INSTANCES)
def test_genericity_report(name, q):
    assert verify_genericity(build(name), q).passed


def test_generic_members_rejects_mismatch():
    table = build_packets(build("A1"), 5)
    with pytest.raises(ValueError):
        generic_members(table.packets[0], WhittakerTuple.of("A1", 7, (1,)))


@pytest.mark.parametrize("name,q", [("A2", 7), ("B2", 5)])
def test_scaling_rigidity(name, q):
    F = field_of_order(q)
    for chi in enumerate_generic(build(name), q)[:20]:
        for i in range(len(chi.coeffs)):
            for u in F.units():
                assert scaling_fixes(chi, i, u) == (u == F.one())


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4", "D5", "E6", "E7", "B3"])
def test_lambda_action_is_homomorphism(name):
    assert lambda_action_check(build(name)).passed


def test_permute_tuple_a1_swaps():
    chi = GenericTuple.of("A1", 5, (2, 3))
    (auto,) = [a for a in alcove_automorphisms(build("A1")) if any(a.coset)]
    assert permute_tuple(auto.perm, chi).codes == (3, 2)


def test_base_change_identity():
    chi = GenericTuple.of("A2", 7, (2, 3, 4))
    assert base_change_tuple(chi, 1) == chi
    with pytest.raises(ValueError):
        base_change_tuple(chi, 0)


def test_base_change_a1():
    chi = GenericTuple.of("A1", 5, (2, 3))
    bc = base_change_tuple(chi, 2)
    assert bc.q == 25
    big = field_of_order(25)
    assert bc.coeffs == (big(2), big(3))  # prime-field elements embed as themselves
    assert all(bc.coeffs)


def test_base_change_equivariance_exhaustive():
    d = build("A1")
    F = field_of_order(3)
    big = F.extension(2)
    for chi in enumerate_generic(d, 3):
        for t in all_torus_points(d, F, "T"):
            assert base_change_tuple(torus_act(t, chi), 2) == torus_act(t.base_change(big), base_change_tuple(chi, 2))
    assert verify_base_change(d, 3, 2).passed


def test_base_change_sampled_is_reproducible():
    a = verify_base_change(build("A2"), 7, 2, fraction=0.1, seed=0)
    b = verify_base_change(build("A2"), 7, 2, fraction=0.1, seed=0)
    assert a.passed and a.to_dict() == b.to_dict()
    assert a.entries[0].details["tuples"] == 22


def test_base_change_in_non_prime_field():
    d = build("A1")
    chi = enumerate_generic(d, 4)[5]
    bc = base_change_tuple(chi, 2)
    assert bc.q == 16
    F, big = field_of_order(4), field_of_order(16)
    for t in all_torus_points(d, F, "T"):
        assert base_change_tuple(torus_act(t, chi), 2) == torus_act(t.base_change(big), bc)


def test_table_serialises():
    d = build_packets(build("A1"), 5).to_dict()
    assert d["packets_per_label"] == 4 and d["packet_size"] == [2]
    assert d["packets"][0] == ["(1,1)", "(2,3)"]
