"""Affine generic characters as coefficient tuples, and their packets.

A character is recorded by its coefficients on the affine simple root lines,
indexed by Pi = (alpha_1, ..., alpha_r, -eta).  ``Ad(t)`` scales the
coefficient at pi by pi(t).  Orbit work runs on discrete logarithms with
respect to the least generator of F_q^x; the public objects carry field
elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .alcove import (
    affine_gradients,
    alcove_automorphism,
    alcove_automorphisms,
    compose_perms,
    coweight_coset_representatives,
)
from .arith import ResidueParams, TorusPoint, all_torus_points, center_order
from .exact import FieldElement, FiniteField, field_of_order
from .report import Report
from .rootsys import RootDatum, build

LogVector = Tuple[int, ...]


def _coerce(fld: FiniteField, v) -> FieldElement:
    if isinstance(v, FieldElement):
        return fld(v)
    return fld.element(int(v))


@dataclass(frozen=True)
class GenericTuple:
    """Coefficients on Pi; every coefficient nonzero."""

    datum: RootDatum = field(repr=False)
    field: FiniteField = field(repr=False)
    coeffs: Tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.datum.rank + 1:
            raise ValueError(f"expected {self.datum.rank + 1} coefficients")
        if any(c.field is not self.field for c in self.coeffs):
            raise ValueError("coefficients lie in different fields")
        if any(not c for c in self.coeffs):
            raise ValueError("affine generic characters have nonzero coefficients")

    @classmethod
    def of(cls, d: Union[RootDatum, str], q: int, values: Sequence) -> "GenericTuple":
        """Build from element codes (integers are codes in F_q)."""
        d = build(d) if isinstance(d, str) else d
        fld = field_of_order(q)
        return cls(d, fld, tuple(_coerce(fld, v) for v in values))

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def codes(self) -> Tuple[int, ...]:
        return tuple(c.code for c in self.coeffs)

    @property
    def delta_part(self) -> Tuple[FieldElement, ...]:
        return self.coeffs[:-1]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.codes) + ")"


@dataclass(frozen=True)
class WhittakerTuple:
    """Coefficients on the simple roots Delta; every coefficient nonzero."""

    datum: RootDatum = field(repr=False)
    field: FiniteField = field(repr=False)
    coeffs: Tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.datum.rank:
            raise ValueError(f"expected {self.datum.rank} coefficients")
        if any(c.field is not self.field for c in self.coeffs):
            raise ValueError("coefficients lie in different fields")
        if any(not c for c in self.coeffs):
            raise ValueError("Whittaker coefficients must be nonzero")

    @classmethod
    def of(cls, d: Union[RootDatum, str], q: int, values: Sequence) -> "WhittakerTuple":
        d = build(d) if isinstance(d, str) else d
        fld = field_of_order(q)
        return cls(d, fld, tuple(_coerce(fld, v) for v in values))

    @property
    def codes(self) -> Tuple[int, ...]:
        return tuple(c.code for c in self.coeffs)


def _units_by_code(fld: FiniteField) -> List[FieldElement]:
    return sorted(fld.units())


def enumerate_generic(d: RootDatum, q: int) -> List[GenericTuple]:
    """All (q-1)^(rank+1) generic tuples, lexicographic in element codes.

    Only needs q to be a prime power; the coprimality with h matters for
    packets, not for listing tuples.
    """
    ResidueParams.of(q)
    fld = field_of_order(q)
    units = _units_by_code(fld)
    return [GenericTuple(d, fld, c) for c in product(units, repeat=d.rank + 1)]


def enumerate_whittaker(d: RootDatum, q: int) -> List[WhittakerTuple]:
    fld = field_of_order(q)
    units = _units_by_code(fld)
    return [WhittakerTuple(d, fld, c) for c in product(units, repeat=d.rank)]


def torus_act(t: TorusPoint, chi: GenericTuple) -> GenericTuple:
    """Ad(t) chi: the coefficient at pi is multiplied by pi(t)."""
    if t.datum != chi.datum or t.field is not chi.field:
        raise ValueError("torus point and tuple live over different data")
    grads = affine_gradients(chi.datum)
    return GenericTuple(chi.datum, chi.field,
                        tuple(c * t.root_value(g) for c, g in zip(chi.coeffs, grads)))


def permute_tuple(perm: Sequence[int], chi: GenericTuple) -> GenericTuple:
    """Transport along an alcove automorphism: the coefficient at pi moves to perm(pi)."""
    new = [None] * len(chi.coeffs)
    for i, c in enumerate(chi.coeffs):
        new[perm[i]] = c
    return GenericTuple(chi.datum, chi.field, tuple(new))


def scaling_fixes(chi: GenericTuple, index: int, u: FieldElement) -> bool:
    """Whether multiplying coefficient ``index`` by u leaves chi unchanged."""
    c = chi.coeffs[index]
    return c * u == c


def base_change_tuple(chi: GenericTuple, f: int) -> GenericTuple:
    """The same coefficients viewed in F_{q^f}."""
    if f < 1:
        raise ValueError("degree must be at least 1")
    big = chi.field.extension(f)
    return GenericTuple(chi.datum, big, tuple(chi.field.embed(c, big) for c in chi.coeffs))


# -- discrete-log model ------------------------------------------------------

class _LogModel:
    """Tuples as exponent vectors in (Z/(q-1))^(r+1) with respect to a fixed generator."""

    def __init__(self, d: RootDatum, q: int):
        self.datum = d
        self.field = field_of_order(q)
        self.n = q - 1
        g = self.field.generator
        self.exp: List[FieldElement] = []
        x = self.field.one()
        for _ in range(self.n):
            self.exp.append(x)
            x = x * g
        self.log: Dict[int, int] = {e.code: k for k, e in enumerate(self.exp)}
        r = d.rank
        grads = affine_gradients(d)
        # alpha_j^vee(g) scales pi by g^<pi, alpha_j^vee>; omega_j^vee(g) by g^<pi, omega_j^vee>
        self.t_gens = [tuple(d.cartan.apply(gr)[j] % self.n for gr in grads) for j in range(r)]
        self.t_ad_gens = [tuple(gr[j] % self.n for gr in grads) for j in range(r)]
        self.lambda_perms = [a.perm for a in alcove_automorphisms(d) if any(a.coset)]

    def to_logs(self, chi: GenericTuple) -> LogVector:
        return tuple(self.log[c.code] for c in chi.coeffs)

    def to_tuple(self, v: LogVector) -> GenericTuple:
        return GenericTuple(self.datum, self.field, tuple(self.exp[k] for k in v))

    def codes(self, v: LogVector) -> Tuple[int, ...]:
        return tuple(self.exp[k].code for k in v)

    def shift(self, v: LogVector, g: LogVector) -> LogVector:
        return tuple((a + b) % self.n for a, b in zip(v, g))

    @staticmethod
    def permute(v: LogVector, perm: Sequence[int]) -> LogVector:
        out = [0] * len(v)
        for i, x in enumerate(v):
            out[perm[i]] = x
        return tuple(out)

    @cached_property
    def delta_image(self) -> frozenset:
        """Logs of {(alpha(t))_{alpha in Delta} : t in T(k)}, the subgroup generated by Cartan rows."""
        r = self.datum.rank
        gens = [g[:r] for g in self.t_gens]
        seen = {(0,) * r}
        frontier = list(seen)
        while frontier:
            nxt = []
            for v in frontier:
                for g in gens:
                    w = tuple((a + b) % self.n for a, b in zip(v, g))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return frozenset(seen)


@lru_cache(maxsize=None)
def _model(d: RootDatum, q: int) -> _LogModel:
    return _LogModel(d, q)


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller key as root so the result does not depend on visit order
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> Dict:
        out: Dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _closure(start: Iterable[LogVector], moves) -> set:
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for m in moves:
                w = m(v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def _t_orbits(model: _LogModel, points: Iterable[LogVector]) -> Dict[LogVector, List[LogVector]]:
    """T(k)-orbits meeting ``points``, keyed by the member with least element codes."""
    moves = [lambda v, g=g: model.shift(v, g) for g in model.t_gens]
    pts = _closure(points, moves)
    uf = _UnionFind(sorted(pts))
    for v in pts:
        for m in moves:
            uf.union(v, m(v))
    out = {}
    for members in uf.groups().values():
        members.sort(key=model.codes)
        out[members[0]] = members
    return out


def rep_classes(d: RootDatum, q: int, tuples: Optional[Iterable[GenericTuple]] = None) -> List[GenericTuple]:
    """Canonical (lexicographically least) representatives of the T(k)-orbits meeting ``tuples``."""
    model = _model(d, q)
    if tuples is None:
        pts = [model.to_logs(c) for c in enumerate_generic(d, q)]
    else:
        pts = [model.to_logs(c) for c in tuples]
    reps = sorted(_t_orbits(model, pts), key=model.codes)
    return [model.to_tuple(v) for v in reps]


# -- packets -----------------------------------------------------------------

@dataclass(frozen=True)
class Packet:
    datum: RootDatum = field(repr=False)
    field: FiniteField = field(repr=False)
    members: Tuple[GenericTuple, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class PacketTable:
    """Packets for one central character; the table is the same for every label."""

    datum: RootDatum
    q: int
    classes: List[GenericTuple]
    class_orbit_size: int
    packets: List[Packet]
    central_character_labels: int
    report: Report

    @property
    def packet_sizes(self) -> List[int]:
        return [len(p) for p in self.packets]

    def to_dict(self) -> dict:
        return {
            "type": str(self.datum.type),
            "q": self.q,
            "central_character_labels": self.central_character_labels,
            "classes_per_label": len(self.classes),
            "torus_orbit_size": self.class_orbit_size,
            "packets_per_label": len(self.packets),
            "packet_size": sorted(set(self.packet_sizes)),
            "packets": [[str(m) for m in p.members] for p in self.packets],
            "checks": self.report.to_dict(),
        }


def build_packets(d: RootDatum, q: int) -> PacketTable:
    """Exhaustive T(k)-classes and their orbits under T_ad(k) and the alcove automorphisms."""
    ResidueParams.of(q, d)
    model = _model(d, q)
    r, n = d.rank, q - 1
    z = center_order(d, q)
    rep = Report(f"packets {d.type} q={q}")

    all_pts = list(product(range(n), repeat=r + 1))
    orbits = _t_orbits(model, all_pts)
    sizes = {len(m) for m in orbits.values()}
    orbit_size = sizes.pop() if len(sizes) == 1 else -1
    rep.add("torus orbits have uniform size", orbit_size > 0, sizes=sorted({len(m) for m in orbits.values()}))
    rep.add("classes x orbit size = (q-1)^(rank+1)", len(orbits) * orbit_size == n ** (r + 1),
            classes=len(orbits), orbit_size=orbit_size, tuples=n ** (r + 1))

    class_of = {v: key for key, members in orbits.items() for v in members}
    keys = sorted(orbits, key=model.codes)
    uf = _UnionFind(keys)
    moves = [lambda v, g=g: model.shift(v, g) for g in model.t_ad_gens]
    moves += [lambda v, p=p: model.permute(v, p) for p in model.lambda_perms]
    for key in keys:
        for m in moves:
            uf.union(key, class_of[m(key)])
    groups = sorted((sorted(g, key=model.codes) for g in uf.groups().values()),
                    key=lambda g: model.codes(g[0]))
    packets = [Packet(d, model.field, tuple(model.to_tuple(v) for v in g)) for g in groups]

    sizes = sorted({len(p) for p in packets})
    rep.add("every packet has size |Z(k)|", sizes == [z], sizes=sizes, center_order=z)
    rep.add("q-1 packets per central character", len(packets) == n, packets=len(packets), expected=n)
    rep.extend(lambda_action_check(d))
    return PacketTable(d, q, [model.to_tuple(v) for v in keys], orbit_size, packets, z, rep)


def lambda_action_check(d: RootDatum) -> Report:
    """The permutations of Pi from P^vee/Q^vee compose like the group: perm(l + m) = perm(l) o perm(m)."""
    rep = Report(f"lambda action {d.type}")
    reps = coweight_coset_representatives(d)
    perm = {lam: alcove_automorphism(d, lam).perm for lam in reps}
    bad = []
    for a in reps:
        for b in reps:
            s = tuple(x + y for x, y in zip(a, b))
            if alcove_automorphism(d, s).perm != compose_perms(perm[a], perm[b]):
                bad.append((a, b))
    rep.add("alcove automorphisms act on Pi through P^vee/Q^vee",
            not bad and len(set(perm.values())) == len(reps), group_order=len(reps), failures=bad)
    return rep


def generic_members(packet: Packet, psi: WhittakerTuple) -> int:
    """Members whose Delta-part lies in the T(k)-orbit of psi."""
    if psi.datum != packet.datum or psi.field is not packet.field:
        raise ValueError("Whittaker tuple and packet live over different data")
    model = _model(packet.datum, packet.field.order)
    target = tuple(model.log[c.code] for c in psi.coeffs)
    count = 0
    for chi in packet.members:
        v = model.to_logs(chi)[:-1]
        if tuple((a - b) % model.n for a, b in zip(target, v)) in model.delta_image:
            count += 1
    return count


def generic_members_direct(packet: Packet, psi: WhittakerTuple) -> int:
    """Same count by searching all of T(k) with field arithmetic (slow; used as a check)."""
    d = packet.datum
    pts = list(all_torus_points(d, packet.field, "T"))
    count = 0
    for chi in packet.members:
        if any(torus_act(t, chi).delta_part == psi.coeffs for t in pts):
            count += 1
    return count


def verify_genericity(d: RootDatum, q: int, table: Optional[PacketTable] = None) -> Report:
    table = table or build_packets(d, q)
    rep = Report(f"gen {d.type} q={q}")
    bad = []
    psis = enumerate_whittaker(d, q)
    for psi in psis:
        for k, p in enumerate(table.packets):
            c = generic_members(p, psi)
            if c != 1:
                bad.append((psi.codes, k, c))
    rep.add("one generic member per packet for every psi", not bad,
            packets=len(table.packets), whittaker_tuples=len(psis), failures=bad[:10])
    return rep


def verify_base_change(d: RootDatum, q: int, f: int, fraction: Optional[float] = None,
                       seed: int = 0) -> Report:
    """base_change(Ad(t) chi) = Ad(embed t) base_change(chi) over all t in T(k)."""
    rep = Report(f"base change {d.type} q={q} f={f}")
    tuples = enumerate_generic(d, q)
    if fraction is not None:
        k = max(1, round(len(tuples) * fraction))
        tuples = random.Random(seed).sample(tuples, k)
    big = field_of_order(q).extension(f)
    pts = list(all_torus_points(d, field_of_order(q), "T"))
    bad = 0
    for chi in tuples:
        bc = base_change_tuple(chi, f)
        for t in pts:
            if base_change_tuple(torus_act(t, chi), f) != torus_act(t.base_change(big), bc):
                bad += 1
    rep.add("base change commutes with the torus action", bad == 0,
            tuples=len(tuples), torus_points=len(pts), failures=bad)
    return rep
