"""Fundamental alcove geometry: barycenter, reduction, and the action of P^vee/Q^vee.

Points are rational vectors in the fundamental coweight basis.  The
affine simple roots are indexed ``0..r-1`` for ``alpha_1..alpha_r`` and
``r`` for ``1 - eta`` (gradient ``-eta``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from .exact import FiniteAbelianGroup, IntMatrix, smith_normal_form, solve_integer
from .report import Report
from .rootsys import RootDatum, coweight_quotient
from .weyl import WeylElement, identity, norm_map, reflection, simple_reflection

Point = Tuple[Fraction, ...]

MAX_REDUCTION_STEPS = 100_000


class ReductionError(RuntimeError):
    """Alcove reduction hit its step cap (never expected)."""


@dataclass(frozen=True)
class AlcovePoint:
    coords: Point

    @classmethod
    def of(cls, coords: Sequence) -> "AlcovePoint":
        return cls(tuple(Fraction(x) for x in coords))

    def affine_root_values(self, d: RootDatum) -> Tuple[Fraction, ...]:
        """(alpha_1(x), ..., alpha_r(x), 1 - eta(x))."""
        eta = d.highest_root
        return self.coords + (1 - sum(c * x for c, x in zip(eta, self.coords)),)

    def in_closed_alcove(self, d: RootDatum) -> bool:
        return all(v >= 0 for v in self.affine_root_values(d))

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


@dataclass(frozen=True)
class AffineTransform:
    """x -> L x + translation, with L the coweight action of ``linear``."""

    linear: WeylElement
    translation: Point

    def __call__(self, x: Sequence) -> Point:
        lx = self.linear.coweight_matrix.apply(tuple(Fraction(v) for v in x))
        return tuple(a + b for a, b in zip(lx, self.translation))

    def compose(self, inner: "AffineTransform") -> "AffineTransform":
        """self o inner."""
        lin = self.linear * inner.linear
        return AffineTransform(lin, self(inner.translation))

    def is_identity(self) -> bool:
        return self.linear.is_identity() and not any(self.translation)

    @classmethod
    def identity(cls, d: RootDatum) -> "AffineTransform":
        return cls(identity(d), (Fraction(0),) * d.rank)

    @classmethod
    def translation_by(cls, d: RootDatum, v: Sequence) -> "AffineTransform":
        return cls(identity(d), tuple(Fraction(x) for x in v))


def affine_simple_reflection(d: RootDatum, j: int) -> AffineTransform:
    """Reflection in the wall of affine simple root j (j = rank means 1 - eta)."""
    r = d.rank
    if j < r:
        return AffineTransform(simple_reflection(d, j), (Fraction(0),) * r)
    eta = d.highest_root
    # x -> x - (eta(x) - 1) eta^vee
    return AffineTransform(reflection(d, eta), tuple(Fraction(c) for c in d.coroot_coweight_coords(eta)))


def affine_gradients(d: RootDatum) -> List[Tuple[int, ...]]:
    return list(d.simple_roots) + [tuple(-c for c in d.highest_root)]


def affine_constants(d: RootDatum) -> List[int]:
    return [0] * d.rank + [1]


def barycenter(d: RootDatum) -> AlcovePoint:
    """sum over simple alpha of h^{-1} omega_alpha^vee."""
    h = d.coxeter_number
    return AlcovePoint(tuple(Fraction(1, h) for _ in range(d.rank)))


def reduce_to_alcove(d: RootDatum, x: Sequence) -> Tuple[AffineTransform, AlcovePoint]:
    """Fold x into the closed fundamental alcove by affine simple reflections.

    Always reflects in the lowest-index violated wall; each reflection
    strictly decreases the number of affine hyperplanes separating the point
    from the alcove.
    """
    x = tuple(Fraction(v) for v in x)
    if len(x) != d.rank:
        raise ValueError(f"point has {len(x)} coordinates, expected {d.rank}")
    a = AffineTransform.identity(d)
    refl = [affine_simple_reflection(d, j) for j in range(d.rank + 1)]
    for _ in range(MAX_REDUCTION_STEPS):
        vals = AlcovePoint(x).affine_root_values(d)
        bad = next((j for j, v in enumerate(vals) if v < 0), None)
        if bad is None:
            return a, AlcovePoint(x)
        x = refl[bad](x)
        a = refl[bad].compose(a)
    raise ReductionError(f"alcove reduction did not terminate within {MAX_REDUCTION_STEPS} steps")


# -- P^vee / Q^vee -----------------------------------------------------------

@lru_cache(maxsize=None)
def _coset_snf(d: RootDatum):
    return smith_normal_form(d.cartan.T)


def coset_coordinates(d: RootDatum, lam: Sequence[int]) -> Tuple[int, ...]:
    """Image of an integral coweight in prod Z/d_i = P^vee/Q^vee (nontrivial factors only)."""
    lam = _integral_coweight(d, lam)
    snf = _coset_snf(d)
    ul = snf.U.apply(lam)
    return tuple(ul[i] % dd for i, dd in enumerate(snf.diagonal) if dd > 1)


def _integral_coweight(d: RootDatum, lam: Sequence) -> Tuple[int, ...]:
    if len(lam) != d.rank:
        raise ValueError(f"coweight has {len(lam)} coordinates, expected {d.rank}")
    out = []
    for v in lam:
        v = Fraction(v)
        if v.denominator != 1:
            raise ValueError(f"{tuple(str(Fraction(u)) for u in lam)} is not in the coweight lattice P^vee")
        out.append(int(v))
    return tuple(out)


def coweight_coset_representatives(d: RootDatum) -> List[Tuple[int, ...]]:
    """0 and the minuscule fundamental coweights (eta-coefficient 1), one per coset.

    Checked against the Smith form of the coroot matrix: the representatives
    must hit every coset exactly once.
    """
    r = d.rank
    reps = [(0,) * r]
    for j, c in enumerate(d.highest_root):
        if c == 1:
            reps.append(tuple(int(i == j) for i in range(r)))
    group = coweight_quotient(d)
    coords = {coset_coordinates(d, lam) for lam in reps}
    if len(coords) != len(reps) or len(reps) != group.order:
        raise AssertionError(f"minuscule coweights do not enumerate P^vee/Q^vee for {d}")
    return reps


@dataclass(frozen=True)
class AlcoveAutomorphism:
    coset: Tuple[int, ...]
    perm: Tuple[int, ...]  # perm[j] = index of the image of affine simple root j
    linear: WeylElement
    transform: AffineTransform

    def __iter__(self):
        return iter((self.perm, self.linear))


def alcove_automorphism(d: RootDatum, lam: Sequence) -> AlcoveAutomorphism:
    """omega = a o t_lam with a the reduction of t_lam(xi); omega stabilises the alcove."""
    lam = _integral_coweight(d, lam)
    xi = barycenter(d)
    t = AffineTransform.translation_by(d, lam)
    a, x2 = reduce_to_alcove(d, t(xi.coords))
    if x2 != xi:
        raise AssertionError(f"reduction of xi + lambda landed at {x2}, not the barycenter")
    omega = a.compose(t)
    w = omega.linear
    grads = affine_gradients(d)
    consts = affine_constants(d)
    index = {g: j for j, g in enumerate(grads)}
    perm = []
    for j, g in enumerate(grads):
        wg = w(g)
        k = index.get(wg)
        if k is None:
            raise AssertionError(f"linear part does not permute the affine gradients ({g} -> {wg})")
        # (f o omega^{-1})(y) has constant consts[j] - <w g, translation>
        c = consts[j] - sum(a_ * b_ for a_, b_ in zip(wg, omega.translation))
        if c != consts[k]:
            raise AssertionError("omega does not permute the affine simple roots")
        perm.append(k)
    return AlcoveAutomorphism(coset_coordinates(d, lam), tuple(perm), w, omega)


def compose_perms(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """(p o q)[j] = p[q[j]]."""
    return tuple(p[j] for j in q)


def perm_order(p: Sequence[int]) -> int:
    k, cur = 1, tuple(p)
    ident = tuple(range(len(p)))
    while cur != ident:
        cur = compose_perms(p, cur)
        k += 1
    return k


def alcove_automorphisms(d: RootDatum) -> List[AlcoveAutomorphism]:
    return [alcove_automorphism(d, lam) for lam in coweight_coset_representatives(d)]


def verify_lemma_d1(d: RootDatum) -> Report:
    """For w the linear part of a nontrivial alcove automorphism and O = <w>(-eta) meet Delta,
    check N(alpha) lies in the Z-span of N(beta), beta in Delta minus O, for alpha in O."""
    rep = Report(f"d1 {d}")
    autos = [a for a in alcove_automorphisms(d) if any(a.coset)]
    if not autos:
        rep.note("no nontrivial automorphisms")
        rep.add("vacuous", True)
        return rep
    r = d.rank
    neg_eta = tuple(-c for c in d.highest_root)
    for auto in autos:
        w = auto.linear
        n_mat = norm_map(w)
        orbit, v = [], neg_eta
        for _ in range(w.order):
            orbit.append(v)
            v = w(v)
        simple = d.simple_roots
        in_o = [i for i in range(r) if simple[i] in orbit]
        rest = [i for i in range(r) if i not in in_o]
        span = IntMatrix.from_columns([n_mat.column(i) for i in rest], r) if rest else None
        for i in in_o:
            target = n_mat.column(i)
            if span is None:
                ok = not any(target)
                witness = ()
            else:
                witness = solve_integer(span, target)
                ok = witness is not None
            rep.add(f"lambda={auto.coset} alpha_{i + 1}", ok,
                    coset=auto.coset, order=w.order, orbit_in_delta=[k + 1 for k in in_o],
                    norm_image=target, witness=witness)
    return rep
