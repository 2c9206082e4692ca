"""Registry of checkable statements and the (type, q) grids they run over."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .alcove import AlcovePoint, barycenter, verify_lemma_d1
from .arith import (
    admissible_primes,
    center_order,
    eigenspace_dims,
    frobenius_kernel_order,
    lambda_center_match,
    regular_h_torsion,
)
from .cohomology import (
    coinvariants_coxeter,
    coxeter_witness,
    induced_h1_map,
    root_in_weight_lattice,
    weyl_acts_trivially_on_quotient,
)
from .exact import prime_power
from .report import Report
from .rootsys import RootSystemType, build, default_types, swan_rank_identity, verify_fact2
from .weyl import exponents

DEFAULT_WEYL_BOUND = 60_000
MAX_PACKET_TUPLES = 200_000

# exhaustive packet instances run by default
PACKET_INSTANCES: Dict[str, Tuple[int, ...]] = {"A1": (3, 5, 7), "A2": (5, 7), "B2": (3, 5), "G2": (5, 7)}


class EmptyGrid(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    type: RootSystemType
    q: Optional[int] = None

    @property
    def descriptor(self) -> str:
        return str(self.type) if self.q is None else f"{self.type} q={self.q}"

    def sort_key(self):
        return (self.type.sort_key(), self.q or 0)


@dataclass
class InstanceResult:
    instance: Instance
    report: Report

    @property
    def passed(self) -> bool:
        return self.report.passed

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d["instance"] = self.instance.descriptor
        del d["subject"]
        return d


@dataclass
class VerificationReport:
    lemma: str
    results: List[InstanceResult]
    skipped: List[str] = field(default_factory=list)
    seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "lemma": self.lemma,
            "passed": self.passed,
            "instances": [r.to_dict() for r in self.results],
            "skipped": list(self.skipped),
        }
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out


# -- individual checks -------------------------------------------------------

def check_trivcoh(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    rep = Report(f"trivcoh {t}")
    _, trivial = induced_h1_map(root_in_weight_lattice(d))
    rep.add("H1(<c>,Q) -> H1(<c>,P) is zero", trivial)
    for i, a in enumerate(d.simple_roots):
        try:
            p = coxeter_witness(d, a)
            rep.add(f"alpha_{i + 1} = p - cp", True, p=p)
        except ArithmeticError as e:
            rep.add(f"alpha_{i + 1} = p - cp", False, error=str(e))
    return rep


def check_sfilt(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    h = d.coxeter_number
    rep = Report(f"sfilt {t} q={q}")
    dims = [eigenspace_dims(d, q, i) for i in range(1, h)]
    ex = exponents(d)
    mult = [ex.count(i) for i in range(1, h)]
    rep.add("dims match exponent multiplicities", dims == mult, dims=dims, exponents=ex)
    rep.add("dims sum to rank", sum(dims) == d.rank, total=sum(dims), rank=d.rank)
    rep.add("dims symmetric under i -> h - i", dims == dims[::-1])
    return rep


def check_sprod(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    rep = Report(f"sprod {t} q={q}")
    a, b = center_order(d, q), frobenius_kernel_order(d, q)
    rep.add("prod gcd(q-1, n_i) = |Ker(q-1 | P/Q)|", a == b, center_order=a, kernel_order=b)
    return rep


def check_bary(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    h = d.coxeter_number
    rep = Report(f"bary {t} q={q}")
    vals = barycenter(d).affine_root_values(d)
    rep.add("affine simple roots equal 1/h at the barycenter", all(v == Fraction(1, h) for v in vals),
            values=vals, h=h)
    rep.extend(regular_h_torsion(d, q, bound))
    return rep


def check_kotalt(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    return lambda_center_match(build(t))


def check_d1(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    return verify_lemma_d1(build(t))


def check_caut(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    rep = Report(f"caut {t}")
    try:
        g = coinvariants_coxeter(d)
        rep.add("P^vee/(c-1)P^vee = P^vee/Q^vee", True, group=str(g))
    except AssertionError as e:
        rep.add("P^vee/(c-1)P^vee = P^vee/Q^vee", False, error=str(e))
    rep.add("W acts trivially on P^vee/Q^vee", weyl_acts_trivially_on_quotient(d))
    return rep


def check_gen(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    from .packets import build_packets, verify_genericity

    d = build(t)
    table = build_packets(d, q)
    rep = Report(f"gen {t} q={q}")
    rep.extend(table.report)
    rep.extend(verify_genericity(d, q, table))
    return rep


def check_fact2(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    return verify_fact2(build(t))


def check_swan(t: RootSystemType, q: Optional[int], bound: int) -> Report:
    d = build(t)
    rep = Report(f"swan {t}")
    swan, ok = swan_rank_identity(d)
    rep.add("|R|/h = rank", ok, swan=swan, rank=d.rank)
    return rep


# -- grids -------------------------------------------------------------------

def _no_q(t, qs):
    return [None]


def _coprime_q(count):
    def pick(t, qs):
        h = build(t).coxeter_number
        return qs if qs is not None else admissible_primes(h, count)
    return pick


def _one_mod_h_q(count):
    def pick(t, qs):
        h = build(t).coxeter_number
        return qs if qs is not None else admissible_primes(h, count, one_mod_h=True)
    return pick


def _packet_q(t, qs):
    if qs is not None:
        return qs
    return list(PACKET_INSTANCES.get(str(t), ()))


@dataclass(frozen=True)
class Lemma:
    name: str
    summary: str
    check: Callable[[RootSystemType, Optional[int], int], Report]
    q_values: Callable
    default_types: Optional[Tuple[str, ...]] = None
    needs_one_mod_h: bool = False


LEMMAS: Dict[str, Lemma] = {l.name: l for l in [
    Lemma("trivcoh", "H1 of Q maps to zero in H1 of P; explicit Coxeter witnesses", check_trivcoh, _no_q),
    Lemma("sfilt", "eigenspace dimensions of c are exponent multiplicities", check_sfilt, _one_mod_h_q(2),
          needs_one_mod_h=True),
    Lemma("sprod", "center order equals the (q-1)-kernel on P/Q", check_sprod, _coprime_q(6)),
    Lemma("bary", "barycenter values and the regular h-torsion element", check_bary, _one_mod_h_q(1),
          needs_one_mod_h=True),
    Lemma("kotalt", "|P^vee/Q^vee| = |P/Q|", check_kotalt, _no_q),
    Lemma("d1", "norm-span membership for alcove automorphisms", check_d1, _no_q),
    Lemma("caut", "Coxeter coinvariants on P^vee", check_caut, _no_q),
    Lemma("gen", "packet sizes and unique generic members", check_gen, _packet_q,
          default_types=tuple(PACKET_INSTANCES)),
    Lemma("fact2", "connection, bad and torsion primes divide h", check_fact2, _no_q),
    Lemma("swan", "|R|/h = rank", check_swan, _no_q),
]}


def _admissible(lemma: Lemma, t: RootSystemType, q: Optional[int]) -> Optional[str]:
    """Reason the instance is outside the lemma's regime, or None."""
    if q is None:
        return None
    if prime_power(q) is None:
        return f"q={q} is not a prime power"
    h = build(t).coxeter_number
    if gcd(q, h) != 1:
        return f"q={q} shares a factor with h={h}"
    if lemma.needs_one_mod_h and (q - 1) % h:
        return f"q={q} is not 1 mod h={h}"
    if lemma.name == "gen":
        n = (q - 1) ** (t.rank + 1)
        if n > MAX_PACKET_TUPLES:
            return f"{n} tuples exceed the exhaustive limit {MAX_PACKET_TUPLES}"
    return None


def build_grid(lemma: Lemma, types: Optional[Sequence[RootSystemType]] = None,
               max_rank: Optional[int] = None, qs: Optional[Sequence[int]] = None
               ) -> Tuple[List[Instance], List[str]]:
    if types is None:
        if lemma.default_types is not None:
            types = [RootSystemType.parse(s) for s in lemma.default_types]
        else:
            types = default_types()
    if max_rank is not None:
        types = [t for t in types if t.rank <= max_rank]
    grid, skipped = [], []
    for t in sorted(set(types), key=lambda t: t.sort_key()):
        for q in lemma.q_values(t, list(qs) if qs is not None else None):
            why = _admissible(lemma, t, q)
            if why is None:
                grid.append(Instance(t, q))
            else:
                skipped.append(f"{Instance(t, q).descriptor}: {why}")
    if not grid:
        raise EmptyGrid(f"no admissible instances for {lemma.name}" +
                        (f" ({'; '.join(skipped)})" if skipped else ""))
    return grid, skipped


def _run_one(args) -> InstanceResult:
    name, inst, bound = args
    return InstanceResult(inst, LEMMAS[name].check(inst.type, inst.q, bound))


def run_lemma(name: str, types=None, max_rank=None, qs=None, weyl_bound: int = DEFAULT_WEYL_BOUND,
              jobs: int = 1) -> VerificationReport:
    if name not in LEMMAS:
        raise KeyError(f"unknown lemma {name!r}; choose from {', '.join(LEMMAS)}")
    lemma = LEMMAS[name]
    grid, skipped = build_grid(lemma, types, max_rank, qs)
    start = time.perf_counter()
    work = [(name, inst, weyl_bound) for inst in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    results.sort(key=lambda r: r.instance.sort_key())
    return VerificationReport(name, results, skipped, time.perf_counter() - start)
