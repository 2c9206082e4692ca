from fractions import Fraction
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from coxeter_packets.exact import (
    FiniteAbelianGroup,
    IntMatrix,
    cokernel,
    field_of_order,
    finite_field,
    in_integer_span,
    integer_inverse,
    is_prime,
    kernel_basis,
    matrix_rank_mod,
    prime_power,
    rational_nullspace,
    smith_normal_form,
    solve_integer,
    solve_rational,
)


def small_matrices(max_dim=4, lo=-6, hi=6):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def unimodular(n):
    """Random products of elementary matrices."""
    ops = st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-3, 3)), max_size=8)

    def make(steps):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for i, j, k in steps:
            if i != j:
                m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        return IntMatrix.from_rows(m)
    return ops.map(make)


def determinantal_divisors(rows):
    """Invariant factors from gcds of k x k minors (independent of any elimination)."""
    m = IntMatrix.from_rows(rows)
    r, c = m.shape
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                g = gcd(g, IntMatrix.from_rows([[m[i, j] for j in ci] for i in ri]).det())
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# -- IntMatrix ----------------------------------------------------------------

def test_matrix_basics():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert a.T == IntMatrix.from_rows([[1, 3], [2, 4]])
    assert a @ IntMatrix.identity(2) == a
    assert a.apply((1, 1)) == (3, 7)
    assert a.det() == -2
    assert (a ** 0).is_identity()
    assert IntMatrix.zeros(2, 3).is_zero()


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        IntMatrix.identity(2) @ IntMatrix.identity(3)


@given(small_matrices(4, -4, 4))
def test_det_matches_leibniz(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    from itertools import permutations
    total = 0
    for p in permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i) if p[j] > p[i])
        term = sign
        for i in range(n):
            term *= sq[i][p[i]]
        total += term
    assert IntMatrix.from_rows(sq).det() == total


# -- Smith normal form --------------------------------------------------------

@settings(max_examples=150)
@given(small_matrices())
def test_smith_form_factorisation(rows):
    m = IntMatrix.from_rows(rows)
    snf = smith_normal_form(m)
    assert snf.U @ m @ snf.V == snf.S
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    diag = [d for d in snf.diagonal if d]
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert all(d > 0 for d in diag)


@settings(max_examples=100)
@given(small_matrices(3, -5, 5))
def test_smith_form_matches_determinantal_divisors(rows):
    snf = smith_normal_form(IntMatrix.from_rows(rows))
    assert [d for d in snf.diagonal if d] == determinantal_divisors(rows)


@settings(max_examples=60)
@given(st.data())
def test_cokernel_invariant_under_basis_change(data):
    rows = data.draw(small_matrices(3))
    m = IntMatrix.from_rows(rows)
    u = data.draw(unimodular(m.rows))
    v = data.draw(unimodular(m.cols))
    assert cokernel(u @ m @ v) == cokernel(m)


def test_cokernel_examples():
    assert cokernel(IntMatrix.from_rows([[2, -1], [-1, 2]])).torsion == FiniteAbelianGroup((3,))
    t, free = cokernel(IntMatrix.from_rows([[2, 0], [0, 0]]))
    assert t == FiniteAbelianGroup((2,)) and free == 1
    # non-square: free rank counts target dimensions
    t, free = cokernel(IntMatrix.from_rows([[2], [0], [0]]))
    assert t.order == 2 and free == 2


def test_finite_abelian_group():
    g = FiniteAbelianGroup.from_orders([2, 3, 4])
    assert g.invariant_factors == (2, 12)
    assert g.order == 24 and g.exponent == 12
    assert len(list(g.elements())) == 24
    assert g.torsion_order(2) == 4
    assert str(FiniteAbelianGroup((2, 2))) == "Z/2 x Z/2"
    assert str(FiniteAbelianGroup()) == "0"
    with pytest.raises(ValueError):
        FiniteAbelianGroup((3, 2))


# -- solving ------------------------------------------------------------------

@settings(max_examples=100)
@given(st.data())
def test_solve_integer_roundtrip(data):
    rows = data.draw(small_matrices(3))
    m = IntMatrix.from_rows(rows)
    x = data.draw(st.lists(st.integers(-5, 5), min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve_integer(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_integer_rejects_non_integral():
    m = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert solve_integer(m, (1, 0)) is None
    assert not in_integer_span(m, (1, 0))
    assert in_integer_span(m, (2, 4))
    with pytest.raises(ValueError):
        solve_integer(m, (1, 2, 3))


@settings(max_examples=80)
@given(small_matrices(4))
def test_kernel_basis_is_saturated(rows):
    m = IntMatrix.from_rows(rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero() if k.cols else True
    rat = rational_nullspace(m)
    assert k.cols == len(rat)
    # every integral kernel vector obtained by clearing denominators is an integer combination
    for v in rat:
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        w = tuple(int(x * den) for x in v)
        g = 0
        for x in w:
            g = gcd(g, x)
        assert solve_integer(k, tuple(x // g for x in w)) is not None


def test_integer_inverse():
    a = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert a @ integer_inverse(a) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        integer_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_solve_rational():
    a = IntMatrix.from_rows([[2, -1], [-1, 2]])
    assert solve_rational(a, (1, 0)) == (Fraction(2, 3), Fraction(1, 3))


# -- finite fields ------------------------------------------------------------

def test_prime_power():
    assert prime_power(49) == (7, 2)
    assert prime_power(8) == (2, 3)
    assert prime_power(12) is None
    assert prime_power(1) is None
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("q", [2, 3, 4, 7, 8, 9, 16, 25, 27, 49])
def test_field_axioms(q):
    F = field_of_order(q)
    els = F.elements()
    assert len(els) == q
    one, zero = F.one(), F.zero()
    for a in els:
        assert a + zero == a and a * one == a
        if a:
            assert a * a.inverse() == one
    # multiplicative group is cyclic of order q - 1
    g = F.generator
    assert len({(g ** k).code for k in range(q - 1)}) == q - 1
    # Frobenius fixes exactly the prime field
    assert sum(1 for a in els if F.frobenius(a) == a) == F.p


@settings(max_examples=200)
@given(st.sampled_from([4, 8, 9, 25]), st.data())
def test_field_distributive(q, data):
    F = field_of_order(q)
    a, b, c = (F.element(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@pytest.mark.parametrize("small,big", [((3, 1), (3, 2)), ((5, 1), (5, 2)), ((2, 2), (2, 4)), ((2, 1), (2, 3))])
def test_embedding_is_ring_homomorphism(small, big):
    S, B = finite_field(*small), finite_field(*big)
    m = S.embedding_into(B)
    assert len(set(m.values())) == S.order
    for a in S.elements():
        for b in S.elements():
            assert S.embed(a * b, B) == S.embed(a, B) * S.embed(b, B)
            assert S.embed(a + b, B) == S.embed(a, B) + S.embed(b, B)


def test_element_of_order():
    F = field_of_order(7)
    assert F.element_of_order(3).code == 2
    assert F.element_of_order(6).code == 3
    with pytest.raises(ValueError):
        F.element_of_order(4)


def _kernel_size(rows, F):
    n = len(rows[0])
    els = F.elements()
    count = 0
    for v in product(els, repeat=n):
        if all(sum((F(a) * x for a, x in zip(r, v)), F.zero()) == 0 for r in rows):
            count += 1
    return count


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), small_matrices(3, -4, 4))
def test_rank_mod_p_matches_kernel_count(p, rows):
    F = field_of_order(p)
    rank = matrix_rank_mod([[F(a) for a in r] for r in rows], F)
    assert p ** (len(rows[0]) - rank) == _kernel_size(rows, F)
