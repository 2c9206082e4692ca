"""Finite fields F_p and F_{p^f} with exact element arithmetic.

A field is created once per (p, f) through :func:`finite_field`.  Elements
carry an integer code: for prime fields the residue itself, for extension
fields the coefficient vector of the polynomial representative read as
base-p digits (constant term first).  The defining polynomial of F_{p^f}
is the least monic irreducible of degree f, ordering coefficient vectors
lexicographically from the top coefficient down, which is the same as
ordering them by code.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .intmatrix import prime_factors

Poly = Tuple[int, ...]  # coefficients mod p, constant term first


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """(p, f) with q = p^f, or None if q is not a prime power."""
    if q < 2:
        return None
    ps = prime_factors(q)
    if len(ps) != 1:
        return None
    p, f = ps[0], 0
    while q > 1:
        q //= p
        f += 1
    return p, f


# -- polynomial helpers over F_p ---------------------------------------------

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        k = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - k * c) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mulmod(a, b, m, p):
    return _poly_mod(_poly_mul(a, b, p), m, p)


def _poly_powmod(a, e, m, p):
    result, base = [1], _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    poly = list(poly)
    f = len(poly) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    x = [0, 1]
    xq = _poly_powmod(x, p ** f, poly, p) + [0] * (f + 1)
    if _trim([(a - b) % p for a, b in zip(xq, x + [0] * (len(xq) - 2))]):
        return False
    for r in prime_factors(f):
        h = _poly_powmod(x, p ** (f // r), poly, p)
        diff = list(h) + [0] * (2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(poly, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def defining_polynomial(p: int, f: int) -> Poly:
    """Least monic irreducible polynomial of degree f over F_p."""
    if f == 1:
        return (0, 1)
    for code in range(p ** f):
        low = [(code // p ** i) % p for i in range(f)]
        poly = tuple(low) + (1,)
        if low[0] and is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {f} over F_{p}")


class FiniteField:
    """The field with p^f elements.  Use :func:`finite_field` to obtain one."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if f < 1:
            raise ValueError("degree must be positive")
        self.p, self.f = p, f
        self.order = p ** f
        self.modulus = defining_polynomial(p, f)
        if f > 1:
            self._build_tables()

    # element codes <-> polynomials
    def _to_poly(self, code: int) -> List[int]:
        return _trim([(code // self.p ** i) % self.p for i in range(self.f)])

    def _from_poly(self, poly: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(poly))

    def _build_tables(self):
        # exp/log tables relative to the least primitive element
        n = self.order - 1
        for g in range(2, self.order):
            exp, x, seen_one = [], 1, False
            gp = self._to_poly(g)
            for k in range(n):
                exp.append(x)
                x = self._from_poly(_poly_mulmod(self._to_poly(x), gp, self.modulus, self.p))
                if x == 1 and k < n - 1:
                    seen_one = True
                    break
            if not seen_one and x == 1:
                self._exp = exp
                self._log = {v: k for k, v in enumerate(exp)}
                return
        raise AssertionError("multiplicative group is not cyclic?")

    # raw arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        p = self.p
        out, k = 0, 1
        for _ in range(self.f):
            out += ((a % p + b % p) % p) * k
            a //= p
            b //= p
            k *= p
        return out

    def neg(self, a: int) -> int:
        if self.f == 1:
            return -a % self.p
        p = self.p
        out, k = 0, 1
        for _ in range(self.f):
            out += (-(a % p) % p) * k
            a //= p
            k *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if self.f == 1:
            if a % self.p == 0:
                if e < 0:
                    raise ZeroDivisionError("negative power of zero")
                return 0 if e else 1
            return pow(a, e % (self.p - 1), self.p)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0 if e else 1
        return self._exp[self._log[a] * e % (self.order - 1)]

    # element-level API
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            raise ValueError("element belongs to a different field")
        # integers map through Z -> F_p -> F_q
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for F_{self.order}")
        return FieldElement(self, code)

    def from_coefficients(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return FieldElement(self, self._from_poly([c % self.p for c in coeffs]))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> List["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.order)]

    def units(self) -> List["FieldElement"]:
        return [FieldElement(self, c) for c in range(1, self.order)]

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.order - 1
        k = n
        for r in prime_factors(n):
            while k % r == 0 and self.pow(a, k // r) == 1:
                k //= r
        return k

    @property
    def generator(self) -> "FieldElement":
        """Least (by code) generator of the multiplicative group."""
        n = self.order - 1
        for c in range(1, self.order):
            if self.multiplicative_order(c) == n:
                return FieldElement(self, c)
        raise AssertionError("no generator found")

    def element_of_order(self, n: int) -> "FieldElement":
        """Least (by code) element of multiplicative order exactly n."""
        if (self.order - 1) % n:
            raise ValueError(f"F_{self.order} has no element of order {n}")
        for c in range(1, self.order):
            if self.multiplicative_order(c) == n:
                return FieldElement(self, c)
        raise AssertionError("unreachable")

    def frobenius(self, a: "FieldElement") -> "FieldElement":
        return a ** self.p

    def extension(self, k: int) -> "FiniteField":
        return finite_field(self.p, self.f * k)

    def embedding_into(self, big: "FiniteField") -> Dict[int, int]:
        """Code map of the field embedding self -> big (big.f a multiple of self.f)."""
        return _embedding(self.p, self.f, big.f)

    def embed(self, a: "FieldElement", big: "FiniteField") -> "FieldElement":
        return FieldElement(big, self.embedding_into(big)[a.code])

    def __repr__(self) -> str:
        return f"GF({self.order})"

    def __reduce__(self):
        return finite_field, (self.p, self.f)


@lru_cache(maxsize=None)
def finite_field(p: int, f: int = 1) -> FiniteField:
    return FiniteField(p, f)


def field_of_order(q: int) -> FiniteField:
    pf = prime_power(q)
    if pf is None:
        raise ValueError(f"{q} is not a prime power")
    return finite_field(*pf)


@lru_cache(maxsize=None)
def _embedding(p: int, f_small: int, f_big: int) -> Dict[int, int]:
    if f_big % f_small:
        raise ValueError(f"F_{p}^{f_small} does not embed into F_{p}^{f_big}")
    small, big = finite_field(p, f_small), finite_field(p, f_big)
    if f_small == 1:
        return {c: c for c in range(p)}
    # least root of the small field's modulus inside the big field
    mod = small.modulus
    root = None
    for c in range(big.order):
        acc, xp = 0, 1
        for coeff in mod:
            acc = big.add(acc, big.mul(coeff % p, xp))
            xp = big.mul(xp, c)
        if acc == 0:
            root = c
            break
    assert root is not None
    table = {}
    for code in range(small.order):
        coeffs = small._to_poly(code)
        acc, xp = 0, 1
        for coeff in coeffs:
            acc = big.add(acc, big.mul(coeff, xp))
            xp = big.mul(xp, root)
        table[code] = acc
    return table


class FieldElement:
    """Immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError(f"mixing elements of {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field(other).code
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field(other).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.order, self.code))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < other.code

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.f == 1:
            return str(self.code)
        return f"{self.field!r}<{self.code}>"


def matrix_rank_mod(rows: Sequence[Sequence], field: FiniteField) -> int:
    """Rank by Gaussian elimination over ``field``; entries may be ints or elements."""
    a = [[field(x).code for x in r] for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = field.inv(a[rank][c])
        a[rank] = [field.mul(x, inv) for x in a[rank]]
        for i in range(nr):
            if i != rank and a[i][c]:
                k = a[i][c]
                a[i] = [field.sub(x, field.mul(k, y)) for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def matrix_rank_mod_q(rows: Sequence[Sequence]) -> int:
    """Rank of a matrix whose entries are :class:`FieldElement` of one field."""
    flat = [x for r in rows for x in r]
    if not flat:
        return 0
    fields = {id(x.field) for x in flat}
    if len(fields) != 1:
        raise ValueError("matrix entries must all lie in one field")
    return matrix_rank_mod(rows, flat[0].field)
