"""Exact arithmetic in GF(p^n) with a polynomial basis.

An element is stored as its coefficient tuple ``(c_0, ..., c_{n-1})`` on the
basis ``1, x, ..., x^{n-1}`` together with the integer encoding
``c_0 + c_1 p + ... + c_{n-1} p^{n-1}``.  The encoding fixes a total order on
the field that every enumeration in the package follows.

Fields are built through :func:`field_new`, which is cached, so two calls with
the same ``(p, n)`` return the same :class:`FieldSpec` object.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

from . import limits

# Build log/exp tables (and intern every element) below this order.
_TABLE_LIMIT = 2**16
# Build a full addition table below this order.
_ADD_TABLE_LIMIT = 256


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


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


def prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, n)`` with ``q == p**n``, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            while q % p == 0:
                q //= p
                n += 1
            return (p, n) if q == 1 else None
    return None


# -- polynomials over Z_p, coefficient tuples low -> high, no trailing zeros --

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p) if p > 2 else 1
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % p
        for k, c in enumerate(m):
            a[shift + k] = (a[shift + k] - factor * c) % p
        _poly_trim(a)
    return a


def _monic_polys(degree: int, p: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of the given degree, by increasing integer encoding."""
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    degree = len(poly) - 1
    if degree < 1:
        return False
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


class FieldSpec:
    """The field GF(p^n) together with its modulus and a fixed generator.

    Do not instantiate directly; use :func:`field_new`.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self._weights = tuple(p**k for k in range(n))
        self._elements: list[FieldElement] | None = None
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add: list[int] | None = None
        if self.q <= _TABLE_LIMIT:
            self._elements = [FieldElement(self, self._decode(v), v) for v in range(self.q)]
        self.generator = self._find_generator()
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers --

    def _decode(self, value: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(value % self.p)
            value //= self.p
        return tuple(out)

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(c * w for c, w in zip(coeffs, self._weights))

    def _mulmod(self, a: int, b: int) -> int:
        ca, cb = self._decode(a), self._decode(b)
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        red = _poly_mod([c % self.p for c in prod], self.modulus, self.p)
        return self._encode(red)

    def _powmod(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mulmod(result, base)
            base = self._mulmod(base, base)
            k >>= 1
        return result

    def _find_generator(self) -> FieldElement:
        order = self.q - 1
        if order == 1:
            return self.element_at(1)
        factors = prime_factors(order)
        for v in range(1, self.q):
            if all(self._powmod(v, order // f) != 1 for f in factors):
                return self.element_at(v)
        raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover

    def _build_tables(self) -> None:
        g = self.generator.value
        exp = [1] * (self.q - 1)
        log = [0] * self.q
        for k in range(1, self.q - 1):
            exp[k] = self._mulmod(exp[k - 1], g)
        for k, v in enumerate(exp):
            log[v] = k
        self._exp, self._log = exp, log
        if self.q <= _ADD_TABLE_LIMIT and self.p != 2:
            self._add = [self._add_slow(a, b) for a in range(self.q) for b in range(self.q)]

    def _add_slow(self, a: int, b: int) -> int:
        ca, cb = self._decode(a), self._decode(b)
        return self._encode([(x + y) % self.p for x, y in zip(ca, cb)])

    # -- raw integer-encoded arithmetic --

    def _add_int(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a * self.q + b]
        return self._add_slow(a, b)

    def _neg_int(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._encode([(-c) % self.p for c in self._decode(a)])

    def _mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mulmod(a, b)

    def _inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._powmod(a, self.q - 2)

    def _pow_int(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self._inv_int(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[a] * k) % (self.q - 1)]
        return self._powmod(a, k % (self.q - 1))

    # -- public API --

    def element_at(self, value: int) -> FieldElement:
        """Element with integer encoding ``value`` (0 <= value < q)."""
        if not 0 <= value < self.q:
            raise ValueError(f"encoding {value} out of range for GF({self.q})")
        if self._elements is not None:
            return self._elements[value]
        return FieldElement(self, self._decode(value), value)

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        """Element from basis coefficients; missing high coefficients are zero."""
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise ValueError(f"{len(coeffs)} coefficients given for degree-{self.n} field")
        coeffs += [0] * (self.n - len(coeffs))
        return self.element_at(self._encode([c % self.p for c in coeffs]))

    def __call__(self, k: int) -> FieldElement:
        """The integer ``k`` embedded in the prime subfield."""
        return self.element_at(k % self.p)

    @property
    def zero(self) -> FieldElement:
        return self.element_at(0)

    @property
    def one(self) -> FieldElement:
        return self.element_at(1)

    @property
    def x(self) -> FieldElement:
        """The class of the indeterminate (``i`` when the modulus is x^2+1)."""
        if self.n == 1:
            return self.element_at(-self.modulus[0] % self.p)
        return self.element_at(self.p)

    def elements(self) -> list[FieldElement]:
        return [self.element_at(v) for v in range(self.q)]

    def nonzero(self) -> list[FieldElement]:
        return [self.element_at(v) for v in range(1, self.q)]

    def prime_subfield(self) -> FieldSpec:
        return field_new(self.p, 1)

    @property
    def uses_i(self) -> bool:
        return self.n == 2 and self.modulus == (1, 0, 1)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.n == 1 else f"GF({self.p}^{self.n})"


class FieldElement:
    __slots__ = ("spec", "coeffs", "value")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...], value: int):
        self.spec = spec
        self.coeffs = coeffs
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatchError(f"cannot combine {self.spec!r} and {other.spec!r} elements")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def _wrap(self, value: int) -> FieldElement:
        return self.spec.element_at(value)

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec._add_int(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self.spec._neg_int(self.value))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec._add_int(self.value, self.spec._neg_int(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec._mul_int(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec._mul_int(self.value, self.spec._inv_int(b)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        return self._wrap(self.spec._pow_int(self.value, k))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec._inv_int(self.value))

    def frobenius(self) -> FieldElement:
        return self ** self.spec.p

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.spec == other.spec
        if isinstance(other, int):
            return self.value == self.spec(other).value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.spec.p, self.spec.n))

    def __bool__(self):
        return self.value != 0

    @property
    def in_prime_subfield(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"<{self.spec!r} {format_element(self)}>"


def format_element(a: FieldElement, signed: bool = False) -> str:
    """Render an element as a polynomial in ``x`` (or ``i`` for F_p[i]).

    With ``signed=True`` residues above p/2 are shown as negatives, so in
    GF(9) the element ``2+2i`` prints as ``-1-i``.
    """
    p = a.spec.p
    sym = "i" if a.spec.uses_i else "x"

    def residue(c):
        return c - p if signed and p > 2 and c > p // 2 else c

    terms = []
    for k, c in enumerate(a.coeffs):
        c = residue(c)
        if c == 0:
            continue
        if k == 0:
            body = str(c)
        else:
            mono = sym if k == 1 else f"{sym}^{k}"
            body = mono if c == 1 else "-" + mono if c == -1 else f"{c}{mono}"
        terms.append(body)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


@functools.cache
def field_new(p: int, n: int = 1) -> FieldSpec:
    """Build GF(p^n).

    The modulus is the irreducible monic polynomial of smallest integer
    encoding, except that x^2+1 is used for n=2, p = 3 mod 4.  The generator
    is the primitive element of smallest encoding.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if n < 1:
        raise ValueError(f"extension degree must be >= 1, got {n}")
    limits.check("GALOIS_QM_MAX_FIELD", p**n, f"field order {p}^{n}")
    if n == 2 and p % 4 == 3:
        modulus = (1, 0, 1)
        assert is_irreducible(modulus, p), "x^2+1 reducible although p = 3 mod 4"
    elif n == 1:
        modulus = (0, 1)
    else:
        modulus = next(m for m in _monic_polys(n, p) if is_irreducible(m, p))
    return FieldSpec(p, n, modulus)


def field_of_order(q: int) -> FieldSpec:
    pn = prime_power(q)
    if pn is None:
        raise ValueError(f"{q} is not a prime power")
    return field_new(*pn)


def _same(a: FieldElement, b) -> None:
    if isinstance(b, FieldElement) and a.spec != b.spec:
        raise FieldMismatchError(f"cannot combine {a.spec!r} and {b.spec!r} elements")


def add(a: FieldElement, b) -> FieldElement:
    _same(a, b)
    return a + b


def sub(a: FieldElement, b) -> FieldElement:
    _same(a, b)
    return a - b


def mul(a: FieldElement, b) -> FieldElement:
    _same(a, b)
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frobenius(a: FieldElement) -> FieldElement:
    """a -> a^p; complex-conjugation analogue on F_p[i]."""
    return a.frobenius()


def abs_map(a: FieldElement) -> int:
    """The only product-preserving map GF(q) -> R>=0: 0 for zero, else 1."""
    return 0 if a.value == 0 else 1


def sign_map(a: FieldElement) -> int:
    """Quadratic-residue sign on GF(p), p = 3 mod 4, with 0 -> 0.

    Even powers of the generator map to +1 and odd powers to -1; this is
    evaluated with Euler's criterion.
    """
    spec = a.spec
    if spec.n != 1 or spec.p % 4 != 3:
        raise ValueError(f"sign_map needs a prime field with p = 3 mod 4, got {spec!r}")
    if a.value == 0:
        return 0
    return 1 if pow(a.value, (spec.p - 1) // 2, spec.p) == 1 else -1


def to_prime_subfield(a: FieldElement) -> FieldElement:
    """Re-home an element of GF(p^n) lying in the prime subfield into GF(p)."""
    if not a.in_prime_subfield:
        raise ValueError(f"{a} is not in the prime subfield")
    return field_new(a.spec.p, 1)(a.coeffs[0])
