"""Exact arithmetic in finite fields GF(p^m).

Elements are encoded as integers in [0, q), q = p^m: the base-p digits of the
code are the coordinates with respect to the power basis 1, g, ..., g^(m-1),
where g is the class of the generator modulo an explicit irreducible modulus.
For m = 1 the code is the residue itself.  Multiplication and inversion go
through discrete log/antilog tables built once per field (q is capped at
2^16, so the tables stay small); addition is digitwise mod p.

The module deliberately has no notion of "symbolic" elements: every value is
a concrete code and every operation is a total function on codes, which keeps
the layer trivially thread-safe and bit-reproducible.
"""

from __future__ import annotations

import functools
from typing import Iterable

import numpy as np

from .errors import InputError

MAX_Q = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    """Division with remainder for dense coefficient lists over F_p."""
    num = list(num)
    dd = len(den) - 1
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(0, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            f = (c * inv_lead) % p
            quot[i - dd] = f
            for j, dc in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - f * dc) % p
    while num and num[-1] % p == 0:
        num.pop()
    return quot, num


def _all_monic(degree: int, p: int) -> Iterable[list[int]]:
    """All monic polynomials of the given degree over F_p, low coeffs first."""
    total = p**degree
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        yield coeffs


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] % p != 1:
        return False
    if coeffs[0] % p == 0:
        return m == 1
    for d in range(1, m // 2 + 1):
        for den in _all_monic(d, p):
            _, rem = _poly_divmod(list(coeffs), den, p)
            if not rem:
                return False
    return True


def _default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m, by low-coefficient code order."""
    for cand in _all_monic(m, p):
        if _is_irreducible(tuple(cand), p):
            return tuple(cand)
    raise InputError(f"no irreducible modulus of degree {m} over F_{p}")


class Field:
    """GF(p^m) with table-backed arithmetic on integer codes."""

    __slots__ = (
        "p", "m", "q", "modulus", "generator_code",
        "_exp", "_log", "_inv", "_neg", "_frob_vec",
    )

    def __init__(self, p: int, m: int = 1, modulus: tuple[int, ...] | None = None):
        if not isinstance(p, int) or not _is_prime(p):
            raise InputError(f"characteristic must be a prime, got {p!r}")
        if p > MAX_Q:
            raise InputError(f"characteristic {p} exceeds the supported bound {MAX_Q}")
        if not isinstance(m, int) or m < 1:
            raise InputError(f"extension degree must be a positive integer, got {m!r}")
        q = p**m
        if q > MAX_Q:
            raise InputError(f"field size {q} exceeds the supported bound {MAX_Q}")
        if m == 1:
            if modulus is not None and tuple(c % p for c in modulus) not in ((0, 1),):
                raise InputError("modulus is only meaningful for extension degree > 1")
            modulus = (0, 1)
        else:
            if modulus is None:
                modulus = _default_modulus(p, m)
            else:
                modulus = tuple(int(c) % p for c in modulus)
                if len(modulus) != m + 1:
                    raise InputError(
                        f"modulus must list {m + 1} coefficients, got {len(modulus)}")
                if modulus[-1] != 1:
                    raise InputError("modulus must be monic")
                if not _is_irreducible(modulus, p):
                    raise InputError("modulus is reducible over the prime field")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # -- construction of log/antilog tables ------------------------------

    def _mul_codes_raw(self, a: int, b: int) -> int:
        """Product of codes by digit convolution and reduction mod modulus."""
        p, m = self.p, self.m
        if m == 1:
            return (a * b) % p
        da = [(a // p**i) % p for i in range(m)]
        db = [(b // p**i) % p for i in range(m)]
        prod = [0] * (2 * m - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        # reduce degrees >= m using g^m = -(low part of modulus)
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m):
                    prod[i - m + j] = (prod[i - m + j] - c * self.modulus[j]) % p
        return sum(prod[i] * p**i for i in range(m))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        if q == 2:
            gen = 1
        else:
            factors = _prime_factors(q - 1)
            gen = None
            for cand in range(2, q):
                ok = True
                for f in factors:
                    if self._pow_raw(cand, (q - 1) // f) == 1:
                        ok = False
                        break
                if ok:
                    gen = cand
                    break
            if gen is None:
                raise InputError("modulus is reducible: no multiplicative generator")
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        acc = 1
        for k in range(q - 1):
            exp[k] = acc
            log[acc] = k
            acc = self._mul_codes_raw(acc, gen)
        if acc != 1:
            raise InputError("modulus is reducible: generator order mismatch")
        exp[q - 1:] = exp[:q - 1]
        self.generator_code = gen
        self._exp = exp
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        if p == 2:
            neg = np.arange(q, dtype=np.int64)
        else:
            neg = np.zeros(q, dtype=np.int64)
            for c in range(q):
                neg[c] = self.add(0, self._scale_digits(c, p - 1))
        self._neg = neg
        self._frob_vec = None

    def _scale_digits(self, a: int, s: int) -> int:
        p, m = self.p, self.m
        return sum(((a // p**i) % p * s % p) * p**i for i in range(m))

    def _pow_raw(self, a: int, n: int) -> int:
        out = 1
        base = a
        while n:
            if n & 1:
                out = self._mul_codes_raw(out, base)
            base = self._mul_codes_raw(base, base)
            n >>= 1
        return out

    # -- scalar code arithmetic ------------------------------------------

    def add(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = 0
        for i in range(m):
            pi = p**i
            out += (((a // pi) + (b // pi)) % p) * pi
        return out

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise InputError("division by zero in the coefficient field")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise InputError("division by zero in the coefficient field")
        if a == 0:
            return 0
        return int(self._exp[(self._log[a] - self._log[b]) % (self.q - 1)])

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise InputError("division by zero in the coefficient field")
            return 0 if n else 1
        e = (int(self._log[a]) * n) % (self.q - 1)
        return int(self._exp[e])

    def frobenius(self, a: int, e: int = 1) -> int:
        """e-fold Frobenius a |-> a^(p^e) on codes."""
        if e < 0:
            raise InputError("Frobenius iterate count must be nonnegative")
        if a == 0:
            return 0
        return self.pow(a, pow(self.p, e, self.q - 1) if self.q > 2 else 1)

    def from_int(self, n: int) -> int:
        """Embed an integer as a constant: reduce mod p into digit 0."""
        return n % self.p

    def coords(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p**i) % p for i in range(self.m))

    def from_coords(self, coords: Iterable[int]) -> int:
        cs = list(coords)
        if len(cs) != self.m:
            raise InputError(f"expected {self.m} coordinates, got {len(cs)}")
        return sum((c % self.p) * self.p**i for i, c in enumerate(cs))

    # -- vector code arithmetic (int64 ndarrays, used by the engine) -----

    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, m = self.p, self.m
        if m == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = np.zeros_like(a)
        for i in range(m):
            pi = p**i
            out += (((a // pi) + (b // pi)) % p) * pi
        return out

    def neg_vec(self, a: np.ndarray) -> np.ndarray:
        return self._neg[a]

    def mul_scalar_vec(self, c: int, a: np.ndarray) -> np.ndarray:
        """c * a for a scalar c != 0 and an array of nonzero codes."""
        return self._exp[self._log[c] + self._log[a]]

    # -- misc --------------------------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise InputError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        raise InputError(f"cannot coerce {value!r} into GF({self.q})")

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise InputError(f"code {code} out of range for GF({self.q})")
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def generator(self) -> "FieldElement":
        """The class of the modulus variable (only meaningful for m > 1)."""
        if self.m == 1:
            raise InputError("prime field has no extension generator")
        return FieldElement(self, self.p)

    def elements(self) -> Iterable["FieldElement"]:
        for c in range(self.q):
            yield FieldElement(self, c)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Field)
                and self.p == other.p and self.m == other.m
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


@functools.cache
def GF(p: int, m: int = 1, modulus: tuple[int, ...] | None = None) -> Field:
    """Cached field constructor; equal parameters share one table set."""
    return Field(p, m, modulus)


class FieldElement:
    """Immutable element of a Field, wrapping an integer code."""

    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, *args):
        raise AttributeError("field elements are immutable")

    def _coerce(self, other) -> "FieldElement":
        return self.field.element(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.code, o.code))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.code, o.code))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.code, o.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.code, o.code))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.code, e))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.code)

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.m, self.code))

    def __repr__(self) -> str:
        coords = self.coords
        if self.field.m == 1:
            return str(coords[0])
        parts = []
        for i in range(self.field.m - 1, -1, -1):
            c = coords[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                gpow = "g" if i == 1 else f"g^{i}"
                parts.append(gpow if c == 1 else f"{c}*{gpow}")
        return " + ".join(parts) if parts else "0"
