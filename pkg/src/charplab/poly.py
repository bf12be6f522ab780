"""Sparse multivariate polynomials over GF(p^m), with the ASCII grammar.

A Ring fixes the coefficient field and an ordered tuple of variable names.
Polynomials store a map from exponent tuples to nonzero coefficient codes;
all arithmetic is exact.  The text grammar is

    poly := term (('+'|'-') term)*
    term := atom ('*' atom)*
    atom := integer | 'g' ('^' nat)? | var ('^' nat)?

with insignificant whitespace.  'g' denotes the extension generator and is
only legal when the field is a proper extension (m > 1); in that case no
ring variable may be called 'g'.  Printing emits terms in descending order
under the active monomial order, coefficients as canonical residues joined
by '+', extension coefficients expanded into separate generator-power terms
so that output always re-parses to the same polynomial.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

from .errors import InputError, LimitError, ParseError
from .field import Field, FieldElement
from .orders import GREVLEX, MonomialOrder

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT63 = 1 << 63


class Ring:
    """A polynomial ring F_q[x_1, ..., x_n] with named variables."""

    __slots__ = ("field", "variables", "n", "_index")

    def __init__(self, field: Field, variables: Iterable[str]):
        names = tuple(variables)
        if not names:
            raise InputError("a ring needs at least one variable")
        seen = set()
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise InputError(f"bad variable name {name!r}")
            if name in seen:
                raise InputError(f"duplicate variable name {name!r}")
            seen.add(name)
        if field.m > 1 and "g" in seen:
            raise InputError(
                "variable name 'g' collides with the extension generator")
        self.field = field
        self.variables = names
        self.n = len(names)
        self._index = {name: i for i, name in enumerate(names)}

    # -- element constructors --------------------------------------------

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.n: 1})

    def constant(self, value) -> "Polynomial":
        code = self.field.element(value).code
        if code == 0:
            return self.zero
        return Polynomial(self, {(0,) * self.n: code})

    def variable(self, i) -> "Polynomial":
        if isinstance(i, str):
            if i not in self._index:
                raise InputError(f"unknown variable {i!r}")
            i = self._index[i]
        exps = [0] * self.n
        exps[i] = 1
        return Polynomial(self, {tuple(exps): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.variable(i) for i in range(self.n)]

    def monomial(self, exps: Iterable[int], coeff=1) -> "Polynomial":
        t = tuple(int(e) for e in exps)
        if len(t) != self.n or any(e < 0 for e in t):
            raise InputError(f"bad exponent tuple {t} for {self.n} variables")
        code = self.field.element(coeff).code
        if code == 0:
            return self.zero
        return Polynomial(self, {t: code})

    def extend_front(self, names: Iterable[str]) -> "Ring":
        """New ring with extra variables prepended (they become largest)."""
        return Ring(self.field, tuple(names) + self.variables)

    def drop_front(self, k: int) -> "Ring":
        """Subring on the last n-k variables."""
        if not 0 < k < self.n:
            raise InputError(f"cannot drop {k} of {self.n} variables")
        return Ring(self.field, self.variables[k:])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Ring)
                and self.field == other.field
                and self.variables == other.variables)

    def __hash__(self) -> int:
        return hash((self.field, self.variables))

    def __repr__(self) -> str:
        return f"{self.field!r}[{', '.join(self.variables)}]"


class Monomial:
    """Exponent tuple with its total degree cached."""

    __slots__ = ("exponents", "degree")

    def __init__(self, exponents: Iterable[int]):
        t = tuple(int(e) for e in exponents)
        if any(e < 0 for e in t):
            raise InputError("monomial exponents must be nonnegative")
        object.__setattr__(self, "exponents", t)
        object.__setattr__(self, "degree", sum(t))

    def __setattr__(self, *args):
        raise AttributeError("monomials are immutable")

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(max(a, b) for a, b in zip(self.exponents, other.exponents))

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash(self.exponents)

    def __repr__(self) -> str:
        return f"Monomial{self.exponents}"


class Polynomial:
    """Sparse polynomial: ring plus a map exponent-tuple -> nonzero code."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = {k: v for k, v in terms.items() if v}

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.ring.n}

    def constant_code(self) -> int:
        return self.terms.get((0,) * self.ring.n, 0)

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def iter_terms(self, order: MonomialOrder = GREVLEX) -> Iterator[tuple[Monomial, FieldElement]]:
        f = self.ring.field
        for exps in sorted(self.terms, key=order.key, reverse=True):
            yield Monomial(exps), f.from_code(self.terms[exps])

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Monomial, FieldElement]:
        if not self.terms:
            raise InputError("the zero polynomial has no leading term")
        exps = max(self.terms, key=order.key)
        return Monomial(exps), self.ring.field.from_code(self.terms[exps])

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InputError("polynomials live in different rings")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.constant(other)
        raise InputError(f"cannot coerce {other!r} into {self.ring!r}")

    def __add__(self, other):
        o = self._coerce(other)
        f = self.ring.field
        out = dict(self.terms)
        for k, v in o.terms.items():
            s = f.add(out.get(k, 0), v)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {k: f.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.ring.field.element(other).code
            if c == 0:
                return self.ring.zero
            f = self.ring.field
            return Polynomial(self.ring, {k: f.mul(c, v) for k, v in self.terms.items()})
        o = self._coerce(other)
        f = self.ring.field
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in o.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                s = f.add(out.get(k, 0), f.mul(va, vb))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, t: int):
        if not isinstance(t, int) or t < 0:
            raise InputError("polynomial powers take nonnegative integer exponents")
        out = self.ring.one
        base = self
        while t:
            if t & 1:
                out = out * base
            if t > 1:
                base = base * base
            t >>= 1
        return out

    def frobenius_pow(self, e: int) -> "Polynomial":
        """f^(p^e) by coefficientwise Frobenius and exponent scaling."""
        if not isinstance(e, int) or e < 0:
            raise InputError("Frobenius iterate count must be nonnegative")
        if e == 0 or not self.terms:
            return self
        f = self.ring.field
        scale = f.p**e
        if (self.total_degree() or 1) * scale >= _INT63:
            raise LimitError(
                f"Frobenius power would push degrees past 64-bit range "
                f"(degree {self.total_degree()} * {f.p}^{e})")
        return Polynomial(
            self.ring,
            {tuple(x * scale for x in k): f.frobenius(v, e)
             for k, v in self.terms.items()})

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to the i-th variable."""
        f = self.ring.field
        out: dict = {}
        for k, v in self.terms.items():
            e = k[i]
            if e == 0:
                continue
            c = f.mul(f.from_int(e), v)
            if not c:
                continue
            nk = k[:i] + (e - 1,) + k[i + 1:]
            s = f.add(out.get(nk, 0), c)
            if s:
                out[nk] = s
            else:
                out.pop(nk, None)
        return Polynomial(self.ring, out)

    def evaluate(self, codes: Iterable[int]) -> int:
        """Value at a point given by coefficient codes; returns a code."""
        pt = list(codes)
        if len(pt) != self.ring.n:
            raise InputError(f"expected {self.ring.n} coordinates")
        f = self.ring.field
        total = 0
        for k, v in self.terms.items():
            acc = v
            for c, e in zip(pt, k):
                if e:
                    acc = f.mul(acc, f.pow(c, e))
                    if not acc:
                        break
            total = f.add(total, acc)
        return total

    def substitute(self, images: dict) -> "Polynomial":
        """Substitute polynomials for variables (by index or name)."""
        ring = self.ring
        sub: dict[int, Polynomial] = {}
        target: Ring | None = None
        for key, val in images.items():
            i = ring._index[key] if isinstance(key, str) else key
            if not isinstance(val, Polynomial):
                raise InputError("substitution images must be polynomials")
            if target is None:
                target = val.ring
            elif val.ring != target:
                raise InputError("substitution images live in different rings")
            sub[i] = val
        if target is None:
            target = ring
        if target == ring:
            pass
        elif target.field != ring.field:
            raise InputError("substitution cannot change the coefficient field")
        out = target.zero
        pows: dict[tuple[int, int], Polynomial] = {}
        for k, v in self.terms.items():
            piece = target.constant(self.ring.field.from_code(v))
            for i, e in enumerate(k):
                if not e:
                    continue
                if i in sub:
                    key = (i, e)
                    if key not in pows:
                        pows[key] = sub[i] ** e
                    piece = piece * pows[key]
                else:
                    if target != ring:
                        raise InputError(
                            f"variable {ring.variables[i]!r} has no image")
                    piece = piece * target.monomial(
                        tuple(e if j == i else 0 for j in range(ring.n)))
            out = out + piece
        return out

    # -- text ---------------------------------------------------------------

    def text(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        f = ring.field
        pieces: list[str] = []
        for exps in sorted(self.terms, key=order.key, reverse=True):
            code = self.terms[exps]
            mono_atoms = []
            for i, e in enumerate(exps):
                if e == 1:
                    mono_atoms.append(ring.variables[i])
                elif e > 1:
                    mono_atoms.append(f"{ring.variables[i]}^{e}")
            if f.m == 1:
                atoms = []
                if code != 1 or not mono_atoms:
                    atoms.append(str(code))
                pieces.append("*".join(atoms + mono_atoms))
            else:
                digits = f.coords(code)
                for i in range(f.m - 1, -1, -1):
                    c = digits[i]
                    if not c:
                        continue
                    atoms = []
                    if c != 1 or (i == 0 and not mono_atoms):
                        atoms.append(str(c))
                    if i == 1:
                        atoms.append("g")
                    elif i > 1:
                        atoms.append(f"g^{i}")
                    pieces.append("*".join(atoms + mono_atoms))
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.text()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self.ring.constant(other)
        return (isinstance(other, Polynomial)
                and self.ring == other.ring and self.terms == other.terms)

    __hash__ = None  # mutable-dict payload; identity hashing would mislead

    def __repr__(self) -> str:
        return f"<{self.text()}>"


# -- parsing ----------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.items: list[tuple[str, str, int]] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("int", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                m = _NAME_RE.match(text, i)
                self.items.append(("name", m.group(), i))
                i = m.end()
            elif ch in "+-*^":
                self.items.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i + 1)
        self.k = 0

    def peek(self):
        return self.items[self.k] if self.k < len(self.items) else None

    def next(self):
        t = self.peek()
        if t is not None:
            self.k += 1
        return t

    def end_pos(self) -> int:
        return len(self.text) + 1


def parse_poly(text: str, ring: Ring) -> Polynomial:
    """Parse the ASCII grammar; raises ParseError with a 1-based position."""
    toks = _Tokens(text)
    f = ring.field

    def parse_nat(after: str) -> int:
        t = toks.next()
        if t is None or t[0] != "int":
            pos = t[2] + 1 if t else toks.end_pos()
            raise ParseError(f"expected integer exponent after {after!r}", pos)
        return int(t[1])

    def parse_atom() -> tuple[int, tuple[int, ...]]:
        # returns (coefficient code, exponent tuple)
        t = toks.next()
        if t is None:
            raise ParseError("expected an atom", toks.end_pos())
        kind, val, pos = t
        zero = (0,) * ring.n
        if kind == "int":
            return f.from_int(int(val)), zero
        if kind == "name":
            if val in ring._index:
                i = ring._index[val]
                e = 1
                nxt = toks.peek()
                if nxt is not None and nxt[0] == "^":
                    toks.next()
                    e = parse_nat(val)
                return 1, tuple(e if j == i else 0 for j in range(ring.n))
            if val == "g":
                if f.m == 1:
                    raise ParseError(
                        "'g' denotes the extension generator but the field "
                        "is prime", pos + 1)
                e = 1
                nxt = toks.peek()
                if nxt is not None and nxt[0] == "^":
                    toks.next()
                    e = parse_nat("g")
                return f.pow(f.p, e), zero
            raise ParseError(f"unknown identifier {val!r}", pos + 1)
        raise ParseError(f"expected an atom, got {val!r}", pos + 1)

    def parse_term() -> tuple[int, tuple[int, ...]]:
        coeff, exps = parse_atom()
        while True:
            nxt = toks.peek()
            if nxt is None or nxt[0] != "*":
                break
            toks.next()
            c2, e2 = parse_atom()
            coeff = f.mul(coeff, c2)
            exps = tuple(a + b for a, b in zip(exps, e2))
        return coeff, exps

    acc: dict = {}

    def take(coeff: int, exps: tuple[int, ...], sign: int) -> None:
        if sign < 0:
            coeff = f.neg(coeff)
        s = f.add(acc.get(exps, 0), coeff)
        if s:
            acc[exps] = s
        else:
            acc.pop(exps, None)

    coeff, exps = parse_term()
    take(coeff, exps, +1)
    while True:
        t = toks.peek()
        if t is None:
            break
        if t[0] not in "+-":
            raise ParseError(f"expected '+' or '-', got {t[1]!r}", t[2] + 1)
        toks.next()
        coeff, exps = parse_term()
        take(coeff, exps, +1 if t[0] == "+" else -1)
    return Polynomial(ring, acc)
