"""Ideal algebra on top of the Buchberger engine.

IdealHandle is the unit of sharing: generators plus a per-order cache of
reduced Groebner bases.  All the classical constructions live here as
module-level functions: membership, equality, intersection (tag variable),
colon, elimination, bracket powers of Frobenius, combinatorial Krull
dimension, staircase colength counting, minimal m-power inclusion,
subalgebra presentations, and the squarefreeness test for hypersurfaces.

Colon ideals get special care because perturbation experiments hammer them:
when the inner ideal is handed over as a Groebner basis already, the tag
construction marks those generators as a known-basis prefix so Buchberger
skips every pair inside the prefix (their S-polynomials already have
standard representations after multiplication by the tag variable).
"""

from __future__ import annotations

import threading

from .engine import (DEFAULT_LIMITS, BasisContext, KeyOverflow, Limits,
                     groebner, make_context, widen_context)
from .errors import InputError, InternalError
from .orders import GREVLEX, MonomialOrder, block_order
from .poly import Polynomial, Ring


class GroebnerBasis:
    """A reduced basis frozen together with a reduction context."""

    __slots__ = ("ring", "order", "elements", "_ctx")

    def __init__(self, ring: Ring, order: MonomialOrder,
                 elements: list[Polynomial]):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        self._ctx: BasisContext | None = None

    def normal_form(self, f: Polynomial) -> Polynomial:
        """Fully reduced remainder of f; zero iff f lies in the ideal."""
        while True:
            if self._ctx is None:
                self._ctx = make_context(list(self.elements), self.ring,
                                         self.order, extra=[f])
            try:
                return self._ctx.normal_form(f)
            except KeyOverflow as o:
                self._ctx = widen_context(self._ctx, o.needed_degree,
                                          list(self.elements))

    def reduces_to_zero(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def contains_one(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.elements)

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [g.leading_term(self.order)[0].exponents for g in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


class IdealHandle:
    """Generators plus a lazily filled per-order basis cache."""

    __slots__ = ("ring", "generators", "limits", "_cache", "_lock")

    def __init__(self, ring: Ring, generators, limits: Limits = DEFAULT_LIMITS):
        gens = []
        for f in generators:
            if not isinstance(f, Polynomial):
                raise InputError("ideal generators must be polynomials")
            if f.ring != ring:
                raise InputError("generator lives in a different ring")
            if not f.is_zero():
                gens.append(f)
        self.ring = ring
        self.generators = tuple(gens)
        self.limits = limits
        self._cache: dict[MonomialOrder, GroebnerBasis] = {}
        self._lock = threading.Lock()

    def basis(self, order: MonomialOrder = GREVLEX,
              deadline: float | None = None) -> GroebnerBasis:
        with self._lock:
            got = self._cache.get(order)
        if got is not None:
            return got
        elems = groebner(list(self.generators), self.ring, order,
                         self.limits, deadline=deadline)
        gb = GroebnerBasis(self.ring, order, elems)
        for f in self.generators:
            if not gb.normal_form(f).is_zero():
                raise InternalError("a generator fails to reduce to zero "
                                    "against its own basis")
        with self._lock:
            return self._cache.setdefault(order, gb)

    def seed_cache(self, gb: GroebnerBasis) -> None:
        with self._lock:
            self._cache.setdefault(gb.order, gb)

    def plus(self, other: "IdealHandle") -> "IdealHandle":
        if other.ring != self.ring:
            raise InputError("ideals live in different rings")
        return IdealHandle(self.ring, self.generators + other.generators,
                           self.limits)

    def with_polys(self, polys) -> "IdealHandle":
        return IdealHandle(self.ring, self.generators + tuple(polys),
                           self.limits)

    def __repr__(self) -> str:
        inside = ", ".join(g.text() for g in self.generators) or "0"
        return f"ideal({inside})"


def groebner_basis(I: IdealHandle, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    return I.basis(order)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.normal_form(f)


def ideal_equal(I: IdealHandle, J: IdealHandle,
                order: MonomialOrder = GREVLEX) -> bool:
    if I.ring != J.ring:
        raise InputError("ideals live in different rings")
    return I.basis(order).elements == J.basis(order).elements


# -- intersection, colon, elimination -----------------------------------------

def _tag_name(ring: Ring) -> str:
    name = "_w"
    k = 0
    while name in ring.variables:
        name = f"_w{k}"
        k += 1
    return name


def _lift_front(f: Polynomial, target: Ring) -> Polynomial:
    pad = target.n - f.ring.n
    return Polynomial(target, {(0,) * pad + e: c for e, c in f.terms.items()})


def _drop_front(f: Polynomial, target: Ring, k: int) -> Polynomial:
    return Polynomial(target, {e[k:]: c for e, c in f.terms.items()})


def eliminate(I: IdealHandle, k: int) -> IdealHandle:
    """I intersected with the subring on the last n-k variables."""
    n = I.ring.n
    if not 1 <= k < n:
        raise InputError(f"cannot eliminate {k} of {n} variables")
    gb = I.basis(block_order(k))
    target = I.ring.drop_front(k)
    kept = [_drop_front(g, target, k) for g in gb.elements
            if all(all(e == 0 for e in exps[:k]) for exps in g.terms)]
    # the kept subset is itself reduced, monic, and sorted for grevlex on
    # the remaining variables, so the cache can be seeded directly
    out = IdealHandle(target, kept, I.limits)
    out.seed_cache(GroebnerBasis(target, GREVLEX, kept))
    return out


def intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I and J meet, by eliminating a tag variable from w I + (1-w) J."""
    if I.ring != J.ring:
        raise InputError("ideals live in different rings")
    ring = I.ring
    if not I.generators:
        return I
    if not J.generators:
        return J
    ext = ring.extend_front([_tag_name(ring)])
    w = ext.variable(0)
    gens = [w * _lift_front(f, ext) for f in I.generators]
    gens += [(ext.one - w) * _lift_front(g, ext) for g in J.generators]
    inner = IdealHandle(ext, gens, I.limits)
    return eliminate(inner, 1)


def divide_exact(h: Polynomial, f: Polynomial) -> Polynomial:
    """Quotient h/f when the division is exact (grevlex leading terms)."""
    if f.is_zero():
        raise InputError("division by the zero polynomial")
    ring = h.ring
    field = ring.field
    flt, flc = f.leading_term(GREVLEX)
    finv = field.inv(flc.code)
    fexp = flt.exponents
    quot: dict = {}
    rest = dict(h.terms)
    while rest:
        exps = max(rest, key=GREVLEX.key)
        c = rest.pop(exps)
        mult = tuple(a - b for a, b in zip(exps, fexp))
        if any(e < 0 for e in mult):
            raise InternalError("inexact polynomial division")
        qc = field.mul(c, finv)
        quot[mult] = qc
        for fe, fc in f.terms.items():
            if fe == fexp:
                continue
            te = tuple(a + b for a, b in zip(fe, mult))
            nv = field.sub(rest.get(te, 0), field.mul(qc, fc))
            if nv:
                rest[te] = nv
            else:
                rest.pop(te, None)
    return Polynomial(ring, quot)


def colon_by_basis(gb_elements: list[Polynomial], ring: Ring, f: Polynomial,
                   limits: Limits = DEFAULT_LIMITS,
                   deadline: float | None = None) -> list[Polynomial]:
    """Reduced grevlex basis of (I : f), where gb_elements is any grevlex
    Groebner basis of I (not necessarily reduced).  The tag construction
    skips all pairs inside the lifted basis prefix."""
    if f.is_zero():
        raise InputError("colon by the zero polynomial")
    if not gb_elements:
        return []
    # (I : f) = (I : f - r) for any r in I, so replace the multiplier by its
    # normal form first; tails supported inside I disappear before the tag
    # construction ever sees them
    f = GroebnerBasis(ring, GREVLEX, list(gb_elements)).normal_form(f)
    if f.is_zero():
        return [ring.one]
    if f.is_constant():
        return groebner(list(gb_elements), ring, GREVLEX, limits,
                        gb_prefix=len(gb_elements), deadline=deadline)
    ext = ring.extend_front([_tag_name(ring)])
    w = ext.variable(0)
    gens = [w * _lift_front(g, ext) for g in gb_elements]
    gens.append(_lift_front(f, ext) - w * _lift_front(f, ext))
    inner = groebner(gens, ext, block_order(1), limits,
                     gb_prefix=len(gb_elements), deadline=deadline)
    kept = [_drop_front(g, ring, 1) for g in inner
            if all(exps[0] == 0 for exps in g.terms)]
    quotients = [divide_exact(g, f) for g in kept]
    # quotients form a Groebner basis already; one interreduction pass
    # restores reducedness (gb_prefix covering everything skips all pairs)
    return groebner(quotients, ring, GREVLEX, limits,
                    gb_prefix=len(quotients), deadline=deadline)


def colon(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I : J = {g : gJ inside I}, via intersections of single colons."""
    if I.ring != J.ring:
        raise InputError("ideals live in different rings")
    if not J.generators:
        raise InputError("colon by the zero ideal")
    if not I.generators:
        return I
    ring = I.ring
    result: IdealHandle | None = None
    base = I.basis(GREVLEX)
    for f in J.generators:
        part_elems = colon_by_basis(list(base.elements), ring, f, I.limits)
        part = IdealHandle(ring, part_elems, I.limits)
        part.seed_cache(GroebnerBasis(ring, GREVLEX, part_elems))
        result = part if result is None else intersect(result, part)
    return result


def frobenius_power(I: IdealHandle, e: int) -> IdealHandle:
    """The ideal generated by the p^e-th powers of the generators."""
    if not isinstance(e, int) or e < 0:
        raise InputError("Frobenius power index must be nonnegative")
    return IdealHandle(I.ring, [f.frobenius_pow(e) for f in I.generators],
                       I.limits)


# -- dimension and staircases --------------------------------------------------

def _minimalize(corners) -> frozenset:
    items = sorted(set(corners), key=lambda c: (sum(c), c))
    kept: list[tuple[int, ...]] = []
    for c in items:
        if not any(all(a <= b for a, b in zip(k, c)) for k in kept):
            kept.append(c)
    return frozenset(kept)


class Staircase:
    """The complement of a monomial ideal given by its minimal corners."""

    __slots__ = ("corners", "n", "_memo_count", "_memo_deg", "_memo_max")

    def __init__(self, corners, n: int):
        self.n = n
        self.corners = _minimalize(corners)
        self._memo_count: dict = {}
        self._memo_deg: dict = {}
        self._memo_max: dict = {}

    def is_trivial(self) -> bool:
        """True when the ideal is the unit ideal (no standard monomials)."""
        return any(sum(c) == 0 for c in self.corners)

    def zero_dimensional(self) -> bool:
        for i in range(self.n):
            if not any(c[i] > 0 and all(e == 0 for j, e in enumerate(c)
                                        if j != i)
                       for c in self.corners):
                return False
        return True

    def pure_power_bounds(self) -> list[int | None]:
        out: list[int | None] = [None] * self.n
        for c in self.corners:
            support = [i for i, e in enumerate(c) if e]
            if len(support) == 1:
                out[support[0]] = c[support[0]]
            elif len(support) == 0:
                out = [0] * self.n
        return out

    # counting: recursion over the last variable, slicing at the distinct
    # last-coordinate values of the corners; memoized on corner sets

    def count(self) -> int:
        if self.is_trivial():
            return 0
        if not self.zero_dimensional():
            raise InputError("staircase is infinite (dimension > 0)")
        return self._count(self.corners, self.n)

    def _count(self, corners: frozenset, n: int) -> int:
        if any(sum(c) == 0 for c in corners):
            return 0
        if n == 1:
            return min(c[0] for c in corners)
        got = self._memo_count.get(corners)
        if got is not None:
            return got
        bounds = sorted({0} | {c[-1] for c in corners})
        total = 0
        for idx, lo in enumerate(bounds):
            active = _minimalize(c[:-1] for c in corners if c[-1] <= lo)
            if any(sum(c) == 0 for c in active):
                break
            if idx + 1 < len(bounds):
                width = bounds[idx + 1] - lo
            else:
                raise InternalError("unbounded staircase slice")
            total += width * self._count(active, n - 1)
        self._memo_count[corners] = total
        return total

    def count_degree(self, k: int) -> int:
        """Standard monomials of total degree exactly k (any dimension)."""
        if self.is_trivial():
            return 0
        return self._count_degree(self.corners, self.n, k)

    def _count_degree(self, corners: frozenset, n: int, k: int) -> int:
        if k < 0:
            return 0
        if any(sum(c) == 0 for c in corners):
            return 0
        if n == 1:
            if not corners:
                return 1
            return 1 if k < min(c[0] for c in corners) else 0
        key = (corners, k)
        got = self._memo_deg.get(key)
        if got is not None:
            return got
        bounds = sorted({0} | {c[-1] for c in corners})
        total = 0
        for idx, lo in enumerate(bounds):
            if lo > k:
                break
            active = _minimalize(c[:-1] for c in corners if c[-1] <= lo)
            if any(sum(c) == 0 for c in active):
                break
            hi = bounds[idx + 1] if idx + 1 < len(bounds) else k + 1
            for e in range(lo, min(hi, k + 1)):
                total += self._count_degree(active, n - 1, k - e)
        self._memo_deg[key] = total
        return total

    def max_degree(self) -> int:
        """Largest total degree of a standard monomial; -1 when empty."""
        if self.is_trivial():
            return -1
        if not self.zero_dimensional():
            raise InputError("staircase is infinite (dimension > 0)")
        return self._max_degree(self.corners, self.n)

    def _max_degree(self, corners: frozenset, n: int) -> int:
        if any(sum(c) == 0 for c in corners):
            return -1
        if n == 1:
            return min(c[0] for c in corners) - 1
        got = self._memo_max.get(corners)
        if got is not None:
            return got
        bounds = sorted({0} | {c[-1] for c in corners})
        best = -1
        for idx, lo in enumerate(bounds):
            active = _minimalize(c[:-1] for c in corners if c[-1] <= lo)
            if any(sum(c) == 0 for c in active):
                break
            if idx + 1 >= len(bounds):
                raise InternalError("unbounded staircase slice")
            sub = self._max_degree(active, n - 1)
            if sub >= 0:
                best = max(best, bounds[idx + 1] - 1 + sub)
        self._memo_max[corners] = best
        return best


def staircase_of(gb: GroebnerBasis) -> Staircase:
    return Staircase(gb.leading_exponents(), gb.ring.n)


def krull_dim(I: IdealHandle) -> int:
    """Dimension of the quotient by I, combinatorially from leading terms."""
    d = _dim_or_unit(I)
    if d < 0:
        raise InputError("the unit ideal presents the empty scheme")
    return d


def _dim_or_unit(I: IdealHandle) -> int:
    """Like krull_dim but returns -1 for the unit ideal."""
    gb = I.basis(GREVLEX)
    if gb.contains_one():
        return -1
    n = I.ring.n
    supports = []
    for exps in gb.leading_exponents():
        supports.append(sum(1 << i for i, e in enumerate(exps) if e))
    best = 0
    for mask in range(1 << n):
        size = mask.bit_count()
        if size <= best:
            continue
        if all(s & ~mask for s in supports):
            best = size
    return best


def colength(I: IdealHandle) -> int:
    """Vector-space dimension of the quotient by I, by staircase count."""
    gb = I.basis(GREVLEX)
    if gb.contains_one():
        raise InputError("ideal is not contained in the maximal ideal")
    st = staircase_of(gb)
    if not st.zero_dimensional():
        raise InputError("ideal is not zero-dimensional")
    return st.count()


def m_power_in(I: IdealHandle) -> int:
    """Minimal N with every monomial of total degree N inside I."""
    gb = I.basis(GREVLEX)
    if gb.contains_one():
        raise InputError("ideal is not contained in the maximal ideal")
    st = staircase_of(gb)
    if not st.zero_dimensional():
        raise InputError("ideal is not zero-dimensional")
    ring = I.ring
    n = ring.n
    length = st.count()

    # per-variable nilpotency bounds certify termination; a pure power that
    # never lands in the ideal within the colength bound means the ideal has
    # components away from the origin
    monomial_members: list[tuple[int, ...]] = []
    pure_bounds = []
    for i in range(n):
        def member(b: int) -> bool:
            return gb.normal_form(ring.monomial(
                tuple(b if j == i else 0 for j in range(n)))).is_zero()
        # in an artinian local quotient of length L the maximal ideal
        # satisfies m^L = 0, so x_i^L must land in a primary ideal
        lo, hi = 1, length
        if not member(length):
            raise InputError(
                "no bounded power of a variable lies in the ideal: the "
                "ideal is zero-dimensional but not primary to the origin")
        while lo < hi:
            mid = (lo + hi) // 2
            if member(mid):
                hi = mid
            else:
                lo = mid + 1
        pure_bounds.append(lo)
        monomial_members.append(tuple(lo if j == i else 0 for j in range(n)))
    for g in gb.elements:
        if len(g.terms) == 1:
            monomial_members.append(next(iter(g.terms)))

    def all_in(N: int) -> bool:
        # every degree-N monomial; skip those under a known monomial member
        stack = [(N, ())]
        while stack:
            left, prefix = stack.pop()
            if len(prefix) == n - 1:
                cand = prefix + (left,)
                if any(all(a >= b for a, b in zip(cand, mem))
                       for mem in monomial_members):
                    continue
                if not gb.normal_form(ring.monomial(cand)).is_zero():
                    return False
                continue
            for e in range(left + 1):
                stack.append((left - e, prefix + (e,)))
        return True

    lo = st.max_degree() + 1
    if lo < 1:
        lo = 1
    # homogeneous shortcut: the degree-N graded piece of the quotient is
    # spanned by the degree-N standard monomials, so every degree-N
    # monomial is a member exactly when none of them is standard
    if all(len({sum(k) for k in g.terms}) == 1 for g in gb.elements):
        return lo
    hi = sum(b - 1 for b in pure_bounds) + 1
    # all_in is monotone: a degree-(N+1) monomial is a variable times a
    # degree-N monomial
    while lo < hi:
        mid = (lo + hi) // 2
        if all_in(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def subalgebra_presentation(gens: list[Polynomial],
                            names: list[str] | None = None,
                            limits: Limits = DEFAULT_LIMITS) -> IdealHandle:
    """Relations among the given ring elements: the kernel of the map
    sending fresh variables onto them, by eliminating the ambient ring."""
    if not gens:
        raise InputError("need at least one subalgebra generator")
    ring = gens[0].ring
    for f in gens:
        if f.ring != ring:
            raise InputError("generators live in different rings")
        if f.is_constant():
            raise InputError("subalgebra generators must be nonconstant")
    s = len(gens)
    if names is None:
        names = []
        for i in range(1, s + 1):
            base = f"a{i}"
            while base in ring.variables:
                base = "_" + base
            names.append(base)
    elif len(names) != s:
        raise InputError("need exactly one name per generator")
    big = Ring(ring.field, ring.variables + tuple(names))

    def lift_back(f: Polynomial) -> Polynomial:
        return Polynomial(big, {e + (0,) * s: c for e, c in f.terms.items()})

    rel = []
    for i, f in enumerate(gens):
        a = big.variable(ring.n + i)
        rel.append(a - lift_back(f))
    inner = IdealHandle(big, rel, limits)
    return eliminate(inner, ring.n)


def is_squarefree_hypersurface(f: Polynomial) -> bool:
    """Reducedness of a hypersurface over a perfect coefficient field: no
    vanishing total differential, and a singular locus of codimension >= 2."""
    if f.is_constant():
        raise InputError("squarefreeness needs a nonconstant polynomial")
    ring = f.ring
    partials = [f.partial(i) for i in range(ring.n)]
    if all(g.is_zero() for g in partials):
        return False
    jac = IdealHandle(ring, [f] + partials)
    return _dim_or_unit(jac) <= ring.n - 2
