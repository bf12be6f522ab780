"""Buchberger engine on packed exponent keys.

A monomial is encoded as a single integer whose bit fields are arranged so
that plain integer comparison agrees with the active monomial order:

    grevlex   [total degree | C-e_n | ... | C-e_1]
    lex       [e_1 | e_2 | ... | e_n]
    block(k)  [fields of block 1 | fields of block 2]   (grevlex per block,
              a single-variable block collapses to a bare exponent field)

Every field is w bits wide with one guard bit above it.  Complement fields
(C - e, C = 2^w - 1) make the grevlex tie-break come out right; they also
make monomial multiplication affine:  key(ab) = key(a) + key(b) - key(1).
Divisibility is two guarded subtractions:  a | t  iff  t - a has no borrow
on the direct fields and a - t has none on the complement fields.

Widths are chosen per computation.  When degrees outgrow the current width
the whole computation is restarted with wider fields (KeyOverflow is the
internal signal); only the configured degree limit turns that into an error.
Keys are arbitrary-precision ints; when the layout fits in 62 bits the
divisor search over basis leading terms is done on an int64 numpy array.

Polynomials here are bare dicts {key: coefficient code}; conversion from and
to the public Polynomial type happens at the boundary.
"""

from __future__ import annotations

import heapq
import time

import numpy as np

from .errors import InputError, LimitError
from .field import Field
from .orders import MonomialOrder
from .poly import Polynomial, Ring

DEFAULT_MAX_BASIS = 5000
DEFAULT_MAX_DEGREE = 1 << 20


class Limits:
    """Resource caps for basis computations; shared across the package."""

    __slots__ = ("max_basis", "max_degree", "max_seconds")

    def __init__(self, max_basis: int = DEFAULT_MAX_BASIS,
                 max_degree: int = DEFAULT_MAX_DEGREE,
                 max_seconds: float | None = None):
        if max_basis < 1 or max_degree < 1:
            raise InputError("limits must be positive")
        self.max_basis = max_basis
        self.max_degree = max_degree
        self.max_seconds = max_seconds

    def deadline(self) -> float | None:
        if self.max_seconds is None:
            return None
        return time.monotonic() + self.max_seconds


DEFAULT_LIMITS = Limits()


class KeyOverflow(Exception):
    """Internal: a degree outgrew the current field width; retry wider."""

    def __init__(self, needed_degree: int):
        self.needed_degree = needed_degree


class PackSpec:
    """Key layout for one (variable count, order, width) combination."""

    __slots__ = ("n", "order", "w", "C", "fields", "shifts", "zero_key",
                 "g_all", "g_dir", "g_comp", "nbits")

    def __init__(self, n: int, order: MonomialOrder, w: int):
        if order.kind == "block" and not 0 < order.block < n:
            raise InputError(
                f"block({order.block}) needs between 1 and {n - 1} variables")
        self.n = n
        self.order = order
        self.w = w
        self.C = (1 << w) - 1
        # field descriptors, most significant first:
        #   ('deg', (lo, hi))   total degree of variables lo..hi-1
        #   ('dir', i)          exponent of variable i, direct
        #   ('comp', i)         exponent of variable i, complemented
        fields: list[tuple[str, object]] = []

        def grevlex_block(lo: int, hi: int) -> None:
            if hi - lo == 1:
                fields.append(("dir", lo))
                return
            fields.append(("deg", (lo, hi)))
            for i in range(hi - 1, lo - 1, -1):
                fields.append(("comp", i))

        if order.kind == "grevlex":
            grevlex_block(0, n)
        elif order.kind == "lex":
            for i in range(n):
                fields.append(("dir", i))
        else:
            grevlex_block(0, order.block)
            grevlex_block(order.block, n)
        self.fields = fields
        nf = len(fields)
        self.nbits = nf * (w + 1)
        self.shifts = [(nf - 1 - j) * (w + 1) for j in range(nf)]
        zero = 0
        g_all = g_dir = g_comp = 0
        for (kind, _), sh in zip(fields, self.shifts):
            guard = 1 << (sh + w)
            g_all |= guard
            if kind == "comp":
                zero |= self.C << sh
                g_comp |= guard
            else:
                g_dir |= guard
        self.zero_key = zero
        self.g_all = g_all
        self.g_dir = g_dir
        self.g_comp = g_comp

    # -- scalar key operations -------------------------------------------

    def pack(self, exps: tuple[int, ...]) -> int:
        C = self.C
        key = 0
        for (kind, spec), sh in zip(self.fields, self.shifts):
            if kind == "deg":
                lo, hi = spec
                v = sum(exps[lo:hi])
            elif kind == "dir":
                v = exps[spec]
            else:
                e = exps[spec]
                if e > C:
                    raise KeyOverflow(e)
                v = C - e
            if v > C:
                raise KeyOverflow(v)
            key |= v << sh
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        C = self.C
        exps = [0] * self.n
        for (kind, spec), sh in zip(self.fields, self.shifts):
            v = (key >> sh) & C
            if kind == "dir":
                exps[spec] = v
            elif kind == "comp":
                exps[spec] = C - v
        return tuple(exps)

    def key_degree(self, key: int) -> int:
        C = self.C
        total = 0
        for (kind, _), sh in zip(self.fields, self.shifts):
            if kind != "comp":
                total += (key >> sh) & C
        return total

    def divides(self, a: int, t: int) -> bool:
        g = self.g_all
        if ((t | g) - a) & self.g_dir != self.g_dir:
            return False
        return ((a | g) - t) & self.g_comp == self.g_comp

    def lcm_key(self, ea: tuple[int, ...], eb: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        exps = tuple(max(x, y) for x, y in zip(ea, eb))
        return self.pack(exps), exps


def _np_ready(spec: PackSpec) -> bool:
    return spec.nbits <= 62


class GPoly:
    """A monic basis element frozen for fast reduction."""

    __slots__ = ("keys", "coeffs", "lt_key", "lt_exps", "maxdeg")

    def __init__(self, keys: list[int], coeffs: list[int],
                 lt_exps: tuple[int, ...], maxdeg: int):
        self.keys = keys          # descending; keys[0] is the leading term
        self.coeffs = coeffs      # coeffs[0] == 1
        self.lt_key = keys[0]
        self.lt_exps = lt_exps
        self.maxdeg = maxdeg


def _freeze(d: dict[int, int], spec: PackSpec, field: Field) -> GPoly:
    keys = sorted(d, reverse=True)
    lead = d[keys[0]]
    if lead != 1:
        inv = field.inv(lead)
        coeffs = [field.mul(inv, d[k]) for k in keys]
    else:
        coeffs = [d[k] for k in keys]
    maxdeg = max(spec.key_degree(k) for k in keys)
    return GPoly(keys, coeffs, spec.unpack(keys[0]), maxdeg)


def _to_dict(f: Polynomial, spec: PackSpec) -> dict[int, int]:
    return {spec.pack(e): c for e, c in f.terms.items()}


def _to_poly(d: dict[int, int], spec: PackSpec, ring: Ring) -> Polynomial:
    return Polynomial(ring, {spec.unpack(k): c for k, c in d.items()})


class BasisContext:
    """A fixed basis prepared for repeated normal-form reduction."""

    __slots__ = ("ring", "order", "field", "spec", "elems", "_lt_list",
                 "_lt_arr", "_lt_arr_guarded", "min_lt_deg")

    def __init__(self, ring: Ring, order: MonomialOrder, spec: PackSpec,
                 elems: list[GPoly]):
        self.ring = ring
        self.order = order
        self.field = ring.field
        self.spec = spec
        self.elems = elems
        self._lt_list = [g.lt_key for g in elems]
        self._lt_arr = None
        self._lt_arr_guarded = None
        if elems and _np_ready(spec):
            self._lt_arr = np.array(self._lt_list, dtype=np.int64)
            self._lt_arr_guarded = self._lt_arr | spec.g_all
        self.min_lt_deg = (min(spec.key_degree(k) for k in self._lt_list)
                           if elems else None)

    def find_reducer(self, key: int, key_deg: int) -> int | None:
        if self.min_lt_deg is None or key_deg < self.min_lt_deg:
            return None
        spec = self.spec
        if self._lt_arr is not None:
            hits = ((((key | spec.g_all) - self._lt_arr) & spec.g_dir)
                    == spec.g_dir)
            if spec.g_comp:
                hits &= (((self._lt_arr_guarded - key) & spec.g_comp)
                         == spec.g_comp)
            idx = np.argmax(hits)
            if hits[idx]:
                return int(idx)
            return None
        for i, lt in enumerate(self._lt_list):
            if spec.divides(lt, key):
                return i
        return None

    def divisor_indices(self, key: int) -> list[int]:
        """All basis indices whose leading term divides `key`."""
        if self.min_lt_deg is None:
            return []
        spec = self.spec
        if self._lt_arr is not None:
            hits = ((((key | spec.g_all) - self._lt_arr) & spec.g_dir)
                    == spec.g_dir)
            if spec.g_comp:
                hits &= (((self._lt_arr_guarded - key) & spec.g_comp)
                         == spec.g_comp)
            return [int(i) for i in np.nonzero(hits)[0]]
        return [i for i, lt in enumerate(self._lt_list)
                if spec.divides(lt, key)]

    def reduce_dict(self, work: dict[int, int]) -> dict[int, int]:
        """Full normal form of a working dict; consumes its argument."""
        spec, field = self.spec, self.field
        C = spec.C
        remainder: dict[int, int] = {}
        heap = [-k for k in work]
        heapq.heapify(heap)
        while heap:
            k = -heapq.heappop(heap)
            c = work.pop(k, 0)
            if not c:
                continue
            kdeg = spec.key_degree(k)
            gi = self.find_reducer(k, kdeg)
            if gi is None:
                remainder[k] = c
                continue
            g = self.elems[gi]
            mult_deg = kdeg - spec.key_degree(g.lt_key)
            if g.maxdeg + mult_deg > C:
                raise KeyOverflow(g.maxdeg + mult_deg)
            delta = k - g.lt_key
            gkeys, gcoeffs = g.keys, g.coeffs
            for t in range(1, len(gkeys)):
                nk = gkeys[t] + delta
                nv = field.sub(work.get(nk, 0), field.mul(c, gcoeffs[t]))
                if nv:
                    if nk not in work:
                        heapq.heappush(heap, -nk)
                    work[nk] = nv
                else:
                    work.pop(nk, None)
        return remainder

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise InputError("polynomial lives in a different ring")
        work = _to_dict(f, self.spec)
        return _to_poly(self.reduce_dict(work), self.spec, self.ring)

    def reduces_to_zero(self, f: Polynomial) -> bool:
        work = _to_dict(f, self.spec)
        return not self.reduce_dict(work)


def _initial_width(polys: list[Polynomial], floor: int = 0) -> int:
    maxdeg = 1
    for f in polys:
        d = f.total_degree()
        if d > maxdeg:
            maxdeg = d
    need = max(2 * maxdeg + 4, 32, floor)
    return need.bit_length()


def make_context(gb: list[Polynomial], ring: Ring, order: MonomialOrder,
                 extra: list[Polynomial] | None = None,
                 width_floor: int = 0) -> BasisContext:
    """Prepare a known Groebner basis for repeated reduction.  `extra`
    only influences the width choice (polynomials that will be reduced)."""
    w = max(_initial_width(list(gb) + list(extra or [])), width_floor)
    while True:
        spec = PackSpec(ring.n, order, w)
        try:
            elems = [_freeze(_to_dict(g, spec), spec, ring.field)
                     for g in gb if not g.is_zero()]
            return BasisContext(ring, order, spec, elems)
        except KeyOverflow as o:
            w = max(w + 2, (2 * o.needed_degree + 4).bit_length())


def widen_context(ctx: BasisContext, hint: int, gb: list[Polynomial]) -> BasisContext:
    """Rebuild a context after a KeyOverflow with degree `hint`."""
    w = max(ctx.spec.w + 2, (2 * hint + 4).bit_length())
    return make_context(gb, ctx.ring, ctx.order, width_floor=w)


def normal_form(f: Polynomial, gb: list[Polynomial], order: MonomialOrder) -> Polynomial:
    """One-shot normal form; widens and retries on overflow."""
    ring = f.ring
    w = _initial_width(list(gb) + [f])
    while True:
        spec = PackSpec(ring.n, order, w)
        try:
            elems = [_freeze(_to_dict(g, spec), spec, ring.field)
                     for g in gb if not g.is_zero()]
            ctx = BasisContext(ring, order, spec, elems)
            return ctx.normal_form(f)
        except KeyOverflow as o:
            w = max(w + 2, (2 * o.needed_degree + 4).bit_length())


class _Buchberger:
    def __init__(self, ring: Ring, order: MonomialOrder, spec: PackSpec,
                 limits: Limits, deadline: float | None):
        self.ring = ring
        self.order = order
        self.spec = spec
        self.field = ring.field
        self.limits = limits
        self.deadline = deadline
        self.basis: list[GPoly] = []
        self.ctx: BasisContext | None = None
        self.pairs: list[tuple[int, int, int, int]] = []
        self.pending: set[tuple[int, int]] = set()

    def _refresh_ctx(self) -> None:
        self.ctx = BasisContext(self.ring, self.order, self.spec, self.basis)

    def _push_pairs(self, j: int) -> None:
        gj = self.basis[j]
        for i in range(j):
            gi = self.basis[i]
            # product criterion: disjoint leading supports never contribute
            if all(a == 0 or b == 0 for a, b in zip(gi.lt_exps, gj.lt_exps)):
                continue
            lk, lexps = self.spec.lcm_key(gi.lt_exps, gj.lt_exps)
            heapq.heappush(self.pairs, (sum(lexps), lk, i, j))
            self.pending.add((i, j))

    def _chain_skippable(self, i: int, j: int, lcm_k: int) -> bool:
        for l in self.ctx.divisor_indices(lcm_k):
            if l == i or l == j:
                continue
            a = (min(i, l), max(i, l))
            b = (min(j, l), max(j, l))
            if a not in self.pending and b not in self.pending:
                return True
        return False

    def _spoly(self, i: int, j: int, lcm_k: int) -> dict[int, int]:
        spec, field = self.spec, self.field
        gi, gj = self.basis[i], self.basis[j]
        lcm_deg = spec.key_degree(lcm_k)
        if max(gi.maxdeg + lcm_deg - spec.key_degree(gi.lt_key),
               gj.maxdeg + lcm_deg - spec.key_degree(gj.lt_key)) > spec.C:
            raise KeyOverflow(lcm_deg + max(gi.maxdeg, gj.maxdeg))
        di = lcm_k - gi.lt_key
        dj = lcm_k - gj.lt_key
        work: dict[int, int] = {}
        for t in range(len(gi.keys)):
            k = gi.keys[t] + di
            v = field.add(work.get(k, 0), gi.coeffs[t])
            if v:
                work[k] = v
            else:
                work.pop(k, None)
        for t in range(len(gj.keys)):
            k = gj.keys[t] + dj
            v = field.sub(work.get(k, 0), gj.coeffs[t])
            if v:
                work[k] = v
            else:
                work.pop(k, None)
        return work

    def run(self, gens: list[dict[int, int]], gb_prefix: int) -> list[GPoly]:
        for d in gens:
            self.basis.append(_freeze(d, self.spec, self.field))
        self._refresh_ctx()
        for j in range(len(self.basis)):
            if j < gb_prefix:
                continue
            self._push_pairs(j)
        while self.pairs:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise LimitError("time limit exceeded in basis computation")
            _, lcm_k, i, j = heapq.heappop(self.pairs)
            self.pending.discard((i, j))
            if self._chain_skippable(i, j, lcm_k):
                continue
            work = self._spoly(i, j, lcm_k)
            rem = self.ctx.reduce_dict(work)
            if not rem:
                continue
            g = _freeze(rem, self.spec, self.field)
            if g.maxdeg > self.limits.max_degree:
                raise LimitError(
                    f"degree {g.maxdeg} exceeds the limit {self.limits.max_degree}")
            self.basis.append(g)
            if len(self.basis) > self.limits.max_basis:
                raise LimitError(
                    f"basis size exceeds the limit {self.limits.max_basis}")
            self._refresh_ctx()
            self._push_pairs(len(self.basis) - 1)
        return self._reduce_final()

    def _reduce_final(self) -> list[GPoly]:
        spec, field = self.spec, self.field
        # minimalize: drop elements whose leading term another one divides
        order_idx = sorted(range(len(self.basis)),
                           key=lambda i: self.basis[i].lt_key)
        kept: list[GPoly] = []
        for i in order_idx:
            g = self.basis[i]
            if any(spec.divides(h.lt_key, g.lt_key) for h in kept):
                continue
            kept = [h for h in kept if not spec.divides(g.lt_key, h.lt_key)]
            kept.append(g)
        kept.sort(key=lambda g: g.lt_key)
        # interreduce tails until stable
        changed = True
        while changed:
            changed = False
            for i in range(len(kept)):
                others = kept[:i] + kept[i + 1:]
                ctx = BasisContext(self.ring, self.order, spec, others)
                g = kept[i]
                work = {k: c for k, c in zip(g.keys, g.coeffs)}
                rem = ctx.reduce_dict(work)
                ng = _freeze(rem, spec, field)
                if ng.keys != g.keys or ng.coeffs != g.coeffs:
                    kept[i] = ng
                    changed = True
        kept.sort(key=lambda g: g.lt_key)
        return kept


def groebner(gens: list[Polynomial], ring: Ring, order: MonomialOrder,
             limits: Limits = DEFAULT_LIMITS, gb_prefix: int = 0,
             deadline: float | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of (gens) under `order`.

    `gb_prefix` marks an initial segment already known to be a Groebner
    basis under this order: pairs inside the segment are skipped (their
    S-polynomials have standard representations by assumption).
    """
    nz = [f for f in gens if not f.is_zero()]
    for f in nz:
        if f.ring != ring:
            raise InputError("generators live in different rings")
    if not nz:
        return []
    w = _initial_width(nz)
    cap_bits = (4 * limits.max_degree + 8).bit_length()
    while True:
        spec = PackSpec(ring.n, order, w)
        try:
            eng = _Buchberger(ring, order, spec, limits, deadline)
            out = eng.run([_to_dict(f, spec) for f in nz], gb_prefix)
            return [_to_poly({k: c for k, c in zip(g.keys, g.coeffs)},
                             spec, ring) for g in out]
        except KeyOverflow as o:
            if o.needed_degree > 2 * limits.max_degree:
                raise LimitError(
                    f"degree {o.needed_degree} exceeds the limit "
                    f"{limits.max_degree}") from None
            w = max(w + 2, (2 * o.needed_degree + 4).bit_length())
            if w > cap_bits:
                raise LimitError("exponent width exceeds the degree limit") from None
