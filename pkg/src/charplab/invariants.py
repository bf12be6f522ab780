"""Frobenius-theoretic invariants of quotient rings at the origin.

Everything here is exact: lengths are staircase counts, normalized values
are Fractions, and limit estimates are one-step Richardson extrapolations
(matching the p^{-e} error decay of the underlying sequences) reported
together with a spread instead of a certified error bound.

Splitting numbers are computed by the colon-ideal formula.  For a principal
defining ideal (g) the whole series a_1, ..., a_emax comes out of one chain

    C_1 = (m^[p] : g^(p-1)),   C_i = (C_{i-1}^[p] : g^(p-1)),

which satisfies C_e = (m^[p^e] : g^(p^e - 1)) because bracket powers commute
with colon by a p-th power (flatness of Frobenius over the regular ambient),
and a_e = colength(C_e) by duality in the Gorenstein artinian quotient by
m^[p^e].  Each chain step colons by the fixed small polynomial g^(p-1),
which keeps the Groebner workload flat as e grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import DEFAULT_LIMITS, Limits, groebner
from .errors import InputError, InternalError, LimitError
from .groebner import (GroebnerBasis, IdealHandle, colon, colon_by_basis,
                       frobenius_power, krull_dim, staircase_of)
from .orders import GREVLEX
from .poly import Polynomial, Ring


class QuotientPresentation:
    """An ambient polynomial ring S together with a defining ideal J
    contained in the irrelevant maximal ideal; dim is cached once."""

    __slots__ = ("ring", "defining", "dim")

    def __init__(self, ring: Ring, defining):
        if isinstance(defining, IdealHandle):
            handle = defining
            if handle.ring != ring:
                raise InputError("defining ideal lives in a different ring")
        else:
            handle = IdealHandle(ring, list(defining))
        for g in handle.generators:
            if g.constant_code() != 0:
                raise InputError("defining ideal is not contained in the "
                                 "maximal ideal at the origin")
        self.ring = ring
        self.defining = handle
        self.dim = krull_dim(handle)

    @property
    def limits(self) -> Limits:
        return self.defining.limits


@dataclass(frozen=True)
class HKRow:
    e: int
    q: int
    length: int
    normalized: Fraction


@dataclass(frozen=True)
class HKSeries:
    p: int
    d: int
    rows: tuple


@dataclass(frozen=True)
class SplittingRow:
    e: int
    q: int
    a: int
    normalized: Fraction


@dataclass(frozen=True)
class SplittingSeries:
    p: int
    d: int
    rows: tuple


@dataclass(frozen=True)
class NuRow:
    e: int
    q: int
    nu: int
    lower: Fraction
    upper: Fraction


@dataclass(frozen=True)
class NuSeries:
    p: int
    rows: tuple


@dataclass(frozen=True)
class Estimate:
    value: Fraction
    spread: Fraction
    flagged: bool


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    devs: tuple
    constant: Fraction


def _bracket_variables(ring: Ring, e: int) -> list[Polynomial]:
    q = ring.field.p ** e
    out = []
    for i in range(ring.n):
        out.append(ring.monomial(tuple(q if j == i else 0
                                       for j in range(ring.n))))
    return out


def _zero_dim_count(R: QuotientPresentation,
                    extra: list[Polynomial]) -> int:
    """Colength of J + (extra); the cached basis of J is reused as a
    known-Groebner prefix so its internal pairs are skipped."""
    base = R.defining.basis(GREVLEX)
    gens = list(base.elements) + extra
    elems = groebner(gens, R.ring, GREVLEX, R.limits,
                     gb_prefix=len(base.elements))
    gb = GroebnerBasis(R.ring, GREVLEX, elems)
    if gb.contains_one():
        raise InputError("ideal is the unit ideal; no length to report")
    st = staircase_of(gb)
    if not st.zero_dimensional():
        raise InputError("ideal is not zero-dimensional")
    return st.count()


def hk_length(R: QuotientPresentation, e: int) -> int:
    """Colength of J + the e-th bracket power of the maximal ideal."""
    if not isinstance(e, int) or e < 1:
        raise InputError("Frobenius level e must be a positive integer")
    return _zero_dim_count(R, _bracket_variables(R.ring, e))


def hk_series(R: QuotientPresentation, e_max: int) -> HKSeries:
    if not isinstance(e_max, int) or e_max < 2:
        raise InputError("series needs e_max >= 2")
    p = R.ring.field.p
    d = R.dim
    rows = []
    prev = 0
    for e in range(1, e_max + 1):
        q = p ** e
        length = hk_length(R, e)
        if length <= 0 or length < prev:
            raise InternalError("lengths must be positive and nondecreasing")
        prev = length
        rows.append(HKRow(e, q, length, Fraction(length, q ** d)))
    return HKSeries(p, d, tuple(rows))


def _richardson(pairs: list, p: int) -> Estimate:
    """One extrapolation step est_e = (p f_{e+1} - f_e)/(p - 1) on a run of
    consecutive normalized values; returns the last estimate, the spread
    against the previous one, and a flag when only one estimate exists."""
    if len(pairs) < 2:
        raise InputError("estimate needs at least two rows")
    for (e0, _), (e1, _) in zip(pairs, pairs[1:]):
        if e1 != e0 + 1:
            raise InputError("estimate needs consecutive levels")
    ests = [(pairs[i + 1][0] - 1,
             (p * pairs[i + 1][1] - pairs[i][1]) / (p - 1))
            for i in range(len(pairs) - 1)]
    value = ests[-1][1]
    if len(ests) >= 2:
        return Estimate(value, abs(value - ests[-2][1]), False)
    return Estimate(value, Fraction(0), True)


def ehk_estimate(series: HKSeries) -> Estimate:
    return _richardson([(r.e, r.normalized) for r in series.rows], series.p)


def fsig_estimate(series: SplittingSeries) -> Estimate:
    return _richardson([(r.e, r.normalized) for r in series.rows], series.p)


def convergence_diagnostic(series, d: int) -> ConvergenceDiagnostic:
    """Per-step deviations |v_{e+1} - p^d v_e| / p^{e(d-1)} and their max."""
    rows = series.rows
    if len(rows) < 2:
        raise InputError("diagnostic needs at least two rows")
    p = series.p
    vals = [(r.e, r.length if isinstance(r, HKRow) else r.a) for r in rows]
    devs = []
    for (e0, v0), (e1, v1) in zip(vals, vals[1:]):
        if e1 != e0 + 1:
            raise InputError("diagnostic needs consecutive levels")
        dev = Fraction(abs(v1 - p ** d * v0)) / Fraction(p) ** (e0 * (d - 1))
        devs.append((e0, dev))
    constant = max(dev for _, dev in devs)
    return ConvergenceDiagnostic(tuple(devs), constant)


# -- splitting numbers ---------------------------------------------------------

def _count_or_zero(elems, ring: Ring) -> int:
    """Staircase count of a reduced basis, 0 for the unit ideal."""
    gb = GroebnerBasis(ring, GREVLEX, elems)
    if gb.contains_one():
        return 0
    st = staircase_of(gb)
    if not st.zero_dimensional():
        raise InternalError("splitting colon failed to be zero-dimensional")
    return st.count()


def _principal_splitting_chain(R: QuotientPresentation,
                               e_max: int) -> list:
    """a_1..a_emax for J = (g) via the bracket-and-colon chain."""
    ring = R.ring
    p = ring.field.p
    g = R.defining.generators[0]
    current = [ring.monomial(tuple(p if j == i else 0
                                   for j in range(ring.n)))
               for i in range(ring.n)]
    mult = g ** (p - 1)
    out = []
    for _ in range(e_max):
        elems = colon_by_basis(current, ring, mult, R.limits)
        count = _count_or_zero(elems, ring)
        out.append(count)
        if count == 0:
            # the colon hit the unit ideal; every later level is 0 too
            while len(out) < e_max:
                out.append(0)
            break
        current = [h.frobenius_pow(1) for h in elems]
    return out


def _colon_splitting_count(R: QuotientPresentation, e: int) -> int:
    """a_e by the literal colon formula for arbitrary J."""
    ring = R.ring
    q = ring.field.p ** e
    box = q ** ring.n
    Jq = frobenius_power(R.defining, e)
    quotient = colon(Jq, R.defining)
    gens = list(quotient.generators) + _bracket_variables(ring, e)
    elems = groebner(gens, ring, GREVLEX, R.limits)
    gb = GroebnerBasis(ring, GREVLEX, elems)
    if gb.contains_one():
        return box
    st = staircase_of(gb)
    if not st.zero_dimensional():
        raise InternalError("splitting colon failed to be zero-dimensional")
    return box - st.count()


def splitting_number(R: QuotientPresentation, e: int) -> int:
    """Rank of the largest free summand of the e-th Frobenius pushforward."""
    if not isinstance(e, int) or e < 1:
        raise InputError("Frobenius level e must be a positive integer")
    ring = R.ring
    if not R.defining.generators:
        return ring.field.p ** (e * ring.n)
    if len(R.defining.generators) == 1:
        return _principal_splitting_chain(R, e)[-1]
    return _colon_splitting_count(R, e)


def splitting_series(R: QuotientPresentation, e_max: int) -> SplittingSeries:
    if not isinstance(e_max, int) or e_max < 1:
        raise InputError("series needs e_max >= 1")
    ring = R.ring
    p = ring.field.p
    d = R.dim
    if not R.defining.generators:
        values = [p ** (e * ring.n) for e in range(1, e_max + 1)]
    elif len(R.defining.generators) == 1:
        values = _principal_splitting_chain(R, e_max)
    else:
        values = [_colon_splitting_count(R, e) for e in range(1, e_max + 1)]
    rows = []
    for e, a in enumerate(values, start=1):
        q = p ** e
        if not 0 <= a <= q ** d:
            raise InternalError("splitting number out of range")
        rows.append(SplittingRow(e, q, a, Fraction(a, q ** d)))
    return SplittingSeries(p, d, tuple(rows))


# -- Hilbert-Samuel multiplicity -----------------------------------------------

def _ordinary_power_monomials(ring: Ring, s: int) -> list[Polynomial]:
    out = []
    stack = [(s, ())]
    while stack:
        left, prefix = stack.pop()
        if len(prefix) == ring.n - 1:
            out.append(ring.monomial(prefix + (left,)))
            continue
        for e in range(left + 1):
            stack.append((left - e, prefix + (e,)))
    return out


def hs_multiplicity(R: QuotientPresentation) -> int:
    """Normalized leading coefficient of s -> colength(J + m^s), read off
    as the stabilized d-th finite difference (window of three)."""
    d = R.dim
    homogeneous = all(
        len({sum(e) for e in g.terms}) == 1 for g in R.defining.generators)
    counts_by_degree = None
    if homogeneous:
        st = staircase_of(R.defining.basis(GREVLEX))
        counts_by_degree = st
    lengths: list[int] = []
    running = 0

    def length_at(s: int) -> int:
        nonlocal running
        if counts_by_degree is not None:
            # for homogeneous J the standard monomials of degree < s are a
            # basis of the quotient by J + m^s
            running += counts_by_degree.count_degree(s - 1)
            return running
        return _zero_dim_count(R, _ordinary_power_monomials(R.ring, s))

    s = 0
    while True:
        s += 1
        if s > 60:
            raise LimitError("Hilbert function failed to stabilize by s = 60")
        lengths.append(length_at(s))
        diffs = lengths
        for _ in range(d):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if len(diffs) >= 3 and diffs[-1] == diffs[-2] == diffs[-3]:
            return diffs[-1]


# -- nu invariants and the splitting-threshold interval ------------------------

def _outside_box(f: Polynomial, t: int, q: int) -> bool:
    """True when f^t has a term with every exponent below q, i.e. f^t does
    not lie in the bracket power m^[q] (membership in a monomial ideal is
    termwise)."""
    power = f ** t
    return any(all(e < q for e in exps) for exps in power.terms)


def nu_series(f: Polynomial, e_max: int) -> NuSeries:
    """nu_e = max t with f^t outside m^[p^e], for e = 1..e_max."""
    if not isinstance(e_max, int) or e_max < 1:
        raise InputError("series needs e_max >= 1")
    if f.is_zero():
        raise InputError("nu is undefined for the zero polynomial")
    if f.constant_code() != 0:
        raise InputError("nu needs an element of the maximal ideal")
    ring = f.ring
    p = ring.field.p
    rows = []
    prev = None
    for e in range(1, e_max + 1):
        q = p ** e
        cap = ring.n * (q - 1) + 1   # f^cap lies in m^q, hence in m^[q]
        lo = p * prev if prev is not None else 0
        step = 1
        hi = None
        while hi is None:
            cand = min(lo + step, cap)
            if _outside_box(f, cand, q):
                lo = cand
                step *= 2
            else:
                hi = cand
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _outside_box(f, mid, q):
                lo = mid
            else:
                hi = mid
        nu = lo
        if prev is not None and nu < p * prev:
            raise InternalError("nu growth invariant violated")
        prev = nu
        rows.append(NuRow(e, q, nu, Fraction(nu, q), Fraction(nu + 1, q)))
    return NuSeries(p, tuple(rows))


def fpt_estimate(series: NuSeries) -> tuple:
    """The bracketing interval [nu_e/q, (nu_e+1)/q] at the deepest level."""
    last = series.rows[-1]
    return (last.lower, last.upper)


def parameter_check(R: QuotientPresentation, fs) -> bool:
    """True when each successive element drops the dimension strictly."""
    fs = list(fs)
    for f in fs:
        if not isinstance(f, Polynomial) or f.ring != R.ring:
            raise InputError("parameter candidates must live in the "
                             "presentation ring")
        if f.is_constant() and not f.is_zero():
            raise InputError("a unit cannot be part of a parameter sequence")
        if f.constant_code() != 0:
            raise InputError("parameter candidates must lie in the "
                             "maximal ideal")
    handle = R.defining
    prev = R.dim
    for f in fs:
        handle = handle.with_polys([f])
        d = krull_dim(handle)
        if d >= prev:
            return False
        prev = d
    return True
