"""Finite field arithmetic: fixed values, then exhaustive axioms.

The exhaustive block runs every pair and triple for a battery of fields
of size up to 64, covering both table construction paths (prime fields
and extensions with a default or explicit modulus).
"""

import itertools

import pytest

from charplab import Field, GF, InputError

# one field per construction shape we support; q <= 64 throughout
AXIOM_FIELDS = [
    Field(2), Field(3), Field(5), Field(7), Field(13),
    Field(2, 2), Field(2, 3), Field(2, 4), Field(2, 6),
    Field(3, 2), Field(3, 3), Field(5, 2), Field(7, 2),
]


def test_division_fixed_value_f5():
    F = Field(5)
    assert F.div(1, 2) == 3          # 2 * 3 = 6 = 1
    assert F.mul(2, 3) == 1


def test_extension_generator_relation_f4():
    F = Field(2, 2)                  # modulus g^2 + g + 1
    g = F.generator
    assert g * g == g + F.one


def test_addition_wraps_f7():
    F = Field(7)
    assert F.add(3, 5) == 1


def test_gf_alias():
    assert GF(3, 2) == Field(3, 2)


def test_axioms_exhaustive():
    for F in AXIOM_FIELDS:
        codes = range(F.q)
        add, mul = F.add, F.mul
        for a, b in itertools.product(codes, repeat=2):
            assert add(a, b) == add(b, a)
            assert mul(a, b) == mul(b, a)
        for a, b, c in itertools.product(codes, repeat=3):
            assert add(add(a, b), c) == add(a, add(b, c))
            assert mul(mul(a, b), c) == mul(a, mul(b, c))
            assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


def test_identities_and_inverses_exhaustive():
    for F in AXIOM_FIELDS:
        for a in range(F.q):
            assert F.add(a, 0) == a
            assert F.mul(a, 1) == a
            assert F.mul(a, 0) == 0
            assert F.add(a, F.neg(a)) == 0
            if a:
                assert F.mul(a, F.inv(a)) == 1
                assert F.div(1, a) == F.inv(a)
        with pytest.raises(InputError):
            F.inv(0)


def test_frobenius_fixed_values():
    F4 = Field(2, 2)
    g = F4.generator.code
    assert F4.frobenius(g, 1) == F4.add(g, 1)     # g^2 = g + 1
    for F in AXIOM_FIELDS:
        for a in range(F.q):
            assert F.frobenius(a, 0) == a
    for F in (Field(2), Field(5), Field(13)):
        for a in range(F.q):
            for e in range(4):
                assert F.frobenius(a, e) == a     # prime fields are fixed


def test_frobenius_is_an_automorphism():
    for F in AXIOM_FIELDS:
        frob = F.frobenius
        for a, b in itertools.product(range(F.q), repeat=2):
            assert frob(F.add(a, b)) == F.add(frob(a), frob(b))
            assert frob(F.mul(a, b)) == F.mul(frob(a), frob(b))


def test_frobenius_cycles_with_period_dividing_m():
    # a^q = a for every element: e = m closes the loop
    for F in AXIOM_FIELDS:
        for a in range(F.q):
            assert F.frobenius(a, F.m) == a
            assert F.pow(a, F.q) == (a if a else 0)


def test_pow_matches_repeated_multiplication():
    for F in AXIOM_FIELDS[:8]:
        for a in range(F.q):
            acc = 1
            for n in range(5):
                assert F.pow(a, n) == acc
                acc = F.mul(acc, a)


def test_coords_round_trip():
    for F in AXIOM_FIELDS:
        for a in range(F.q):
            assert F.from_coords(F.coords(a)) == a


def test_element_wrapper_arithmetic():
    F = Field(3, 2)
    xs = list(F.elements())
    assert len(xs) == 9
    for a in xs[:5]:
        for b in xs[:5]:
            assert (a + b).code == F.add(a.code, b.code)
            assert (a * b).code == F.mul(a.code, b.code)
            assert (a - b).code == F.sub(a.code, b.code)
        assert (-a).code == F.neg(a.code)
        assert (a ** 3).code == F.pow(a.code, 3)
        if a.code:
            assert (F.one / a).code == F.inv(a.code)


def test_bad_construction_rejected():
    with pytest.raises(InputError):
        Field(4)                     # not prime
    with pytest.raises(InputError):
        Field(2, 0)
    with pytest.raises(InputError):
        Field(2, 2, modulus=(0, 0, 1))   # g^2 is reducible
    with pytest.raises(InputError):
        Field(2, 2, modulus=(1, 1))      # wrong length
    with pytest.raises(InputError):
        Field(2, 2, modulus=(1, 1, 2))   # 2 = 0: not monic
