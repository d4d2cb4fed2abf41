"""Field axioms and table consistency for GF(2^m)."""

import numpy as np
import pytest

from stairdec.gf import GaloisField


@pytest.fixture(scope="module")
def gf16():
    return GaloisField(4)


@pytest.fixture(scope="module")
def gf256():
    return GaloisField(8)


def test_log_antilog_roundtrip(gf16, gf256):
    for gf in (gf16, gf256):
        for a in range(1, gf.order):
            assert gf.exp[gf.log[a]] == a


def test_axioms_exhaustive_m4(gf16):
    gf = gf16
    els = range(gf.order)
    for a in els:
        for b in els:
            assert gf.mul(a, b) == gf.mul(b, a)
    for a in els:
        for b in els:
            for c in els:
                assert gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c)
                assert gf.mul(a, b ^ c) == gf.mul(a, b) ^ gf.mul(a, c)


def test_axioms_sampled_m8(gf256):
    gf = gf256
    rng = np.random.default_rng(7)
    trips = rng.integers(0, gf.order, size=(20000, 3))
    for a, b, c in trips:
        a, b, c = int(a), int(b), int(c)
        assert gf.mul(a, b) == gf.mul(b, a)
        assert gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c)
        assert gf.mul(a, b ^ c) == gf.mul(a, b) ^ gf.mul(a, c)


def test_inverse_and_division(gf256):
    gf = gf256
    for a in range(1, gf.order):
        assert gf.mul(a, gf.inv(a)) == 1
        assert gf.div(a, a) == 1
    with pytest.raises(ZeroDivisionError):
        gf.div(3, 0)
    with pytest.raises(ZeroDivisionError):
        gf.inv(0)


def test_pow_matches_repeated_mul(gf16):
    gf = gf16
    for a in range(1, gf.order):
        acc = 1
        for e in range(10):
            assert gf.pow(a, e) == acc
            acc = gf.mul(acc, a)


def test_poly_eval_and_mul(gf16):
    gf = gf16
    # (x + 1)(x + 2) evaluated at both roots is zero
    p = gf.poly_mul([1, 1], [2, 1])
    assert gf.poly_eval(p, 1) == 0
    assert gf.poly_eval(p, 2) == 0
    assert gf.poly_eval(p, 0) == gf.mul(1, 2)


def test_rejects_non_primitive():
    # x^4 + x^3 + x^2 + x + 1 divides x^5 - 1, so alpha has order 5
    with pytest.raises(ValueError):
        GaloisField(4, primitive_polynomial=0b11111)
