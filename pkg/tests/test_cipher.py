import random

import pytest
from hypothesis import given, strategies as st

from nablacipher.cipher import (
    Ciphertext,
    NablaKey,
    decrypt,
    encrypt,
    keygen,
    layer,
    unlayer,
    validate_key,
)
from nablacipher.errors import IntegrityError, InvalidKey, LengthMismatch, NablaError, ParameterError, RangeError
from nablacipher.formats import dump_ciphertext
from nablacipher.numeral import Plainvalue, measure, plain_from_bytes

WORKED_KEY = NablaKey((3, 1), (7, 5), (2, 9), 2)


def step_trace(value, key):
    """Hand-rolled trace of the keyed measurement, kept apart from the library path."""
    S = value * key.p0
    trace = []
    for i in range(len(key.nabla)):
        q = S // key.nabla[i]
        trace.append((S, q, q * key.deltaQ[i]))
        S = (S - q * key.nabla[i]) * key.deltaR[i]
    return trace


@st.composite
def keys(draw, max_k=8, max_entry=2**64):
    k = draw(st.integers(1, max_k))
    head = draw(st.lists(st.integers(2, max_entry), min_size=k - 1, max_size=k - 1, unique=True))
    nabla = tuple(sorted(head, reverse=True)) + (1,)
    entries = st.integers(1, max_entry)
    dq = draw(st.lists(entries, min_size=k, max_size=k))
    dr = draw(st.lists(entries, min_size=k, max_size=k))
    return NablaKey(nabla, tuple(dq), tuple(dr), draw(entries))


@st.composite
def plainvalues(draw, max_bits=4096):
    bit_len = draw(st.integers(0, max_bits))
    return Plainvalue(draw(st.integers(0, 2**bit_len - 1)), bit_len)


def test_worked_trace():
    assert step_trace(5, WORKED_KEY) == [(10, 3, 21), (2, 2, 10)]
    c = encrypt(Plainvalue(5, 3), WORKED_KEY)
    assert c == Ciphertext((21, 10), 3)
    assert decrypt(c, WORKED_KEY) == Plainvalue(5, 3)


def test_validate_key_examples():
    assert validate_key(WORKED_KEY) == []
    assert "nabla not strictly decreasing" in validate_key(NablaKey((1, 3), (7, 5), (2, 9), 2))
    problems = validate_key(NablaKey((3, 1), (7,), (2, 9), 2))
    assert any(p.startswith("length mismatch") for p in problems)


@pytest.mark.parametrize(
    "key",
    [
        NablaKey((3, 1), (0, 5), (2, 9), 2),
        NablaKey((3, 1), (7, 5), (2, 0), 2),
        NablaKey((3, 1), (7, 5), (2, 9), 0),
        NablaKey((3, 2), (7, 5), (2, 9), 2),
        NablaKey((), (), (), 1),
    ],
)
def test_invalid_keys_are_refused(key):
    assert validate_key(key)
    with pytest.raises(InvalidKey):
        encrypt(Plainvalue(1, 1), key)
    with pytest.raises(InvalidKey):
        decrypt(Ciphertext((0,) * max(key.k, 1), 1), key)


def test_decrypt_detects_tampering():
    with pytest.raises(IntegrityError) as info:
        decrypt(Ciphertext((22, 10), 3), WORKED_KEY)
    assert (info.value.index, info.value.stage) == (1, "deltaQ")


def test_decrypt_deltaR_and_p0_failures():
    # c2 = 5 gives S2 = 1, which deltaR1 = 2 does not divide
    with pytest.raises(IntegrityError) as info:
        decrypt(Ciphertext((21, 5), 3), WORKED_KEY)
    assert (info.value.index, info.value.stage) == (1, "deltaR")
    # c = (0, 10): S2 = 2, carried 2/2 = 1, S1 = 1, which p0 = 2 does not divide
    with pytest.raises(IntegrityError) as info:
        decrypt(Ciphertext((0, 10), 3), NablaKey((3, 1), (7, 5), (2, 1), 2))
    assert (info.value.index, info.value.stage) == (0, "p0")


def test_decrypt_range_check():
    c = encrypt(Plainvalue(5, 3), WORKED_KEY)
    with pytest.raises(RangeError):
        decrypt(Ciphertext(c.values, 2), WORKED_KEY)


def test_decrypt_length_mismatch():
    with pytest.raises(LengthMismatch):
        decrypt(Ciphertext((21,), 3), WORKED_KEY)


def test_zero_plaintext():
    key = keygen(5, 16, random.Random(1))
    assert encrypt(Plainvalue(0, 12), key).values == (0,) * 5
    assert decrypt(Ciphertext((0,) * 5, 12), key) == Plainvalue(0, 12)


def test_encrypt_rejects_overlong_value():
    with pytest.raises(RangeError):
        encrypt(Plainvalue(8, 3), WORKED_KEY)


@given(keys(), plainvalues())
def test_round_trip(key, p):
    assert decrypt(encrypt(p, key), key) == p


@given(keys(), plainvalues())
def test_divisibility_and_first_coordinate(key, p):
    c = encrypt(p, key)
    assert all(ci % dq == 0 for ci, dq in zip(c.values, key.deltaQ))
    assert c.values[0] == ((p.value * key.p0) // key.nabla[0]) * key.deltaQ[0]
    assert encrypt(p, key) == c


@given(keys(), plainvalues())
def test_identity_parameters_reduce_to_measure(key, p):
    ident = NablaKey.identity(key.nabla)
    assert list(encrypt(p, ident).values) == measure(p.value, key.nabla)


@given(keys(), plainvalues(max_bits=512))
def test_final_deltaR_is_inert(key, p):
    other = NablaKey(key.nabla, key.deltaQ, key.deltaR[:-1] + (key.deltaR[-1] + 1,), key.p0)
    assert encrypt(p, key) == encrypt(p, other)


def test_keygen_k1():
    for seed in range(20):
        assert keygen(1, 8, random.Random(seed)).nabla == (1,)


def test_keygen_always_valid():
    rng = random.Random(7)
    for _ in range(1000):
        key = keygen(3, 8, rng)
        assert validate_key(key) == []
        assert all(2 <= d <= 256 for d in key.nabla[:-1])
        assert all(1 <= d <= 256 for d in key.deltaQ + key.deltaR + (key.p0,))


def test_keygen_dense_draw():
    # all three candidates in [2, 4] must be used
    key = keygen(4, 2, random.Random(3))
    assert key.nabla == (4, 3, 2, 1)


def test_keygen_parameter_errors():
    with pytest.raises(ParameterError):
        keygen(300, 2)
    with pytest.raises(ParameterError):
        keygen(0, 8)
    with pytest.raises(ParameterError):
        keygen(2, 1)


def test_keygen_seed_determinism():
    assert keygen(6, 40, random.Random(99)) == keygen(6, 40, random.Random(99))


def test_keygen_default_source():
    assert validate_key(keygen(4, 64)) == []


def test_layer_identity_key():
    c = encrypt(Plainvalue(5, 3), WORKED_KEY)
    serialized = dump_ciphertext(c)
    outer = layer(c, NablaKey.identity())
    assert outer.values == (int.from_bytes(serialized, "little"),)
    assert outer.bit_len == 8 * len(serialized)


@given(keys(max_k=6), plainvalues(max_bits=1024), keys(max_k=6))
def test_layer_round_trip(key, p, key2):
    c = encrypt(p, key)
    assert unlayer(layer(c, key2), key2) == c


def test_layer_wrong_key_usually_fails():
    rng = random.Random(5)
    failures = 0
    for _ in range(200):
        c = encrypt(plain_from_bytes(rng.randbytes(16)), keygen(4, 32, rng))
        outer = layer(c, keygen(4, 32, rng))
        try:
            unlayer(outer, keygen(4, 32, rng))
        except NablaError:
            failures += 1
    assert failures == 200
