import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htp import codec
from htp.codec import CodecConfig, TokenInteger
from htp.errors import (
    CapacityWarning,
    CodePointOutOfRange,
    ContainsNull,
    DataError,
    DegeneratePhase,
    DimensionMismatch,
    EmptyToken,
    InvalidCodePoint,
    TokenTooLong,
)
from htp.modular_math import basis_for_dim, generate_basis, residues

from helpers import random_tokens

TWO_PI = 2 * math.pi


class TestConfig:
    def test_defaults(self):
        cfg = CodecConfig()
        assert cfg.base == 65536
        assert cfg.l_max == 24
        assert cfg.dim == 512
        assert cfg.unicode_normalization == "NFC"
        assert cfg.reversible

    def test_invalid(self):
        with pytest.raises(ValueError):
            CodecConfig(l_max=0)
        with pytest.raises(ValueError):
            CodecConfig(base=256)
        with pytest.raises(ValueError):
            CodecConfig(unicode_normalization="NFKD")

    def test_reversibility_threshold(self):
        # 2**384 needs the 60 smallest odd primes (product ~2**390)
        assert CodecConfig.for_dim(120).reversible
        assert not CodecConfig.for_dim(118).reversible


class TestTokenToInteger:
    def test_single_char(self, tiny_codec):
        assert codec.token_to_integer("A", tiny_codec) == TokenInteger(4259840, 1)

    def test_two_chars(self, tiny_codec):
        assert codec.token_to_integer("AB", tiny_codec) == TokenInteger(4259906, 2)

    def test_too_long(self, default_codec):
        with pytest.raises(TokenTooLong):
            codec.token_to_integer("abcdefghijklmnopqrstuvwxyz", default_codec)

    def test_errors(self, default_codec):
        with pytest.raises(EmptyToken):
            codec.token_to_integer("", default_codec)
        with pytest.raises(ContainsNull):
            codec.token_to_integer("a\x00b", default_codec)
        with pytest.raises(CodePointOutOfRange):
            codec.token_to_integer("a\ud800", default_codec)

    def test_astral_uses_surrogate_pair(self):
        cfg = CodecConfig(generate_basis(3), l_max=2)
        # U+1F600 -> D83D DE00
        assert codec.token_to_integer("\U0001F600", cfg).value == 0xD83D * 65536 + 0xDE00
        with pytest.raises(TokenTooLong):
            codec.token_to_integer("a\U0001F600", cfg)

    def test_nfc_applied(self):
        composed = CodecConfig(l_max=4)
        raw = CodecConfig(l_max=4, unicode_normalization="none")
        decomposed = "é"
        assert codec.token_to_integer(decomposed, composed).value == 0xE9 * 65536**3
        assert codec.token_to_integer(decomposed, raw).value == 0x65 * 65536**3 + 0x301 * 65536**2

    def test_polynomial_definition(self, default_codec):
        token = "héllo"
        units = [ord(c) for c in token] + [0] * (24 - len(token))
        expected = sum(u * 65536 ** (24 - j) for j, u in enumerate(units, start=1))
        assert codec.token_to_integer(token, default_codec).value == expected


class TestIntegerToToken:
    def test_examples(self, tiny_codec):
        assert codec.integer_to_token(4259840, tiny_codec) == "A"
        assert codec.integer_to_token(TokenInteger(4259906, 2), tiny_codec) == "AB"

    def test_zero_is_empty(self, default_codec):
        with pytest.raises(EmptyToken):
            codec.integer_to_token(0, default_codec)

    def test_corrupt_integers(self, tiny_codec):
        with pytest.raises(InvalidCodePoint):
            codec.integer_to_token(65, tiny_codec)  # [0, 65]: padding before body
        with pytest.raises(InvalidCodePoint):
            codec.integer_to_token(0xD800 * 65536, tiny_codec)  # lone high surrogate
        with pytest.raises(InvalidCodePoint):
            codec.integer_to_token(65536**2, tiny_codec)

    def test_inverse_on_random_tokens(self, default_codec):
        for t in random_tokens(300, seed=5):
            assert codec.integer_to_token(codec.token_to_integer(t, default_codec), default_codec) == t


class TestEncode:
    def test_zero_phase(self):
        # "A" with l_max=2 is 65*65536, a multiple of 5 and 13 (65 = 5*13)
        cfg = CodecConfig(generate_basis(1, 5), l_max=2)
        assert np.array_equal(codec.encode("A", cfg), [0.0, 1.0])

    def test_example_small_basis(self, tiny_codec):
        vec = codec.encode("A", tiny_codec)
        expected = [math.sin(4 * math.pi / 3), math.cos(4 * math.pi / 3), 0.0, 1.0,
                    math.sin(8 * math.pi / 7), math.cos(8 * math.pi / 7)]
        np.testing.assert_allclose(vec, expected, rtol=0, atol=1e-15)

    def test_deterministic(self, default_codec):
        a = codec.encode("determinism", default_codec)
        b = codec.encode("determinism", default_codec)
        assert a.tobytes() == b.tobytes()

    def test_matches_big_integer_route(self, default_codec):
        basis = default_codec.basis
        tokens = random_tokens(200, seed=9)
        got = codec.encode_many(tokens, default_codec)
        for t, vec in zip(tokens, got):
            n = codec.token_to_integer(t, default_codec).value
            r = np.array(residues(n, basis))
            angle = TWO_PI * r / np.array(basis.moduli)
            np.testing.assert_allclose(vec[0::2], np.sin(angle), rtol=0, atol=1e-15)
            np.testing.assert_allclose(vec[1::2], np.cos(angle), rtol=0, atol=1e-15)

    def test_unit_pairs_and_norm(self, default_codec):
        emb = codec.encode_many(random_tokens(500, seed=2), default_codec)
        pair_norm = emb[:, 0::2] ** 2 + emb[:, 1::2] ** 2
        assert np.abs(pair_norm - 1).max() <= 1e-12
        assert np.abs(emb).max() <= 1.0
        np.testing.assert_allclose(np.linalg.norm(emb, axis=1), math.sqrt(256), rtol=0, atol=1e-9)

    def test_propagates_errors(self, default_codec):
        with pytest.raises(TokenTooLong):
            codec.encode("x" * 25, default_codec)


class TestContinuityAndPeriodicity:
    def test_consecutive_integers_shift_phase_by_one_step(self):
        basis = basis_for_dim(64)
        m = np.array(basis.moduli)
        for n in (0, 1, 12345, 2**200 + 17):
            a = codec.encode_integer(n, basis)
            b = codec.encode_integer(n + 1, basis)
            pa = np.arctan2(a[0::2], a[1::2])
            pb = np.arctan2(b[0::2], b[1::2])
            step = np.mod(pb - pa, TWO_PI)
            np.testing.assert_allclose(step, TWO_PI / m, rtol=0, atol=1e-9)
            assert np.abs(b - a).max() <= TWO_PI / min(basis.moduli)

    def test_period_is_capacity(self):
        basis = basis_for_dim(64)
        for n in (0, 5, 2**100 + 3):
            np.testing.assert_allclose(codec.encode_integer(n, basis),
                                       codec.encode_integer(n + basis.capacity, basis), atol=1e-9)


class TestRecoverResidue:
    @pytest.mark.parametrize(
        "s, c, m, r",
        [
            (0.0, 1.0, 7, 0),
            (math.sin(TWO_PI * 3 / 7), math.cos(TWO_PI * 3 / 7), 7, 3),
            (math.sin(TWO_PI * 6 / 7) + 0.001, math.cos(TWO_PI * 6 / 7) - 0.001, 7, 6),
            (-1e-17, 1.0, 7, 0),  # tiny negative phase wraps to residue 0, not 7
        ],
    )
    def test_examples(self, s, c, m, r):
        assert codec.recover_residue(s, c, m) == r

    def test_degenerate(self):
        with pytest.raises(DegeneratePhase):
            codec.recover_residue(0.0, 0.0, 7)

    @pytest.mark.parametrize("m", [2, 3, 7, 101, 1621, 65537])
    def test_exact_on_noiseless(self, m):
        r = np.arange(m) if m < 5000 else np.arange(0, m, 13)
        angle = TWO_PI * r / m
        for ri, s, c in zip(r.tolist(), np.sin(angle), np.cos(angle)):
            assert codec.recover_residue(s, c, m) == ri


class TestDecode:
    def test_hello(self, default_codec):
        assert codec.decode(codec.encode("hello", default_codec), default_codec) == "hello"

    def test_zeros_are_degenerate(self, default_codec):
        with pytest.raises(DegeneratePhase):
            codec.decode(np.zeros(512), default_codec)

    def test_wrong_dimension(self, default_codec):
        with pytest.raises(DimensionMismatch):
            codec.decode(np.zeros(10), default_codec)

    def test_noise(self, default_codec):
        tokens = random_tokens(500, seed=3)
        emb = codec.encode_many(tokens, default_codec)
        rng = np.random.default_rng(0)
        noisy = emb + rng.uniform(-1e-3, 1e-3, size=emb.shape)
        assert codec.decode_many(noisy, default_codec) == tokens

    def test_capacity_warning(self):
        cfg = CodecConfig.for_dim(32)
        with pytest.warns(CapacityWarning):
            try:
                codec.decode(codec.encode("ab", cfg), cfg)
            except DataError:
                pass

    def test_small_basis_recovers_value_mod_capacity(self):
        cfg = CodecConfig.for_dim(32)
        n = codec.token_to_integer("ab", cfg).value
        res = codec.recover_residue_matrix(codec.encode("ab", cfg), cfg.basis)[0]
        assert list(res) == residues(n % cfg.basis.capacity, cfg.basis)

    def test_no_warning_when_reversible(self, default_codec):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            codec.decode(codec.encode("quiet", default_codec), default_codec)

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
                   min_size=1, max_size=12))
    def test_round_trip_property(self, token):
        cfg = CodecConfig(basis_for_dim(512), unicode_normalization="none")
        assert codec.decode(codec.encode(token, cfg), cfg) == token


class TestSerialization:
    def test_binary_layout(self, default_codec):
        vec = codec.encode("layout", default_codec)
        blob = codec.dumps_binary(vec)
        assert blob[:8] == b"HTPVEC01"
        assert int.from_bytes(blob[8:16], "little") == 512
        assert len(blob) == 16 + 8 * 512
        assert np.frombuffer(blob[16:], "<f8").tobytes() == vec.astype("<f8").tobytes()

    def test_binary_round_trip_multiple(self, default_codec):
        emb = codec.encode_many(["a", "b", "c"], default_codec)
        back = codec.loads_binary(codec.dumps_binary(emb))
        assert back.tobytes() == emb.tobytes()

    def test_json_round_trip_is_exact(self, default_codec):
        emb = codec.encode_many(["json", "exact"], default_codec)
        back = codec.load_vectors(codec.dumps_json(emb).encode())
        assert back.tobytes() == emb.tobytes()

    def test_bad_files(self):
        with pytest.raises(DataError):
            codec.loads_binary(b"NOTMAGIC" + bytes(8))
        with pytest.raises(DataError):
            codec.loads_binary(b"HTPVEC01" + (4).to_bytes(8, "little") + bytes(7))
        with pytest.raises(DataError):
            codec.load_vectors(b"\xff\xfe garbage")


def test_iter_chunks_keeps_surrogate_pairs():
    pieces = list(codec.iter_chunks("ab\U0001F600cd", 3))
    assert pieces == ["ab", "\U0001F600c", "d"]
    assert "".join(pieces) == "ab\U0001F600cd"
