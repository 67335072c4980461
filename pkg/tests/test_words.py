import random

import pytest
from hypothesis import given, settings, strategies as st

from conformal import (AlgebraSignature, GeneratorOrder, SignatureError,
                       compare_words, gen, make_word, parse_word, splice)
from conftest import random_word


def test_weight_orders_by_length_first(sig_a2):
    a = gen("a")
    w2 = make_word(sig_a2, a, 0, a)
    w3 = make_word(sig_a2, a, 0, a, 0, a)
    # any length-3 word beats any length-2 word, however large the rest
    big2 = make_word(sig_a2, a, 1, a, dpow=50)
    assert compare_words(sig_a2, w3, w2) == 1
    assert compare_words(sig_a2, w3, big2) == 1


def test_index_then_dpow_ordering(sig_a2):
    u = parse_word("a (0) D a", sig_a2)
    v = parse_word("a (0) a", sig_a2)
    w = parse_word("a (1) a", sig_a2)
    assert compare_words(sig_a2, u, v) == 1
    assert compare_words(sig_a2, w, u) == 1   # junction index beats tail dpow
    assert compare_words(sig_a2, u, u) == 0


def test_indexed_generator_order():
    sig = AlgebraSignature.indexed(["L"], 2)
    k = sig.gen_key
    assert k(gen("L", 2)) > k(gen("L", -2)) > k(gen("L", 1)) \
        > k(gen("L", -1)) > k(gen("L", 0))


def test_family_ranking_dominates_index():
    sig = AlgebraSignature.indexed(["H", "L"], 2)
    assert sig.gen_key(gen("L", 0)) > sig.gen_key(gen("H", 100))


def test_signature_mismatch_raises(sig_a2, sig_xy3):
    w = make_word(sig_xy3, gen("x"))
    with pytest.raises(SignatureError):
        sig_a2.word_key(w)
    with pytest.raises(SignatureError):
        make_word(sig_a2, gen("a"), 5, gen("a"))


def test_strip_and_append_d(sig_a2):
    a = gen("a")
    w = make_word(sig_a2, a, 1, a, dpow=3)
    assert w.strip_tail_D() == make_word(sig_a2, a, 1, a)
    assert w.append_D(0) is w
    assert make_word(sig_a2, a, dpow=1).append_D(1) == make_word(sig_a2, a, dpow=2)
    assert make_word(sig_a2, a, dpow=2).strip_tail_D() == make_word(sig_a2, a)


def test_splice_junction_indices():
    sig = AlgebraSignature.finite(["a", "b", "c"], 2)
    a, b, c = sig.generators
    u = make_word(sig, a)
    v = make_word(sig, b, dpow=4)
    assert splice(sig, u, v) == make_word(sig, a, 1, b, dpow=4)
    u2 = make_word(sig, a, 0, b)
    v2 = make_word(sig, c)
    assert splice(sig, u2, v2) == make_word(sig, a, 0, b, 1, c)


def test_splice_length_additive(sig_xy3):
    rng = random.Random(7)
    for _ in range(200):
        u = random_word(rng, sig_xy3)
        v = random_word(rng, sig_xy3)
        assert splice(sig_xy3, u, v).length == u.length + v.length


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_order_is_a_strict_total_order(data):
    sig = AlgebraSignature.finite(["x", "y"], 3)
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    u, v, w = (random_word(rng, sig) for _ in range(3))
    cu, cv = compare_words(sig, u, v), compare_words(sig, v, u)
    assert cu == -cv
    assert (cu == 0) == (u == v)
    if compare_words(sig, u, v) <= 0 and compare_words(sig, v, w) <= 0:
        assert compare_words(sig, u, w) <= 0


def test_equal_weights_mean_equal_words(sig_xy3):
    rng = random.Random(3)
    for _ in range(300):
        u = random_word(rng, sig_xy3)
        v = random_word(rng, sig_xy3)
        assert (sig_xy3.word_key(u) == sig_xy3.word_key(v)) == (u == v)


def test_listed_order_rejects_unknown():
    order = GeneratorOrder.listed([gen("a")])
    with pytest.raises(SignatureError):
        order.key(gen("z"))
