"""Locality: generator products vanish at N, compound products at the bound."""

import random

from conformal import AlgebraSignature, gen, locality_bound, make_word, mult
from conftest import random_word


def test_generator_locality():
    for N in (1, 2, 3):
        sig = AlgebraSignature.finite(["x", "y"], N)
        for b in sig.generators:
            for b2 in sig.generators:
                for n in range(N, N + 6):
                    assert mult(sig, make_word(sig, b), n,
                                make_word(sig, b2)).is_zero()


def test_bound_single_letter_with_dpow():
    # mult(b, n, D^j b') vanishes exactly from N + j on
    for N in (1, 2, 3):
        sig = AlgebraSignature.finite(["x", "y"], N)
        x, y = sig.generators
        for j in range(4):
            u = make_word(sig, x)
            v = make_word(sig, y, dpow=j)
            assert locality_bound(sig, u, v) == N + j
            assert not mult(sig, u, N + j - 1, v).is_zero()
            for n in range(N + j, N + j + 8):
                assert mult(sig, u, n, v).is_zero()


def test_bound_length_two_with_low_junction():
    sig = AlgebraSignature.finite(["x", "y"], 2)
    x, y = sig.generators
    v = make_word(sig, y, 0, y)
    assert locality_bound(sig, make_word(sig, x), v) == 2 * sig.N - 1
    for n in range(3, 12):
        assert mult(sig, make_word(sig, x), n, v).is_zero()


def test_bound_monotone_in_length_and_dpow():
    sig = AlgebraSignature.finite(["x", "y"], 3)
    rng = random.Random(5)
    x = make_word(sig, gen("x"))
    for _ in range(200):
        v = random_word(rng, sig)
        bigger = v.append_D(1)
        assert locality_bound(sig, x, bigger) > locality_bound(sig, x, v)
        longer = v.prepend(gen("y"), rng.randrange(sig.N))
        assert locality_bound(sig, x, longer) >= locality_bound(sig, x, v)


def test_bound_oracle_random_pairs():
    rng = random.Random(6)
    for N in (1, 2, 3):
        sig = AlgebraSignature.finite(["x", "y"], N)
        for _ in range(150):
            u = random_word(rng, sig, max_len=3, max_dpow=2)
            v = random_word(rng, sig, max_len=3, max_dpow=2)
            M = locality_bound(sig, u, v)
            for n in range(M, M + 5):
                assert mult(sig, u, n, v).is_zero(), (u, n, v)
