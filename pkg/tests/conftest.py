import random

import pytest

from conformal import AlgebraSignature, NormalWord

# verdict lines recorded by the acceptance tests, echoed in the summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def sig_a1():
    """One generator, locality 1."""
    return AlgebraSignature.finite(["a"], 1)


@pytest.fixture
def sig_a2():
    """One generator, locality 2 (the running single-generator example)."""
    return AlgebraSignature.finite(["a"], 2)


@pytest.fixture
def sig_xy3():
    return AlgebraSignature.finite(["x", "y"], 3)


def random_word(rng: random.Random, sig, max_len=3, max_dpow=2) -> NormalWord:
    gens = sig.generators
    length = rng.randint(1, max_len)
    body = tuple((rng.choice(gens), rng.randrange(sig.N))
                 for _ in range(length - 1))
    return NormalWord(body, rng.choice(gens), rng.randint(0, max_dpow))


def random_poly(rng: random.Random, sig, max_terms=3, **kw):
    from conformal import ConformalPolynomial
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        c = rng.choice([-2, -1, 1, 2, 3])
        w = random_word(rng, sig, **kw)
        terms[w] = terms.get(w, 0) + c
    return ConformalPolynomial(sig, terms)
