"""Exact polynomial arithmetic and the normalization engine.

Every element of the free algebra is stored as a rational linear combination
of normal words.  The engine rewrites arbitrary products into that basis
using only the defining identities:

* D-shift:        Da (n) b = -n a(n-1) b           (zero for n = 0)
* Leibniz:        D(a (n) b) = Da (n) b + a (n) Db
* locality:       b (n) b' = 0 for generators and n >= N
* associativity:  (a (n) b) (m) c = sum_t (-1)^t C(n,t) a(n-t) (b(m+t) c)

The three recursive primitives are ``_gen_mult`` (generator times word),
``_word_D`` (one derivation of a word) and ``_word_mult`` (word times word);
the first two are memoized on the signature.  Cached dicts are frozen by
convention: callers must copy before mutating.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, perm
from typing import Dict, Iterable, Optional, Tuple

from .words import (AlgebraSignature, ConformalError, GeneratorSymbol,
                    NormalWord, SignatureError)

Terms = Dict[NormalWord, Fraction]


class ArithmeticError_(ConformalError):
    """Illegal polynomial operation (monic of zero, negative index, ...)."""


def _accum(dst: Terms, src: Terms, c) -> None:
    for w, cw in src.items():
        v = dst.get(w, 0) + c * cw
        if v:
            dst[w] = v
        else:
            dst.pop(w, None)


def _scaled(src: Terms, c) -> Terms:
    return {w: c * cw for w, cw in src.items()}


def _gen_mult(sig: AlgebraSignature, g: GeneratorSymbol, n: int,
              v: NormalWord) -> Terms:
    """Normalized product  g (n) [v]  as a terms dict.  Memoized, frozen."""
    key = (g, n, v)
    cache = sig._gm_cache
    out = cache.get(key)
    if out is not None:
        return out
    N = sig.N
    if n < N:
        out = {v.prepend(g, n): 1}
    elif len(v.body) == 0:
        if v.dpow == 0:
            out = {}
        else:
            # g(n) D^j b = D(g(n) D^(j-1) b) + n g(n-1) D^(j-1) b
            v1 = NormalWord((), v.tail, v.dpow - 1)
            out = {}
            for w, c in _gen_mult(sig, g, n, v1).items():
                _accum(out, _word_D(sig, w), c)
            if n > 0:
                _accum(out, _gen_mult(sig, g, n - 1, v1), n)
    else:
        # g(n) (b(m) [v1]) = -sum_{k>=1} (-1)^k C(n,k) g(n-k) (b(m+k) [v1]),
        # valid because g(n)b vanishes at n >= N; inner products first.
        b, m = v.body[0]
        v1 = NormalWord(v.body[1:], v.tail, v.dpow)
        out = {}
        for k in range(1, n + 1):
            inner = _gen_mult(sig, b, m + k, v1)
            if not inner:
                continue
            c = -comb(n, k) if k % 2 == 0 else comb(n, k)
            for w, cw in inner.items():
                _accum(out, _gen_mult(sig, g, n - k, w), c * cw)
    cache[key] = out
    return out


def _word_D(sig: AlgebraSignature, u: NormalWord) -> Terms:
    """Normalized derivative  D [u].  Memoized, frozen."""
    out = sig._wd_cache.get(u)
    if out is not None:
        return out
    if len(u.body) == 0:
        out = {u.append_D(1): 1}
    else:
        b, n1 = u.body[0]
        u1 = NormalWord(u.body[1:], u.tail, u.dpow)
        out = {}
        if n1 > 0:
            out[u1.prepend(b, n1 - 1)] = -n1
        for w, c in _word_D(sig, u1).items():
            out[w.prepend(b, n1)] = c  # junctions differ, no collisions
    sig._wd_cache[u] = out
    return out


def _word_mult(sig: AlgebraSignature, u: NormalWord, n: int,
               v: NormalWord) -> Terms:
    """Normalized right-normed product  [u] (n) [v]."""
    if n < 0:
        raise ArithmeticError_("negative product index")
    if len(u.body) == 0:
        i = u.dpow
        if i == 0:
            return _gen_mult(sig, u.tail, n, v)
        if i > n:
            return {}
        c = perm(n, i) if i % 2 == 0 else -perm(n, i)
        return _scaled(_gen_mult(sig, u.tail, n - i, v), c)
    b, m0 = u.body[0]
    u1 = NormalWord(u.body[1:], u.tail, u.dpow)
    out: Terms = {}
    for t in range(0, m0 + 1):
        inner = _word_mult(sig, u1, n + t, v)
        if not inner:
            continue
        c = comb(m0, t) if t % 2 == 0 else -comb(m0, t)
        q = m0 - t  # always < N, a plain prepend
        for w, cw in inner.items():
            key = w.prepend(b, q)
            val = out.get(key, 0) + c * cw
            if val:
                out[key] = val
            else:
                del out[key]
    return out


class ConformalPolynomial:
    """A rational linear combination of normal words over one signature."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: Optional[Terms] = None,
                 *, _frozen: bool = False):
        self.sig = sig
        if terms is None:
            self.terms = {}
        elif _frozen:
            self.terms = terms
        else:
            self.terms = {w: Fraction(c) for w, c in terms.items() if c}

    # constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, sig) -> "ConformalPolynomial":
        return cls(sig, None)

    @classmethod
    def monomial(cls, sig, w: NormalWord, c=1) -> "ConformalPolynomial":
        sig.check_word(w)
        if not c:
            return cls(sig, None)
        return cls(sig, {w: Fraction(c)}, _frozen=True)

    # basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def leading(self) -> Optional[NormalWord]:
        """The greatest word, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(self.terms, key=self.sig.word_key)

    def leading_coeff(self) -> Fraction:
        lw = self.leading()
        return Fraction(self.terms[lw]) if lw is not None else Fraction(0)

    def is_monic(self) -> bool:
        return bool(self.terms) and self.terms[self.leading()] == 1

    def is_dfree(self) -> bool:
        return all(w.dpow == 0 for w in self.terms)

    def items_desc(self):
        return sorted(self.terms.items(),
                      key=lambda it: self.sig.word_key(it[0]), reverse=True)

    def support(self):
        return set(self.terms)

    def canonical_key(self) -> tuple:
        """Hashable form: terms sorted descending, exact coefficients."""
        return tuple((self.sig.word_key(w), Fraction(c))
                     for w, c in self.items_desc())

    # arithmetic ---------------------------------------------------------------

    def _check_same(self, other):
        if self.sig is not other.sig:
            raise SignatureError("polynomials over different signatures")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.terms)
        _accum(out, other.terms, 1)
        return ConformalPolynomial(self.sig, out, _frozen=True)

    def __sub__(self, other):
        self._check_same(other)
        out = dict(self.terms)
        _accum(out, other.terms, -1)
        return ConformalPolynomial(self.sig, out, _frozen=True)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ConformalPolynomial":
        if not c:
            return ConformalPolynomial.zero(self.sig)
        return ConformalPolynomial(self.sig, _scaled(self.terms, Fraction(c)),
                                   _frozen=True)

    def monic(self) -> "ConformalPolynomial":
        if not self.terms:
            raise ArithmeticError_("cannot normalize the zero polynomial to monic")
        lc = self.terms[self.leading()]
        if lc == 1:
            return self
        return self.scale(Fraction(1, 1) / lc)

    def __eq__(self, other):
        return (isinstance(other, ConformalPolynomial)
                and self.sig is other.sig and self.terms == other.terms)

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        from .dsl import poly_str
        return poly_str(self)


# raw expressions -------------------------------------------------------------


class Expr:
    """Base class for unevaluated expressions over a signature."""
    __slots__ = ()


class Gen(Expr):
    __slots__ = ("gen",)

    def __init__(self, g: GeneratorSymbol):
        self.gen = g


class Deriv(Expr):
    __slots__ = ("expr", "power")

    def __init__(self, expr: Expr, power: int = 1):
        if power < 0:
            raise ArithmeticError_("negative D power")
        self.expr = expr
        self.power = power


class Prod(Expr):
    """The n-th product of two subexpressions; n is unrestricted here."""
    __slots__ = ("n", "left", "right")

    def __init__(self, n: int, left: Expr, right: Expr):
        if n < 0:
            raise ArithmeticError_("negative product index")
        self.n = n
        self.left = left
        self.right = right


class LinComb(Expr):
    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Tuple[Fraction, Expr]]):
        self.parts = tuple(parts)


def word_expr(w: NormalWord) -> Expr:
    """The right-normed expression tree that spells a normal word."""
    e: Expr = Gen(w.tail)
    if w.dpow:
        e = Deriv(e, w.dpow)
    for g, n in reversed(w.body):
        e = Prod(n, Gen(g), e)
    return e


def normalize(e, sig: AlgebraSignature) -> ConformalPolynomial:
    """Rewrite an expression as a combination of normal words."""
    if isinstance(e, ConformalPolynomial):
        if e.sig is not sig:
            raise SignatureError("polynomial over a different signature")
        return e
    if isinstance(e, NormalWord):
        sig.check_word(e)
        return ConformalPolynomial.monomial(sig, e)
    if isinstance(e, GeneratorSymbol):
        sig.check_gen(e)
        return ConformalPolynomial.monomial(sig, NormalWord((), e))
    if isinstance(e, Gen):
        return normalize(e.gen, sig)
    if isinstance(e, Deriv):
        return apply_D(normalize(e.expr, sig), e.power)
    if isinstance(e, Prod):
        return poly_mult(normalize(e.left, sig), e.n, normalize(e.right, sig))
    if isinstance(e, LinComb):
        out: Terms = {}
        for c, part in e.parts:
            _accum(out, normalize(part, sig).terms, Fraction(c))
        return ConformalPolynomial(sig, out, _frozen=True)
    raise TypeError(f"cannot normalize object of type {type(e).__name__}")


def mult(sig: AlgebraSignature, u: NormalWord, n: int,
         v: NormalWord) -> ConformalPolynomial:
    """Normalized product [u] (n) [v] of two normal words."""
    sig.check_word(u)
    sig.check_word(v)
    return ConformalPolynomial(sig, dict(_word_mult(sig, u, n, v)), _frozen=True)


def poly_mult(p: ConformalPolynomial, n: int,
              q: ConformalPolynomial) -> ConformalPolynomial:
    p._check_same(q)
    out: Terms = {}
    for u, cu in p.terms.items():
        for v, cv in q.terms.items():
            _accum(out, _word_mult(p.sig, u, n, v), cu * cv)
    return ConformalPolynomial(p.sig, out, _frozen=True)


def apply_D(p: ConformalPolynomial, j: int = 1) -> ConformalPolynomial:
    """Normalized j-fold derivative of a polynomial."""
    if j < 0:
        raise ArithmeticError_("negative D power")
    terms = p.terms
    for _ in range(j):
        out: Terms = {}
        for w, c in terms.items():
            _accum(out, _word_D(p.sig, w), c)
        terms = out
    if terms is p.terms:
        return p
    return ConformalPolynomial(p.sig, terms, _frozen=True)


def locality_bound(sig: AlgebraSignature, u: NormalWord, v: NormalWord) -> int:
    """An M with  mult(u, n, v) == 0  for every n >= M.

    Closed form: dpow(u) + N + dpow(v) + sum over v's junctions of
    (N-1 - nj).  Each D on u shifts the index down by one, the base
    locality absorbs N, each D on v absorbs one more, and every junction
    of v can absorb up to N-1-nj raises before the inner product dies.
    The formula is validated by an exhaustive vanishing sweep in the tests;
    it is deliberately conservative for words with low junction indices.
    """
    N = sig.N
    slack = sum(N - 1 - n for n in v.junctions())
    return u.dpow + N + v.dpow + slack


def word_leq(sig: AlgebraSignature, u: Optional[NormalWord],
             v: Optional[NormalWord]) -> bool:
    """Order comparison with None as the bottom element (the zero word)."""
    if u is None:
        return True
    if v is None:
        return False
    return sig.word_key(u) <= sig.word_key(v)
