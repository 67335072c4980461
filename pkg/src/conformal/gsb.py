"""Compositions, triviality checks, completion, and reduced bases.

Six composition types are enumerated between monic relations (the ambiguity
word is w; f and g play asymmetric roles, so ordered pairs are scanned):

* inclusion:           w = f̄ = a(n) ḡ (m) c, interior occurrence of ḡ
* right inclusion:     w = f̄ = a(n) ḡ D^i, suffix occurrence, i >= 0
* intersection:        w = f̄(m)c = a(n)ḡ, proper overlap, f̄ carries no D
* right intersection:  w = f̄ D^i = a(n) ḡ, i > 0
* left multiplication:  b(n)f for generators b, N <= n < vanishing bound
* right multiplication: f(n)b when the leading word carries a D (n < N) or
  some monomial does (N <= n < N + max D power)

A composition is trivial when division by the set leaves no remainder.  A
set all of whose compositions are trivial has the irreducible words as a
linear basis of the quotient, making the remainder-zero test exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .words import AlgebraSignature, GeneratorSymbol, NormalWord
from .algebra import (ConformalPolynomial, _accum, _gen_mult, _word_mult,
                      apply_D, locality_bound)
from .rewriting import (Pattern, ReductionTrace, Relation, RelationSet,
                        eval_pattern, reduce_poly)


@dataclass(frozen=True)
class MultBounds:
    """Optional overrides widening the multiplication index ranges."""
    left: Optional[int] = None
    right: Optional[int] = None


@dataclass
class Composition:
    ctype: str
    f: Relation
    g: Optional[Relation]
    w: Optional[NormalWord]
    gen: Optional[GeneratorSymbol]
    n: Optional[int]
    poly: ConformalPolynomial

    def sort_key(self, sig: AlgebraSignature):
        w = self.w if self.w is not None else self.poly.leading()
        return (sig.word_key(w) if w is not None else (),
                self.ctype,
                self.f.canon,
                self.g.canon if self.g is not None else ())

    def describe(self) -> str:
        if self.ctype in ("left_mult", "right_mult"):
            side = f"{self.gen} ({self.n}) f" if self.ctype == "left_mult" \
                else f"f ({self.n}) {self.gen}"
            return f"{self.ctype}: {side}, f = {self.f.lead}"
        return (f"{self.ctype}: w = {self.w}, f = {self.f.lead}, "
                f"g = {self.g.lead}")


def pair_compositions(sig: AlgebraSignature, f: Relation,
                      g: Relation) -> List[Composition]:
    """Inclusion, right-inclusion, intersection, and right-intersection
    compositions of the ordered pair (f, g)."""
    out: List[Composition] = []
    fl, gl = f.lead, g.lead
    Kf, Kg = fl.length, gl.length
    flat_f, flat_g = f.lead_flat, g.lead_flat
    juncs_f = fl.junctions()

    # interior occurrences of gl inside fl (remainder c nonempty)
    if gl.is_dfree and Kg < Kf:
        for p in range(0, Kf - Kg):
            if flat_f[2 * p: 2 * (p + Kg) - 1] != flat_g:
                continue
            pat = Pattern(1, g, fl.prefix_to(p),
                          juncs_f[p - 1] if p > 0 else None,
                          m=juncs_f[p + Kg - 1],
                          suffix=fl.suffix_from(p + Kg))
            poly = f.poly - ConformalPolynomial(
                sig, dict(eval_pattern(sig, pat)))
            out.append(Composition("inclusion", f, g, fl, None, None, poly))

    # suffix occurrence: fl = a(n) gl D^i
    p = Kf - Kg
    if p >= 0 and flat_f[2 * p:] == flat_g and fl.dpow >= gl.dpow:
        i = fl.dpow - gl.dpow
        if not (f is g and i == 0):
            pat = Pattern(2, g, fl.prefix_to(p),
                          juncs_f[p - 1] if p > 0 else None, dshift=i)
            poly = f.poly - ConformalPolynomial(
                sig, dict(eval_pattern(sig, pat)))
            out.append(Composition("right_inclusion", f, g, fl, None, None,
                                   poly))

    # proper overlap: a suffix of fl is a prefix of gl
    if fl.is_dfree:
        for ell in range(1, min(Kf, Kg)):
            if flat_f[2 * (Kf - ell):] != flat_g[: 2 * ell - 1]:
                continue
            m = gl.junctions()[ell - 1]
            c = gl.suffix_from(ell)
            a = fl.prefix_to(Kf - ell)
            n = juncs_f[Kf - ell - 1]
            w = NormalWord(fl.body + ((fl.tail, m),) + c.body, c.tail, c.dpow)
            left = ConformalPolynomial(sig, dict(eval_pattern(
                sig, Pattern(1, f, None, None, m=m, suffix=c))))
            right = ConformalPolynomial(sig, dict(eval_pattern(
                sig, Pattern(2, g, a, n, dshift=0))))
            out.append(Composition("intersection", f, g, w, None, None,
                                   left - right))

    # gl equals a strict suffix of fl with extra D powers
    if Kg < Kf and flat_f[2 * (Kf - Kg):] == flat_g and gl.dpow > fl.dpow:
        i = gl.dpow - fl.dpow
        a = fl.prefix_to(Kf - Kg)
        n = juncs_f[Kf - Kg - 1]
        w = fl.append_D(i)
        right = ConformalPolynomial(sig, dict(eval_pattern(
            sig, Pattern(2, g, a, n, dshift=0))))
        out.append(Composition("right_intersection", f, g, w, None, None,
                               apply_D(f.poly, i) - right))
    return out


def left_mult_range(sig: AlgebraSignature, f: Relation,
                    bounds: MultBounds) -> range:
    hi = max((locality_bound(sig, NormalWord((), u.tail, 0), u)
              for u in f.poly.terms), default=sig.N)
    if bounds.left is not None:
        hi = max(hi, bounds.left)
    return range(sig.N, max(sig.N, hi))


def right_mult_ranges(sig: AlgebraSignature, f: Relation,
                      bounds: MultBounds) -> List[int]:
    ns: List[int] = []
    if f.lead.dpow > 0:
        ns.extend(range(0, sig.N))
    maxd = max(u.dpow for u in f.poly.terms)
    if maxd > 0:
        hi = sig.N + maxd
        if bounds.right is not None:
            hi = max(hi, bounds.right)
        ns.extend(range(sig.N, hi))
    return ns


def mult_compositions(sig: AlgebraSignature, f: Relation,
                      gens: Sequence[GeneratorSymbol],
                      bounds: MultBounds) -> List[Composition]:
    """Left and right multiplication compositions of one relation.

    Products with index at or above the vanishing bound are identically
    zero and are not enumerated.
    """
    out: List[Composition] = []
    left_rng = left_mult_range(sig, f, bounds)
    right_ns = right_mult_ranges(sig, f, bounds)
    for b in gens:
        for n in left_rng:
            terms: Dict[NormalWord, Fraction] = {}
            for u, cu in f.poly.terms.items():
                _accum(terms, _gen_mult(sig, b, n, u), cu)
            out.append(Composition("left_mult", f, None, None, b, n,
                                   ConformalPolynomial(sig, terms)))
        if right_ns:
            bw = NormalWord((), b, 0)
            for n in right_ns:
                terms = {}
                for u, cu in f.poly.terms.items():
                    _accum(terms, _word_mult(sig, u, n, bw), cu)
                out.append(Composition("right_mult", f, None, None, b, n,
                                       ConformalPolynomial(sig, terms)))
    return out


def enumerate_compositions(sig: AlgebraSignature, source: Sequence[Relation],
                           gens: Sequence[GeneratorSymbol],
                           bounds: MultBounds = MultBounds()
                           ) -> List[Composition]:
    out: List[Composition] = []
    for f in source:
        out.extend(mult_compositions(sig, f, gens, bounds))
    for f in source:
        for g in source:
            out.extend(pair_compositions(sig, f, g))
    out.sort(key=lambda c: c.sort_key(sig))
    return out


# verdicts ---------------------------------------------------------------


@dataclass
class CompositionVerdict:
    comp: Composition
    verdict: str                          # "trivial" | "nontrivial" | "inconclusive"
    remainder: ConformalPolynomial
    trace: Optional[ReductionTrace] = None

    def to_json(self, with_trace=False):
        out = {"composition": self.comp.describe(), "verdict": self.verdict}
        if not self.remainder.is_zero():
            out["remainder"] = repr(self.remainder)
        if with_trace and self.trace is not None:
            out["trace"] = self.trace.to_json()
        return out


@dataclass
class GsbReport:
    verdicts: List[CompositionVerdict]
    is_gsb: bool
    counts: Dict[str, int]
    n_trivial: int
    n_nontrivial: int
    n_inconclusive: int
    materialized: int = 0     # instances pulled in beyond the window

    def to_json(self, with_trace=False):
        return {
            "is_gsb": self.is_gsb,
            "counts": self.counts,
            "trivial": self.n_trivial,
            "nontrivial": self.n_nontrivial,
            "inconclusive": self.n_inconclusive,
            "materialized_instances": self.materialized,
            "compositions": [v.to_json(with_trace) for v in self.verdicts
                             if v.verdict != "trivial" or with_trace],
        }


def shape_could_reduce(word: NormalWord, shapes) -> bool:
    """Whether some schema term shape matches a factor or suffix of the word.

    Shapes are (names, junctions, dpow) triples with subscript values
    ignored; a match means an out-of-window relation instance might reduce
    the word, so irreducibility cannot be certified from windowed instances
    alone.  Conservative: never reports False when a true instance exists.
    """
    names = tuple(g.name for g in word.letters())
    juncs = word.junctions()
    K = word.length
    for snames, sjuncs, sdpow in shapes:
        L = len(snames)
        if L > K:
            continue
        for p in range(K - L + 1):
            if names[p:p + L] != snames:
                continue
            if juncs[p:p + L - 1] != sjuncs:
                continue
            if p + L < K:
                if sdpow == 0:
                    return True
            elif word.dpow >= sdpow:
                return True
    return False


def is_trivial(comp: Composition, rset: RelationSet, *,
               shapes=None, strategy: str = "leftmost") -> CompositionVerdict:
    """Reduce the composition polynomial; trivial means zero remainder."""
    trace = reduce_poly(comp.poly, rset, strategy=strategy)
    rem = trace.remainder
    if rem.is_zero():
        verdict = "trivial"
    elif shapes and any(shape_could_reduce(w, shapes) for w in rem.terms):
        verdict = "inconclusive"
    else:
        verdict = "nontrivial"
    return CompositionVerdict(comp, verdict, rem, trace)


def check_gsb(polys: Iterable[ConformalPolynomial], sig: AlgebraSignature,
              gens: Sequence[GeneratorSymbol], *,
              comp_filter: Optional[Callable[[Relation], bool]] = None,
              bounds: MultBounds = MultBounds(),
              shapes=None) -> GsbReport:
    """Check every composition of the (monic) set for triviality.

    ``comp_filter`` restricts which relations act as composition sources
    (used by windowed runs); the full set is always available for reduction.
    """
    rset = RelationSet(sig, polys)
    return check_gsb_rset(rset, sig, gens, comp_filter=comp_filter,
                          bounds=bounds, shapes=shapes)


def check_gsb_rset(rset: RelationSet, sig: AlgebraSignature,
                   gens: Sequence[GeneratorSymbol], *,
                   comp_filter=None, bounds: MultBounds = MultBounds(),
                   shapes=None) -> GsbReport:
    source = rset.relations()
    if comp_filter is not None:
        source = [r for r in source if comp_filter(r)]
    comps = enumerate_compositions(sig, source, gens, bounds)
    verdicts = [is_trivial(c, rset, shapes=shapes) for c in comps]
    counts: Dict[str, int] = {}
    for c in comps:
        counts[c.ctype] = counts.get(c.ctype, 0) + 1
    n_t = sum(1 for v in verdicts if v.verdict == "trivial")
    n_n = sum(1 for v in verdicts if v.verdict == "nontrivial")
    n_i = len(verdicts) - n_t - n_n
    return GsbReport(verdicts, n_n == 0 and n_i == 0, counts, n_t, n_n, n_i,
                     materialized=rset.materialized)


# completion -------------------------------------------------------------


@dataclass(frozen=True)
class CompletionLimits:
    max_rounds: int = 50
    max_basis: int = 100000
    max_lead_length: Optional[int] = None


@dataclass
class CompletionResult:
    basis: List[ConformalPolynomial]
    completed: bool
    rounds: int
    added: int
    diagnostic: Optional[str] = None


def _monic_prepare(polys: Iterable[ConformalPolynomial]):
    out = []
    seen = set()
    for p in polys:
        if p.is_zero():
            continue
        p = p.monic()
        key = p.canonical_key()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def interreduce(rset: RelationSet) -> bool:
    """Reduce every member against the others until a fixpoint.

    Members whose remainder vanishes are dropped; changed members are
    replaced by their monic remainders.  At the fixpoint each member's
    support is irreducible against the rest.
    """
    sig = rset.sig
    changed_any = False
    while True:
        changed = False
        for rel in sorted(rset.relations(),
                          key=lambda r: sig.word_key(r.lead), reverse=True):
            if not rel.alive:
                continue
            if not any(rset.has_reduction(w, exclude=rel)
                       for w in rel.poly.terms):
                continue
            trace = reduce_poly(rel.poly, rset, exclude=rel)
            if not trace.steps:
                continue
            rset.remove(rel)
            if not trace.remainder.is_zero():
                rset.add(trace.remainder.monic())
            changed = changed_any = True
        if not changed:
            return changed_any


def complete(polys: Iterable[ConformalPolynomial], sig: AlgebraSignature,
             gens: Sequence[GeneratorSymbol], *,
             bounds: MultBounds = MultBounds(),
             limits: CompletionLimits = CompletionLimits(),
             comp_filter: Optional[Callable[[Relation], bool]] = None
             ) -> CompletionResult:
    """Adjoin reduced nontrivial compositions until all are trivial.

    Compositions are processed in ascending (|w|, w) order each round; every
    insertion is followed by full interreduction, so the completed basis is
    the reduced basis of the ideal it generates.  The loop stops early with
    an explicit diagnostic when a limit trips; the partial basis is returned.
    """
    rset = RelationSet(sig, _monic_prepare(polys))
    interreduce(rset)
    added_total = 0
    rounds = 0
    for rounds in range(1, limits.max_rounds + 1):
        source = rset.relations()
        if comp_filter is not None:
            source = [r for r in source if comp_filter(r)]
        comps = enumerate_compositions(sig, source, gens, bounds)
        added_this_round = 0
        for comp in comps:
            # interreduction may have replaced comp's source relations by
            # now; the composition polynomial still lies in the ideal
            rem = reduce_poly(comp.poly, rset).remainder
            if rem.is_zero():
                continue
            rem = rem.monic()
            if limits.max_lead_length is not None and \
                    rem.leading().length > limits.max_lead_length:
                return CompletionResult(
                    rset.polys(), False, rounds, added_total,
                    f"leading word {rem.leading()} exceeds the length limit "
                    f"{limits.max_lead_length}")
            rset.add(rem)
            interreduce(rset)
            added_this_round += 1
            added_total += 1
            if len(rset) > limits.max_basis:
                return CompletionResult(
                    rset.polys(), False, rounds, added_total,
                    f"basis size exceeded the limit {limits.max_basis}")
        if added_this_round == 0:
            return CompletionResult(rset.polys(), True, rounds, added_total)
    return CompletionResult(
        rset.polys(), False, limits.max_rounds, added_total,
        f"no fixpoint within {limits.max_rounds} rounds")


# minimal and reduced bases -------------------------------------------------


def minimalize(polys: Iterable[ConformalPolynomial],
               sig: AlgebraSignature) -> List[ConformalPolynomial]:
    """Drop members whose leading word is covered by another member.

    For a set whose compositions are trivial this keeps the generated
    ideal: every removed leading word is the leading word of a pattern
    over a member with a strictly smaller leading word, so removal chains
    terminate.  Among members sharing a leading word the canonically first
    is kept.
    """
    prepared = _monic_prepare(polys)
    by_lead: Dict[tuple, ConformalPolynomial] = {}
    for p in sorted(prepared, key=lambda q: (sig.word_key(q.leading()),
                                             q.canonical_key())):
        by_lead.setdefault(sig.word_key(p.leading()), p)
    rset = RelationSet(sig, list(by_lead.values()))
    out = []
    for rel in rset.relations():
        if rset.find_one(rel.lead, exclude=rel) is None:
            out.append(rel.poly)
    out.sort(key=lambda p: (sig.word_key(p.leading()), p.canonical_key()))
    return out


def reduce_basis(polys: Iterable[ConformalPolynomial],
                 sig: AlgebraSignature) -> List[ConformalPolynomial]:
    """The reduced basis: minimal, with every tail fully reduced.

    For a set with trivial compositions the result is the unique reduced
    basis of the generated ideal, independent of input order and scaling.
    """
    mins = minimalize(polys, sig)
    rset = RelationSet(sig, mins)
    out = []
    for rel in rset.relations():
        lead_mono = ConformalPolynomial.monomial(sig, rel.lead)
        tail = rel.poly - lead_mono
        rem = reduce_poly(tail, rset).remainder
        out.append(lead_mono + rem)
    out.sort(key=lambda p: (sig.word_key(p.leading()), p.canonical_key()))
    return out
