"""Lie conformal multiplication tables and universal enveloping presentations.

A Lie table assigns to each ordered generator pair and index n < N a
polynomial-ring-in-D combination of generators (stored as a combination of
length-1 words D^t b).  The enveloping presentation imposes, for every table
entry, the relation

    x (n) y  -  {y (n) x}  -  (table value)  =  0,

where {y (n) x} = sum_k (-1)^(n+k) (1/k!) D^k (y (n+k) x) is the conjugate
term of the commutator; the sum stops at k = N-1-n because later products
vanish by locality.

Index windows make the integer-indexed families finite: ambiguities are
formed from instances whose free indices lie in [-W, W], while reductions
may draw on instances within [-M*W, M*W].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .words import (AlgebraSignature, ConformalError, GeneratorSymbol,
                    NormalWord)
from .algebra import ConformalPolynomial, _accum, _gen_mult, apply_D
from .dsl import RelationSchema, TDeriv, TGen, TProd, parse_schema
from .rewriting import Relation, RelationSet, reduce_poly
from .gsb import (CompletionLimits, CompletionResult, complete,
                  shape_could_reduce)


@dataclass(frozen=True)
class IndexWindow:
    """Composition window W and relation window multiplier M."""

    W: int
    M: int = 4

    def __post_init__(self):
        if self.W < 1 or self.M < 1:
            raise ValueError("window parameters must be positive")

    @property
    def radius(self) -> int:
        return self.M * self.W


def kd_element(sig: AlgebraSignature,
               parts: Iterable[Tuple[Fraction, int, GeneratorSymbol]]
               ) -> ConformalPolynomial:
    """Combination  sum c * D^t b  of derived generators."""
    terms = {}
    for c, t, b in parts:
        sig.check_gen(b)
        w = NormalWord((), b, t)
        terms[w] = terms.get(w, 0) + Fraction(c)
    return ConformalPolynomial(sig, terms)


class LieTable:
    """Multiplication table of a Lie conformal algebra on a free D-basis."""

    def __init__(self, sig: AlgebraSignature,
                 entries: Dict[Tuple[GeneratorSymbol, int, GeneratorSymbol],
                               ConformalPolynomial]):
        self.sig = sig
        self.entries = {}
        for (x, n, y), val in entries.items():
            if not 0 <= n < sig.N:
                raise ValueError(f"table index {n} outside [0, {sig.N})")
            for w in val.terms:
                if w.body:
                    raise ValueError(
                        "table values must be combinations of D^t b words")
            sig.check_gen(x)
            sig.check_gen(y)
            self.entries[(x, n, y)] = val

    def value(self, x, n, y) -> ConformalPolynomial:
        return self.entries.get((x, n, y), ConformalPolynomial.zero(self.sig))

    def bracket_conjugate(self, y, n, x) -> ConformalPolynomial:
        """{y [n] x} computed inside the table's own bracket."""
        sig = self.sig
        out = ConformalPolynomial.zero(sig)
        for k in range(0, sig.N - n):
            c = Fraction((-1) ** (n + k), factorial(k))
            out = out + apply_D(self.value(y, n + k, x), k).scale(c)
        return out

    def fill_skew(self, pairs: Iterable[Tuple[GeneratorSymbol, GeneratorSymbol]]
                  ) -> "LieTable":
        """Add the (y, n, x) entries determined by anti-commutativity."""
        entries = dict(self.entries)
        for x, y in pairs:
            for n in range(self.sig.N):
                entries[(y, n, x)] = -self.bracket_conjugate(x, n, y)
        return LieTable(self.sig, entries)


def conjugate(sig: AlgebraSignature, y: GeneratorSymbol, n: int,
              x: GeneratorSymbol) -> ConformalPolynomial:
    """{y (n) x} inside the free algebra; the sum stops at k = N-1-n."""
    if n < 0:
        raise ValueError("negative product index")
    terms = {}
    for k in range(0, max(0, sig.N - n)):
        c = Fraction((-1) ** (n + k), factorial(k))
        inner = ConformalPolynomial(sig, dict(_gen_mult(
            sig, y, n + k, NormalWord((), x, 0))))
        _accum(terms, apply_D(inner, k).terms, c)
    return ConformalPolynomial(sig, terms)


def enveloping_presentation(table: LieTable) -> List[ConformalPolynomial]:
    """Monic defining relations of the universal enveloping algebra.

    One relation per table entry; duplicates arising from anti-commutative
    pairs collapse after normalization.
    """
    sig = table.sig
    out: List[ConformalPolynomial] = []
    seen = set()
    for (x, n, y), val in table.entries.items():
        lead = ConformalPolynomial(sig, dict(_gen_mult(
            sig, x, n, NormalWord((), y, 0))))
        rel = lead - conjugate(sig, y, n, x) - val
        if rel.is_zero():
            continue
        rel = rel.monic()
        key = rel.canonical_key()
        if key not in seen:
            seen.add(key)
            out.append(rel)
    out.sort(key=lambda p: (sig.word_key(p.leading()), p.canonical_key()))
    return out


# windowed schema instantiation ---------------------------------------------


def instantiate_schemas(schemas: Sequence[RelationSchema],
                        sig: AlgebraSignature, radius: int
                        ) -> List[ConformalPolynomial]:
    """All monic instances with free indices in [-radius, radius], deduped."""
    out: List[ConformalPolynomial] = []
    seen = set()
    rng = range(-radius, radius + 1)
    for sc in schemas:
        for values in product(rng, repeat=len(sc.vars)):
            env = dict(zip(sc.vars, values))
            if not sc.admits(env):
                continue
            p = sc.instantiate(env, sig)
            if p.is_zero():
                continue
            p = p.monic()
            key = p.canonical_key()
            if key not in seen:
                seen.add(key)
                out.append(p)
    out.sort(key=lambda p: (sig.word_key(p.leading()), p.canonical_key()))
    return out


def schema_shapes(schemas: Sequence[RelationSchema]) -> List[tuple]:
    """Letter-name and junction shapes of all schema terms.

    Used as a conservative out-of-window test: a stalled word that matches
    no shape is definitively irreducible under the full families.
    """
    shapes = []
    for sc in schemas:
        for _, t in sc.template.parts:
            shape = _term_shape(t)
            if shape is not None:
                shapes.append(shape)
    return shapes


def _term_shape(t) -> Optional[tuple]:
    names: List[str] = []
    juncs: List[int] = []
    while isinstance(t, TProd):
        if not isinstance(t.left, TGen):
            return None
        names.append(t.left.name)
        juncs.append(t.n)
        t = t.right
    dpow = 0
    if isinstance(t, TDeriv):
        dpow = t.power
        t = t.expr
    if not isinstance(t, TGen):
        return None
    names.append(t.name)
    return (tuple(names), tuple(juncs), dpow)


def comp_window_filter(sig: AlgebraSignature, radius: int):
    """Keep relations whose leading word only mentions indices in the window."""
    def ok(rel: Relation) -> bool:
        return all(abs(g.index or 0) <= radius for g in rel.lead.letters())
    return ok


# lazy instantiation --------------------------------------------------------
#
# Reducing a composition whose sources sit inside the window can run into
# words whose matching instances lie outside any fixed index radius.  The
# schema index materializes exactly the needed instances on demand: a factor
# of the stuck word is matched against every schema term of the same letter
# shape, the linear index equations are solved, constraint-satisfying
# assignments are instantiated, and instances whose leading word equals the
# factor join the relation set.


@dataclass(frozen=True)
class _TermTemplate:
    schema: RelationSchema
    names: Tuple[str, ...]
    juncs: Tuple[int, ...]
    forms: Tuple[object, ...]     # IndexForm per letter
    dpow: int


def _term_template(schema: RelationSchema, t) -> Optional[_TermTemplate]:
    names: List[str] = []
    juncs: List[int] = []
    forms: List[object] = []
    while isinstance(t, TProd):
        if not isinstance(t.left, TGen):
            return None
        names.append(t.left.name)
        forms.append(t.left.sub)
        juncs.append(t.n)
        t = t.right
    dpow = 0
    if isinstance(t, TDeriv):
        dpow = t.power
        t = t.expr
    if not isinstance(t, TGen):
        return None
    names.append(t.name)
    forms.append(t.sub)
    return _TermTemplate(schema, tuple(names), tuple(juncs), tuple(forms), dpow)


def _solve_index_equations(varnames: Sequence[str], eqs, bound: int):
    """Integer solutions of linear equations, free variables within bound.

    ``eqs`` is a list of (IndexForm, target) pairs.  Yields environment
    dicts; underdetermined systems enumerate their free variables over
    [-bound, bound], which covers every constraint of the built-in families
    (their side conditions bound free variables by matched ones).
    """
    n = len(varnames)
    pos = {v: k for k, v in enumerate(varnames)}
    rows = []
    for form, target in eqs:
        row = [Fraction(0)] * n
        if form is not None:
            for v, c in form.vars:
                row[pos[v]] += c
        rows.append((row, Fraction(target - (form.const if form else 0))))
    # gaussian elimination
    pivots = []
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, len(rows)) if rows[k][0][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow, pval = rows[r]
        inv = Fraction(1) / prow[col]
        prow = [x * inv for x in prow]
        pval = pval * inv
        rows[r] = (prow, pval)
        for k in range(len(rows)):
            if k != r and rows[k][0][col]:
                f = rows[k][0][col]
                rows[k] = ([a - f * b for a, b in zip(rows[k][0], prow)],
                           rows[k][1] - f * pval)
        pivots.append(col)
        r += 1
    for k in range(r, len(rows)):
        if rows[k][1] != 0:
            return
    free = [c for c in range(n) if c not in pivots]

    def assignments(idx):
        if idx == len(free):
            yield {}
            return
        for rest in assignments(idx + 1):
            for val in range(-bound, bound + 1):
                env = dict(rest)
                env[varnames[free[idx]]] = val
                yield env

    for partial in assignments(0):
        env = dict(partial)
        ok = True
        for (row, val), col in zip(rows[:r], pivots):
            acc = val
            for fc in free:
                if row[fc]:
                    acc -= row[fc] * partial[varnames[fc]]
            if acc.denominator != 1:
                ok = False
                break
            env[varnames[col]] = int(acc)
        if ok:
            yield env


class SchemaIndex:
    """On-demand instantiation of schema instances matching a factor word."""

    def __init__(self, schemas: Sequence[RelationSchema]):
        self.by_shape: Dict[tuple, List[_TermTemplate]] = {}
        self.lengths = set()
        for sc in schemas:
            for _, term in sc.template.parts:
                tt = _term_template(sc, term)
                if tt is not None:
                    self.by_shape.setdefault((tt.names, tt.juncs), []).append(tt)
                    self.lengths.add(len(tt.names))

    def instances_for(self, sig: AlgebraSignature,
                      letters: Sequence[GeneratorSymbol],
                      juncs: Sequence[int]) -> List[ConformalPolynomial]:
        key = (tuple(g.name for g in letters), tuple(juncs))
        templates = self.by_shape.get(key)
        if not templates:
            return []
        bound = max((abs(g.index or 0) for g in letters), default=0) + 4
        out = []
        seen = set()
        for tt in templates:
            eqs = [(form, g.index or 0) for form, g in zip(tt.forms, letters)]
            for env in _solve_index_equations(tt.schema.vars, eqs, bound):
                if not tt.schema.admits(env):
                    continue
                p = tt.schema.instantiate(env, sig)
                if p.is_zero():
                    continue
                p = p.monic()
                ck = p.canonical_key()
                if ck not in seen:
                    seen.add(ck)
                    out.append(p)
        return out


# built-in families -----------------------------------------------------------

_VIRASORO_S1 = [
    "s0[i, j | i != 0]: L_i (0) L_j - L_0 (0) L_{i+j}",
    "s1[i, j]: L_i (1) L_j + L_{i+j}",
]

# The all-negative branch of the q0 side condition admits equal indices;
# with a strict inequality the instances with i = j would be missing and
# the family would leave H_{2i} (0) L_k uncovered.
_LHV_S1 = [
    "s0[i, j | i != 0]: L_i (0) L_j - L_0 (0) L_{i+j}",
    "s1[i, j]: L_i (1) L_j - L_{i+j}",
    "g0[i, j]: L_i (0) H_j + H_j (1) D L_i - 2 * H_j (0) L_i - D H_{i+j}",
    "g1[i, j]: L_i (1) H_j + H_j (1) L_i - H_{i+j}",
    "q0[i, j, k | |i| >= |j| and i > 0 > j or i > j > 0 or i <= j < 0]: "
    "H_i (0) L_{j+k} - H_{i+j} (0) L_k + H_j (0) L_{i+k} - H_0 (0) L_{i+j+k}",
    "q1[i, j | i != 0]: H_i (1) L_j - H_0 (1) L_{i+j}",
    "r0[i, j | i != 0]: H_i (0) H_j - H_0 (0) H_{i+j}",
    "r1[i, j]: H_i (1) H_j",
]


@dataclass
class BuiltinExample:
    """A named enveloping example with its closed-form expected basis."""

    name: str
    sig: AlgebraSignature
    window: IndexWindow
    table: LieTable
    presentation: List[ConformalPolynomial]      # instantiated commutator relations
    schemas: List[RelationSchema]                # the known completed family
    basis: List[ConformalPolynomial]             # its instances within the window
    irr_expected: Callable[[int, int, int], List[NormalWord]]

    def gens(self, radius: Optional[int] = None) -> Tuple[GeneratorSymbol, ...]:
        return self.sig.family_generators(
            self.window.W if radius is None else radius)

    def basis_rset(self) -> RelationSet:
        """The instantiated basis, extended on demand beyond the window."""
        return RelationSet(self.sig, self.basis, lazy=SchemaIndex(self.schemas))


def _L(i):
    return GeneratorSymbol("L", i)


def _H(i):
    return GeneratorSymbol("H", i)


def virasoro_table(sig: AlgebraSignature, radius: int) -> LieTable:
    """Loop Virasoro bracket:  L_i [0] L_j = -D L_{i+j},  L_i [1] L_j = -2 L_{i+j}."""
    entries = {}
    rng = range(-radius, radius + 1)
    for i in rng:
        for j in rng:
            entries[(_L(i), 0, _L(j))] = kd_element(
                sig, [(Fraction(-1), 1, _L(i + j))])
            entries[(_L(i), 1, _L(j))] = kd_element(
                sig, [(Fraction(-2), 0, _L(i + j))])
    return LieTable(sig, entries)


def heisenberg_virasoro_table(sig: AlgebraSignature, radius: int) -> LieTable:
    """Loop Heisenberg-Virasoro bracket.

    L_i[0]L_j = D L_{i+j}, L_i[1]L_j = 2 L_{i+j}, L_i[0]H_j = D H_{i+j},
    L_i[1]H_j = H_{i+j}, H brackets vanish; the H-against-L entries follow
    from anti-commutativity.
    """
    entries = {}
    rng = range(-radius, radius + 1)
    zero = ConformalPolynomial.zero(sig)
    for i in rng:
        for j in rng:
            entries[(_L(i), 0, _L(j))] = kd_element(sig, [(Fraction(1), 1, _L(i + j))])
            entries[(_L(i), 1, _L(j))] = kd_element(sig, [(Fraction(2), 0, _L(i + j))])
            entries[(_L(i), 0, _H(j))] = kd_element(sig, [(Fraction(1), 1, _H(i + j))])
            entries[(_L(i), 1, _H(j))] = kd_element(sig, [(Fraction(1), 0, _H(i + j))])
            entries[(_H(i), 0, _H(j))] = zero
            entries[(_H(i), 1, _H(j))] = zero
    table = LieTable(sig, entries)
    pairs = [(_L(i), _H(j)) for i in rng for j in rng]
    return table.fill_skew(pairs)


def virasoro_irr_words(idx_radius: int, max_length: int,
                       max_dpow: int) -> List[NormalWord]:
    """The family  L_0(0)^k D^t L_i  within the bounds."""
    out = []
    for k in range(0, max_length):
        body = tuple((_L(0), 0) for _ in range(k))
        for t in range(max_dpow + 1):
            for i in range(-idx_radius, idx_radius + 1):
                out.append(NormalWord(body, _L(i), t))
    return out


def heisenberg_virasoro_irr_words(idx_radius: int, max_length: int,
                                  max_dpow: int) -> List[NormalWord]:
    """Closed-form irreducible family for the loop Heisenberg-Virasoro basis.

    A word is irreducible exactly when no adjacent letter pair matches a
    leading word, which forces chains: an H_0(0) chain, optionally closed by
    H_-1(0) or by an H_0 junction of index 0 or 1, then an L_0(0) chain into
    an arbitrary D^t L_i tail; or a pure H_0(0) chain into a D^t H_i tail.
    """
    out = []
    rng = range(-idx_radius, idx_radius + 1)
    tails = [(t, i) for t in range(max_dpow + 1) for i in rng]

    def emit(body, tail_fam):
        for t, i in tails:
            out.append(NormalWord(body, tail_fam(i), t))

    for l in range(0, max_length):
        lpart = tuple((_L(0), 0) for _ in range(l))
        emit(lpart, _L)                                     # L_0(0)^l D^t L_i
        for h in range(0, max_length - l - 1):
            h0s = tuple((_H(0), 0) for _ in range(h))
            emit(h0s + ((_H(-1), 0),) + lpart, _L)          # ... H_-1(0) ...
            for n in (0, 1):
                emit(h0s + ((_H(0), n),) + lpart, _L)       # ... H_0(n) ...
    for k in range(0, max_length):
        emit(tuple((_H(0), 0) for _ in range(k)), _H)       # H_0(0)^k D^t H_i
    return out


def builtin_example(name: str, window: IndexWindow) -> BuiltinExample:
    radius = window.radius
    if name == "virasoro":
        sig = AlgebraSignature.indexed(["L"], 2)
        table = virasoro_table(sig, radius)
        schemas = [parse_schema(s) for s in _VIRASORO_S1]
        irr = virasoro_irr_words
    elif name in ("heisenberg-virasoro", "heisenberg_virasoro"):
        sig = AlgebraSignature.indexed(["H", "L"], 2)
        table = heisenberg_virasoro_table(sig, radius)
        schemas = [parse_schema(s) for s in _LHV_S1]
        irr = heisenberg_virasoro_irr_words
    else:
        raise ConformalError(f"unknown example {name!r}; "
                             f"try 'virasoro' or 'heisenberg-virasoro'")
    presentation = enveloping_presentation(table)
    basis = instantiate_schemas(schemas, sig, radius)
    return BuiltinExample(name, sig, window, table, presentation, schemas,
                          basis, irr)


# windowed checks ------------------------------------------------------------


@dataclass
class EquivalenceReport:
    """Both-direction membership between two windowed relation sets."""

    forward_ok: bool         # every known-basis instance lies in the
                             # completed ideal of the presentation
    backward_ok: bool
    completion: CompletionResult
    forward_failures: List[ConformalPolynomial]
    backward_failures: List[ConformalPolynomial]
    source_radius: int

    @property
    def ok(self) -> bool:
        return self.forward_ok and self.backward_ok

    def to_json(self):
        return {
            "equal": self.ok,
            "forward_ok": self.forward_ok,
            "backward_ok": self.backward_ok,
            "completion_completed": self.completion.completed,
            "completion_rounds": self.completion.rounds,
            "completion_added": self.completion.added,
            "source_radius": self.source_radius,
            "forward_failures": [repr(p) for p in self.forward_failures],
            "backward_failures": [repr(p) for p in self.backward_failures],
        }


def equivalence_check(ex: BuiltinExample, *,
                      limits: CompletionLimits = CompletionLimits()
                      ) -> EquivalenceReport:
    """Windowed two-sided ideal equality of the presentation and the basis.

    Backward: every presentation relation with window-sized indices reduces
    to zero against the instantiated basis.  Forward: the presentation is
    completed (ambiguities drawn from a growing index slice) until every
    window-sized basis instance reduces to zero, escalating the slice up to
    the relation window if needed.
    """
    sig = ex.sig
    W = ex.window.W
    radius = ex.window.radius
    basis_rset = ex.basis_rset()
    back_fail = []
    for p in ex.presentation:
        if all(abs(g.index or 0) <= W for g in p.leading().letters()):
            if not reduce_poly(p, basis_rset).remainder.is_zero():
                back_fail.append(p)

    targets = instantiate_schemas(ex.schemas, sig, W)
    completion = None
    fwd_fail = targets
    src = W
    while True:
        completion = complete(ex.presentation, sig,
                              sig.family_generators(src),
                              limits=limits,
                              comp_filter=comp_window_filter(sig, src))
        comp_rset = RelationSet(sig, completion.basis)
        fwd_fail = [p for p in targets
                    if not reduce_poly(p, comp_rset).remainder.is_zero()]
        if not fwd_fail or src >= radius:
            break
        src = min(radius, src + W)
    return EquivalenceReport(not fwd_fail, not back_fail, completion,
                             fwd_fail, back_fail, src)


@dataclass
class EmbeddingReport:
    """Whether the free D-module generators stay independent in the quotient."""

    embedded: bool
    inconclusive: bool
    reducible: List[NormalWord]
    boundary: List[NormalWord]

    def to_json(self):
        return {
            "embedded": self.embedded,
            "inconclusive": self.inconclusive,
            "reducible": [str(w) for w in self.reducible],
            "boundary": [str(w) for w in self.boundary],
        }


def embedding_check(rset: RelationSet, sig: AlgebraSignature,
                    gens: Sequence[GeneratorSymbol], max_dpow: int,
                    shapes=None) -> EmbeddingReport:
    """Check that every D^t b is irreducible for the given relation set.

    A found reduction is a definite failure.  A word that no windowed
    instance reduces but whose shape matches some schema term is reported
    as a boundary case, never as a clean pass.
    """
    reducible = []
    boundary = []
    for b in gens:
        for t in range(max_dpow + 1):
            w = NormalWord((), b, t)
            if not rset.is_irreducible(w):
                reducible.append(w)
            elif shapes and shape_could_reduce(w, shapes):
                boundary.append(w)
    return EmbeddingReport(not reducible and not boundary, bool(boundary),
                           reducible, boundary)
