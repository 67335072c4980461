"""Text syntax for words, polynomials, schemas, and presentation files.

Expression grammar (products associate to the right):

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := [RATIONAL '*'] product | '0'
    product := factor ('(' INT ')' factor)*
    factor  := ('D' ['^' INT])* atom
    atom    := NAME [subscript] | '(' expr ')'
    subscript := '_' (['-'] INT | VAR | '{' indexsum '}')

Comments run from '#' to end of line.  Generator subscripts may be integer
literals, or (inside relation schemas) index variables and sums like
``L_{i+j+k}``.  A presentation file holds an ``algebra`` block, a
``relations`` block (one named polynomial or schema per line), and an
optional ``options`` block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .words import (AlgebraSignature, ConformalError, GeneratorOrder,
                    GeneratorSymbol, NormalWord)
from .algebra import (ConformalPolynomial, Deriv, Expr, Gen, LinComb, Prod,
                      normalize)


class ParseError(ConformalError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


# tokenizer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op><=|>=|==|!=|[-+*/^_(){}\[\]:,=|<>])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str          # "int" | "name" | "op" | "nl" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            toks.append(Token("nl", tok, line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                toks.append(Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class _Stream:
    def __init__(self, toks: List[Token], skip_nl: bool = True):
        self.toks = toks
        self.i = 0
        self.skip_nl = skip_nl

    def peek(self) -> Token:
        i = self.i
        while self.skip_nl and self.toks[i].kind == "nl":
            i += 1
        return self.toks[i]

    def next(self) -> Token:
        t = self.peek()
        while self.toks[self.i] is not t:
            self.i += 1
        self.i += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            got = self.peek()
            want = text or kind
            raise ParseError(f"expected {want!r}, found {got.text or got.kind!r}",
                             got.line, got.col)
        return t

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)


# index forms -------------------------------------------------------------


@dataclass(frozen=True)
class IndexForm:
    """Integer-linear combination of index variables plus a constant."""
    const: int = 0
    vars: Tuple[Tuple[str, int], ...] = ()

    def eval(self, env: Dict[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.vars)

    def free_vars(self):
        return {v for v, _ in self.vars}

    def __str__(self):
        parts = []
        for v, c in self.vars:
            if c == 1:
                parts.append(("+", v))
            elif c == -1:
                parts.append(("-", v))
            else:
                parts.append(("+" if c > 0 else "-", f"{abs(c)}{v}"))
        if self.const or not parts:
            parts.append(("+" if self.const >= 0 else "-", str(abs(self.const))))
        out = ""
        for sign, txt in parts:
            out += (sign if out or sign == "-" else "") + txt
        return out


# template expressions ------------------------------------------------------


class TExpr:
    __slots__ = ()

    def instantiate(self, env: Dict[str, int]) -> Expr:
        raise NotImplementedError


class TGen(TExpr):
    __slots__ = ("name", "sub")

    def __init__(self, name: str, sub: Optional[IndexForm]):
        self.name = name
        self.sub = sub

    def instantiate(self, env):
        idx = self.sub.eval(env) if self.sub is not None else None
        return Gen(GeneratorSymbol(self.name, idx))


class TDeriv(TExpr):
    __slots__ = ("expr", "power")

    def __init__(self, expr, power):
        self.expr = expr
        self.power = power

    def instantiate(self, env):
        return Deriv(self.expr.instantiate(env), self.power)


class TProd(TExpr):
    __slots__ = ("n", "left", "right")

    def __init__(self, n, left, right):
        self.n = n
        self.left = left
        self.right = right

    def instantiate(self, env):
        return Prod(self.n, self.left.instantiate(env), self.right.instantiate(env))


class TLin(TExpr):
    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = tuple(parts)

    def instantiate(self, env):
        return LinComb((c, e.instantiate(env)) for c, e in self.parts)


# constraints -----------------------------------------------------------------

_CMP = {"<": int.__lt__, "<=": int.__le__, ">": int.__gt__,
        ">=": int.__ge__, "==": int.__eq__, "!=": int.__ne__}


@dataclass(frozen=True)
class Constraint:
    """Boolean combination of chained integer comparisons."""
    node: tuple  # ("or", [...]) | ("and", [...]) | ("cmp", atoms, ops)

    def eval(self, env: Dict[str, int]) -> bool:
        return _c_eval(self.node, env)

    def __str__(self):
        return _c_str(self.node)


def _c_eval(node, env) -> bool:
    tag = node[0]
    if tag == "or":
        return any(_c_eval(n, env) for n in node[1])
    if tag == "and":
        return all(_c_eval(n, env) for n in node[1])
    atoms, ops = node[1], node[2]
    vals = [_atom_eval(a, env) for a in atoms]
    return all(_CMP[op](x, y) for x, op, y in zip(vals, ops, vals[1:]))


def _atom_eval(a, env) -> int:
    tag, v = a
    if tag == "int":
        return v
    if tag == "var":
        return env[v]
    return abs(env[v])


def _c_str(node) -> str:
    tag = node[0]
    if tag == "or":
        return " or ".join(_c_str(n) for n in node[1])
    if tag == "and":
        return " and ".join(_c_str(n) for n in node[1])
    atoms, ops = node[1], node[2]
    out = _a_str(atoms[0])
    for op, a in zip(ops, atoms[1:]):
        out += f" {op} {_a_str(a)}"
    return out


def _a_str(a) -> str:
    tag, v = a
    if tag == "int":
        return str(v)
    if tag == "var":
        return v
    return f"|{v}|"


TRUE = Constraint(("and", []))


# expression parsing ---------------------------------------------------------


def _parse_subscript(s: _Stream, varnames) -> IndexForm:
    if s.accept("op", "{"):
        form = _parse_indexsum(s, varnames)
        s.expect("op", "}")
        return form
    neg = s.accept("op", "-") is not None
    t = s.peek()
    if t.kind == "int":
        s.next()
        return IndexForm(const=-int(t.text) if neg else int(t.text))
    if t.kind == "name" and not neg:
        if t.text not in varnames:
            s.error(f"unknown index variable {t.text!r}")
        s.next()
        return IndexForm(vars=((t.text, 1),))
    s.error("expected an integer or index variable after '_'")


def _parse_indexsum(s: _Stream, varnames) -> IndexForm:
    const = 0
    coeffs: Dict[str, int] = {}
    sign = 1
    if s.accept("op", "-"):
        sign = -1
    while True:
        t = s.peek()
        if t.kind == "int":
            s.next()
            const += sign * int(t.text)
        elif t.kind == "name":
            if t.text not in varnames:
                s.error(f"unknown index variable {t.text!r}")
            s.next()
            coeffs[t.text] = coeffs.get(t.text, 0) + sign
        else:
            s.error("expected an integer or index variable")
        if s.accept("op", "+"):
            sign = 1
        elif s.accept("op", "-"):
            sign = -1
        else:
            break
    vars_ = tuple((v, c) for v, c in coeffs.items() if c)
    return IndexForm(const=const, vars=vars_)


def _parse_factor(s: _Stream, varnames) -> TExpr:
    dpow = 0
    while True:
        t = s.peek()
        if t.kind == "name" and t.text == "D":
            s.next()
            if s.accept("op", "^"):
                dpow += int(s.expect("int").text)
            else:
                dpow += 1
        else:
            break
    t = s.peek()
    if t.kind == "name":
        s.next()
        sub = None
        if s.accept("op", "_"):
            sub = _parse_subscript(s, varnames)
        out: TExpr = TGen(t.text, sub)
    elif t.kind == "op" and t.text == "(":
        s.next()
        out = _parse_expr(s, varnames)
        s.expect("op", ")")
    else:
        s.error("expected a generator or '('")
    if dpow:
        out = TDeriv(out, dpow)
    return out


def _parse_product(s: _Stream, varnames) -> TExpr:
    chain = [_parse_factor(s, varnames)]
    indices = []
    while True:
        save = s.i
        if s.accept("op", "("):
            t = s.peek()
            if t.kind == "int":
                n = int(s.next().text)
                if s.accept("op", ")"):
                    indices.append(n)
                    chain.append(_parse_factor(s, varnames))
                    continue
            s.i = save
        break
    out = chain[-1]
    for fac, n in zip(reversed(chain[:-1]), reversed(indices)):
        out = TProd(n, fac, out)
    return out


def _parse_rational(s: _Stream) -> Fraction:
    num = int(s.expect("int").text)
    if s.accept("op", "/"):
        den = int(s.expect("int").text)
        if den == 0:
            s.error("zero denominator")
        return Fraction(num, den)
    return Fraction(num)


def _parse_term(s: _Stream, varnames) -> Tuple[Fraction, Optional[TExpr]]:
    t = s.peek()
    if t.kind == "int":
        c = _parse_rational(s)
        nxt = s.peek()
        if nxt.kind == "op" and nxt.text == "*":
            s.next()
            return c, _parse_product(s, varnames)
        if c == 0:
            return Fraction(0), None
        s.error("a coefficient must be followed by '*' and a word")
    return Fraction(1), _parse_product(s, varnames)


def _parse_expr(s: _Stream, varnames) -> TExpr:
    parts = []
    sign = Fraction(1)
    if s.accept("op", "-"):
        sign = Fraction(-1)
    else:
        s.accept("op", "+")
    while True:
        c, e = _parse_term(s, varnames)
        if e is not None:
            parts.append((sign * c, e))
        if s.accept("op", "+"):
            sign = Fraction(1)
        elif s.accept("op", "-"):
            sign = Fraction(-1)
        else:
            break
    return TLin(parts)


def _parse_constraint(s: _Stream, varnames) -> Constraint:
    return Constraint(_parse_cor(s, varnames))


def _parse_cor(s, varnames):
    parts = [_parse_cand(s, varnames)]
    while s.peek().kind == "name" and s.peek().text == "or":
        s.next()
        parts.append(_parse_cand(s, varnames))
    return parts[0] if len(parts) == 1 else ("or", parts)


def _parse_cand(s, varnames):
    parts = [_parse_chain(s, varnames)]
    while s.peek().kind == "name" and s.peek().text == "and":
        s.next()
        parts.append(_parse_chain(s, varnames))
    return parts[0] if len(parts) == 1 else ("and", parts)


def _parse_chain(s, varnames):
    atoms = [_parse_catom(s, varnames)]
    ops = []
    while s.peek().kind == "op" and s.peek().text in _CMP:
        ops.append(s.next().text)
        atoms.append(_parse_catom(s, varnames))
    if not ops:
        s.error("expected a comparison")
    return ("cmp", atoms, ops)


def _parse_catom(s, varnames):
    if s.accept("op", "|"):
        t = s.expect("name")
        if t.text not in varnames:
            s.error(f"unknown index variable {t.text!r}")
        s.expect("op", "|")
        return ("abs", t.text)
    neg = s.accept("op", "-") is not None
    t = s.peek()
    if t.kind == "int":
        s.next()
        return ("int", -int(t.text) if neg else int(t.text))
    if t.kind == "name" and not neg:
        if t.text not in varnames:
            s.error(f"unknown index variable {t.text!r}")
        s.next()
        return ("var", t.text)
    s.error("expected an integer, index variable, or |var|")


# public expression API -------------------------------------------------------


def parse_template(text: str, varnames: Sequence[str] = ()) -> TExpr:
    """Parse an expression that may mention the given index variables."""
    s = _Stream(tokenize(text))
    e = _parse_expr(s, frozenset(varnames))
    if s.peek().kind != "eof":
        s.error("trailing input after expression")
    return e


def parse_poly(text: str, sig: AlgebraSignature) -> ConformalPolynomial:
    """Parse and normalize a concrete polynomial."""
    return normalize(parse_template(text).instantiate({}), sig)


def parse_word(text: str, sig: AlgebraSignature) -> NormalWord:
    """Parse a single normal word (a monic one-term polynomial)."""
    p = parse_poly(text, sig)
    if len(p.terms) != 1:
        raise ParseError(f"{text!r} does not denote a single normal word")
    w, c = next(iter(p.terms.items()))
    if c != 1:
        raise ParseError(f"{text!r} does not denote a single normal word")
    return w


# relation schemas ------------------------------------------------------------


@dataclass(frozen=True)
class RelationSchema:
    """A relation template with free integer index variables.

    Instantiating with any variable assignment that satisfies the constraint
    yields a concrete polynomial, normalized and made monic by the caller.
    """

    name: str
    vars: Tuple[str, ...]
    constraint: Constraint
    template: TExpr

    def instantiate(self, env: Dict[str, int],
                    sig: AlgebraSignature) -> ConformalPolynomial:
        return normalize(self.template.instantiate(env), sig)

    def admits(self, env: Dict[str, int]) -> bool:
        return self.constraint.eval(env)


def parse_schema(line: str) -> RelationSchema:
    """Parse ``name[i, j | constraint]: expr`` (constraint optional)."""
    s = _Stream(tokenize(line))
    name = s.expect("name").text
    varnames: List[str] = []
    constraint = TRUE
    if s.accept("op", "["):
        varnames.append(s.expect("name").text)
        while s.accept("op", ","):
            varnames.append(s.expect("name").text)
        if s.accept("op", "|"):
            constraint = _parse_constraint(s, frozenset(varnames))
        s.expect("op", "]")
    s.expect("op", ":")
    template = _parse_expr(s, frozenset(varnames))
    if s.peek().kind != "eof":
        s.error("trailing input after relation")
    return RelationSchema(name, tuple(varnames), constraint, template)


# presentation files ---------------------------------------------------------


@dataclass
class PresentationFile:
    """Parsed contents of a presentation file."""

    sig: AlgebraSignature
    relations: List[Tuple[str, ConformalPolynomial]] = field(default_factory=list)
    schemas: List[RelationSchema] = field(default_factory=list)
    options: Dict[str, int] = field(default_factory=dict)

    def concrete_relations(self) -> List[ConformalPolynomial]:
        return [p for _, p in self.relations]


_KNOWN_OPTIONS = {"window", "relation_multiplier", "max_length", "max_dpow",
                  "max_iters", "max_basis", "mult_bound_left", "mult_bound_right"}


def _split_lines(toks: List[Token]) -> List[List[Token]]:
    lines: List[List[Token]] = [[]]
    for t in toks:
        if t.kind == "nl":
            lines.append([])
        elif t.kind == "eof":
            break
        else:
            lines[-1].append(t)
    return [ln for ln in lines if ln]


def parse_presentation(text: str) -> PresentationFile:
    toks = tokenize(text)
    # blocks look like:  NAME { ...newline-separated entries... }
    blocks: Dict[str, List[List[Token]]] = {}
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.kind in ("nl", "eof"):
            i += 1
            continue
        if t.kind != "name":
            raise ParseError("expected a block name", t.line, t.col)
        head = t
        i += 1
        while i < len(toks) and toks[i].kind == "nl":
            i += 1
        if i >= len(toks) or toks[i].text != "{":
            raise ParseError(f"expected '{{' after block name {head.text!r}",
                             head.line, head.col)
        i += 1
        depth = 1
        body: List[Token] = []
        while i < len(toks):
            t = toks[i]
            if t.kind == "op" and t.text == "{":
                depth += 1
            elif t.kind == "op" and t.text == "}":
                depth -= 1
                if depth == 0:
                    i += 1
                    break
            elif t.kind == "eof":
                raise ParseError(f"unterminated block {head.text!r}",
                                 head.line, head.col)
            body.append(t)
            i += 1
        if head.text in blocks:
            raise ParseError(f"duplicate block {head.text!r}", head.line, head.col)
        blocks[head.text] = _split_lines(body)
    if "algebra" not in blocks:
        raise ParseError("missing 'algebra' block")

    sig = _parse_algebra_block(blocks["algebra"])
    pf = PresentationFile(sig)
    for line in blocks.get("options", []):
        s = _Stream(line + [Token("eof", "", line[0].line, 0)])
        key = _joined_name(s)
        s.expect("op", "=")
        neg = s.accept("op", "-") is not None
        val = int(s.expect("int").text)
        if key not in _KNOWN_OPTIONS:
            s.error(f"unknown option {key!r}")
        pf.options[key] = -val if neg else val
    for line in blocks.get("relations", []):
        text_line = _untokenize(line)
        schema = parse_schema(text_line)
        if schema.vars:
            pf.schemas.append(schema)
        else:
            poly = normalize(schema.template.instantiate({}), sig)
            pf.relations.append((schema.name, poly))
    return pf


def _untokenize(line: List[Token]) -> str:
    return " ".join(t.text for t in line)


def _joined_name(s: _Stream) -> str:
    """A name possibly containing underscores (lexed as separate tokens)."""
    parts = [s.expect("name").text]
    while s.accept("op", "_"):
        parts.append(s.expect("name").text)
    return "_".join(parts)


def _parse_algebra_block(lines: List[List[Token]]) -> AlgebraSignature:
    N = None
    gens: Optional[List[GeneratorSymbol]] = None
    families: List[str] = []
    order_kind = None
    ranking: Optional[List[str]] = None
    for line in lines:
        s = _Stream(line + [Token("eof", "", line[0].line, 0)])
        key = s.expect("name").text
        if key == "N":
            s.expect("op", "=")
            N = int(s.expect("int").text)
        elif key == "generators":
            s.expect("op", "=")
            gens = []
            while True:
                name = s.expect("name").text
                if name == "D":
                    s.error("'D' is reserved and cannot name a generator")
                idx = None
                if s.accept("op", "_"):
                    neg = s.accept("op", "-") is not None
                    idx = int(s.expect("int").text)
                    if neg:
                        idx = -idx
                gens.append(GeneratorSymbol(name, idx))
                if not s.accept("op", ","):
                    break
        elif key == "family":
            while True:
                name = s.expect("name").text
                if name == "D":
                    s.error("'D' is reserved and cannot name a generator")
                families.append(name)
                if not s.accept("op", ","):
                    break
        elif key == "order":
            s.expect("op", "=")
            order_kind = _joined_name(s)
            if order_kind not in ("listed", "abs_then_signed"):
                s.error(f"unknown order kind {order_kind!r}")
        elif key == "ranking":
            s.expect("op", "=")
            ranking = [s.expect("name").text]
            while s.accept("op", ">"):
                ranking.append(s.expect("name").text)
        else:
            s.error(f"unknown algebra entry {key!r}")
    if N is None:
        raise ParseError("algebra block must set N")
    if gens is not None and families:
        raise ParseError("use either 'generators' or 'family', not both")
    if gens is not None:
        if order_kind == "abs_then_signed":
            names = []
            for g in gens:
                if g.name not in names:
                    names.append(g.name)
            rank = list(reversed(ranking)) if ranking else names
            return AlgebraSignature(N, GeneratorOrder.abs_then_signed(rank),
                                    generators=tuple(gens))
        return AlgebraSignature.finite(gens, N)
    if not families:
        raise ParseError("algebra block must declare generators or families")
    rank = list(reversed(ranking)) if ranking else list(families)
    return AlgebraSignature.indexed(families, N, ranking=rank)


# printing --------------------------------------------------------------------


def word_str(w: NormalWord) -> str:
    return str(w)


def coeff_str(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def poly_str(p: ConformalPolynomial) -> str:
    """Canonical text form: terms descending, reduced fractional coefficients."""
    if p.is_zero():
        return "0"
    parts = []
    for i, (w, c) in enumerate(p.items_desc()):
        neg = c < 0
        mag = -c if neg else c
        body = str(w) if mag == 1 else f"{coeff_str(mag)} * {w}"
        if i == 0:
            parts.append(("- " if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def presentation_str(pf: PresentationFile) -> str:
    """Canonical text of a presentation file; parses back to equal contents."""
    sig = pf.sig
    lines = ["algebra {"]
    lines.append(f"    N = {sig.N}")
    if sig.generators is not None:
        lines.append("    generators = " + ", ".join(str(g) for g in sig.generators))
        if sig.order.kind == "abs_then_signed":
            names = list(dict.fromkeys(g.name for g in sig.generators))
            rank = sorted(names, key=lambda n: -sig.order._rank[n])
            lines.append("    order = abs_then_signed")
            lines.append("    ranking = " + " > ".join(rank))
    else:
        lines.append("    family " + ", ".join(sig.families))
        rank = sorted(sig.families, key=lambda n: -sig.order._rank[n])
        lines.append("    ranking = " + " > ".join(rank))
    lines.append("}")
    lines.append("relations {")
    for name, poly in pf.relations:
        lines.append(f"    {name}: {poly_str(poly)}")
    for sc in pf.schemas:
        head = sc.name + "[" + ", ".join(sc.vars)
        if sc.constraint.node != ("and", []):
            head += " | " + str(sc.constraint)
        head += "]"
        body = _template_str(sc.template)
        lines.append(f"    {head}: {body}")
    lines.append("}")
    if pf.options:
        lines.append("options {")
        for k in sorted(pf.options):
            lines.append(f"    {k} = {pf.options[k]}")
        lines.append("}")
    return "\n".join(lines) + "\n"


def _template_str(t: TExpr, prec: int = 0) -> str:
    if isinstance(t, TLin):
        parts = []
        for i, (c, e) in enumerate(t.parts):
            neg = c < 0
            mag = -c if neg else c
            body = _template_str(e, 1) if mag == 1 else \
                f"{coeff_str(mag)} * {_template_str(e, 1)}"
            if i == 0:
                parts.append(("- " if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        out = " ".join(parts) if parts else "0"
        return f"( {out} )" if prec > 0 and len(t.parts) > 1 else out
    if isinstance(t, TProd):
        left = _template_str(t.left, 2)
        right = _template_str(t.right, 2)
        return f"{left} ({t.n}) {right}"
    if isinstance(t, TDeriv):
        d = "D" if t.power == 1 else f"D^{t.power}"
        return f"{d} {_template_str(t.expr, 2)}"
    if isinstance(t, TGen):
        if t.sub is None:
            return t.name
        sub = str(t.sub)
        if t.sub.vars and (len(t.sub.vars) > 1 or t.sub.const
                           or t.sub.vars[0][1] != 1):
            return f"{t.name}_{{{sub}}}"
        return f"{t.name}_{sub}"
    raise TypeError(type(t).__name__)
