"""Line-based text format for coalgebras and equation systems.

Grammar (one statement per line, ``#`` starts a comment)::

    stmt     := trans | eqn | let
    trans    := NAME "->" "out" LABEL ["via" {LETTER ":" target}]     (Moore)
              | NAME "->" "+" INT NAME                               (unary)
    target   := "{" [NAME {"," NAME}] "}" | NAME
    eqn      := NAME "=" term {"|" term}
    term     := "F[" node "]" | "param" NAME | "eff" "{" INT "}" "(" inner ")"
    node     := "out" LABEL ";" {LETTER ":" target}                   (Moore)
              | "(" INT ")" "next" NAME                              (unary)
    inner    := "next" NAME | "param" NAME
    let      := "let" NAME "=" (STREAM | "{" [NAME {"," NAME}] "}")

``STREAM`` is an eventually periodic literal such as ``(1,2,7,4)(1,3,2)^w``.
A ``let`` binding a set refers to states of the coalgebra given by the
transition lines of the same file.  Several terms joined by ``|`` are
only meaningful for join-semilattices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .coalgebra import FfgCoalgebra, determinize
from .equation import FfgEquation, from_effectful
from .errors import ParseError, UnsupportedInstance
from .functor import (FNode, Lifting, MooreShape, builtin_law, id_node, lifting, shape_from_json,
                      shape_to_json)
from .phi import STREAM_FUNCTOR, StreamBackend, parse_ep
from .variety import (JSL, SET, UNARY, Inl, Inr, Pair, elem_from_json, elem_to_json,
                      free, gen_from_json, gen_to_json, sort_key, variety)

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<fopen>F\[)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[=|{}\[\](),:;+])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int, offset: int = 0) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            out.append(Token(kind if kind != "sym" else value, value, line, offset + pos + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], line: int, end_col: int):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.end_col = end_col

    def peek(self, kind: str | None = None, text: str | None = None) -> bool:
        if self.i >= len(self.tokens):
            return False
        tok = self.tokens[self.i]
        return (kind is None or tok.kind == kind) and (text is None or tok.text == text)

    def error(self, message: str):
        if self.i < len(self.tokens):
            tok = self.tokens[self.i]
            raise ParseError(f"{message}, found {tok.text!r}", tok.line, tok.col)
        raise ParseError(f"{message}, found end of line", self.line, self.end_col)

    def take(self, kind: str, text: str | None = None) -> Token:
        if not self.peek(kind, text):
            self.error(f"expected {text or kind}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        return self.take(kind, text) if self.peek(kind, text) else None

    def done(self):
        if self.i < len(self.tokens):
            self.error("unexpected trailing input")


@dataclass
class Document:
    """Parsed statements, in file order."""

    transitions: dict = field(default_factory=dict)
    equations: dict = field(default_factory=dict)
    lets: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    @property
    def kind(self) -> str | None:
        seen = []  # (line, kind) per statement
        seen += [(self.lines[x], t[0]) for x, t in self.transitions.items()]
        for x, terms in self.equations.items():
            for term in terms:
                if term[0] in ("moore", "unary", "eff"):
                    seen.append((self.lines[x], "moore" if term[0] == "moore" else "unary"))
        seen += [(self.lines[x], "unary") for x, v in self.lets.items() if v[0] == "stream"]
        seen.sort()
        for line, k in seen:
            if k != seen[0][1]:
                raise ParseError("file mixes Moore and unary statements", line, 1)
        return seen[0][1] if seen else None


def _label(cur: _Cursor):
    if cur.peek("int"):
        return int(cur.take("int").text)
    return cur.take("name").text


def _target(cur: _Cursor):
    if cur.accept("{"):
        names = []
        if not cur.peek("}"):
            names.append(cur.take("name").text)
            while cur.accept(","):
                names.append(cur.take("name").text)
        cur.take("}")
        return ("set", tuple(names))
    return ("gen", cur.take("name").text)


def _letters(cur: _Cursor, stop: str | None) -> dict:
    out = {}
    while cur.i < len(cur.tokens) and not (stop and cur.peek(stop)):
        tok = cur.take("name")
        if tok.text in out:
            raise ParseError(f"letter {tok.text!r} given twice", tok.line, tok.col)
        cur.take(":")
        out[tok.text] = _target(cur)
    return out


def _term(cur: _Cursor):
    if cur.accept("fopen"):
        if cur.accept("name", "out"):
            label = _label(cur)
            cur.take(";")
            letters = _letters(cur, "]")
            cur.take("]")
            return ("moore", label, letters)
        cur.take("(")
        k = int(cur.take("int").text)
        cur.take(")")
        cur.take("name", "next")
        nxt = cur.take("name").text
        cur.take("]")
        return ("unary", k, nxt)
    if cur.accept("name", "param"):
        return ("param", cur.take("name").text)
    if cur.accept("name", "eff"):
        cur.take("{")
        k = int(cur.take("int").text)
        cur.take("}")
        cur.take("(")
        if cur.accept("name", "next"):
            inner = ("next", cur.take("name").text)
        else:
            cur.take("name", "param")
            inner = ("param", cur.take("name").text)
        cur.take(")")
        return ("eff", k, inner)
    cur.error("expected F[...], param or eff")


def parse(text: str) -> Document:
    """Parse a DSL file; errors carry ``line:column``."""
    doc = Document()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        end = len(body.rstrip()) + 1
        if body.lstrip().startswith("let "):
            start = body.index("let") + 3
            m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*", body[start:])
            if not m:
                raise ParseError("expected 'let NAME = ...'", lineno, start + 1)
            name, rest_at = m.group(1), start + m.end()
            rest = body[rest_at:].strip()
            if rest.startswith("{"):
                cur = _Cursor(tokenize(body[rest_at:], lineno, rest_at), lineno, end)
                target = _target(cur)
                cur.done()
                doc.lets[name] = ("set", target[1])
            else:
                try:
                    doc.lets[name] = ("stream", parse_ep(rest))
                except ParseError as exc:
                    raise ParseError(exc.message, lineno, rest_at + 1) from None
            doc.lines[name] = lineno
            continue
        cur = _Cursor(tokenize(body, lineno), lineno, end)
        head = cur.take("name")
        if cur.accept("arrow"):
            if head.text in doc.transitions:
                raise ParseError(f"{head.text!r} defined twice", head.line, head.col)
            if cur.accept("+"):
                k = int(cur.take("int").text)
                nxt = cur.take("name").text
                doc.transitions[head.text] = ("unary", k, nxt)
            else:
                cur.take("name", "out")
                label = _label(cur)
                letters = _letters(cur, None) if cur.accept("name", "via") else {}
                doc.transitions[head.text] = ("moore", label, letters)
        else:
            cur.take("=")
            if head.text in doc.equations:
                raise ParseError(f"{head.text!r} defined twice", head.line, head.col)
            terms = [_term(cur)]
            while cur.accept("|"):
                terms.append(_term(cur))
            doc.equations[head.text] = terms
        cur.done()
        doc.lines[head.text] = lineno
    doc.kind  # reject mixed files early
    return doc


# ---------------------------------------------------------------------------
# building objects


def infer_shape(doc: Document, outputs=(0, 1)) -> MooreShape:
    letters = set()
    for t in doc.transitions.values():
        if t[0] == "moore":
            letters |= set(t[2])
    for terms in doc.equations.values():
        for term in terms:
            if term[0] == "moore":
                letters |= set(term[2])
    return MooreShape(tuple(outputs), tuple(sorted(letters)))


def _check_refs(doc: Document, names, where: str, known, line: int | None = None):
    for n in names:
        if n not in known:
            raise ParseError(f"unknown {where} {n!r}", line or doc.lines.get(n, 1), 1)


def _moore_node(doc, name, label, letters, shape, v, known, where="state"):
    if label not in shape.outputs:
        raise ParseError(f"output {label!r} not in {list(shape.outputs)}", doc.lines[name], 1)
    children = []
    for letter in shape.alphabet:
        kind, value = letters.get(letter, ("set", ()))
        if v is SET:
            if kind != "gen" or letter not in letters:
                raise ParseError(f"{name!r} needs a single successor under {letter!r}",
                                 doc.lines[name], 1)
            _check_refs(doc, [value], where, known, doc.lines[name])
            children.append(value)
        else:
            targets = (value,) if kind == "gen" else value
            _check_refs(doc, targets, where, known, doc.lines[name])
            children.append(frozenset(targets))
    return FNode(label, tuple(children))


def build_coalgebra(doc: Document, v=None, shape: MooreShape | None = None) -> FfgCoalgebra:
    """The coalgebra of the transition lines (determinised for JSL)."""
    if not doc.transitions:
        raise ParseError("no transition lines", 1, 1)
    known = set(doc.transitions)
    if doc.kind == "unary":
        if v not in (None, UNARY):
            raise UnsupportedInstance("unary transitions need the UNARY variety")
        step = {}
        for x, (_, k, nxt) in doc.transitions.items():
            _check_refs(doc, [nxt], "state", known)
            step[x] = id_node((k, nxt))
        return FfgCoalgebra(STREAM_FUNCTOR, tuple(doc.transitions), step)
    v = JSL if v is None else variety(v)
    if v is UNARY:
        raise UnsupportedInstance("Moore transitions need the SET or JSL variety")
    shape = shape or infer_shape(doc)
    c0 = {x: _moore_node(doc, x, t[1], t[2], shape, v, known)
          for x, t in doc.transitions.items()}
    if v is SET:
        return FfgCoalgebra(lifting(SET, shape), tuple(c0), c0)
    return determinize(c0, builtin_law(JSL, shape))


def state_of(doc: Document, coalgebra: FfgCoalgebra, text: str):
    """Parse a state: ``{p,q}`` (JSL), ``p`` (SET) or ``(m,x)``/``x`` (unary)."""
    text = text.strip()
    v = coalgebra.variety
    known = set(coalgebra.generators)
    if v is JSL:
        m = re.fullmatch(r"\{\s*(.*?)\s*\}", text)
        names = [s.strip() for s in m.group(1).split(",") if s.strip()] if m else [text]
        bad = [n for n in names if n not in known]
        if bad:
            raise ParseError(f"unknown state {bad[0]!r}", 1, 1)
        return frozenset(names)
    if v is UNARY:
        m = re.fullmatch(r"\(\s*(\d+)\s*,\s*(\w+)\s*\)", text)
        n, x = (int(m.group(1)), m.group(2)) if m else (0, text)
        if x not in known:
            raise ParseError(f"unknown state {x!r}", 1, 1)
        return (n, x)
    if text not in known:
        raise ParseError(f"unknown state {text!r}", 1, 1)
    return text


def build_lets(doc: Document, backend, coalgebra: FfgCoalgebra | None) -> dict:
    out = {}
    for name, (kind, value) in doc.lets.items():
        if kind == "stream":
            if not isinstance(backend, StreamBackend):
                raise UnsupportedInstance("stream literals need the stream backend")
            out[name] = backend.class_of_stream(value)
        else:
            if coalgebra is None or coalgebra.variety is not JSL:
                raise ParseError(f"set binding {name!r} needs Moore transition lines",
                                 doc.lines[name], 1)
            _check_refs(doc, value, "state", set(coalgebra.generators))
            out[name] = backend.class_of(coalgebra, frozenset(value))
    return out


def build_equation(doc: Document, backend, coalgebra: FfgCoalgebra | None = None) -> FfgEquation:
    """The equation lines as a system with parameters in ``backend``."""
    if not doc.equations:
        raise ParseError("no equation lines", 1, 1)
    params = build_lets(doc, backend, coalgebra)
    variables = tuple(doc.equations)
    known = set(variables)

    def param(name, line):
        if name not in params:
            raise ParseError(f"unknown parameter {name!r}", line, 1)
        return params[name]

    functor = backend.functor
    if isinstance(backend, StreamBackend):
        e0 = {}
        for x, terms in doc.equations.items():
            line = doc.lines[x]
            if len(terms) != 1:
                raise ParseError("unary right-hand sides take exactly one term", line, 1)
            term = terms[0]
            if term[0] == "unary":
                _check_refs(doc, [term[2]], "variable", known)
                e0[x] = (term[1], Inl(id_node(term[2])))
            elif term[0] == "param":
                e0[x] = (0, Inr(param(term[1], line)))
            elif term[0] == "eff":
                kind, name = term[2]
                if kind == "next":
                    _check_refs(doc, [name], "variable", known)
                    e0[x] = (term[1], Inl(id_node(name)))
                else:
                    e0[x] = (term[1], Inr(param(name, line)))
            else:
                raise ParseError("Moore term in a unary system", line, 1)
        return from_effectful(e0, functor, backend.carrier)
    shape = functor.shape
    F_TX = functor.apply(free(JSL, variables))
    step = {}
    for x, terms in doc.equations.items():
        line = doc.lines[x]
        nodes, classes = [], []
        for term in terms:
            if term[0] == "moore":
                nodes.append(_moore_node(doc, x, term[1], term[2], shape, JSL, known,
                                         "variable"))
            elif term[0] == "param":
                classes.append(param(term[1], line))
            else:
                raise ParseError("unary term in a Moore system", line, 1)
        step[x] = Pair(F_TX.join(*nodes), backend.alpha(frozenset(classes)))
    return FfgEquation(functor, variables, backend.carrier, step)


# ---------------------------------------------------------------------------
# JSON for coalgebras


def coalgebra_to_json(c: FfgCoalgebra) -> dict:
    if not isinstance(c.functor, Lifting):
        raise TypeError("only coalgebras for a lifted functor serialise")
    v = c.variety
    return {
        "variety": v.tag.value,
        "shape": shape_to_json(c.functor.shape),
        "generators": [gen_to_json(x) for x in c.generators],
        "step": [{"gen": gen_to_json(x), "label": gen_to_json(c.step[x].label),
                  "children": [elem_to_json(v, t) for t in c.step[x].children]}
                 for x in c.generators],
    }


def coalgebra_from_json(d: dict) -> FfgCoalgebra:
    v = variety(d["variety"])
    functor = lifting(v, shape_from_json(d["shape"]))
    step = {gen_from_json(s["gen"]): FNode(gen_from_json(s["label"]),
                                           tuple(elem_from_json(v, t) for t in s["children"]))
            for s in d["step"]}
    return FfgCoalgebra(functor, [gen_from_json(x) for x in d["generators"]], step)


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def format_state(v, t) -> str:
    if v is JSL:
        return "{" + ",".join(map(str, sorted(t, key=sort_key))) + "}"
    if v is UNARY:
        return f"({t[0]},{t[1]})"
    return str(t)
