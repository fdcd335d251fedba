"""Graphviz DOT renderings of machines and zig-zags."""

from __future__ import annotations

from .coalgebra import MinimalMachine, reachable
from .dsl import format_state
from .functor import IdShape
from .phi import ZigZag
from .variety import UNARY


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def coalgebra_dot(c, states=None, name: str = "machine") -> str:
    """States of ``c`` (default: reachable from the generators' units) with
    Moore outputs on nodes and one edge per letter."""
    v, functor = c.variety, c.functor
    shape = functor.shape
    if states is None and v is UNARY:
        return _generator_dot(c, name)
    if states is None:
        states = {}
        for x in c.generators:
            states.update(dict.fromkeys(reachable(c.structure, functor, c.eta(x))))
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=box];"]
    ids = {}
    for t in states:
        ids[t] = f"s{len(ids)}"
    for t in states:
        node = c.structure(t)
        label = format_state(v, t) if isinstance(shape, IdShape) else \
            f"{format_state(v, t)} / {node.label}"
        lines.append(f"  {ids[t]} [label={_quote(label)}];")
    for t in states:
        node = c.structure(t)
        letters = ("",) if isinstance(shape, IdShape) else shape.alphabet
        for letter, child in zip(letters, node.children):
            if child not in ids:
                ids[child] = f"s{len(ids)}"
                lines.append(f"  {ids[child]} [label={_quote(format_state(v, child))}];")
            lines.append(f"  {ids[t]} -> {ids[child]} [label={_quote(letter)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _generator_dot(c, name: str) -> str:
    # unary carriers are infinite: draw the generator steps only
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for x in c.generators:
        lines.append(f"  {_quote(x)};")
    for x in c.generators:
        k, nxt = c.step[x].children[0]
        lines.append(f"  {_quote(x)} -> {_quote(nxt)} [label={_quote(f'+{k}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def machine_dot(m: MinimalMachine, alphabet, name: str = "minimal") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for i, node in enumerate(m.transitions):
        shape = "doublecircle" if node.label == 1 else "circle"
        lines.append(f"  q{i} [label={_quote(f'{i}/{node.label}')}, shape={shape}];")
    for i, node in enumerate(m.transitions):
        for letter, j in zip(alphabet, node.children):
            lines.append(f"  q{i} -> q{j} [label={_quote(letter)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def zigzag_dot(z: ZigZag, name: str = "zigzag") -> str:
    """The span: apex generators with their steps, and both legs as dashed edges."""
    c = z.coalgebra
    lines = [f"digraph {name} {{", "  rankdir=TB;", f"  label={_quote(f'k={z.k}, p={z.p}')};",
             '  subgraph cluster_apex { label="apex";']
    for g in c.generators:
        lines.append(f"    {g} [label={_quote(g)}];")
    for g in c.generators:
        k, nxt = c.step[g].children[0]
        lines.append(f"    {g} -> {nxt} [label={_quote(f'+{k}')}];")
    lines.append("  }")
    for side, leg in (("left", z.g), ("right", z.h)):
        ids = {img: f"{side}{i}" for i, img in enumerate(dict.fromkeys(leg.values()))}
        lines.append(f"  subgraph cluster_{side} {{ label={_quote(side)};")
        lines += [f"    {ids[img]} [label={_quote(format_state(c.variety, img))}];" for img in ids]
        lines.append("  }")
        lines += [f"  {g} -> {ids[img]} [style=dashed];" for g, img in leg.items()]
    lines.append("}")
    return "\n".join(lines) + "\n"
