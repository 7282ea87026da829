"""Line-oriented graph files.

    # comment
    graph <n>
    edge <u> <v> [mult]     repeated pairs accumulate
    cap <v> <c>
    params <k> <d>

``format_graph`` writes the canonical form of this grammar, so parsing its
output and writing again gives identical text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .multigraph import Multigraph


class GraphParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class GraphFile:
    graph: Multigraph
    caps: dict[int, int] | None = None
    params: tuple[int, int] | None = None


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_graph(text: str) -> GraphFile:
    n = None
    mult: dict[tuple[int, int], int] = {}
    caps: dict[int, int] = {}
    params = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *rest = line.split()
        args = _ints(rest, lineno)
        if word == "graph":
            if n is not None:
                raise GraphParseError(lineno, "duplicate 'graph' line")
            if len(args) != 1 or args[0] < 1:
                raise GraphParseError(lineno, "'graph' takes one positive vertex count")
            n = args[0]
            continue
        if n is None:
            raise GraphParseError(lineno, f"'{word}' before 'graph'")
        if word == "edge":
            if len(args) not in (2, 3):
                raise GraphParseError(lineno, "'edge' takes u v [mult]")
            u, v = args[0], args[1]
            m = args[2] if len(args) == 3 else 1
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphParseError(lineno, f"vertex {x} out of range 0..{n - 1}")
            if u == v:
                raise GraphParseError(lineno, f"loop at vertex {u}")
            if m < 1:
                raise GraphParseError(lineno, f"multiplicity must be positive, got {m}")
            p = (min(u, v), max(u, v))
            mult[p] = mult.get(p, 0) + m
        elif word == "cap":
            if len(args) != 2:
                raise GraphParseError(lineno, "'cap' takes v c")
            v, c = args
            if not 0 <= v < n:
                raise GraphParseError(lineno, f"vertex {v} out of range 0..{n - 1}")
            if c < 0:
                raise GraphParseError(lineno, f"negative capacity {c}")
            if v in caps:
                raise GraphParseError(lineno, f"capacity of vertex {v} given twice")
            caps[v] = c
        elif word == "params":
            if len(args) != 2 or args[0] < 1 or args[1] < 1:
                raise GraphParseError(lineno, "'params' takes two positive integers k d")
            params = (args[0], args[1])
        else:
            raise GraphParseError(lineno, f"unknown directive {word!r}")
    if n is None:
        raise GraphParseError(0, "missing 'graph' line")
    return GraphFile(Multigraph.from_mult(n, mult), caps or None, params)


def format_graph(g: Multigraph, caps: Mapping[int, int] | None = None,
                 params: tuple[int, int] | None = None) -> str:
    lines = [f"graph {g.n}"]
    for u, v, m in g.edges:
        lines.append(f"edge {u} {v}" if m == 1 else f"edge {u} {v} {m}")
    for v in sorted(caps or {}):
        lines.append(f"cap {v} {caps[v]}")
    if params is not None:
        lines.append(f"params {params[0]} {params[1]}")
    return "\n".join(lines) + "\n"


def resolve_instance_caps(gf: GraphFile, d: int) -> tuple[int, ...]:
    """Capacity vector: given caps, everything else d."""
    caps = gf.caps or {}
    return tuple(caps.get(v, d) for v in range(gf.graph.n))
