"""Adinkra graphs of signed-permutation Garden reps.

Only the two-row (valise) form is modeled: bosons on the bottom row,
fermions on the top row. An edge of color ``I`` joins boson ``i`` and
fermion ``j`` when ``(L_I)_{ij} = +-1`` and is dashed when the entry is -1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx

from .garden import GardenRep, decompose_sp

COLOR_NAMES = {1: "red", 2: "green", 3: "blue", 4: "black"}


class Edge(NamedTuple):
    boson: int
    fermion: int
    color: int
    dashed: bool


@dataclass(frozen=True)
class Adinkra:
    """Bipartite edge-colored, edge-dashed graph; node indices are 0-based,
    colors are 1-based."""

    d: int
    N: int
    edges: frozenset[Edge]
    bosons: tuple[str, ...] = ()
    fermions: tuple[str, ...] = ()

    def __post_init__(self):
        edges = frozenset(Edge(int(b), int(f), int(c), bool(x)) for b, f, c, x in self.edges)
        for e in edges:
            if not (0 <= e.boson < self.d and 0 <= e.fermion < self.d and 1 <= e.color <= self.N):
                raise ValueError(f"edge {e} out of range for d={self.d}, N={self.N}")
        object.__setattr__(self, "edges", edges)
        if not self.bosons:
            object.__setattr__(self, "bosons", tuple(f"phi{i + 1}" for i in range(self.d)))
        if not self.fermions:
            object.__setattr__(self, "fermions", tuple(f"psi{i + 1}" for i in range(self.d)))
        if len(self.bosons) != self.d or len(self.fermions) != self.d:
            raise ValueError("need exactly d boson labels and d fermion labels")

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: (e.color, e.boson, e.fermion, e.dashed))

    def edge(self, boson: int, fermion: int, color: int) -> Edge | None:
        for e in self.edges:
            if (e.boson, e.fermion, e.color) == (boson, fermion, color):
                return e
        return None

    @staticmethod
    def heights() -> dict[str, int]:
        return {"boson": 0, "fermion": 1}


def from_rep(rep: GardenRep, tol: float = 1e-9) -> Adinkra:
    """Build the adinkra of a rep whose ``L`` matrices are signed permutations.

    Raises ``NotSignedPermutation`` when some ``L_I`` is not.
    """
    edges = []
    for color, m in enumerate(rep.L, start=1):
        sp = decompose_sp(m, tol)
        for j, i in enumerate(sp.perm.images):
            edges.append(Edge(i, j, color, sp.signs[i] < 0))
    return Adinkra(rep.d, rep.N, frozenset(edges), rep.bosons or (), rep.fermions or ())


class Violation(NamedTuple):
    kind: str  # "color_regularity" | "open_cycle" | "even_dashing"
    nodes: tuple[str, ...]
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    cycles_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "cycles_checked": self.cycles_checked,
            "violations": [v._asdict() | {"nodes": list(v.nodes)} for v in self.violations],
        }


def _node(kind: str, k: int) -> str:
    return f"{kind}{k + 1}"


def validate(a: Adinkra) -> ValidationReport:
    """Check color regularity and odd dashing of every two-color 4-cycle."""
    report = ValidationReport()
    at_boson: dict[tuple[int, int], list[Edge]] = {}
    at_fermion: dict[tuple[int, int], list[Edge]] = {}
    for e in a.sorted_edges():
        at_boson.setdefault((e.boson, e.color), []).append(e)
        at_fermion.setdefault((e.fermion, e.color), []).append(e)

    for kind, table in (("b", at_boson), ("f", at_fermion)):
        for k in range(a.d):
            for color in range(1, a.N + 1):
                count = len(table.get((k, color), []))
                if count != 1:
                    report.violations.append(
                        Violation(
                            "color_regularity",
                            (_node(kind, k),),
                            f"{count} edges of color {color}",
                        )
                    )

    def step(table, k, color):
        hits = table.get((k, color), [])
        return hits[0] if len(hits) == 1 else None

    seen: set[frozenset[Edge]] = set()
    for b in range(a.d):
        for c1 in range(1, a.N + 1):
            for c2 in range(c1 + 1, a.N + 1):
                e1 = step(at_boson, b, c1)
                e2 = e1 and step(at_fermion, e1.fermion, c2)
                e3 = e2 and step(at_boson, e2.boson, c1)
                e4 = e3 and step(at_fermion, e3.fermion, c2)
                if e4 is None:
                    continue
                path = (e1, e2, e3, e4)
                nodes = (
                    _node("b", b),
                    _node("f", e1.fermion),
                    _node("b", e2.boson),
                    _node("f", e3.fermion),
                )
                if e4.boson != b:
                    report.violations.append(
                        Violation("open_cycle", nodes, f"colors {c1},{c2} path does not close")
                    )
                    continue
                key = frozenset(path)
                if key in seen:
                    continue
                seen.add(key)
                report.cycles_checked += 1
                dashed = sum(e.dashed for e in path)
                if dashed % 2 == 0:
                    report.violations.append(
                        Violation("even_dashing", nodes, f"colors {c1},{c2} cycle has {dashed} dashed edges")
                    )
    return report


@dataclass
class ComponentDecomposition:
    components: list[Adinkra]
    # per component: (original boson indices, original fermion indices)
    index_map: list[tuple[tuple[int, ...], tuple[int, ...]]]


def _graph(a: Adinkra) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(("b", k) for k in range(a.d))
    g.add_nodes_from(("f", k) for k in range(a.d))
    for e in a.edges:
        g.add_edge(("b", e.boson), ("f", e.fermion))
    return g


def decompose(a: Adinkra) -> ComponentDecomposition:
    """Connected components, ordered by smallest boson index they contain.

    Components are relabeled to contiguous indices; the color count ``N``
    is kept. A component with unequal boson and fermion counts cannot be an
    ``Adinkra`` and raises ``ValueError``.
    """
    parts = []
    for comp in nx.connected_components(_graph(a)):
        bos = tuple(sorted(k for kind, k in comp if kind == "b"))
        fer = tuple(sorted(k for kind, k in comp if kind == "f"))
        parts.append((bos, fer))
    parts.sort(key=lambda p: (p[0][0] if p[0] else a.d + p[1][0]))
    components, index_map = [], []
    for bos, fer in parts:
        if len(bos) != len(fer):
            raise ValueError(f"component with bosons {bos} and fermions {fer} is unbalanced")
        bmap = {k: n for n, k in enumerate(bos)}
        fmap = {k: n for n, k in enumerate(fer)}
        edges = frozenset(
            Edge(bmap[e.boson], fmap[e.fermion], e.color, e.dashed)
            for e in a.edges
            if e.boson in bmap
        )
        components.append(
            Adinkra(
                len(bos),
                a.N,
                edges,
                tuple(a.bosons[k] for k in bos),
                tuple(a.fermions[k] for k in fer),
            )
        )
        index_map.append((bos, fer))
    return ComponentDecomposition(components, index_map)


def to_json(a: Adinkra) -> dict:
    return {
        "d": a.d,
        "N": a.N,
        "bosons": list(a.bosons),
        "fermions": list(a.fermions),
        "edges": [
            {"b": e.boson + 1, "f": e.fermion + 1, "color": e.color, "dashed": e.dashed}
            for e in a.sorted_edges()
        ],
    }


def from_json(obj: dict | str) -> Adinkra:
    if isinstance(obj, str):
        obj = json.loads(obj)
    edges = frozenset(
        Edge(e["b"] - 1, e["f"] - 1, e["color"], bool(e["dashed"])) for e in obj["edges"]
    )
    return Adinkra(obj["d"], obj["N"], edges, tuple(obj.get("bosons", ())), tuple(obj.get("fermions", ())))


def to_dot(a: Adinkra) -> str:
    """Graphviz DOT; bosons filled, fermions open, fermion row above."""
    lines = ["graph adinkra {", "  rankdir=BT;", "  node [shape=circle];"]
    for k, name in enumerate(a.bosons):
        lines.append(f'  b{k + 1} [label="{name}", style=filled, fillcolor=black, fontcolor=white];')
    for k, name in enumerate(a.fermions):
        lines.append(f'  f{k + 1} [label="{name}", style=solid];')
    lines.append("  { rank=same; " + " ".join(f"b{k + 1};" for k in range(a.d)) + " }")
    lines.append("  { rank=same; " + " ".join(f"f{k + 1};" for k in range(a.d)) + " }")
    for e in a.sorted_edges():
        color = COLOR_NAMES.get(e.color, f"/set19/{e.color}")
        style = "dashed" if e.dashed else "solid"
        lines.append(f"  b{e.boson + 1} -- f{e.fermion + 1} [color={color}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(a: Adinkra, fmt: str = "dot") -> str:
    if fmt == "dot":
        return to_dot(a)
    if fmt == "json":
        return json.dumps(to_json(a), indent=2) + "\n"
    raise ValueError(f"unknown export format {fmt!r}; expected 'dot' or 'json'")
