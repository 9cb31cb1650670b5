"""Domain model: physical topology, traffic, system parameters and the cost model.

Conventions used throughout the package:

* Traffic demands and lightpaths are bidirectional and symmetric, so every
  demand and every lightpath is modelled once as an undirected entity.  All
  capacity counts refer to one direction; reports label them as
  bidirectional pairs.
* Bandwidths and unit costs are exact rationals (`fractions.Fraction`) so
  that splitting demands conserves bandwidth exactly and cost identities
  reproduce published figures without float drift.  Values are converted to
  floats only at the solver boundary.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Node = int
Link = tuple[Node, Node]

__all__ = [
    "PhysicalTopology",
    "LspDemand",
    "SystemParams",
    "CostRatios",
    "UnitCosts",
    "TopologyReport",
    "COST_RATIO_PRESETS",
    "as_gbps",
    "validate_topology",
    "articulation_points",
    "average_connectivity",
    "generate_topology",
    "derive_unit_costs",
    "split_demands",
    "default_interface_limit",
]


def as_gbps(value) -> Fraction:
    """Convert a bandwidth given as int/float/str/Fraction to an exact Fraction.

    Floats are routed through ``str`` so `0.5` means the decimal 0.5, not its
    binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


def normalize_link(a: Node, b: Node) -> Link:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class PhysicalTopology:
    """Nodes and bidirectional fiber links; W wavelengths available per link.

    Each node is a combined router + OXC site.  Links are stored as ordered
    (low, high) pairs in input order; duplicates and self loops are kept so
    that `validate_topology` can report them.
    """

    nodes: tuple[Node, ...]
    links: tuple[Link, ...]
    W: int = 32

    def __init__(self, nodes: Iterable[Node], links: Iterable[Sequence[Node]], W: int = 32):
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "links", tuple(normalize_link(a, b) for a, b in links))
        object.__setattr__(self, "W", int(W))

    @property
    def n(self) -> int:
        return len(self.nodes)

    def link_set(self) -> frozenset[Link]:
        return frozenset(self.links)

    def neighbors(self, node: Node) -> tuple[Node, ...]:
        out = []
        for a, b in self.links:
            if a == node and b != node:
                out.append(b)
            elif b == node and a != node:
                out.append(a)
        return tuple(sorted(set(out)))

    def arcs(self) -> tuple[tuple[Node, Node], ...]:
        """Both orientations of every distinct link."""
        seen = []
        for a, b in sorted(set(self.links)):
            if a != b:
                seen.append((a, b))
                seen.append((b, a))
        return tuple(seen)


@dataclass(frozen=True)
class LspDemand:
    """An indivisible traffic flow: one element of the LSP set."""

    id: int
    source: Node
    destination: Node
    bandwidth: Fraction

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError(f"LSP {self.id}: source equals destination ({self.source})")
        if self.bandwidth <= 0:
            raise ValueError(f"LSP {self.id}: bandwidth must be positive")

    @property
    def pair(self) -> Link:
        return normalize_link(self.source, self.destination)


def default_interface_limit(n_nodes: int, q_max: int) -> int:
    """Default router interface budget: 2·Q·(N−1)."""
    return 2 * q_max * (n_nodes - 1)


@dataclass(frozen=True)
class SystemParams:
    """Dimensioning limits: lightpath capacity C, wavelengths W, multiplicity Q,
    router interface budget T."""

    C: Fraction
    W: int
    Q: int
    T: int

    def __init__(self, C=10, W: int = 32, Q: int = 2, T: int | None = None, n_nodes: int | None = None):
        object.__setattr__(self, "C", as_gbps(C))
        object.__setattr__(self, "W", int(W))
        object.__setattr__(self, "Q", int(Q))
        if T is None:
            if n_nodes is None:
                raise ValueError("either T or n_nodes is required")
            T = default_interface_limit(n_nodes, int(Q))
        object.__setattr__(self, "T", int(T))
        if self.Q not in (1, 2):
            raise ValueError(f"Q must be 1 or 2, got {self.Q}")
        if self.C <= 0 or self.W <= 0 or self.T <= 0:
            raise ValueError("C, W and T must be positive")


@dataclass(frozen=True)
class CostRatios:
    """Per-element costs: transponder, IP/optical interface card, OXC port."""

    c_tr: Fraction
    c_p_ip: Fraction
    c_p_oxc: Fraction
    label: str = "custom"

    def __init__(self, c_tr, c_p_ip, c_p_oxc, label: str = "custom"):
        object.__setattr__(self, "c_tr", as_gbps(c_tr))
        object.__setattr__(self, "c_p_ip", as_gbps(c_p_ip))
        object.__setattr__(self, "c_p_oxc", as_gbps(c_p_oxc))
        object.__setattr__(self, "label", label)
        if min(self.c_tr, self.c_p_ip, self.c_p_oxc) < 0:
            raise ValueError("element costs must be non-negative")

    def scaled(self, factor) -> "CostRatios":
        f = as_gbps(factor)
        return CostRatios(self.c_tr * f, self.c_p_ip * f, self.c_p_oxc * f, label="custom")


COST_RATIO_PRESETS: Mapping[str, CostRatios] = {
    "CR1": CostRatios("1", "8", "0.5", label="CR1"),
    "CR2": CostRatios("8", "0.5", "1", label="CR2"),
    "CR3": CostRatios("0.5", "1", "8", label="CR3"),
}


@dataclass(frozen=True)
class UnitCosts:
    """Derived circuit costs: lightpath, wavelength link, transit per Gbps."""

    c_lp: Fraction
    c_wl: Fraction
    c_tt: Fraction


def derive_unit_costs(ratios: CostRatios, C) -> UnitCosts:
    """A lightpath needs 2 interface cards + 2 OXC ports; a wavelength link
    needs 2 OXC ports + 2 transponders; transit is charged at the interface
    cost per capacity unit."""
    cap = as_gbps(C)
    if cap <= 0:
        raise ValueError("C must be positive")
    return UnitCosts(
        c_lp=2 * (ratios.c_p_ip + ratios.c_p_oxc),
        c_wl=2 * (ratios.c_p_oxc + ratios.c_tr),
        c_tt=ratios.c_p_ip / cap,
    )


@dataclass(frozen=True)
class TopologyReport:
    ok: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def articulation_points(topology: PhysicalTopology) -> tuple[Node, ...]:
    """Articulation nodes via iterative DFS low-point computation."""
    adj: dict[Node, set[Node]] = {v: set() for v in topology.nodes}
    for a, b in topology.links:
        if a != b and a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)

    index: dict[Node, int] = {}
    low: dict[Node, int] = {}
    parent: dict[Node, Node | None] = {}
    arts: set[Node] = set()
    counter = 0

    for root in topology.nodes:
        if root in index:
            continue
        parent[root] = None
        stack: list[tuple[Node, Iterable[Node]]] = [(root, iter(sorted(adj[root])))]
        index[root] = low[root] = counter
        counter += 1
        root_children = 0
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    parent[nxt] = node
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    if node == root:
                        root_children += 1
                    stack.append((nxt, iter(sorted(adj[nxt]))))
                    advanced = True
                    break
                elif nxt != parent[node]:
                    low[node] = min(low[node], index[nxt])
            if not advanced:
                stack.pop()
                p = parent[node]
                if p is not None:
                    low[p] = min(low[p], low[node])
                    if p != root and low[node] >= index[p]:
                        arts.add(p)
        if root_children > 1:
            arts.add(root)
    return tuple(sorted(arts))


def _is_connected(topology: PhysicalTopology) -> bool:
    if not topology.nodes:
        return True
    adj: dict[Node, set[Node]] = {v: set() for v in topology.nodes}
    for a, b in topology.links:
        if a != b and a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    seen = {topology.nodes[0]}
    frontier = [topology.nodes[0]]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(topology.nodes)


def validate_topology(topology: PhysicalTopology) -> TopologyReport:
    """Report self-loops, duplicate links, unknown endpoints and loss of
    bi-connectivity.  Violations are data, not failures."""
    violations: list[str] = []
    node_set = set(topology.nodes)
    if len(node_set) != len(topology.nodes):
        violations.append("duplicate node identifiers")
    seen: set[Link] = set()
    for a, b in topology.links:
        if a == b:
            violations.append(f"self-loop at node {a}")
            continue
        if a not in node_set or b not in node_set:
            violations.append(f"link ({a},{b}) references an unknown node")
            continue
        if (a, b) in seen:
            violations.append(f"multiple links between nodes {a} and {b}")
        seen.add((a, b))
    if not violations:
        if not _is_connected(topology):
            violations.append("not bi-connected: graph is disconnected")
        else:
            arts = articulation_points(topology)
            if arts:
                names = ", ".join(str(a) for a in arts)
                violations.append(f"not bi-connected: articulation node(s) {names}")
    return TopologyReport(ok=not violations, violations=tuple(violations))


def average_connectivity(topology: PhysicalTopology) -> Fraction:
    """Average node degree 2·E/N."""
    if topology.n == 0:
        raise ValueError("empty topology")
    return Fraction(2 * len(topology.links), topology.n)


def generate_topology(n: int, connectivity, seed: int, W: int = 32) -> PhysicalTopology:
    """Random bi-connected topology with round(n·d̄/2) links.

    A random Hamiltonian cycle guarantees bi-connectivity at d̄ = 2; uniformly
    random chords are then added (rejecting duplicates) until the target link
    count.  For a fixed seed the chord stream is a prefix of the stream drawn
    for any larger target, so topologies at increasing d̄ nest.
    """
    dbar = as_gbps(connectivity)
    if n < 3:
        raise ValueError("need at least 3 nodes")
    if dbar < 2 or dbar > n - 1:
        raise ValueError(f"connectivity must lie in [2, {n - 1}], got {dbar}")
    target = int(round(n * float(dbar) / 2))
    max_links = n * (n - 1) // 2
    target = min(target, max_links)

    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    links: list[Link] = []
    have: set[Link] = set()
    for i in range(n):
        link = normalize_link(order[i], order[(i + 1) % n])
        links.append(link)
        have.add(link)
    while len(links) < target:
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a == b:
            continue
        link = normalize_link(a, b)
        if link in have:
            continue
        links.append(link)
        have.add(link)
    return PhysicalTopology(nodes=range(n), links=links, W=W)


def split_demands(demands: Iterable, C) -> tuple[LspDemand, ...]:
    """Split each demand into ceil(b/C) equal-bandwidth LSPs.

    Accepts (s, d, b) tuples, {"s":, "d":, "b":} mappings, or LspDemand-like
    objects.  Bandwidth is conserved exactly.
    """
    cap = as_gbps(C)
    if cap <= 0:
        raise ValueError("C must be positive")
    out: list[LspDemand] = []
    next_id = 0
    for item in demands:
        if isinstance(item, Mapping):
            s, d, b = item["s"], item["d"], as_gbps(item["b"])
        elif isinstance(item, LspDemand):
            s, d, b = item.source, item.destination, item.bandwidth
        else:
            s, d, b = item[0], item[1], as_gbps(item[2])
        if b <= 0:
            raise ValueError(f"demand ({s},{d}) has non-positive bandwidth")
        parts = -(-b // cap)  # ceil for Fractions
        parts = int(parts)
        share = b / parts
        for _ in range(parts):
            out.append(LspDemand(id=next_id, source=s, destination=d, bandwidth=share))
            next_id += 1
    return tuple(out)
