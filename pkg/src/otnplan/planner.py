"""Survivability pipelines: working/protection logical design, physical
routing, interlayer backup-resource sharing and cost evaluation.

Every optimization phase is solved hierarchically: the phase cost first, then
(at gap 0) two deterministic tie-break objectives over the active entity
names.  Ties between equal-cost optima are therefore resolved identically by
this planner and by the enumeration oracle, which makes "planner equals
brute force at gap 0" a well-defined statement.  With the integrated
approach the working model carries both layers and is solved MPLS terms
first, wavelength term second, so the packet-layer resources match the
sequential result while the optical layer can only improve.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import naming
from .formulation import (PROTECTION, WORKING, DecisionVarMap, ExclusionSets,
                          Lightpath, ProblemInstance, ProtectionContext,
                          WorkingState, build_integrated, build_lightpath_routing,
                          build_logical_design, compute_exclusion_sets,
                          diagnose_lightpath_infeasibility,
                          exclusion_blocks_route, expand_lightpaths)
from .milp import MilpModel, MilpSolution, solve_milp
from .modes import Approach, SurvivabilityMode
from .netmodel import Link, Node, UnitCosts, normalize_link

__all__ = [
    "PlanOptions",
    "PlanError",
    "PhaseRecord",
    "LspRoute",
    "ResourceCounts",
    "CostBreakdown",
    "NetworkConfiguration",
    "plan",
    "transit_traffic",
    "apply_brs_sharing",
    "total_cost",
    "assemble_configuration",
    "export_phase_models",
]

MAX_GROUPING_RETRIES = 3
_PIN_EPS = 1e-6


class PlanError(RuntimeError):
    def __init__(self, phase: str, detail: str, retries: int = 0,
                 binding: Sequence[str] = ()):
        self.phase = phase
        self.detail = detail
        self.retries = retries
        self.binding = tuple(binding)
        text = f"phase {phase}: {detail}"
        if binding:
            text += f" (binding: {', '.join(self.binding)})"
        if retries:
            text += f" after {retries} retries"
        super().__init__(text)


@dataclass(frozen=True)
class PlanOptions:
    gap: float = 0.03
    time_limit: float = 300.0  # seconds per phase

    def exact(self) -> bool:
        return self.gap <= 0.0


@dataclass(frozen=True)
class PhaseRecord:
    name: str
    status: str
    objective: float
    best_bound: float
    gap: float
    nodes: int
    lp_iterations: int
    wall_time: float
    retries: int = 0


@dataclass(frozen=True)
class LspRoute:
    lsp_id: int
    working: tuple[int, ...]  # lightpath ids in path order
    protection: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ResourceCounts:
    transit_gbps: Fraction
    lightpaths: int
    wavelengths: int


@dataclass(frozen=True)
class CostBreakdown:
    transit: Fraction
    lightpath: Fraction
    optical: Fraction

    @property
    def total(self) -> Fraction:
        return self.transit + self.lightpath + self.optical


@dataclass
class NetworkConfiguration:
    """A fully solved two-layer configuration."""

    instance: ProblemInstance
    lightpaths: tuple[Lightpath, ...]
    lightpath_routes: dict[int, tuple[Node, ...]]
    protection_routes: dict[int, tuple[Node, ...]]  # optical backups, by lightpath id
    lsp_routes: dict[int, LspRoute]
    pair_working: dict[Link, int] = field(default_factory=dict)
    pair_spare: dict[Link, int] = field(default_factory=dict)
    link_working_w: dict[Link, int] = field(default_factory=dict)   # carrying wLSPs
    link_working_p: dict[Link, int] = field(default_factory=dict)   # carrying pLSPs
    link_spare: dict[Link, int] = field(default_factory=dict)       # protection lightpaths
    link_total: dict[Link, int] = field(default_factory=dict)
    transit: dict[Node, Fraction] = field(default_factory=dict)
    extra_wavelengths: int = 0
    reuse_factor: Fraction | None = None
    cost: CostBreakdown | None = None
    phases: tuple[PhaseRecord, ...] = ()

    @property
    def mode(self) -> SurvivabilityMode:
        return self.instance.mode

    def lsp_by_id(self, lsp_id: int):
        for lsp in self.instance.traffic:
            if lsp.id == lsp_id:
                return lsp
        raise KeyError(lsp_id)

    def counts(self) -> ResourceCounts:
        return ResourceCounts(
            transit_gbps=sum(self.transit.values(), Fraction(0)),
            lightpaths=len(self.lightpaths),
            wavelengths=sum(self.link_total.values()),
        )

    def protection_carrying_lightpaths(self) -> int:
        return sum(1 for lp in self.lightpaths if lp.status == PROTECTION)

    def lsp_logical_nodes(self, lsp_id: int, side: str = "working") -> tuple[Node, ...]:
        """Node sequence of an LSP's logical route (lightpath endpoints)."""
        route = self.lsp_routes[lsp_id]
        lp_ids = route.working if side == "working" else (route.protection or ())
        seq = [self.lsp_by_id(lsp_id).source]
        for lp_id in lp_ids:
            lp = self.lightpaths[lp_id]
            seq.append(lp.j if seq[-1] == lp.i else lp.i)
        return tuple(seq)

    def lsp_physical_walk(self, lsp_id: int, side: str = "working") -> tuple[Node, ...]:
        """Physical node walk of an LSP path: its lightpaths' routes chained."""
        route = self.lsp_routes[lsp_id]
        lp_ids = route.working if side == "working" else (route.protection or ())
        walk: list[Node] = [self.lsp_by_id(lsp_id).source]
        for lp_id in lp_ids:
            seg = list(self.lightpath_routes[lp_id])
            if seg[0] != walk[-1]:
                seg.reverse()
            walk.extend(seg[1:])
        return tuple(walk)


# ---------------------------------------------------------------------------
# staged solving

def _exact_dot(coefs: Mapping[int, float], values: Mapping[int, float]) -> float:
    return sum(c * values.get(vid, 0.0) for vid, c in sorted(coefs.items()))


def _solve_stages(model: MilpModel, stages: Sequence[Mapping[int, float]],
                  options: PlanOptions, label: str,
                  tie_break: bool) -> tuple[dict[int, float], PhaseRecord]:
    """Minimize the stage objectives lexicographically (each pinned before
    the next), then the two tie-break scores; returns the last incumbent."""
    deadline = time.perf_counter() + options.time_limit
    staged: list[tuple[Mapping[int, float], float, float]] = [
        (vec, _PIN_EPS, options.gap) for vec in stages]
    if tie_break:
        for level in (1, 2):
            vec = {v.id: float(naming.tie_weight(v.name, level))
                   for v in model.variables if v.kind == "binary"}
            staged.append((vec, 0.5, 0.0))

    values: dict[int, float] = {}
    first: MilpSolution | None = None
    nodes = iters = 0
    wall = 0.0
    for idx, (vec, eps, stage_gap) in enumerate(staged):
        budget = max(0.0, deadline - time.perf_counter())
        model.set_objective(vec)
        sol = solve_milp(model, gap=stage_gap, time_limit=budget)
        nodes += sol.stats.nodes
        iters += sol.stats.lp_iterations
        wall += sol.stats.wall_time
        if idx == 0:
            first = sol
        if not sol.has_incumbent:
            if idx == 0:
                raise PlanError(label, sol.status, binding=sol.infeasible_rows)
            break  # keep the previous stage's incumbent
        values = {vid: float(round(val)) if model.variables[vid].kind == "binary" else val
                  for vid, val in sol.values.items()}
        if idx + 1 < len(staged):
            pinned = _exact_dot(vec, values)
            model.add_constraint(f"pin[stage={idx}]",
                                 [(vid, c) for vid, c in vec.items()],
                                 "<=", pinned + eps)
    record = PhaseRecord(
        name=label, status=first.status,
        objective=first.objective if first.has_incumbent else math.nan,
        best_bound=first.best_bound,
        gap=first.gap if first.has_incumbent else math.nan,
        nodes=nodes, lp_iterations=iters, wall_time=wall)
    return values, record


def _extract_route(active: dict[Node, list[tuple[Node, object]]], s: Node, d: Node,
                   limit: int, label: str) -> tuple[tuple[Node, ...], list]:
    """Follow active arcs from s to d, smallest next hop first; trailing
    cycles in the flow are dropped."""
    path = [s]
    hops: list = []
    cur = s
    steps = 0
    while cur != d:
        options = active.get(cur)
        if not options:
            raise PlanError(label, f"route extraction stuck at node {cur}")
        nxt, key = options.pop(0)
        hops.append(key)
        path.append(nxt)
        cur = nxt
        steps += 1
        if steps > limit:
            raise PlanError(label, "route extraction exceeded hop limit")
    return tuple(path), hops


def _decode_logical(instance: ProblemInstance, varmap: DecisionVarMap,
                    values: Mapping[int, float], phase: str,
                    lsps: Sequence) -> tuple[list[tuple[Node, Node, int]],
                                             dict[int, tuple[tuple[Node, Node, int], ...]],
                                             dict[int, tuple[Node, ...]]]:
    """Active (i,j,q) pairs plus, per LSP, the hop list and node sequence."""
    beta = varmap.wbeta if phase == WORKING else varmap.pbeta
    delta = varmap.wdelta if phase == WORKING else varmap.pdelta
    pairs = sorted(key for key, vid in beta.items() if values.get(vid, 0.0) > 0.5)
    hops: dict[int, tuple[tuple[Node, Node, int], ...]] = {}
    node_seq: dict[int, tuple[Node, ...]] = {}
    for lsp in lsps:
        active: dict[Node, list[tuple[Node, tuple]]] = {}
        for (k, i, j, q), vid in delta.items():
            if k != lsp.id or values.get(vid, 0.0) < 0.5:
                continue
            key = (min(i, j), max(i, j), q)
            active.setdefault(i, []).append((j, key))
        for lst in active.values():
            lst.sort()
        path, hop = _extract_route(active, lsp.source, lsp.destination,
                                   len(instance.topology.nodes) + 1, f"decode-{phase}")
        hops[lsp.id] = tuple(hop)
        node_seq[lsp.id] = path
    return pairs, hops, node_seq


def _decode_physical(topology, varmap: DecisionVarMap, values: Mapping[int, float],
                     lightpaths: Sequence[Lightpath], which: str) -> dict[int, tuple[Node, ...]]:
    lam = {"wlam": varmap.wlam, "plam": varmap.plam}[which]
    routes: dict[int, tuple[Node, ...]] = {}
    for lp in lightpaths:
        active: dict[Node, list[tuple[Node, Link]]] = {}
        for (lp_id, m, n), vid in lam.items():
            if lp_id != lp.id or values.get(vid, 0.0) < 0.5:
                continue
            active.setdefault(m, []).append((n, normalize_link(m, n)))
        for lst in active.values():
            lst.sort()
        path, _ = _extract_route(active, lp.i, lp.j, len(topology.nodes) + 1,
                                 f"decode-{which}")
        routes[lp.id] = path
    return routes


def _decode_integrated_routes(topology, varmap: DecisionVarMap,
                              values: Mapping[int, float], phase: str,
                              pairs: Sequence[tuple[Node, Node, int]]
                              ) -> dict[tuple[Node, Node, int], tuple[Node, ...]]:
    lam = varmap.wlam_int if phase == WORKING else varmap.plam_int
    routes: dict[tuple[Node, Node, int], tuple[Node, ...]] = {}
    by_pair: dict[tuple[Node, Node, int], dict[Node, list[tuple[Node, Link]]]] = {}
    for (pi, pj, pq, m, n), vid in lam.items():
        if values.get(vid, 0.0) < 0.5:
            continue
        by_pair.setdefault((pi, pj, pq), {}).setdefault(m, []).append(
            (n, normalize_link(m, n)))
    for (i, j, q) in pairs:
        active = by_pair.get((i, j, q), {})
        for lst in active.values():
            lst.sort()
        path, _ = _extract_route(active, i, j, len(topology.nodes) + 1,
                                 "decode-integrated")
        routes[(i, j, q)] = path
    return routes


# ---------------------------------------------------------------------------
# pipeline helpers

def _interface_usage(pairs: Iterable[tuple[Node, Node, int]]) -> dict[Node, int]:
    usage: dict[Node, int] = {}
    for (i, j, _q) in pairs:
        usage[i] = usage.get(i, 0) + 1
        usage[j] = usage.get(j, 0) + 1
    return usage


def _route_links(route: Sequence[Node]) -> frozenset[Link]:
    return frozenset(normalize_link(a, b) for a, b in zip(route, route[1:]))


def _wavelength_usage(routes: Iterable[Sequence[Node]]) -> dict[Link, int]:
    usage: dict[Link, int] = {}
    for route in routes:
        for link in _route_links(route):
            usage[link] = usage.get(link, 0) + 1
    return usage


def _solve_routing(lightpaths: Sequence[Lightpath], instance: ProblemInstance,
                   options: PlanOptions, label: str, tie: bool,
                   **routing_kwargs) -> tuple[DecisionVarMap, dict[int, float],
                                              PhaseRecord]:
    """Lightpath-routing phase with link-level infeasibility diagnosis."""
    model, varmap = build_lightpath_routing(list(lightpaths), instance.topology,
                                            instance.unit_costs, **routing_kwargs)
    try:
        vals, rec = _solve_stages(model, [varmap.optical_objective], options,
                                  label, tie)
    except PlanError as exc:
        binding = diagnose_lightpath_infeasibility(
            lightpaths, instance.topology, instance.unit_costs, **routing_kwargs)
        raise PlanError(label, exc.detail, binding=binding) from exc
    return varmap, vals, rec


def _brs_colocated_forbidden(lightpath_routes: Mapping[int, tuple[Node, ...]],
                             lsp_logical: Mapping[int, tuple[Node, ...]],
                             lsp_plps: Mapping[int, tuple[int, ...]],
                             to_protect: Sequence[Lightpath]) -> dict[int, frozenset[Link]]:
    """Interlayer-BRS rule: a lightpath transiting an OXC and the LSPs
    transiting the co-located router must be protected on different physical
    links, so their restorations never compete for one shared wavelength."""
    plsp_links: dict[int, frozenset[Link]] = {}
    for k, plp_ids in lsp_plps.items():
        links: set[Link] = set()
        for lp_id in plp_ids:
            links |= _route_links(lightpath_routes[lp_id])
        plsp_links[k] = frozenset(links)
    transit_lsps: dict[Node, list[int]] = {}
    for k, seq in lsp_logical.items():
        if k not in lsp_plps:
            continue
        for x in seq[1:-1]:
            transit_lsps.setdefault(x, []).append(k)
    out: dict[int, frozenset[Link]] = {}
    for lp in to_protect:
        banned: set[Link] = set()
        for x in lightpath_routes[lp.id][1:-1]:
            for k in transit_lsps.get(x, ()):
                banned |= plsp_links[k]
        if banned:
            out[lp.id] = frozenset(banned)
    return out


# ---------------------------------------------------------------------------
# the pipeline

def plan(instance: ProblemInstance, options: PlanOptions | None = None) -> NetworkConfiguration:
    """Run the survivability pipeline for the instance's mode and approach.

    Steps: I working-LSP logical design, III working-side physical routing
    (fused with I under the integrated approach), II protection-LSP logical
    design plus spare-carrier placement, IV protection-lightpath routing
    (multilayer modes).  Execution order follows the data dependencies: the
    spare-unprotected and interlayer-BRS exclusion rules need the physical
    routes of step III before step II can be posed.
    """
    options = options or PlanOptions()
    mode = instance.mode
    tie = options.exact()
    phases: list[PhaseRecord] = []

    # ---- step I (+ III when integrated): working-side design
    if instance.approach is Approach.INTEGRATED:
        model, varmap = build_integrated(instance, WORKING)
        stages = [varmap.mpls_objective, varmap.optical_objective]
    else:
        model, varmap = build_logical_design(instance, WORKING)
        stages = [varmap.mpls_objective]
    values, record = _solve_stages(model, stages, options, "I-working-logical", tie)
    phases.append(record)
    w_pairs, w_hops, w_nodes = _decode_logical(instance, varmap, values, WORKING,
                                               instance.traffic)

    # ---- step III: working-status lightpath physical routing
    w_lightpaths = expand_lightpaths(w_pairs)
    w_key_to_id = {lp.key: lp.id for lp in w_lightpaths}
    routes_w: dict[int, tuple[Node, ...]] = {}
    if instance.approach is Approach.INTEGRATED:
        int_routes = _decode_integrated_routes(instance.topology, varmap, values,
                                               WORKING, w_pairs)
        routes_w = {w_key_to_id[(i, j, q, WORKING)]: r
                    for (i, j, q), r in int_routes.items()}
    elif w_lightpaths:
        vm3, vals3, rec3 = _solve_routing(w_lightpaths, instance, options,
                                          "III-working-lightpaths", tie)
        phases.append(rec3)
        routes_w = _decode_physical(instance.topology, vm3, vals3,
                                    w_lightpaths, "wlam")

    lsp_working_lps = {
        k: tuple(w_key_to_id[(i, j, q, WORKING)] for (i, j, q) in hops)
        for k, hops in w_hops.items()}

    # ---- choose the protected LSP set
    if mode is SurvivabilityMode.NONE:
        protected: tuple = ()
    elif mode is SurvivabilityMode.SINGLE_LAYER:
        protected = instance.traffic
    else:
        protected = tuple(l for l in instance.traffic if len(w_hops[l.id]) >= 2)

    # ---- step II (+ spare-carrier placement)
    all_lightpaths = w_lightpaths
    routes_p: dict[int, tuple[Node, ...]] = {}
    lsp_plps: dict[int, tuple[int, ...]] = {}
    plsp_carrier_map: dict[int, tuple[int, ...]] = {}

    if protected:
        base_state = WorkingState(
            instance=instance,
            lsp_logical_nodes=w_nodes,
            lsp_lightpaths=lsp_working_lps,
            lightpaths={lp.id: lp for lp in w_lightpaths},
            lightpath_routes=routes_w,
        )
        pre = compute_exclusion_sets(base_state, mode)
        for lsp in protected:
            nex = pre.lsp_nodes.get(lsp.id, frozenset())
            if lsp.source in nex or lsp.destination in nex:
                raise PlanError("II-protection-logical",
                                f"exclusion set of LSP {lsp.id} covers an endpoint")

        forbidden: list[tuple[tuple[int, Node, Node, int], ...]] = []
        retries = 0
        while True:
            ctx = ProtectionContext(
                protected=tuple(protected),
                interface_usage=_interface_usage(w_pairs),
                excluded_nodes=pre.lsp_nodes,
                forbidden_groupings=tuple(forbidden),
            )
            if instance.approach is Approach.INTEGRATED:
                phys_nodes = pre.lsp_phys_nodes if mode.plsp_physically_disjoint else {}
                phys_links = pre.lsp_links if mode.plsp_physically_disjoint else {}
                m2, vm2 = build_integrated(
                    instance, PROTECTION, ctx,
                    lsp_excluded_phys_nodes=phys_nodes,
                    lsp_excluded_links=phys_links,
                    wavelengths_used=_wavelength_usage(routes_w.values()))
                stages2 = [vm2.mpls_objective, vm2.optical_objective]
            else:
                m2, vm2 = build_logical_design(instance, PROTECTION, ctx)
                stages2 = [vm2.mpls_objective]
            vals2, rec2 = _solve_stages(m2, stages2, options,
                                        "II-protection-logical", tie)
            p_pairs, p_hops, _p_nodes = _decode_logical(instance, vm2, vals2,
                                                        PROTECTION, protected)
            all_lightpaths = expand_lightpaths(w_pairs, p_pairs)
            key_to_id = {lp.key: lp.id for lp in all_lightpaths}
            lsp_plps = {
                k: tuple(key_to_id[(i, j, q, PROTECTION)] for (i, j, q) in hops)
                for k, hops in p_hops.items()}
            carriers: dict[int, list[int]] = {}
            for k, lp_ids in sorted(lsp_plps.items()):
                for lp_id in lp_ids:
                    carriers.setdefault(lp_id, []).append(k)
            plsp_carrier_map = {lp: tuple(ks) for lp, ks in carriers.items()}

            if instance.approach is Approach.INTEGRATED:
                int_p = _decode_integrated_routes(instance.topology, vm2, vals2,
                                                  PROTECTION, p_pairs)
                routes_p = {key_to_id[(i, j, q, PROTECTION)]: r
                            for (i, j, q), r in int_p.items()}
                phases.append(replace(rec2, retries=retries))
                break

            # spare carriers inherit their passengers' exclusions
            state = WorkingState(
                instance=instance,
                lsp_logical_nodes=w_nodes,
                lsp_lightpaths=lsp_working_lps,
                lightpaths={lp.id: lp for lp in all_lightpaths},
                lightpath_routes=routes_w,
                plsp_carriers=plsp_carrier_map,
            )
            excl = (compute_exclusion_sets(state, mode)
                    if mode.plsp_physically_disjoint else ExclusionSets())
            if excl.infeasible:
                if retries >= MAX_GROUPING_RETRIES:
                    raise PlanError("II-protection-logical",
                                    "; ".join(excl.infeasible), retries=retries)
                for lp_id, passengers in sorted(plsp_carrier_map.items()):
                    lp = all_lightpaths[lp_id]
                    nodes_u = excl.lightpath_nodes.get(lp_id, frozenset())
                    links_u = excl.lightpath_links.get(lp_id, frozenset())
                    if lp.i in nodes_u or lp.j in nodes_u or exclusion_blocks_route(
                            instance.topology, lp.i, lp.j, nodes_u, links_u):
                        forbidden.append(tuple(sorted(
                            (k, lp.i, lp.j, lp.q) for k in passengers)))
                retries += 1
                continue

            phases.append(replace(rec2, retries=retries))
            p_lightpaths = tuple(lp for lp in all_lightpaths
                                 if lp.status == PROTECTION)
            if p_lightpaths:
                vm3p, vals3p, rec3p = _solve_routing(
                    p_lightpaths, instance, options,
                    "III-spare-carrier-lightpaths", tie, exclusions=excl,
                    wavelengths_used=_wavelength_usage(routes_w.values()))
                phases.append(rec3p)
                routes_p = _decode_physical(instance.topology, vm3p, vals3p,
                                            p_lightpaths, "wlam")
            break

    lightpath_routes = dict(routes_w)
    lightpath_routes.update(routes_p)

    # ---- step IV: protection lightpaths (optical backups), multilayer only
    protection_routes: dict[int, tuple[Node, ...]] = {}
    if mode.multilayer:
        if mode is SurvivabilityMode.ML_DOUBLE:
            to_protect = list(all_lightpaths)
        else:
            to_protect = [lp for lp in all_lightpaths if lp.status == WORKING]
        if to_protect:
            excl4 = ExclusionSets(
                lightpath_nodes={lp.id: frozenset(lightpath_routes[lp.id][1:-1])
                                 for lp in to_protect})
            working_links = {lp.id: _route_links(lightpath_routes[lp.id])
                             for lp in to_protect}
            forb: dict[int, frozenset[Link]] = {}
            if mode is SurvivabilityMode.ML_INTERLAYER_BRS:
                forb = _brs_colocated_forbidden(lightpath_routes, w_nodes,
                                                lsp_plps, to_protect)
            vm4, vals4, rec4 = _solve_routing(
                to_protect, instance, options, "IV-protection-lightpaths", tie,
                protection=True, exclusions=excl4, working_links=working_links,
                forbidden_links=forb,
                wavelengths_used=_wavelength_usage(lightpath_routes.values()))
            phases.append(rec4)
            protection_routes = _decode_physical(instance.topology, vm4, vals4,
                                                 to_protect, "plam")

    # ---- assemble
    lsp_routes = {
        lsp.id: LspRoute(lsp_id=lsp.id, working=lsp_working_lps[lsp.id],
                         protection=lsp_plps.get(lsp.id))
        for lsp in instance.traffic}
    config = NetworkConfiguration(
        instance=instance,
        lightpaths=all_lightpaths,
        lightpath_routes=lightpath_routes,
        protection_routes=protection_routes,
        lsp_routes=lsp_routes,
        phases=tuple(phases),
    )
    _finalize(config)
    return config


def transit_traffic(config: NetworkConfiguration) -> tuple[dict[Node, Fraction], Fraction]:
    """Per-node transit: bandwidth electronically forwarded at nodes that are
    neither source nor destination, over working and protection LSP routes."""
    delta: dict[Node, Fraction] = {n: Fraction(0) for n in config.instance.topology.nodes}
    for lsp in config.instance.traffic:
        route = config.lsp_routes[lsp.id]
        for side in ("working", "protection"):
            if side == "protection" and route.protection is None:
                continue
            for x in config.lsp_logical_nodes(lsp.id, side)[1:-1]:
                delta[x] += lsp.bandwidth
    return delta, sum(delta.values(), Fraction(0))


def apply_brs_sharing(config: NetworkConfiguration) -> NetworkConfiguration:
    """Backup-resource sharing arithmetic: spare-carrier wavelengths ride in
    the optical protection pool; each link provisions w1 + max(s, w2)."""
    total: dict[Link, int] = {}
    extra = 0
    w2_sum = 0
    for link in sorted(set(config.instance.topology.links)):
        w1 = config.link_working_w.get(link, 0)
        w2 = config.link_working_p.get(link, 0)
        s = config.link_spare.get(link, 0)
        count = w1 + max(s, w2)
        if count:
            total[link] = count
        extra += max(0, w2 - s)
        w2_sum += w2
    config.link_total = total
    config.extra_wavelengths = extra
    config.reuse_factor = Fraction(1) if w2_sum == 0 else 1 - Fraction(extra, w2_sum)
    return config


def total_cost(source, unit_costs: UnitCosts) -> CostBreakdown:
    """Evaluate the configuration cost: transit + lightpath + optical terms.

    Accepts a NetworkConfiguration or any object with ``transit_gbps``,
    ``lightpaths`` and ``wavelengths`` fields (e.g. published resource
    counts).
    """
    counts = source.counts() if isinstance(source, NetworkConfiguration) else source
    transit = unit_costs.c_tt * Fraction(counts.transit_gbps)
    lightpath = unit_costs.c_lp * counts.lightpaths
    optical = unit_costs.c_wl * counts.wavelengths
    return CostBreakdown(transit=transit, lightpath=lightpath, optical=optical)


def _finalize(config: NetworkConfiguration) -> None:
    inst = config.instance
    pair_w: dict[Link, int] = {}
    pair_s: dict[Link, int] = {}
    link_w: dict[Link, int] = {}
    link_p: dict[Link, int] = {}
    link_s: dict[Link, int] = {}
    for lp in config.lightpaths:
        pair = (lp.i, lp.j)
        if lp.status == WORKING:
            pair_w[pair] = pair_w.get(pair, 0) + 1
        else:
            pair_s[pair] = pair_s.get(pair, 0) + 1
        for link in _route_links(config.lightpath_routes[lp.id]):
            target = link_w if lp.status == WORKING else link_p
            target[link] = target.get(link, 0) + 1
    for route in config.protection_routes.values():
        for link in _route_links(route):
            link_s[link] = link_s.get(link, 0) + 1
    config.pair_working = pair_w
    config.pair_spare = pair_s
    config.link_working_w = link_w
    config.link_working_p = link_p
    config.link_spare = link_s

    if inst.mode is SurvivabilityMode.ML_INTERLAYER_BRS:
        apply_brs_sharing(config)
    else:
        total: dict[Link, int] = {}
        for link in set(link_w) | set(link_p) | set(link_s):
            total[link] = link_w.get(link, 0) + link_p.get(link, 0) + link_s.get(link, 0)
        config.link_total = total
        config.extra_wavelengths = 0
        config.reuse_factor = None

    delta, _total = transit_traffic(config)
    config.transit = {n: v for n, v in delta.items() if v}
    config.cost = total_cost(config, inst.unit_costs)


def assemble_configuration(instance: ProblemInstance,
                           lightpaths: Sequence[Lightpath],
                           lightpath_routes: Mapping[int, tuple[Node, ...]],
                           protection_routes: Mapping[int, tuple[Node, ...]],
                           lsp_routes: Mapping[int, LspRoute],
                           phases: tuple[PhaseRecord, ...] = ()) -> NetworkConfiguration:
    """Build a configuration from raw routes and derive every capacity,
    transit and cost field."""
    config = NetworkConfiguration(
        instance=instance,
        lightpaths=tuple(lightpaths),
        lightpath_routes=dict(lightpath_routes),
        protection_routes=dict(protection_routes),
        lsp_routes=dict(lsp_routes),
        phases=phases,
    )
    _finalize(config)
    return config


def export_phase_models(instance: ProblemInstance) -> dict[str, MilpModel]:
    """Phase models derivable from the instance alone (no solving): the
    working-side design.  Later phases need solved working routes, so a full
    pipeline export means solving here and feeding routes back in."""
    if instance.approach is Approach.INTEGRATED:
        model, _ = build_integrated(instance, WORKING)
        return {"phase-I+III-working-integrated": model}
    model, _ = build_logical_design(instance, WORKING)
    return {"phase-I-working-logical": model}
