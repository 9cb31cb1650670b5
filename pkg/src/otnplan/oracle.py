"""Brute-force optimum for small instances: every logical routing, lightpath
placement and physical routing is enumerated by plain graph search, scored
with exact rational arithmetic, and the pipeline-optimal configuration is
returned.

No MILP machinery is involved: feasibility (capacities, interface budgets,
wavelength budgets, exclusions) is checked natively on the enumerated
routes.  Equal-cost ties fall to the same deterministic name-weight scores
the planner uses, so at gap 0 the two must produce identical costs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import naming
from .formulation import (PROTECTION, WORKING, ExclusionSets,
                          ProblemInstance, WorkingState, compute_exclusion_sets,
                          exclusion_blocks_route, expand_lightpaths)
from .modes import Approach, SurvivabilityMode
from .netmodel import Link, Node, PhysicalTopology, normalize_link
from .planner import (LspRoute, MAX_GROUPING_RETRIES, NetworkConfiguration,
                      PlanError, assemble_configuration,
                      _brs_colocated_forbidden, _route_links, _wavelength_usage)

__all__ = ["brute_force_optimum", "OracleBoundsError"]

MAX_NODES = 5
MAX_LSPS = 3


class OracleBoundsError(ValueError):
    """Instance exceeds the documented enumeration bounds."""


def _check_bounds(instance: ProblemInstance) -> None:
    if instance.topology.n > MAX_NODES or len(instance.traffic) > MAX_LSPS \
            or instance.params.Q != 1:
        raise OracleBoundsError(
            f"brute force handles N <= {MAX_NODES}, K <= {MAX_LSPS}, Q = 1; got "
            f"N={instance.topology.n}, K={len(instance.traffic)}, Q={instance.params.Q}")


def _simple_paths(neighbors: Mapping[Node, Sequence[Node]], s: Node, d: Node,
                  banned_nodes: frozenset[Node] = frozenset(),
                  banned_links: frozenset[Link] = frozenset()
                  ) -> list[tuple[Node, ...]]:
    if s in banned_nodes or d in banned_nodes:
        return []
    out: list[tuple[Node, ...]] = []
    stack: list[tuple[Node, tuple[Node, ...]]] = [(s, (s,))]
    while stack:
        cur, path = stack.pop()
        for nxt in neighbors.get(cur, ()):
            if nxt in banned_nodes or nxt in path:
                continue
            if normalize_link(cur, nxt) in banned_links:
                continue
            if nxt == d:
                out.append(path + (nxt,))
            else:
                stack.append((nxt, path + (nxt,)))
    return out


def _complete_neighbors(nodes: Sequence[Node]) -> dict[Node, tuple[Node, ...]]:
    s = sorted(nodes)
    return {v: tuple(w for w in s if w != v) for v in s}


def _topo_neighbors(topology: PhysicalTopology) -> dict[Node, tuple[Node, ...]]:
    return {v: topology.neighbors(v) for v in topology.nodes}


def _hop_pairs(path: Sequence[Node]) -> list[Link]:
    return [normalize_link(a, b) for a, b in zip(path, path[1:])]


# ---------------------------------------------------------------------------
# logical phase enumeration

def _best_logical(instance: ProblemInstance, lsps: Sequence, plane: str,
                  excluded_nodes: Mapping[int, frozenset[Node]],
                  interface_used: Mapping[Node, int],
                  forbidden: Sequence[tuple[tuple[int, Node, Node, int], ...]],
                  ) -> list[tuple[Fraction, int, int, dict[int, tuple[Node, ...]]]]:
    """All feasible logical routings scored (cost, tie1, tie2), sorted.

    Scores follow the phase model exactly: transit cost over protected
    bandwidth plus lightpath cost, then the name-weight tie scores over the
    active existence and routing entities.
    """
    topo = instance.topology
    params = instance.params
    uc = instance.unit_costs
    beta_name = naming.wbeta if plane == WORKING else naming.pbeta
    delta_name = naming.wdelta if plane == WORKING else naming.pdelta
    neighbors = _complete_neighbors(topo.nodes)

    per_lsp: list[list[tuple[Node, ...]]] = []
    for lsp in lsps:
        paths = _simple_paths(neighbors, lsp.source, lsp.destination,
                              excluded_nodes.get(lsp.id, frozenset()))
        if not paths:
            return []
        per_lsp.append(sorted(paths))

    results: list[tuple[Fraction, int, int, dict[int, tuple[Node, ...]]]] = []
    for combo in itertools.product(*per_lsp):
        load: dict[Link, Fraction] = {}
        pairs: set[Link] = set()
        ok = True
        for lsp, path in zip(lsps, combo):
            for pair in _hop_pairs(path):
                load[pair] = load.get(pair, Fraction(0)) + lsp.bandwidth
                pairs.add(pair)
                if load[pair] > params.C:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        iface: dict[Node, int] = {}
        for (a, b) in pairs:
            iface[a] = iface.get(a, 0) + 1
            iface[b] = iface.get(b, 0) + 1
        if any(cnt + interface_used.get(n, 0) > params.T for n, cnt in iface.items()):
            continue
        if forbidden:
            routes_pairs = {lsp.id: set(_hop_pairs(path))
                            for lsp, path in zip(lsps, combo)}
            banned = False
            for grouping in forbidden:
                if all((i, j) in routes_pairs.get(k, ()) for (k, i, j, _q) in grouping):
                    banned = True
                    break
            if banned:
                continue
        cost = uc.c_lp * len(pairs)
        names: list[str] = [beta_name(i, j, 1) for (i, j) in sorted(pairs)]
        for lsp, path in zip(lsps, combo):
            cost += uc.c_tt * lsp.bandwidth * (len(path) - 2)
            for a, b in zip(path, path[1:]):
                names.append(delta_name(lsp.id, a, b, 1))
        results.append((cost, naming.tie_score(names, 1), naming.tie_score(names, 2),
                        {lsp.id: path for lsp, path in zip(lsps, combo)}))
    results.sort(key=lambda r: (r[0], r[1], r[2]))
    return results


# ---------------------------------------------------------------------------
# physical routing enumeration

def _route_entities(topology: PhysicalTopology,
                    entities: Sequence[tuple[int, Node, Node]],
                    name_fn: Callable[[int, Node, Node], str],
                    used: Mapping[Link, int],
                    excl_nodes: Mapping[int, frozenset[Node]] | None = None,
                    excl_links: Mapping[int, frozenset[Link]] | None = None,
                    ) -> tuple[dict[int, tuple[Node, ...]], tuple[int, int, int]] | None:
    """Jointly route entities over physical links minimizing
    (total hops, tie1, tie2) under the per-link wavelength budget.
    Returns None when some entity has no admissible path or budgets bind."""
    excl_nodes = excl_nodes or {}
    excl_links = excl_links or {}
    neighbors = _topo_neighbors(topology)
    cands: list[list[tuple[int, int, int, tuple[Node, ...]]]] = []
    for (eid, i, j) in entities:
        paths = _simple_paths(neighbors, i, j,
                              excl_nodes.get(eid, frozenset()),
                              excl_links.get(eid, frozenset()))
        scored = []
        for p in paths:
            names = [name_fn(eid, a, b) for a, b in zip(p, p[1:])]
            scored.append((len(p) - 1, naming.tie_score(names, 1),
                           naming.tie_score(names, 2), p))
        if not scored:
            return None
        scored.sort()
        cands.append(scored)

    n_e = len(entities)
    suffix = [(0, 0, 0)] * (n_e + 1)
    for idx in range(n_e - 1, -1, -1):
        nxt = suffix[idx + 1]
        suffix[idx] = (nxt[0] + min(c[0] for c in cands[idx]),
                       nxt[1] + min(c[1] for c in cands[idx]),
                       nxt[2] + min(c[2] for c in cands[idx]))

    best: tuple[int, int, int] | None = None
    best_routes: dict[int, tuple[Node, ...]] | None = None
    usage = dict(used)
    chosen: dict[int, tuple[Node, ...]] = {}
    limit = topology.W

    def dfs(idx: int, acc: tuple[int, int, int]) -> None:
        nonlocal best, best_routes
        bound = (acc[0] + suffix[idx][0], acc[1] + suffix[idx][1],
                 acc[2] + suffix[idx][2])
        if best is not None and bound >= best:
            return
        if idx == n_e:
            best = acc
            best_routes = dict(chosen)
            return
        eid, _i, _j = entities[idx]
        for (hops, f1, f2, path) in cands[idx]:
            links = _hop_pairs(path)
            if any(usage.get(l, 0) + 1 > limit for l in links):
                continue
            for l in links:
                usage[l] = usage.get(l, 0) + 1
            chosen[eid] = path
            dfs(idx + 1, (acc[0] + hops, acc[1] + f1, acc[2] + f2))
            for l in links:
                usage[l] -= 1
            del chosen[eid]

    dfs(0, (0, 0, 0))
    if best_routes is None:
        return None
    return best_routes, best


# ---------------------------------------------------------------------------
# the pipeline, by enumeration

def brute_force_optimum(instance: ProblemInstance,
                        mode: SurvivabilityMode | None = None
                        ) -> tuple[Fraction, NetworkConfiguration]:
    """Exhaustively enumerate the mode's pipeline and return (optimal cost,
    one optimal configuration).  Bounds: N <= 5, K <= 3, Q = 1."""
    inst = instance if mode is None or mode is instance.mode else instance.with_mode(mode)
    _check_bounds(inst)
    mode = inst.mode
    topo = inst.topology
    integrated = inst.approach is Approach.INTEGRATED

    # ---- working side
    logical = _best_logical(inst, inst.traffic, WORKING, {}, {}, ())
    if not logical:
        raise PlanError("I-working-logical", "no feasible logical routing")

    if integrated:
        picked = _pick_integrated(inst, logical, WORKING, None)
        if picked is None:
            raise PlanError("I-working-logical", "no routable logical optimum")
        w_routes_logical, routes_by_pair = picked
        w_pairs = sorted({(i, j, 1) for path in w_routes_logical.values()
                          for (i, j) in _hop_pairs(path)})
        w_lightpaths = expand_lightpaths(w_pairs)
        routes_w = {lp.id: routes_by_pair[(lp.i, lp.j, lp.q)] for lp in w_lightpaths}
    else:
        _cost, _f1, _f2, w_routes_logical = logical[0]
        w_pairs = sorted({(i, j, 1) for path in w_routes_logical.values()
                          for (i, j) in _hop_pairs(path)})
        w_lightpaths = expand_lightpaths(w_pairs)
        routed = _route_entities(topo, [(lp.id, lp.i, lp.j) for lp in w_lightpaths],
                                 naming.wlam, {})
        if routed is None:
            raise PlanError("III-working-lightpaths", "no feasible physical routing")
        routes_w = routed[0]

    w_key_to_id = {lp.key: lp.id for lp in w_lightpaths}
    w_hops = {k: tuple((min(a, b), max(a, b), 1) for a, b in zip(p, p[1:]))
              for k, p in w_routes_logical.items()}
    lsp_working_lps = {
        k: tuple(w_key_to_id[(i, j, q, WORKING)] for (i, j, q) in hops)
        for k, hops in w_hops.items()}

    if mode is SurvivabilityMode.NONE:
        protected: tuple = ()
    elif mode is SurvivabilityMode.SINGLE_LAYER:
        protected = inst.traffic
    else:
        protected = tuple(l for l in inst.traffic if len(w_hops[l.id]) >= 2)

    all_lightpaths = w_lightpaths
    routes_p: dict[int, tuple[Node, ...]] = {}
    lsp_plps: dict[int, tuple[int, ...]] = {}

    if protected:
        base_state = WorkingState(
            instance=inst,
            lsp_logical_nodes=w_routes_logical,
            lsp_lightpaths=lsp_working_lps,
            lightpaths={lp.id: lp for lp in w_lightpaths},
            lightpath_routes=routes_w,
        )
        pre = compute_exclusion_sets(base_state, mode)
        iface_used: dict[Node, int] = {}
        for (i, j, _q) in w_pairs:
            iface_used[i] = iface_used.get(i, 0) + 1
            iface_used[j] = iface_used.get(j, 0) + 1

        forbidden: list[tuple[tuple[int, Node, Node, int], ...]] = []
        retries = 0
        while True:
            plogical = _best_logical(inst, protected, PROTECTION, pre.lsp_nodes,
                                     iface_used, forbidden)
            if not plogical:
                raise PlanError("II-protection-logical", "no feasible protection routing",
                                retries=retries)
            if integrated:
                phys_nodes = pre.lsp_phys_nodes if mode.plsp_physically_disjoint else {}
                phys_links = pre.lsp_links if mode.plsp_physically_disjoint else {}
                picked = _pick_integrated(inst, plogical, PROTECTION,
                                          (phys_nodes, phys_links,
                                           _wavelength_usage(routes_w.values())))
                if picked is None:
                    raise PlanError("II-protection-logical",
                                    "no routable protection optimum", retries=retries)
                p_routes_logical, p_routes_by_pair = picked
            else:
                _c, _f1, _f2, p_routes_logical = plogical[0]
                p_routes_by_pair = None

            p_pairs = sorted({(i, j, 1) for path in p_routes_logical.values()
                              for (i, j) in _hop_pairs(path)})
            all_lightpaths = expand_lightpaths(w_pairs, p_pairs)
            key_to_id = {lp.key: lp.id for lp in all_lightpaths}
            lsp_plps = {
                k: tuple(key_to_id[(min(a, b), max(a, b), 1, PROTECTION)]
                         for a, b in zip(path, path[1:]))
                for k, path in p_routes_logical.items()}
            carriers: dict[int, list[int]] = {}
            for k, lp_ids in sorted(lsp_plps.items()):
                for lp_id in lp_ids:
                    carriers.setdefault(lp_id, []).append(k)
            carrier_map = {lp: tuple(ks) for lp, ks in carriers.items()}

            if integrated:
                routes_p = {key_to_id[(i, j, q, PROTECTION)]: r
                            for (i, j, q), r in p_routes_by_pair.items()}
                break

            state = WorkingState(
                instance=inst,
                lsp_logical_nodes=w_routes_logical,
                lsp_lightpaths=lsp_working_lps,
                lightpaths={lp.id: lp for lp in all_lightpaths},
                lightpath_routes=routes_w,
                plsp_carriers=carrier_map,
            )
            excl = (compute_exclusion_sets(state, mode)
                    if mode.plsp_physically_disjoint else ExclusionSets())
            if excl.infeasible:
                if retries >= MAX_GROUPING_RETRIES:
                    raise PlanError("II-protection-logical",
                                    "; ".join(excl.infeasible), retries=retries)
                for lp_id, passengers in sorted(carrier_map.items()):
                    lp = all_lightpaths[lp_id]
                    nodes_u = excl.lightpath_nodes.get(lp_id, frozenset())
                    links_u = excl.lightpath_links.get(lp_id, frozenset())
                    if lp.i in nodes_u or lp.j in nodes_u or exclusion_blocks_route(
                            topo, lp.i, lp.j, nodes_u, links_u):
                        forbidden.append(tuple(sorted(
                            (k, lp.i, lp.j, lp.q) for k in passengers)))
                retries += 1
                continue

            p_lightpaths = [lp for lp in all_lightpaths if lp.status == PROTECTION]
            if p_lightpaths:
                routed = _route_entities(
                    topo, [(lp.id, lp.i, lp.j) for lp in p_lightpaths],
                    naming.wlam, _wavelength_usage(routes_w.values()),
                    excl_nodes=excl.lightpath_nodes, excl_links=excl.lightpath_links)
                if routed is None:
                    raise PlanError("III-spare-carrier-lightpaths",
                                    "no feasible physical routing", retries=retries)
                routes_p = routed[0]
            break

    lightpath_routes = dict(routes_w)
    lightpath_routes.update(routes_p)

    # ---- protection lightpaths
    protection_routes: dict[int, tuple[Node, ...]] = {}
    if mode.multilayer:
        if mode is SurvivabilityMode.ML_DOUBLE:
            to_protect = list(all_lightpaths)
        else:
            to_protect = [lp for lp in all_lightpaths if lp.status == WORKING]
        if to_protect:
            excl_nodes = {lp.id: frozenset(lightpath_routes[lp.id][1:-1])
                          for lp in to_protect}
            excl_links = {lp.id: _route_links(lightpath_routes[lp.id])
                          for lp in to_protect}
            if mode is SurvivabilityMode.ML_INTERLAYER_BRS:
                forb = _brs_colocated_forbidden(lightpath_routes, w_routes_logical,
                                                lsp_plps, to_protect)
                for lp_id, links in forb.items():
                    excl_links[lp_id] = excl_links[lp_id] | links
            routed = _route_entities(
                topo, [(lp.id, lp.i, lp.j) for lp in to_protect],
                naming.plam, _wavelength_usage(lightpath_routes.values()),
                excl_nodes=excl_nodes, excl_links=excl_links)
            if routed is None:
                raise PlanError("IV-protection-lightpaths",
                                "no feasible physical routing")
            protection_routes = routed[0]

    lsp_routes = {
        lsp.id: LspRoute(lsp_id=lsp.id, working=lsp_working_lps[lsp.id],
                         protection=lsp_plps.get(lsp.id))
        for lsp in inst.traffic}
    config = assemble_configuration(inst, all_lightpaths, lightpath_routes,
                                    protection_routes, lsp_routes)
    return config.cost.total, config


def _pick_integrated(instance: ProblemInstance,
                     logical: list[tuple[Fraction, int, int, dict[int, tuple[Node, ...]]]],
                     phase: str,
                     protection_ctx) -> tuple[dict[int, tuple[Node, ...]],
                                              dict[tuple[Node, Node, int], tuple[Node, ...]]] | None:
    """Among MPLS-cost-optimal logical routings, pick the one whose joint
    physical placement minimizes (wavelengths, tie1, tie2) — the enumeration
    twin of solving the two-layer model MPLS terms first."""
    topo = instance.topology
    best_key = None
    best_pick = None
    best_cost: Fraction | None = None
    for (cost, f1_log, f2_log, routes_logical) in logical:
        if best_cost is not None and cost > best_cost:
            break
        pairs = sorted({(i, j, 1) for path in routes_logical.values()
                        for (i, j) in _hop_pairs(path)})
        if phase == WORKING:
            name = naming.wlam_integrated
            used: Mapping[Link, int] = {}
            excl_nodes: dict[tuple, frozenset] = {}
            excl_links: dict[tuple, frozenset] = {}
        else:
            phys_nodes, phys_links, used = protection_ctx
            excl_nodes = {}
            excl_links = {}
            carriers: dict[tuple[Node, Node, int], list[int]] = {}
            for k, path in sorted(routes_logical.items()):
                for (a, b) in _hop_pairs(path):
                    carriers.setdefault((a, b, 1), []).append(k)
            for pair, ks in carriers.items():
                nodes_u: frozenset[Node] = frozenset()
                links_u: frozenset[Link] = frozenset()
                for k in ks:
                    nodes_u |= phys_nodes.get(k, frozenset())
                    links_u |= phys_links.get(k, frozenset())
                excl_nodes[pair] = nodes_u
                excl_links[pair] = links_u
            name = naming.plam_integrated

        entities = [(pair, pair[0], pair[1]) for pair in pairs]
        routed = _route_entities(
            topo, entities,
            lambda pair, m, n: name(pair[0], pair[1], pair[2], m, n),
            used, excl_nodes=excl_nodes, excl_links=excl_links)
        if routed is None:
            continue
        routes_by_pair, (hops, f1_r, f2_r) = routed
        key = (hops, f1_log + f1_r, f2_log + f2_r)
        if best_key is None or key < best_key:
            best_key = key
            best_pick = (routes_logical, dict(routes_by_pair))
            best_cost = cost
    return best_pick
