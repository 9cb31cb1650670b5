from fractions import Fraction

import pytest

from otnplan.formulation import (PROTECTION, WORKING, ProblemInstance,
                                 ProtectionContext, WorkingState, audit_model,
                                 build_integrated, build_lightpath_routing,
                                 build_logical_design, compute_exclusion_sets,
                                 estimate_problem_size, estimate_problem_size_raw,
                                 expand_lightpaths)
from otnplan.milp import check_solution, solve_milp
from otnplan.modes import Approach, SurvivabilityMode
from otnplan.netmodel import (PhysicalTopology, SystemParams, generate_topology,
                              split_demands)
from otnplan.planner import PlanOptions, plan

from conftest import UNIT_CR1, make_instance


class TestVariableCounts:
    def test_lsp_routing_variables_exact(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10), (1, 3, 4), (0, 1, 2)], q=1)
        _model, varmap = build_logical_design(inst, WORKING)
        n, k, q = 4, 3, 1
        assert len(varmap.wdelta) == q * n * (n - 1) * k
        assert len(varmap.wbeta) == q * n * (n - 1) // 2

    def test_estimate_within_factor_two_of_builder(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10), (1, 3, 4)], q=1)
        _m, varmap = build_logical_design(inst, WORKING)
        est = estimate_problem_size(inst, Approach.SEQUENTIAL)
        ratio = varmap.lsp_routing_count() / est
        assert 0.5 <= ratio <= 2.0
        _m2, varmap2 = build_integrated(inst, WORKING)
        est2 = estimate_problem_size(inst, Approach.INTEGRATED)
        routing = varmap2.lsp_routing_count() + varmap2.lightpath_routing_count()
        assert 0.5 <= routing / est2 <= 2.0

    def test_paper_size_estimates(self):
        assert estimate_problem_size_raw(12, 126, 2, Approach.SEQUENTIAL) == 18144
        assert estimate_problem_size_raw(12, 126, 2, Approach.INTEGRATED, 24) == 25056
        diff = (estimate_problem_size_raw(12, 126, 2, Approach.INTEGRATED, 24)
                - estimate_problem_size_raw(12, 126, 2, Approach.SEQUENTIAL))
        assert diff == 2 * 24 * 144  # q·E·N²


class TestLogicalDesign:
    def test_two_six_gig_lsps_need_two_lightpaths(self, ring4):
        # 6 + 6 exceeds one lightpath's capacity, so the capacity family binds
        inst = make_instance(ring4, [(0, 2, 6), (0, 2, 6)], q=2)
        model, varmap = build_logical_design(inst, WORKING)
        sol = solve_milp(model, gap=0.0)
        assert sol.status == "optimal"
        opened = sum(1 for vid in varmap.wbeta.values() if sol.value(vid) > 0.5)
        assert opened >= 2

    def test_interface_budget_binds(self):
        topo = PhysicalTopology(range(3), [(0, 1), (1, 2), (0, 2)])
        params = SystemParams(C=10, W=32, Q=1, T=1)
        traffic = split_demands([(0, 1, 10), (0, 2, 10)], 10)
        inst = ProblemInstance(topo, traffic, params, UNIT_CR1)
        model, _ = build_logical_design(inst, WORKING)
        sol = solve_milp(model, gap=0.0)
        assert sol.status == "infeasible"

    def test_oversized_demand_rejected(self, ring4):
        from otnplan.netmodel import LspDemand
        params = SystemParams(C=10, W=32, Q=1, n_nodes=4)
        with pytest.raises(ValueError, match="pre-split"):
            ProblemInstance(ring4, (LspDemand(0, 0, 2, Fraction(12)),), params,
                            UNIT_CR1)

    def test_audit_lists_families(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10)], q=1)
        model, _ = build_logical_design(inst, WORKING)
        text = audit_model(model)
        for family in ("eq7", "eq9", "eq12"):
            assert family in text

    def test_protection_families_nonempty(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10)], SurvivabilityMode.SINGLE_LAYER, q=1)
        ctx = ProtectionContext(protected=inst.traffic, interface_usage={},
                                excluded_nodes={0: frozenset()})
        model, _ = build_logical_design(inst, PROTECTION, ctx)
        text = audit_model(model)
        for family in ("eq7", "eq10", "eq11", "eq13"):
            assert family in text

    def test_routed_solution_traces_single_path(self, ring4):
        # every routed LSP's arc variables form one s->d path
        inst = make_instance(ring4, [(0, 2, 10), (1, 3, 6)], q=1)
        model, varmap = build_logical_design(inst, WORKING)
        sol = solve_milp(model, gap=0.0)
        for lsp in inst.traffic:
            arcs = [(i, j) for (k, i, j, _q), vid in varmap.wdelta.items()
                    if k == lsp.id and sol.value(vid) > 0.5]
            succ = dict(arcs)
            assert len(succ) == len(arcs), "node visited twice"
            cur = lsp.source
            seen = 0
            while cur != lsp.destination:
                cur = succ[cur]
                seen += 1
                assert seen <= 4
            assert seen == len(arcs)

    def test_capacity_respected_in_incumbent(self, ring4):
        inst = make_instance(ring4, [(0, 2, 6), (0, 2, 6), (1, 3, 9)], q=2)
        model, varmap = build_logical_design(inst, WORKING)
        sol = solve_milp(model, gap=0.0)
        assert not check_solution(model, sol.values)
        for (i, j, q), beta_vid in varmap.wbeta.items():
            load = sum(float(lsp.bandwidth) * (
                sol.value(varmap.wdelta[(lsp.id, i, j, q)])
                + sol.value(varmap.wdelta[(lsp.id, j, i, q)]))
                for lsp in inst.traffic)
            assert load <= 10 * sol.value(beta_vid) + 1e-6


class TestLightpathRouting:
    def test_ring_two_hops(self, ring4):
        lps = expand_lightpaths([(0, 2, 1)])
        model, varmap = build_lightpath_routing(lps, ring4, UNIT_CR1)
        sol = solve_milp(model, gap=0.0)
        used = sum(1 for vid in varmap.wlam.values() if sol.value(vid) > 0.5)
        assert used == 2

    def test_protection_takes_opposite_side(self, ring4):
        from otnplan.formulation import ExclusionSets
        lps = expand_lightpaths([(0, 2, 1)])
        excl = ExclusionSets(lightpath_nodes={0: frozenset({1})})
        model, varmap = build_lightpath_routing(
            lps, ring4, UNIT_CR1, protection=True, exclusions=excl,
            working_links={0: frozenset({(0, 1), (1, 2)})})
        sol = solve_milp(model, gap=0.0)
        active = {(m, n) for (lp, m, n), vid in varmap.plam.items()
                  if sol.value(vid) > 0.5}
        assert active == {(0, 3), (3, 2)}

    def test_wavelength_budget_infeasible_names_binding_link(self):
        from otnplan.formulation import diagnose_lightpath_infeasibility
        topo = PhysicalTopology(range(3), [(0, 1), (1, 2)], W=1)
        lps = expand_lightpaths([(0, 2, 1), (1, 2, 1)])
        model, _ = build_lightpath_routing(lps, topo, UNIT_CR1)
        sol = solve_milp(model, gap=0.0)
        assert sol.status == "infeasible"
        binding = diagnose_lightpath_infeasibility(lps, topo, UNIT_CR1)
        assert any("link (1,2)" in b for b in binding)


class TestIntegrated:
    def test_couples_routing_to_existence(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10)], q=1,
                             approach=Approach.INTEGRATED)
        model, varmap = build_integrated(inst, WORKING)
        sol = solve_milp(model, gap=0.0)
        assert sol.status == "optimal"
        # any pair with physical flow must be an opened lightpath
        for (i, j, q, m, n), vid in varmap.wlam_int.items():
            if sol.value(vid) > 0.5:
                assert sol.value(varmap.wbeta[(i, j, q)]) > 0.5
        text = audit_model(model)
        assert "eq18" in text and "eq20" in text

    def test_integrated_never_uses_more_wavelengths(self, small_suite):
        options = PlanOptions(gap=0.0, time_limit=120)
        for topo, demands in small_suite[:6]:
            seq = plan(make_instance(topo, demands, SurvivabilityMode.NONE,
                                     Approach.SEQUENTIAL), options)
            joint = plan(make_instance(topo, demands, SurvivabilityMode.NONE,
                                       Approach.INTEGRATED), options)
            assert joint.counts().wavelengths <= seq.counts().wavelengths


class TestExclusionSets:
    def _sl_state(self, ring4):
        # wLSP 0 routed logically 0 -> 1 -> 2 over single-hop lightpaths
        inst = make_instance(ring4, [(0, 2, 10)], SurvivabilityMode.SINGLE_LAYER, q=1)
        lps = expand_lightpaths([(0, 1, 1), (1, 2, 1)])
        return inst, WorkingState(
            instance=inst,
            lsp_logical_nodes={0: (0, 1, 2)},
            lsp_lightpaths={0: (0, 1)},
            lightpaths={lp.id: lp for lp in lps},
            lightpath_routes={0: (0, 1), 1: (1, 2)},
        )

    def test_single_layer_logical_transit_excluded(self, ring4):
        inst, state = self._sl_state(ring4)
        excl = compute_exclusion_sets(state, SurvivabilityMode.SINGLE_LAYER)
        assert {1} <= set(excl.lsp_nodes[0])

    def test_protection_lightpath_excludes_transit(self, ring4):
        # working lightpath 0->2 physically routed 0-1-2: its optical backup
        # must avoid node 1
        inst = make_instance(ring4, [(0, 2, 10)],
                             SurvivabilityMode.ML_SPARE_UNPROTECTED, q=1)
        lps = expand_lightpaths([(0, 2, 1)])
        state = WorkingState(
            instance=inst,
            lsp_logical_nodes={0: (0, 2)},
            lsp_lightpaths={0: (0,)},
            lightpaths={lp.id: lp for lp in lps},
            lightpath_routes={0: (0, 1, 2)},
        )
        excl = compute_exclusion_sets(state, SurvivabilityMode.ML_SPARE_UNPROTECTED)
        assert excl.lightpath_nodes[0] == frozenset({1})

    def test_single_hop_lsps_not_protected_in_ml(self, ring4):
        inst = make_instance(ring4, [(0, 2, 10)],
                             SurvivabilityMode.ML_INTERLAYER_BRS, q=1)
        config = plan(inst, PlanOptions(gap=0.0, time_limit=60))
        assert config.lsp_routes[0].protection is None

    def test_spare_carrier_union_and_conflict_detection(self, ring4):
        inst, state = self._sl_state(ring4)
        # pLSP rides one spare carrier 0->2; working internals are {1}
        lps = expand_lightpaths([(0, 1, 1), (1, 2, 1)], [(0, 2, 1)])
        state.lightpaths = {lp.id: lp for lp in lps}
        state.plsp_carriers = {2: (0,)}
        excl = compute_exclusion_sets(state, SurvivabilityMode.SINGLE_LAYER)
        assert excl.lightpath_nodes[2] == frozenset({1})
        assert excl.lightpath_links[2] == frozenset({(0, 1), (1, 2)})
        assert not excl.infeasible  # ring offers the 0-3-2 side

    def test_extracted_protection_avoids_exclusions(self, suite_results):
        # decoded protection routes never touch their exclusion sets
        for (idx, mode), (config, _cost, _oc) in suite_results.items():
            if mode is SurvivabilityMode.NONE:
                continue
            for lsp in config.instance.traffic:
                route = config.lsp_routes[lsp.id]
                if route.protection is None:
                    continue
                w_transit = set(config.lsp_logical_nodes(lsp.id, "working")[1:-1])
                p_nodes = set(config.lsp_logical_nodes(lsp.id, "protection"))
                assert not (w_transit & p_nodes)
