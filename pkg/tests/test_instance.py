import json
from fractions import Fraction

import pytest

from otnplan.instance import (bundled_instance_path, config_from_dict,
                              config_to_dict, instance_from_dict, load_instance)
from otnplan.modes import Approach, SurvivabilityMode
from otnplan.planner import PlanError, PlanOptions, plan
from otnplan.netmodel import PhysicalTopology, validate_topology

from conftest import make_instance

EXACT = PlanOptions(gap=0.0, time_limit=120)


class TestInstanceFormat:
    def test_bundled_instance_shape(self):
        data = json.loads(bundled_instance_path().read_text(encoding="utf-8"))
        assert len(data["nodes"]) == 12
        assert len(data["links"]) == 24
        assert len(data["demands"]) == 56
        inst = instance_from_dict(data)
        assert len(inst.traffic) == 126  # some demands split into several LSPs
        assert validate_topology(inst.topology).ok

    def test_custom_cost_ratio_mapping(self):
        data = {
            "nodes": [0, 1, 2], "links": [[0, 1], [1, 2], [0, 2]],
            "params": {"C": 10, "W": 8, "Q": 1, "T": 4},
            "cost_ratio": {"c_TR": 1, "c_P_IP": 8, "c_P_OXC": 0.5},
            "demands": [{"s": 0, "d": 1, "b": 4}],
        }
        inst = instance_from_dict(data)
        assert inst.unit_costs.c_lp == 17
        assert inst.unit_costs.c_tt == Fraction("0.8")

    def test_default_interface_budget_applied(self):
        data = {
            "nodes": [0, 1, 2], "links": [[0, 1], [1, 2], [0, 2]],
            "params": {"C": 10, "W": 8, "Q": 2},
            "demands": [{"s": 0, "d": 1, "b": 4}],
        }
        inst = instance_from_dict(data)
        assert inst.params.T == 2 * 2 * 2


class TestConfigRoundTrip:
    @pytest.mark.parametrize("mode", [SurvivabilityMode.SINGLE_LAYER,
                                      SurvivabilityMode.ML_INTERLAYER_BRS])
    def test_serialisation_reproduces_everything(self, ring4_factory, mode):
        config = plan(ring4_factory(mode), EXACT)
        data = config_to_dict(config, cost_ratio_label="CR1")
        rebuilt = config_from_dict(json.loads(json.dumps(data)))
        assert rebuilt.cost.total == config.cost.total
        assert rebuilt.lightpath_routes == config.lightpath_routes
        assert rebuilt.protection_routes == config.protection_routes
        assert rebuilt.link_total == config.link_total
        assert rebuilt.transit == config.transit
        assert rebuilt.extra_wavelengths == config.extra_wavelengths
        assert [p.name for p in rebuilt.phases] == [p.name for p in config.phases]


class TestPlannerDiagnostics:
    def test_wavelength_shortage_names_links(self):
        topo = PhysicalTopology(range(3), [(0, 1), (1, 2)], W=1)
        inst = make_instance(topo, [(0, 2, 10), (1, 2, 10)])
        with pytest.raises(PlanError) as err:
            plan(inst, EXACT)
        assert err.value.phase == "III-working-lightpaths"
        assert any("link (1,2)" in b for b in err.value.binding)

    def test_unplannable_protection_reports_retries(self):
        # the working routes box LSP 2's protection in; three regrouping
        # retries then an honest infeasibility diagnostic
        topo = PhysicalTopology(range(4), [(0, 1), (0, 2), (2, 3), (1, 3)], W=32)
        inst = make_instance(topo, [(0, 2, 8), (3, 0, 4), (0, 2, 4)],
                             SurvivabilityMode.SINGLE_LAYER)
        with pytest.raises(PlanError) as err:
            plan(inst, EXACT)
        assert err.value.phase == "II-protection-logical"
