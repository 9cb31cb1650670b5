"""Command-line front end: plan, verify, report, gen-topology,
estimate-size, oracle.

Exit codes: 0 success, 1 infeasible plan or failed verification, 2 usage or
instance-schema errors.  The default output directory comes from the
``OTNPLAN_OUT`` environment variable (falling back to the working
directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .formulation import audit_model, estimate_problem_size
from .instance import (bundled_instance_path, config_from_dict, config_to_dict,
                       instance_from_dict, load_instance)
from .milp import check_solution, emit_lp_file, parse_solution_listing, solution_values_by_id
from .modes import APPROACH_CHOICES, MODE_CHOICES, Approach, SurvivabilityMode
from .netmodel import average_connectivity, generate_topology, validate_topology
from .oracle import OracleBoundsError, brute_force_optimum
from .planner import PlanError, PlanOptions, export_phase_models, plan
from .report import emit_report
from .verify import check_disjointness, check_restorability, enumerate_failures

__all__ = ["RunRequest", "run_cli", "main"]


@dataclass
class RunRequest:
    """A fully resolved ``plan`` invocation."""

    instance: str
    mode: str = "none"
    approach: str = "sequential"
    cost_ratio: str | None = None
    gap: float = 0.03
    time_limit: float = 300.0
    seed: int | None = None
    output_dir: str | None = None
    emit_lp: bool = False
    solution_in: str | None = None
    verify: bool = False
    report_format: str = "table"


def _out_dir(explicit: str | None) -> Path:
    path = Path(explicit or os.environ.get("OTNPLAN_OUT", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(request: RunRequest):
    cost_ratio = None
    if request.cost_ratio:
        text = request.cost_ratio
        cost_ratio = json.loads(text) if text.strip().startswith("{") else text
    return load_instance(request.instance, SurvivabilityMode(request.mode),
                         Approach(request.approach), cost_ratio)


def run_cli(request: RunRequest) -> int:
    """Execute a plan request; returns the process exit code."""
    try:
        inst = _load(request)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load instance: {exc}", file=sys.stderr)
        return 2

    out = _out_dir(request.output_dir)
    if request.emit_lp:
        models = export_phase_models(inst)
        written = []
        for name, model in models.items():
            path = out / f"{Path(request.instance).stem}.{request.mode}.{name}.lp"
            path.write_text(emit_lp_file(model), encoding="utf-8")
            written.append(path)
            print(audit_model(model), end="")
        for path in written:
            print(f"wrote {path}")
        if request.solution_in:
            model = next(iter(models.values()))
            try:
                listing = parse_solution_listing(
                    Path(request.solution_in).read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                print(f"error: cannot read solution listing: {exc}", file=sys.stderr)
                return 2
            values = solution_values_by_id(model, listing)
            problems = check_solution(model, values)
            if problems:
                print(f"external solution INVALID ({len(problems)} violations):")
                for p in problems[:20]:
                    print(f"  {p}")
                return 1
            obj = model.evaluate_objective(values)
            print(f"external solution valid; objective {obj}")
        return 0

    options = PlanOptions(gap=request.gap, time_limit=request.time_limit)
    try:
        config = plan(inst, options)
    except PlanError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1

    stem = f"{Path(request.instance).stem}.{request.mode}.{request.approach}"
    config_path = out / f"{stem}.config.json"
    config_path.write_text(
        json.dumps(config_to_dict(config), indent=1) + "\n", encoding="utf-8")
    report_text = emit_report([(request.mode, config)], fmt=request.report_format)
    ext = {"table": "txt", "csv": "csv", "json": "json"}[request.report_format]
    report_path = out / f"{stem}.report.{ext}"
    report_path.write_text(report_text, encoding="utf-8")
    print(report_text, end="")
    print(f"wrote {config_path}")
    print(f"wrote {report_path}")

    if request.verify:
        scenarios = enumerate_failures(config)
        rest = check_restorability(config, scenarios)
        violations = check_disjointness(config)
        verify_path = out / f"{stem}.verify.txt"
        text = rest.render()
        if violations:
            text += "disjointness violations:\n" + "\n".join(
                f"  {v}" for v in violations) + "\n"
        verify_path.write_text(text, encoding="utf-8")
        print(f"wrote {verify_path}")
        if not rest.fully_restorable or violations:
            print("verification FAILED", file=sys.stderr)
            return 1
        print("verification passed: 100% restorability, no violations")
    return 0


def _cmd_plan(args) -> int:
    return run_cli(RunRequest(
        instance=args.instance, mode=args.mode, approach=args.approach,
        cost_ratio=args.cost_ratio, gap=args.gap, time_limit=args.time_limit,
        seed=args.seed, output_dir=args.output_dir, emit_lp=args.emit_lp,
        solution_in=args.solution_in, verify=args.verify,
        report_format=args.report_format))


def _cmd_verify(args) -> int:
    try:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        config = config_from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load configuration: {exc}", file=sys.stderr)
        return 2
    stale = []
    stored = data.get("cost", {}).get("total")
    if stored is not None and str(_recompute_total(config)) != str(stored):
        stale.append(f"stored total cost {stored} != recomputed "
                     f"{_recompute_total(config)}")
    rest = check_restorability(config, enumerate_failures(config))
    violations = check_disjointness(config)
    text = rest.render()
    if violations:
        text += "disjointness violations:\n" + "\n".join(f"  {v}" for v in violations) + "\n"
    if stale:
        text += "consistency:\n" + "\n".join(f"  {s}" for s in stale) + "\n"
    print(text, end="")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    return 0 if rest.fully_restorable and not violations and not stale else 1


def _recompute_total(config):
    from .instance import _num
    return _num(config.cost.total)


def _cmd_report(args) -> int:
    configs = []
    try:
        for path in args.configs:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            config = config_from_dict(data)
            configs.append((args.labels.pop(0) if args.labels else data["mode"], config))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load configuration: {exc}", file=sys.stderr)
        return 2
    try:
        print(emit_report(configs, fmt=args.format, diff_base=args.diff), end="")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_gen_topology(args) -> int:
    try:
        topo = generate_topology(args.nodes, args.connectivity, args.seed,
                                 W=args.wavelengths)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = validate_topology(topo)
    skeleton = {
        "nodes": list(topo.nodes),
        "links": [list(l) for l in topo.links],
        "params": {"C": 10, "W": topo.W, "Q": 2, "T": 4 * (topo.n - 1)},
        "cost_ratio": "CR1",
        "demands": [],
    }
    text = json.dumps(skeleton, indent=1) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output} (bi-connected: {report.ok}, "
              f"average connectivity {float(average_connectivity(topo))})")
    else:
        print(text, end="")
    return 0


def _cmd_estimate_size(args) -> int:
    try:
        inst = load_instance(args.instance)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load instance: {exc}", file=sys.stderr)
        return 2
    for approach in (Approach.SEQUENTIAL, Approach.INTEGRATED):
        print(f"{approach.value}: ~{estimate_problem_size(inst, approach)} variables")
    return 0


def _cmd_oracle(args) -> int:
    try:
        inst = load_instance(args.instance, SurvivabilityMode(args.mode),
                             Approach(args.approach))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load instance: {exc}", file=sys.stderr)
        return 2
    try:
        cost, config = brute_force_optimum(inst)
    except OracleBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PlanError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    counts = config.counts()
    print(f"optimal cost: {float(cost)}")
    print(f"lightpaths: {counts.lightpaths} "
          f"({config.protection_carrying_lightpaths()} carrying protection LSPs)")
    print(f"wavelengths: {counts.wavelengths}")
    print(f"transit: {float(counts.transit_gbps)} Gbps")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otnplan",
        description="Design minimum-cost survivable packet-over-optical networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run a survivability pipeline on an instance")
    p.add_argument("--instance", default=str(bundled_instance_path()),
                   help="instance JSON (default: bundled 12-node example)")
    p.add_argument("--mode", choices=MODE_CHOICES, default="none")
    p.add_argument("--approach", choices=APPROACH_CHOICES, default="sequential")
    p.add_argument("--cost-ratio", default=None,
                   help="cr1|cr2|cr3 or a JSON object with c_TR/c_P_IP/c_P_OXC")
    p.add_argument("--gap", type=float, default=0.03)
    p.add_argument("--time-limit", type=float, default=300.0,
                   help="seconds per optimization phase")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--emit-lp", action="store_true",
                   help="write LP-format phase models and skip solving")
    p.add_argument("--solution-in", default=None,
                   help="validate an external 'name value' solution listing "
                        "against the exported model (requires --emit-lp)")
    p.add_argument("--verify", action="store_true",
                   help="run failure simulation on the result")
    p.add_argument("--report-format", choices=("table", "csv", "json"),
                   default="table")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("verify", help="re-verify a configuration file")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", default=None,
                   help="also write the per-scenario report to this file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="side-by-side comparison of configurations")
    p.add_argument("configs", nargs="+")
    p.add_argument("--labels", nargs="*", default=[])
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--diff", default=None,
                   help="add a relative total-cost row against this column label")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("gen-topology", help="generate a random bi-connected topology")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--connectivity", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wavelengths", type=int, default=32)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen_topology)

    p = sub.add_parser("estimate-size", help="closed-form problem-size estimates")
    p.add_argument("--instance", default=str(bundled_instance_path()))
    p.set_defaults(func=_cmd_estimate_size)

    p = sub.add_parser("oracle", help="brute-force optimum for tiny instances")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=MODE_CHOICES, default="none")
    p.add_argument("--approach", choices=APPROACH_CHOICES, default="sequential")
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plan" and args.solution_in and not args.emit_lp:
        print("error: --solution-in requires --emit-lp", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
