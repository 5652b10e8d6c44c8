"""Batch command-line surface: gen, graver, solve, verify.

Exit codes are a stable contract:
  0  optimal / all checks passed
  1  parse or validation error (including bad usage)
  2  provably infeasible
  3  inconclusive: a resource cap was hit
  4  verification failure
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import files, instances, robust
from .core import CostBox, CostList, CostModel, IntMatrix
from .errors import (
    DimensionError,
    InfeasibleError,
    ResourceLimitError,
    ToolkitError,
    ValidationError,
)
from .graver import DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_PAIR_OPS, compute_graver, verify_graver

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_INCONCLUSIVE = 3
EXIT_VERIFY_FAILED = 4

CACHE_ENV = "ROBUSTIP_CACHE_DIR"

VARIANTS = ("minmax-box", "maxmin-list", "minmax-list-exact", "maxmin-box-exact")


class _UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse from sys.exit(2)
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="robustip", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=(
        "partition-minmax", "partition-maxmin", "mcf", "transport3", "random"))
    gen.add_argument("--a", help="comma-separated positive integers (partition families)")
    gen.add_argument("--data", help="JSON data file (mcf, transport3)")
    gen.add_argument("--n", type=int, help="variable count (random)")
    gen.add_argument("--rows", type=int, default=1, help="equation count (random)")
    gen.add_argument("--seed", type=int, default=0, help="RNG seed (random)")
    gen.add_argument("--entry-bound", type=int, default=2)
    gen.add_argument("--width", type=int, default=2)
    gen.add_argument("--base-bound", type=int, default=3)
    gen.add_argument("--cost-kind", choices=("box", "list"), default="box")
    gen.add_argument("--list-size", type=int, default=3)
    gen.add_argument("--cost-bound", type=int, default=2)
    gen.add_argument("--cost-width", type=int, default=2)
    gen.add_argument("--point-cap", type=int, default=5000)
    gen.add_argument("--out", required=True)

    grv = sub.add_parser("graver", help="compute and store a Graver basis")
    grv.add_argument("input", help="instance file or bare matrix file")
    grv.add_argument("--out", required=True)
    grv.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    grv.add_argument("--max-pair-ops", type=int, default=DEFAULT_MAX_PAIR_OPS)

    slv = sub.add_parser("solve", help="solve one robust variant")
    slv.add_argument("variant", choices=VARIANTS)
    slv.add_argument("instance")
    slv.add_argument("--graver", help="Graver basis file")
    slv.add_argument("--auto-graver", action="store_true",
                     help="compute the basis if needed, cached next to the instance")
    slv.add_argument("--out", required=True)
    slv.add_argument("--max-steps", type=int, default=1_000_000)
    slv.add_argument("--point-cap", type=int, default=robust.DEFAULT_POINT_CAP)
    slv.add_argument("--volume-cap", type=int, default=robust.DEFAULT_VOLUME_CAP)
    slv.add_argument("--node-cap", type=int, default=10_000_000)
    slv.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    slv.add_argument("--max-pair-ops", type=int, default=DEFAULT_MAX_PAIR_OPS)

    ver = sub.add_parser("verify", help="re-check a result or Graver file")
    ver.add_argument("instance")
    group = ver.add_mutually_exclusive_group(required=True)
    group.add_argument("--result")
    group.add_argument("--graver")
    ver.add_argument("--radius", type=int,
                     help="kernel enumeration radius (default: max basis entry)")
    ver.add_argument("--node-cap", type=int, default=10_000_000)
    ver.add_argument("--out", help="also write the JSON report here")
    return parser


def _parse_a(text: str | None) -> list[int]:
    if not text:
        raise _UsageError("partition families need --a, e.g. --a 1,2,3")
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise _UsageError(f"--a: {exc}") from exc


def _flatten(tensor, dims: int, label: str) -> tuple[int, ...]:
    out: list[int] = []

    def rec(node, depth):
        if depth == 0:
            if isinstance(node, bool) or not isinstance(node, int):
                raise ValidationError(f"{label}: expected integers at depth {dims}")
            out.append(node)
            return
        if not isinstance(node, list):
            raise ValidationError(f"{label}: expected nesting of depth {dims}")
        for item in node:
            rec(item, depth - 1)

    rec(tensor, dims)
    return tuple(out)


def _cost_from_data(raw, label: str) -> CostModel:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ValidationError(f"{label}: expected an object with a 'kind'")
    kind = raw["kind"]
    if kind == "box":
        return CostBox(
            _flatten(raw.get("lo"), 3, f"{label}.lo"),
            _flatten(raw.get("hi"), 3, f"{label}.hi"),
        )
    if kind == "list":
        vectors = raw.get("vectors")
        if not isinstance(vectors, list) or not vectors:
            raise ValidationError(f"{label}.vectors: expected a nonempty list")
        return CostList(tuple(_flatten(v, 3, f"{label}.vectors[{i}]")
                              for i, v in enumerate(vectors)))
    raise ValidationError(f"{label}.kind: unknown kind {kind!r}")


def _load_data(path: str) -> dict:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return payload


def cmd_gen(args) -> int:
    family = args.family
    if family == "partition-minmax":
        instance = instances.gen_partition_minmax(_parse_a(args.a))
    elif family == "partition-maxmin":
        instance = instances.gen_partition_maxmin(_parse_a(args.a))
    elif family == "mcf":
        if not args.data:
            raise _UsageError("gen mcf needs --data FILE")
        data = _load_data(args.data)
        for key in ("supplies", "demands", "capacities", "cost"):
            if key not in data:
                raise ValidationError(f"{args.data}: missing key {key!r}")
        instance = instances.build_mcf(
            data["supplies"], data["demands"], data["capacities"],
            _cost_from_data(data["cost"], f"{args.data}.cost"),
        )
    elif family == "transport3":
        if not args.data:
            raise _UsageError("gen transport3 needs --data FILE")
        data = _load_data(args.data)
        for key in ("u", "v", "w", "cost"):
            if key not in data:
                raise ValidationError(f"{args.data}: missing key {key!r}")
        instance = instances.build_transport3(
            data["u"], data["v"], data["w"],
            _cost_from_data(data["cost"], f"{args.data}.cost"),
        )
    else:
        if args.n is None:
            raise _UsageError("gen random needs --n")
        instance = instances.gen_random(
            args.n, args.rows, args.seed,
            entry_bound=args.entry_bound, width=args.width,
            base_bound=args.base_bound, cost_kind=args.cost_kind,
            list_size=args.list_size, cost_bound=args.cost_bound,
            cost_width=args.cost_width, point_cap=args.point_cap,
        )
    inst = files.save_instance(args.out, instance)
    print(f"wrote {args.out}: {family}, {inst.feasible_set.n} variables, "
          f"{inst.feasible_set.A.rows} equations")
    return EXIT_OK


def cmd_graver(args) -> int:
    A = files.load_matrix_source(args.input)
    basis = compute_graver(
        A, max_elements=args.max_elements, max_pair_ops=args.max_pair_ops
    )
    files.save_graver(args.out, basis)
    print(f"wrote {args.out}: {len(basis)} canonical elements "
          f"({2 * len(basis)} with negations)")
    return EXIT_OK


def _cache_path(instance_path: str, sha: str) -> str:
    cache_dir = os.environ.get(CACHE_ENV) or os.path.dirname(
        os.path.abspath(instance_path)
    )
    os.makedirs(cache_dir, exist_ok=True)
    return os.path.join(cache_dir, f"graver-{sha[:16]}.json")


def _resolve_graver(args, inst: files.InstanceFile, instance_path: str):
    A = inst.feasible_set.A
    if args.graver:
        basis = files.load_graver(args.graver)
        if not basis.matches(A):
            raise ValidationError(
                f"{args.graver}: basis was computed for a different matrix"
            )
        return basis
    if inst.known_graver is not None:
        return inst.known_graver
    if args.auto_graver:
        sha = A.fingerprint()
        path = _cache_path(instance_path, sha)
        if os.path.exists(path):
            cached = files.load_graver(path)
            if cached.matches(A):
                return cached
        basis = compute_graver(
            A, max_elements=args.max_elements, max_pair_ops=args.max_pair_ops
        )
        files.save_graver(path, basis)
        return basis
    raise ValidationError(
        "this variant needs a Graver basis: pass --graver FILE or --auto-graver"
    )


def cmd_solve(args) -> int:
    inst = files.load_instance(args.instance)
    X = inst.feasible_set
    cost = inst.cost
    variant = args.variant
    wants_box = variant in ("minmax-box", "maxmin-box-exact")
    if wants_box and not isinstance(cost, CostBox):
        raise ValidationError(f"{variant} needs a box cost model, instance has a list")
    if not wants_box and not isinstance(cost, CostList):
        raise ValidationError(f"{variant} needs a cost list, instance has a box")

    start = time.perf_counter()
    if variant == "minmax-box":
        basis = _resolve_graver(args, inst, args.instance)
        report = robust.min_max_box(
            X, basis, cost.lo, cost.hi, x0=inst.feasible_hint,
            max_steps=args.max_steps, node_cap=args.node_cap,
        )
    elif variant == "maxmin-list":
        basis = _resolve_graver(args, inst, args.instance)
        report = robust.max_min_list(
            X, basis, cost, x0=inst.feasible_hint,
            max_steps=args.max_steps, node_cap=args.node_cap,
        )
    elif variant == "minmax-list-exact":
        report = robust.min_max_list_exact(
            X, cost, point_cap=args.point_cap, node_cap=args.node_cap
        )
    else:
        basis = _resolve_graver(args, inst, args.instance)
        report = robust.max_min_box_exact(
            X, basis, cost.lo, cost.hi, x0=inst.feasible_hint,
            volume_cap=args.volume_cap, max_steps=args.max_steps,
            node_cap=args.node_cap,
        )
    elapsed = time.perf_counter() - start

    result = files.ResultFile(
        instance_sha=inst.fingerprint(),
        variant=report.variant,
        profit=report.profit,
        value=report.value,
        optimizer=report.optimizer,
        witness=report.witness,
        method=report.method,
        trace_summary=files.trace_summary(report.trace),
        stats=dict(report.stats),
        wall_time_s=round(elapsed, 6),
    )
    files.save_result(args.out, result)
    print(f"{variant}: value {report.value} ({report.method}, {elapsed:.3f}s)")
    print(f"  optimizer {list(report.optimizer)}")
    print(f"  witness   {list(report.witness)}")
    return EXIT_OK


def _verify_graver_file(args, inst: files.InstanceFile) -> tuple[dict, bool]:
    basis = files.load_graver(args.graver)
    A = inst.feasible_set.A
    checks = []
    matches = basis.matches(A)
    checks.append({"name": "matrix_fingerprint", "passed": matches, "detail": ""})
    passed = matches
    if matches:
        radius = args.radius
        if radius is None:
            radius = max(
                (abs(v) for g in basis.elements for v in g), default=1
            )
        outcome = verify_graver(A, basis, radius, node_cap=args.node_cap)
        for name, ok in outcome.summary():
            detail = ""
            if name == "pairwise_incomparability" and not ok:
                h, g = outcome.comparable_pairs[0]
                detail = f"{list(h)} conformally below {list(g)}"
            if name == "conformal_decomposition" and not ok:
                detail = f"no decomposition for {list(outcome.undecomposable[0])}"
            checks.append({"name": name, "passed": ok, "detail": detail})
            passed = passed and ok
        checks.append({
            "name": "points_checked",
            "passed": True,
            "detail": f"{outcome.points_checked} kernel points at radius {radius}",
        })
    return {"mode": "graver", "checks": checks}, passed


def _verify_result_file(args, inst: files.InstanceFile) -> tuple[dict, bool]:
    result = files.load_result(args.result)
    checks = []
    sha_ok = result.instance_sha == inst.fingerprint()
    checks.append({
        "name": "instance_fingerprint",
        "passed": sha_ok,
        "detail": "" if sha_ok else "result was produced from a different instance",
    })
    report = robust.RobustReport(
        variant=result.variant,
        value=result.value,
        optimizer=result.optimizer,
        witness=result.witness,
        method=result.method,
        profit=result.profit,
    )
    outcomes = robust.report_checks(report, inst.feasible_set, inst.cost)
    passed = sha_ok
    for name, ok, detail in outcomes:
        checks.append({"name": name, "passed": ok, "detail": detail})
        passed = passed and ok
    return {"mode": "result", "checks": checks}, passed


def cmd_verify(args) -> int:
    inst = files.load_instance(args.instance)
    if args.graver:
        report, passed = _verify_graver_file(args, inst)
    else:
        report, passed = _verify_result_file(args, inst)
    report["passed"] = passed
    text = files.canonical_json(report)
    sys.stdout.write(text)
    if args.out:
        files.atomic_write(args.out, text)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "graver":
            return cmd_graver(args)
        if args.command == "solve":
            return cmd_solve(args)
        return cmd_verify(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, DimensionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceLimitError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
