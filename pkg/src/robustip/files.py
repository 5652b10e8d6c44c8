"""Stable JSON persistence for instances, Graver bases, and solve results.

All writers emit canonical bytes: sorted keys, two-space indent, trailing
newline, and integers rendered as decimal strings once they pass 2^53 in
magnitude (readers accept both forms everywhere). See FORMATS.md for the
bit-exact schemas.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any

from .core import CostBox, CostList, CostModel, IntMatrix, IntVector, StandardFormSet
from .errors import ValidationError
from .graver import GraverBasis
from .solver import AugmentationTrace

SCHEMA_VERSION = 1
_BIG = 2**53


def _encode(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= _BIG else obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if obj is None or isinstance(obj, str):
        return obj
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def canonical_json(payload: dict) -> str:
    return json.dumps(_encode(payload), sort_keys=True, indent=2) + "\n"


def atomic_write(path: str, text: str) -> None:
    target_dir = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=target_dir, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _as_int(value, path: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{path}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        body = value[1:] if value.startswith("-") else value
        if body.isdigit():
            return int(value)
    raise ValidationError(f"{path}: expected an integer, got {value!r}")


def _as_int_list(value, path: str) -> IntVector:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: expected a list of integers")
    return tuple(_as_int(v, f"{path}[{i}]") for i, v in enumerate(value))


def _as_rows(value, path: str) -> list[IntVector]:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: expected a list of rows")
    return [_as_int_list(row, f"{path}[{i}]") for i, row in enumerate(value)]


def _get(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise ValidationError(f"{path}: expected an object")
    if key not in d:
        raise ValidationError(f"{path}.{key}: missing")
    return d[key]


def _require_keys(d: dict, keys: set[str], path: str) -> None:
    extra = set(d) - keys
    if extra:
        raise ValidationError(f"{path}: unknown keys {sorted(extra)}")


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class InstanceFile:
    """In-memory image of one instance file."""

    feasible_set: StandardFormSet
    cost: CostModel
    known_graver: GraverBasis | None
    feasible_hint: IntVector | None
    provenance: dict | None

    def payload(self) -> dict:
        sfs = self.feasible_set
        cost: dict[str, Any]
        if isinstance(self.cost, CostList):
            cost = {"kind": "list", "vectors": [list(v) for v in self.cost.vectors]}
        else:
            cost = {"kind": "box", "lo": list(self.cost.lo), "hi": list(self.cost.hi)}
        return {
            "schema": SCHEMA_VERSION,
            "set": {
                "A": [list(r) for r in sfs.A.entries],
                "cols": sfs.A.cols,
                "b": list(sfs.b),
                "lower": list(sfs.lower),
                "upper": list(sfs.upper),
            },
            "cost": cost,
            "known_graver": (
                [list(g) for g in self.known_graver.elements]
                if self.known_graver is not None
                else None
            ),
            "feasible_hint": (
                list(self.feasible_hint) if self.feasible_hint is not None else None
            ),
            "provenance": self.provenance,
        }

    def fingerprint(self) -> str:
        return hashlib.sha256(canonical_json(self.payload()).encode()).hexdigest()


def make_instance_file(instance) -> InstanceFile:
    """Adapt any generator output (or an InstanceFile) to an InstanceFile."""
    if isinstance(instance, InstanceFile):
        return instance
    return InstanceFile(
        feasible_set=instance.feasible_set,
        cost=instance.cost,
        known_graver=instance.known_graver,
        feasible_hint=instance.feasible_hint,
        provenance=getattr(instance, "provenance", None),
    )


def parse_instance(payload, *, path: str = "instance") -> InstanceFile:
    schema = _as_int(_get(payload, "schema", path), f"{path}.schema")
    if schema != SCHEMA_VERSION:
        raise ValidationError(f"{path}.schema: unsupported version {schema}")
    raw_set = _get(payload, "set", path)
    cols = _as_int(_get(raw_set, "cols", f"{path}.set"), f"{path}.set.cols")
    rows = _as_rows(_get(raw_set, "A", f"{path}.set"), f"{path}.set.A")
    for i, row in enumerate(rows):
        if len(row) != cols:
            raise ValidationError(
                f"{path}.set.A[{i}]: has {len(row)} entries, expected {cols}"
            )
    A = IntMatrix(tuple(rows), cols)
    sfs = StandardFormSet(
        A=A,
        b=_as_int_list(_get(raw_set, "b", f"{path}.set"), f"{path}.set.b"),
        lower=_as_int_list(_get(raw_set, "lower", f"{path}.set"), f"{path}.set.lower"),
        upper=_as_int_list(_get(raw_set, "upper", f"{path}.set"), f"{path}.set.upper"),
    )
    raw_cost = _get(payload, "cost", path)
    kind = _get(raw_cost, "kind", f"{path}.cost")
    cost: CostModel
    if kind == "list":
        cost = CostList(
            tuple(_as_rows(_get(raw_cost, "vectors", f"{path}.cost"), f"{path}.cost.vectors"))
        )
    elif kind == "box":
        cost = CostBox(
            _as_int_list(_get(raw_cost, "lo", f"{path}.cost"), f"{path}.cost.lo"),
            _as_int_list(_get(raw_cost, "hi", f"{path}.cost"), f"{path}.cost.hi"),
        )
    else:
        raise ValidationError(f"{path}.cost.kind: unknown kind {kind!r}")
    if cost.n != sfs.n:
        raise ValidationError(
            f"{path}.cost: covers {cost.n} variables, set has {sfs.n}"
        )

    raw_known = payload.get("known_graver")
    known = None
    if raw_known is not None:
        elems = _as_rows(raw_known, f"{path}.known_graver")
        known = GraverBasis.from_elements(A, elems)

    raw_hint = payload.get("feasible_hint")
    hint = _as_int_list(raw_hint, f"{path}.feasible_hint") if raw_hint is not None else None
    if hint is not None and len(hint) != sfs.n:
        raise ValidationError(f"{path}.feasible_hint: wrong length {len(hint)}")

    provenance = payload.get("provenance")
    if provenance is not None and not isinstance(provenance, dict):
        raise ValidationError(f"{path}.provenance: expected an object or null")
    return InstanceFile(sfs, cost, known, hint, provenance)


def load_instance(path: str) -> InstanceFile:
    return parse_instance(_read_json(path), path=path)


def save_instance(path: str, instance) -> InstanceFile:
    inst = make_instance_file(instance)
    atomic_write(path, canonical_json(inst.payload()))
    return inst


# ------------------------------------------------------------- graver bases


def graver_payload(basis: GraverBasis) -> dict:
    return {
        "matrix_sha": basis.matrix_sha,
        "n": basis.n,
        "elements": [list(g) for g in basis.elements],
        "negation_closed": True,
    }


def save_graver(path: str, basis: GraverBasis) -> None:
    atomic_write(path, canonical_json(graver_payload(basis)))


def parse_graver(payload, *, path: str = "graver") -> GraverBasis:
    sha = _get(payload, "matrix_sha", path)
    if not isinstance(sha, str):
        raise ValidationError(f"{path}.matrix_sha: expected a string")
    n = _as_int(_get(payload, "n", path), f"{path}.n")
    if n < 0:
        raise ValidationError(f"{path}.n: negative length")
    closed = _get(payload, "negation_closed", path)
    if closed is not True:
        raise ValidationError(f"{path}.negation_closed: must be true")
    elems = _as_rows(_get(payload, "elements", path), f"{path}.elements")
    canon = []
    for i, g in enumerate(elems):
        if len(g) != n:
            raise ValidationError(f"{path}.elements[{i}]: wrong length {len(g)}")
        if all(v == 0 for v in g):
            raise ValidationError(f"{path}.elements[{i}]: zero vector")
        canon.append(g)
    return GraverBasis(matrix_sha=sha, n=n, elements=tuple(sorted(set(canon))))


def load_graver(path: str) -> GraverBasis:
    return parse_graver(_read_json(path), path=path)


def load_matrix_source(path: str) -> IntMatrix:
    """Matrix from either an instance file or a bare {"A": rows, "cols": n} file."""
    payload = _read_json(path)
    if isinstance(payload, dict) and "set" in payload:
        return parse_instance(payload, path=path).feasible_set.A
    cols = _as_int(_get(payload, "cols", path), f"{path}.cols")
    rows = _as_rows(_get(payload, "A", path), f"{path}.A")
    for i, row in enumerate(rows):
        if len(row) != cols:
            raise ValidationError(f"{path}.A[{i}]: has {len(row)} entries, expected {cols}")
    return IntMatrix(tuple(rows), cols)


# ------------------------------------------------------------------ results


@dataclass(frozen=True)
class ResultFile:
    instance_sha: str
    variant: str
    profit: bool
    value: int
    optimizer: IntVector
    witness: IntVector
    method: str
    trace_summary: dict | None
    stats: dict
    wall_time_s: float

    def payload(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "instance_sha": self.instance_sha,
            "variant": self.variant,
            "profit": self.profit,
            "value": self.value,
            "optimizer": list(self.optimizer),
            "witness": list(self.witness),
            "method": self.method,
            "trace": self.trace_summary,
            "stats": dict(self.stats),
            "wall_time_s": self.wall_time_s,
        }


def trace_summary(trace: AugmentationTrace | None) -> dict | None:
    if trace is None:
        return None
    return {
        "steps": len(trace.steps),
        "initial_value": trace.initial_value,
        "reason": trace.reason,
    }


def save_result(path: str, result: ResultFile) -> None:
    atomic_write(path, canonical_json(result.payload()))


def parse_result(payload, *, path: str = "result") -> ResultFile:
    schema = _as_int(_get(payload, "schema", path), f"{path}.schema")
    if schema != SCHEMA_VERSION:
        raise ValidationError(f"{path}.schema: unsupported version {schema}")
    sha = _get(payload, "instance_sha", path)
    variant = _get(payload, "variant", path)
    profit = _get(payload, "profit", path)
    if not isinstance(profit, bool):
        raise ValidationError(f"{path}.profit: expected a boolean")
    method = _get(payload, "method", path)
    raw_trace = payload.get("trace")
    if raw_trace is not None and not isinstance(raw_trace, dict):
        raise ValidationError(f"{path}.trace: expected an object or null")
    stats = payload.get("stats") or {}
    if not isinstance(stats, dict):
        raise ValidationError(f"{path}.stats: expected an object")
    wall = payload.get("wall_time_s", 0.0)
    if isinstance(wall, bool) or not isinstance(wall, (int, float)):
        raise ValidationError(f"{path}.wall_time_s: expected a number")
    return ResultFile(
        instance_sha=str(sha),
        variant=str(variant),
        profit=profit,
        value=_as_int(_get(payload, "value", path), f"{path}.value"),
        optimizer=_as_int_list(_get(payload, "optimizer", path), f"{path}.optimizer"),
        witness=_as_int_list(_get(payload, "witness", path), f"{path}.witness"),
        method=str(method),
        trace_summary=raw_trace,
        stats=stats,
        wall_time_s=float(wall),
    )


def load_result(path: str) -> ResultFile:
    return parse_result(_read_json(path), path=path)
