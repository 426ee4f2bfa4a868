"""Canonical text documents for instances and schedules.

Encoding is canonical JSON (sorted keys, two-space indent, sorted id arrays,
trailing newline) so equal values produce byte-identical documents. Decoding
is strict: schema problems raise :class:`DecodeError` naming the offending
path, domain invariant violations raise :class:`ValidationError`.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DecodeError, ValidationError
from .model import (
    N_SKILLS,
    SLOTS_PER_DAY,
    ConstraintParams,
    DemandGrid,
    Employee,
    Instance,
    PenaltyWeights,
    Schedule,
    Skill,
)


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _parse(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"$: invalid JSON: {exc}") from None


def _as_dict(value: Any, path: str, keys: set[str]) -> dict:
    if not isinstance(value, dict):
        raise DecodeError(f"{path}: expected an object, got {type(value).__name__}")
    unknown = set(value) - keys
    if unknown:
        raise DecodeError(f"{path}: unknown keys {sorted(unknown)}")
    missing = keys - set(value)
    if missing:
        raise DecodeError(f"{path}: missing keys {sorted(missing)}")
    return value


def _as_list(value: Any, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise DecodeError(f"{path}: expected an array, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise DecodeError(f"{path}: expected {length} items, got {len(value)}")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise DecodeError(f"{path}: expected a string, got {type(value).__name__}")
    return value


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DecodeError(f"{path}: expected an integer, got {value!r}")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DecodeError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise DecodeError(f"{path}: expected a boolean, got {value!r}")
    return value


def _as_bit(value: Any, path: str) -> int:
    if isinstance(value, bool) or value not in (0, 1):
        raise DecodeError(f"{path}: expected 0 or 1, got {value!r}")
    return value


_EMPLOYEE_KEYS = {
    "id",
    "skill",
    "is_manager",
    "unavailability",
    "max_daily_hours",
    "max_weekly_hours",
    "contracted_weekly_hours",
}
_INSTANCE_KEYS = {"unit_id", "days", "employees", "demand", "constraints", "weights"}
_CONSTRAINT_KEYS = {"min_shift_hours", "max_shift_hours", "min_rest_hours", "slot_minutes"}
_WEIGHT_KEYS = set(PenaltyWeights().as_dict())
_SCHEDULE_KEYS = {"unit_id", "days"}


def employee_to_doc(emp: Employee) -> dict:
    return {
        "id": emp.id,
        "skill": emp.skill.name,
        "is_manager": emp.is_manager,
        "unavailability": [[int(v) for v in day] for day in emp.unavailability],
        "max_daily_hours": float(emp.max_daily_hours),
        "max_weekly_hours": float(emp.max_weekly_hours),
        "contracted_weekly_hours": float(emp.contracted_weekly_hours),
    }


def instance_to_doc(instance: Instance) -> dict:
    return {
        "unit_id": instance.unit_id,
        "days": instance.days,
        "employees": [employee_to_doc(e) for e in instance.employees],
        "demand": {
            "min": instance.demand.min_required.tolist(),
            "ideal": instance.demand.ideal.tolist(),
        },
        "constraints": {
            "min_shift_hours": float(instance.constraints.min_shift_hours),
            "max_shift_hours": float(instance.constraints.max_shift_hours),
            "min_rest_hours": float(instance.constraints.min_rest_hours),
            "slot_minutes": instance.constraints.slot_minutes,
        },
        "weights": instance.weights.as_dict(),
    }


def _decode_skill(value: Any, path: str) -> Skill:
    name = _as_str(value, path)
    try:
        return Skill[name]
    except KeyError:
        raise DecodeError(f"{path}: unknown skill {name!r}") from None


def _decode_grid_bits(value: Any, path: str) -> list[list[int]]:
    days = _as_list(value, path)
    grid = []
    for d, row in enumerate(days):
        row = _as_list(row, f"{path}[{d}]", SLOTS_PER_DAY)
        grid.append([_as_bit(v, f"{path}[{d}][{t}]") for t, v in enumerate(row)])
    return grid


def _decode_demand(value: Any, path: str, days: int) -> list[list[list[int]]]:
    outer = _as_list(value, path, days)
    grid = []
    for d, day in enumerate(outer):
        day = _as_list(day, f"{path}[{d}]", SLOTS_PER_DAY)
        slots = []
        for t, cell in enumerate(day):
            cell = _as_list(cell, f"{path}[{d}][{t}]", N_SKILLS)
            slots.append([_as_int(v, f"{path}[{d}][{t}][{s}]") for s, v in enumerate(cell)])
        grid.append(slots)
    return grid


def doc_to_employee(doc: Any, path: str) -> Employee:
    doc = _as_dict(doc, path, _EMPLOYEE_KEYS)
    return Employee(
        id=_as_str(doc["id"], f"{path}.id"),
        skill=_decode_skill(doc["skill"], f"{path}.skill"),
        is_manager=_as_bool(doc["is_manager"], f"{path}.is_manager"),
        unavailability=_decode_grid_bits(doc["unavailability"], f"{path}.unavailability"),
        max_daily_hours=_as_number(doc["max_daily_hours"], f"{path}.max_daily_hours"),
        max_weekly_hours=_as_number(doc["max_weekly_hours"], f"{path}.max_weekly_hours"),
        contracted_weekly_hours=_as_number(
            doc["contracted_weekly_hours"], f"{path}.contracted_weekly_hours"
        ),
    )


def doc_to_instance(doc: Any) -> Instance:
    doc = _as_dict(doc, "$", _INSTANCE_KEYS)
    days = _as_int(doc["days"], "$.days")
    employees = _as_list(doc["employees"], "$.employees")
    demand_doc = _as_dict(doc["demand"], "$.demand", {"min", "ideal"})
    constraints_doc = _as_dict(doc["constraints"], "$.constraints", _CONSTRAINT_KEYS)
    weights_doc = _as_dict(doc["weights"], "$.weights", _WEIGHT_KEYS)
    demand = DemandGrid(
        min_required=_decode_demand(demand_doc["min"], "$.demand.min", days),
        ideal=_decode_demand(demand_doc["ideal"], "$.demand.ideal", days),
    )
    constraints = ConstraintParams(
        min_shift_hours=_as_number(
            constraints_doc["min_shift_hours"], "$.constraints.min_shift_hours"
        ),
        max_shift_hours=_as_number(
            constraints_doc["max_shift_hours"], "$.constraints.max_shift_hours"
        ),
        min_rest_hours=_as_number(
            constraints_doc["min_rest_hours"], "$.constraints.min_rest_hours"
        ),
        slot_minutes=_as_int(constraints_doc["slot_minutes"], "$.constraints.slot_minutes"),
    )
    weights = PenaltyWeights(
        **{k: _as_number(v, f"$.weights.{k}") for k, v in weights_doc.items()}
    )
    return Instance(
        unit_id=_as_str(doc["unit_id"], "$.unit_id"),
        days=days,
        employees=tuple(
            doc_to_employee(e, f"$.employees[{i}]") for i, e in enumerate(employees)
        ),
        demand=demand,
        constraints=constraints,
        weights=weights,
    )


def schedule_to_doc(schedule: Schedule, instance: Instance) -> dict:
    return {
        "unit_id": instance.unit_id,
        "days": [[sorted(slot) for slot in day] for day in schedule.assignments],
    }


def doc_to_schedule(doc: Any, instance: Instance) -> Schedule:
    doc = _as_dict(doc, "$", _SCHEDULE_KEYS)
    unit_id = _as_str(doc["unit_id"], "$.unit_id")
    if unit_id != instance.unit_id:
        raise ValidationError(
            f"schedule is for unit {unit_id!r}, instance is {instance.unit_id!r}"
        )
    days = _as_list(doc["days"], "$.days")
    assignments = []
    for d, day in enumerate(days):
        day = _as_list(day, f"$.days[{d}]", SLOTS_PER_DAY)
        slots = []
        for t, members in enumerate(day):
            members = _as_list(members, f"$.days[{d}][{t}]")
            ids = [_as_str(m, f"$.days[{d}][{t}][{i}]") for i, m in enumerate(members)]
            if len(set(ids)) != len(ids):
                raise DecodeError(f"$.days[{d}][{t}]: duplicate employee ids")
            slots.append(frozenset(ids))
        assignments.append(tuple(slots))
    schedule = Schedule(tuple(assignments))
    schedule.validate_for(instance)
    return schedule


def encode_instance(instance: Instance) -> str:
    """Serialize an instance to its canonical document."""
    return canonical_json(instance_to_doc(instance))


def decode_instance(text: str) -> Instance:
    """Parse and validate a canonical instance document."""
    return doc_to_instance(_parse(text))


def encode_schedule(schedule: Schedule, instance: Instance) -> str:
    """Serialize a schedule to its canonical document (sorted id arrays)."""
    return canonical_json(schedule_to_doc(schedule, instance))


def decode_schedule(text: str, instance: Instance) -> Schedule:
    """Parse a schedule document and validate it against its instance."""
    return doc_to_schedule(_parse(text), instance)
