"""Population initialization and the crossover/mutation operators.

The greedy constructor here is also the manual-scheduling baseline: it walks
slots chronologically, staffing each skill up to its minimum requirement with
randomly tie-broken eligible employees, then stretches too-short blocks to the
minimum shift length where demand and hour limits allow. It never staffs a
slot whose aggregate minimum demand is zero and never pushes a skill count
past its ideal level, so greedy schedules always score zero staffing cost.
"""

from __future__ import annotations

import random
from typing import TYPE_CHECKING

from .errors import ValidationError
from .model import SLOTS_PER_DAY, Instance, Schedule

if TYPE_CHECKING:  # pragma: no cover
    from .nsga2 import GaConfig


def random_schedule(instance: Instance, rng: random.Random, p_work: float = 0.7) -> Schedule:
    """One random contiguous block per employee-day with probability ``p_work``.

    Block length is uniform over the allowed shift-length range (in slots) and
    the start slot is uniform over feasible positions, so blocks never leave
    the 0..47 grid.
    """
    cons = instance.constraints
    min_len = max(1, cons.min_shift_slots)
    max_len = max(min_len, min(cons.max_shift_slots, SLOTS_PER_DAY))
    rows = [[set() for _ in range(SLOTS_PER_DAY)] for _ in range(instance.days)]
    for emp in instance.employees:
        for d in range(instance.days):
            if rng.random() >= p_work:
                continue
            length = rng.randint(min_len, max_len)
            start = rng.randint(0, SLOTS_PER_DAY - length)
            for t in range(start, start + length):
                rows[d][t].add(emp.id)
    return Schedule(tuple(tuple(frozenset(s) for s in day) for day in rows))


def greedy_construct(instance: Instance, rng: random.Random) -> Schedule:
    """Demand-driven constructive heuristic emulating manual scheduling.

    Ties between equally eligible employees are broken by ``rng``, which is
    the only source of variance across repeated runs.
    """
    days = instance.days
    employees = instance.employees
    n = len(employees)
    min_req = instance.demand.min_required.tolist()
    ideal = instance.demand.ideal.tolist()
    unavail = [e.unavailability.tolist() for e in employees]
    cons = instance.constraints
    min_len = cons.min_shift_slots
    max_len = cons.max_shift_slots
    max_day_slots = [int(round(e.max_daily_hours * 2)) for e in employees]
    max_week_slots = [int(round(e.max_weekly_hours * 2)) for e in employees]
    skill_members = [[] for _ in range(4)]
    for i, emp in enumerate(employees):
        skill_members[emp.skill.value].append(i)

    agg_positive = [
        [sum(min_req[d][t]) > 0 for t in range(SLOTS_PER_DAY)] for d in range(days)
    ]
    counts = [[[0] * 4 for _ in range(SLOTS_PER_DAY)] for _ in range(days)]
    block: list[list[tuple[int, int] | None]] = [[None] * days for _ in range(n)]
    day_slots = [[0] * days for _ in range(n)]
    week_slots = [0] * n

    def can_take(e: int, d: int, t: int) -> bool:
        if unavail[e][d][t]:
            return False
        if day_slots[e][d] + 1 > max_day_slots[e]:
            return False
        if week_slots[e] + 1 > max_week_slots[e]:
            return False
        return True

    for d in range(days):
        counts_d = counts[d]
        min_d = min_req[d]
        for t in range(SLOTS_PER_DAY):
            cell_min = min_d[t]
            cell_counts = counts_d[t]
            for s in range(4):
                need = cell_min[s] - cell_counts[s]
                while need > 0:
                    # keep whoever is already on shift: extending an open block
                    # beats starting a new one, as a manual scheduler would
                    extenders = []
                    openers = []
                    for e in skill_members[s]:
                        b = block[e][d]
                        if b is not None:
                            if b[1] >= t or b[1] != t - 1:
                                continue  # already counted here, or a gap opened
                            if t - b[0] + 1 > max_len:
                                continue
                            if can_take(e, d, t):
                                extenders.append(e)
                        elif can_take(e, d, t):
                            openers.append(e)
                    candidates = extenders if extenders else openers
                    if not candidates:
                        break  # shortfall remains
                    e = candidates[rng.randrange(len(candidates))]
                    b = block[e][d]
                    block[e][d] = (t, t) if b is None else (b[0], t)
                    day_slots[e][d] += 1
                    week_slots[e] += 1
                    cell_counts[s] += 1
                    need -= 1

        # stretch short blocks to the minimum shift length where demand allows
        for e in range(n):
            b = block[e][d]
            if b is None:
                continue
            s = employees[e].skill.value
            while b[1] - b[0] + 1 < min_len:
                grown = False
                for grow_right in (True, False):
                    nt = b[1] + 1 if grow_right else b[0] - 1
                    if not 0 <= nt < SLOTS_PER_DAY:
                        continue
                    if not agg_positive[d][nt]:
                        continue
                    if counts_d[nt][s] >= ideal[d][nt][s]:
                        continue
                    if not can_take(e, d, nt):
                        continue
                    b = (b[0], nt) if grow_right else (nt, b[1])
                    block[e][d] = b
                    counts_d[nt][s] += 1
                    day_slots[e][d] += 1
                    week_slots[e] += 1
                    grown = True
                    break
                if not grown:
                    break

    rows = [[set() for _ in range(SLOTS_PER_DAY)] for _ in range(days)]
    for e in range(n):
        for d in range(days):
            b = block[e][d]
            if b is None:
                continue
            for t in range(b[0], b[1] + 1):
                rows[d][t].add(employees[e].id)
    return Schedule(tuple(tuple(frozenset(s) for s in day) for day in rows))


def init_population(
    instance: Instance, config: "GaConfig", rng: random.Random
) -> list[Schedule]:
    """Hybrid initialization: half greedy-constructed, half random.

    Each individual gets an independent sub-stream seeded from ``rng`` so the
    population is reproducible regardless of construction order.
    """
    n = config.population_size
    n_greedy = (n + 1) // 2
    seeds = [rng.getrandbits(64) for _ in range(n)]
    population = []
    for i in range(n_greedy):
        population.append(greedy_construct(instance, random.Random(seeds[i])))
    for i in range(n_greedy, n):
        population.append(
            random_schedule(instance, random.Random(seeds[i]), config.random_p_work)
        )
    return population


def _require_same_shape(p1: Schedule, p2: Schedule) -> None:
    if p1.days != p2.days:
        raise ValidationError("crossover parents must cover the same days")


def crossover_day_point(p1: Schedule, p2: Schedule, rng: random.Random) -> Schedule:
    """Child takes days [0, k) from the first parent and [k, D) from the second."""
    _require_same_shape(p1, p2)
    days = p1.days
    if days == 1:
        return p1 if rng.random() < 0.5 else p2
    k = rng.randint(1, days - 1)
    return Schedule(p1.assignments[:k] + p2.assignments[k:])


def crossover_uniform(p1: Schedule, p2: Schedule, rng: random.Random) -> Schedule:
    """Per-slot coin flip chooses which parent contributes the whole slot-set."""
    _require_same_shape(p1, p2)
    rows = []
    for day1, day2 in zip(p1.assignments, p2.assignments):
        rows.append(
            tuple(
                s1 if rng.random() < 0.5 else s2 for s1, s2 in zip(day1, day2)
            )
        )
    return Schedule(tuple(rows))


def crossover_two_point_slot(p1: Schedule, p2: Schedule, rng: random.Random) -> Schedule:
    """Swap the flattened slot segment [a, b) from the second parent into the first."""
    _require_same_shape(p1, p2)
    total = p1.days * SLOTS_PER_DAY
    a = rng.randint(0, total)
    b = rng.randint(0, total)
    if a > b:
        a, b = b, a
    if a == b:
        return p1
    rows = []
    for d, (day1, day2) in enumerate(zip(p1.assignments, p2.assignments)):
        base = d * SLOTS_PER_DAY
        if a <= base and base + SLOTS_PER_DAY <= b:
            rows.append(day2)
        elif b <= base or base + SLOTS_PER_DAY <= a:
            rows.append(day1)
        else:
            rows.append(
                tuple(
                    day2[t] if a <= base + t < b else day1[t]
                    for t in range(SLOTS_PER_DAY)
                )
            )
    return Schedule(tuple(rows))


def _collect_blocks(schedule: Schedule) -> list[tuple[int, str, int, int]]:
    """All (day, employee_id, start, end) blocks, in deterministic order."""
    blocks = []
    for d, day in enumerate(schedule.assignments):
        slots_of: dict[str, list[int]] = {}
        for t, members in enumerate(day):
            for m in members:
                slots_of.setdefault(m, []).append(t)
        for emp_id in sorted(slots_of):
            worked = slots_of[emp_id]
            start = worked[0]
            prev = worked[0]
            for t in worked[1:]:
                if t != prev + 1:
                    blocks.append((d, emp_id, start, prev))
                    start = t
                prev = t
            blocks.append((d, emp_id, start, prev))
    return blocks


def _replace_slot(schedule: Schedule, d: int, t: int, members: frozenset[str]) -> Schedule:
    rows = list(schedule.assignments)
    day = list(rows[d])
    day[t] = members
    rows[d] = tuple(day)
    return Schedule(tuple(rows))


def _move_membership(
    schedule: Schedule, d: int, emp_id: str, old: range, new: range
) -> Schedule:
    rows = list(schedule.assignments)
    day = list(rows[d])
    for t in old:
        day[t] = day[t] - {emp_id}
    for t in new:
        day[t] = day[t] | {emp_id}
    rows[d] = tuple(day)
    return Schedule(tuple(rows))


def _mutate_swap(schedule: Schedule, instance: Instance, rng: random.Random) -> Schedule:
    non_empty = [
        (d, t)
        for d, day in enumerate(schedule.assignments)
        for t, members in enumerate(day)
        if members
    ]
    if not non_empty:
        return schedule
    d, t = non_empty[rng.randrange(len(non_empty))]
    members = schedule.assignments[d][t]
    victim = rng.choice(sorted(members))
    candidates = [
        e.id
        for e in instance.employees
        if e.id not in members and not e.unavailability[d, t]
    ]
    if not candidates:
        return schedule
    replacement = candidates[rng.randrange(len(candidates))]
    return _replace_slot(schedule, d, t, members - {victim} | {replacement})


def _mutate_move(schedule: Schedule, rng: random.Random) -> Schedule:
    blocks = _collect_blocks(schedule)
    if not blocks:
        return schedule
    d, emp_id, start, end = blocks[rng.randrange(len(blocks))]
    length = end - start + 1
    delta = rng.choice((-2, -1, 1, 2))
    new_start = min(max(start + delta, 0), SLOTS_PER_DAY - length)
    if new_start == start:
        return schedule
    return _move_membership(
        schedule, d, emp_id, range(start, end + 1), range(new_start, new_start + length)
    )


def _mutate_length(schedule: Schedule, instance: Instance, rng: random.Random) -> Schedule:
    blocks = _collect_blocks(schedule)
    if not blocks:
        return schedule
    d, emp_id, start, end = blocks[rng.randrange(len(blocks))]
    grow = rng.random() < 0.5
    at_end = rng.random() < 0.5
    if grow:
        new_start, new_end = (start, end + 1) if at_end else (start - 1, end)
    else:
        new_start, new_end = (start, end - 1) if at_end else (start + 1, end)
    if new_start < 0 or new_end >= SLOTS_PER_DAY:
        return schedule
    cons = instance.constraints
    new_len = new_end - new_start + 1
    if not cons.min_shift_slots <= new_len <= cons.max_shift_slots:
        return schedule
    return _move_membership(
        schedule, d, emp_id, range(start, end + 1), range(new_start, new_end + 1)
    )


def mutate(
    schedule: Schedule, instance: Instance, config: "GaConfig", rng: random.Random
) -> Schedule:
    """With probability ``mutation_rate``, apply one of swap/move/length.

    Inapplicable mutations (no target, or a length change leaving the allowed
    shift window) return the input unchanged.
    """
    if rng.random() >= config.mutation_rate:
        return schedule
    op = rng.choice(("swap", "move", "length"))
    if op == "swap":
        return _mutate_swap(schedule, instance, rng)
    if op == "move":
        return _mutate_move(schedule, rng)
    return _mutate_length(schedule, instance, rng)
