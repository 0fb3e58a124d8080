"""A small complete SAT solver: unit-propagating backtracking search with
deterministic branching (lowest-index unassigned variable, false first)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceBudgetError


@dataclass
class SatStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    calls: int = 0


@dataclass
class SatResult:
    status: str  # "sat" | "unsat"
    model: dict[int, bool] | None = None
    stats: SatStats = field(default_factory=SatStats)

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"


def _check_model(clauses: list[list[int]], model: dict[int, bool]) -> bool:
    return all(any(model.get(abs(l), False) == (l > 0) for l in c)
               for c in clauses)


def sat_solve(clauses: list[list[int]], num_vars: int | None = None,
              stats: SatStats | None = None,
              conflict_cap: int | None = None) -> SatResult:
    """Complete decision procedure; returned models are re-checked against
    every input clause."""
    stats = stats if stats is not None else SatStats()
    stats.calls += 1
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    if any(not c for c in clauses):
        return SatResult("unsat", stats=stats)

    assignment: dict[int, bool] = {}
    trail: list[int] = []
    # watch by variable: clause indexes mentioning it
    occurs: dict[int, list[int]] = {}
    for idx, c in enumerate(clauses):
        for l in c:
            occurs.setdefault(abs(l), []).append(idx)

    def clause_state(idx: int) -> tuple[str, int]:
        """-> ("sat"|"conflict"|"unit"|"open", unit literal or 0)."""
        unassigned = 0
        count = 0
        for l in clauses[idx]:
            val = assignment.get(abs(l))
            if val is None:
                unassigned = l
                count += 1
                if count > 1:
                    return "open", 0
            elif val == (l > 0):
                return "sat", 0
        if count == 1:
            return "unit", unassigned
        return "conflict", 0

    def assign(lit: int) -> bool:
        """Assign and propagate; False on conflict (trail not rewound)."""
        queue = [lit]
        while queue:
            l = queue.pop()
            var, val = abs(l), l > 0
            cur = assignment.get(var)
            if cur is not None:
                if cur != val:
                    return False
                continue
            assignment[var] = val
            trail.append(var)
            for idx in occurs.get(var, ()):
                state, unit = clause_state(idx)
                if state == "conflict":
                    return False
                if state == "unit":
                    stats.propagations += 1
                    queue.append(unit)
        return True

    def search() -> bool:
        var = next((v for v in range(1, num_vars + 1) if v not in assignment),
                   None)
        if var is None:
            return True
        for val in (False, True):
            stats.decisions += 1
            mark = len(trail)
            if assign(var if val else -var) and search():
                return True
            while len(trail) > mark:
                del assignment[trail.pop()]
            stats.conflicts += 1
            if conflict_cap is not None and stats.conflicts > conflict_cap:
                raise ResourceBudgetError(
                    f"SAT conflict cap {conflict_cap} exceeded")
        return False

    # propagate initial units
    mark = len(trail)
    for idx in range(len(clauses)):
        state, unit = clause_state(idx)
        if state == "conflict":
            return SatResult("unsat", stats=stats)
        if state == "unit" and not assign(unit):
            return SatResult("unsat", stats=stats)

    if search():
        model = {v: assignment.get(v, False) for v in range(1, num_vars + 1)}
        assert _check_model(clauses, model), "model failed re-check"
        return SatResult("sat", model, stats)
    return SatResult("unsat", stats=stats)


def enumerate_models(clauses: list[list[int]], num_vars: int,
                     project: list[int] | None = None) -> list[tuple[bool, ...]]:
    """All models, optionally projected onto the given variables, by blocking
    clauses.  Deterministic, sorted output.  Intended for oracle-scale use."""
    work = [list(c) for c in clauses]
    found: set[tuple[bool, ...]] = set()
    proj = project if project is not None else list(range(1, num_vars + 1))
    while True:
        res = sat_solve(work, num_vars)
        if not res.is_sat:
            break
        assert res.model is not None
        point = tuple(res.model[v] for v in proj)
        found.add(point)
        block = [(-v if res.model[v] else v) for v in proj]
        if not block:
            break
        work.append(block)
    return sorted(found)
