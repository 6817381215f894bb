"""Unitarity decision for periodic and infinite lattices.

A rule evolves every periodic lattice unitarily iff

* P-i: every cycle of the norm graph has weight 1;
* P-ii: every cycle inside the mismatch region of the pair graph has
  weight 0;
* P-iii: every mismatch path that starts and ends on diagonal vertices has
  weight 0.

On the infinite lattice the conditions are I-i (= P-i), I-ii (paths of the
norm graph between deterministic-sector vertices have weight 1), I-iii
(= P-iii), I-iv (mismatch cycles whose configurations all lie in the
deterministic sector have weight 0) and I-v (the evolution is onto, decided
by the surjectivity module).

Weight-zero conditions are decided without path enumeration: a product of
edge weights vanishes iff some factor does, so mismatch edges with weight 0
are deleted and the conditions reduce to reachability / cycle existence
over the surviving edges.  Path enumeration only runs to produce witnesses
once a condition is known to fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import (
    CycleCapExceeded,
    deterministic_sector,
    has_cycle,
    iter_cycles,
    iter_paths,
    pair_graph,
    path_weight,
    reachable_over,
    resolve_cycle_cap,
    rule_graph,
)
from .rules import Config, RuleTable, config_index, config_str

PERIODIC_CONDITIONS = ("P-i", "P-ii", "P-iii")
INFINITE_CONDITIONS = ("I-i", "I-ii", "I-iii", "I-iv", "I-v")
DEFAULT_MAX_VIOLATIONS = 100


class NoDeterministicSector(ValueError):
    """The rule has an empty deterministic sector, so no configuration is
    admissible on the infinite lattice."""


@dataclass(frozen=True)
class ConstraintReport:
    """One violated constraint with a re-checkable witness.

    ``witness`` is a tuple of neighborhood configs (norm-graph cycle or
    path), a tuple of config pairs (pair-graph cycle or path), or a tagged
    tuple ("scalar", gamma, rho, rho') / ("det", gamma) for surjectivity.
    ``margin`` is the distance |value - target| from the required value.
    """

    condition: str
    witness: tuple
    value: complex
    margin: float


@dataclass(frozen=True)
class Verdict:
    unitary: bool
    mode: str
    reports: tuple[ConstraintReport, ...]

    def to_json(self) -> dict:
        return {
            "unitary": self.unitary,
            "mode": self.mode,
            "reports": [
                {
                    "condition": r.condition,
                    "witness": witness_to_json(r.witness),
                    "value": [r.value.real, r.value.imag],
                    "margin": r.margin,
                }
                for r in self.reports
            ],
        }


def witness_to_json(witness: tuple) -> list:
    if witness and isinstance(witness[0], str):
        return [witness[0]] + [config_str(c) for c in witness[1:]]
    out = []
    for item in witness:
        if isinstance(item[0], tuple):
            out.append([config_str(item[0]), config_str(item[1])])
        else:
            out.append(config_str(item))
    return out


def witness_from_json(data: list) -> tuple:
    if data and isinstance(data[0], str) and data[0] in ("scalar", "det"):
        return (data[0],) + tuple(tuple(int(c) for c in s) for s in data[1:])
    out = []
    for item in data:
        if isinstance(item, str):
            out.append(tuple(int(c) for c in item))
        else:
            out.append(tuple(tuple(int(c) for c in s) for s in item))
    return tuple(out)


def verdict_from_json(data: dict) -> Verdict:
    reports = tuple(
        ConstraintReport(
            condition=r["condition"],
            witness=witness_from_json(r["witness"]),
            value=complex(r["value"][0], r["value"][1]),
            margin=float(r["margin"]),
        )
        for r in data["reports"]
    )
    return Verdict(bool(data["unitary"]), str(data["mode"]), reports)


def witness_str(witness: tuple) -> str:
    if witness and isinstance(witness[0], str):
        kind = witness[0]
        if kind == "det":
            return f"det gamma={config_str(witness[1]) or '()'}"
        gamma, rho, rho_out = witness[1], witness[2], witness[3]
        return (f"scalar gamma={config_str(gamma) or '()'} rho={config_str(rho)}"
                f" rho'={config_str(rho_out)}")
    parts = []
    for item in witness:
        if isinstance(item[0], tuple):
            parts.append(config_str(item[0]) + "|" + config_str(item[1]))
        else:
            parts.append(config_str(item))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Condition evaluation
# ---------------------------------------------------------------------------


def _norm_cycle_reports(rule, condition, max_violations, cap):
    g1 = rule_graph(rule)
    tol = rule.tolerance
    reports = []
    count = 0
    for cyc in iter_cycles(g1):
        count += 1
        if count > cap:
            raise CycleCapExceeded(f"cycle enumeration exceeded the cap of {cap} cycles")
        if abs(cyc.weight - 1.0) > tol:
            witness = tuple(e.configs[0] for e in cyc.edges)
            reports.append(ConstraintReport(condition, witness, cyc.weight, abs(cyc.weight - 1.0)))
            if len(reports) >= max_violations:
                break
    return reports


def _sector_path_reports(rule, condition, sector, max_violations, cap):
    # Paths of the norm graph between (distinct) sector vertices, interior
    # clear of sector vertices; composite paths factor through these.
    g1 = rule_graph(rule)
    tol = rule.tolerance
    d1_vertices = set()
    for cfg in sector:
        d1_vertices.add(config_index(cfg[:-1], rule.q))
        d1_vertices.add(config_index(cfg[1:], rule.q))
    reports = []
    count = 0
    for path in iter_paths(g1, d1_vertices, d1_vertices):
        if path[0].source == path[-1].target:
            continue  # closed: that is a cycle, handled by I-i
        count += 1
        if count > cap:
            raise CycleCapExceeded(f"path enumeration exceeded the cap of {cap} paths")
        w = path_weight(path)
        if abs(w - 1.0) > tol:
            witness = tuple(e.configs[0] for e in path)
            reports.append(ConstraintReport(condition, witness, w, abs(w - 1.0)))
            if len(reports) >= max_violations:
                break
    return reports


def _mismatch_cycle_reports(rule, condition, sector, max_violations, cap):
    g2 = pair_graph(rule)
    tol = rule.tolerance

    def edge_ok(e):
        if not e.mismatch or abs(e.weight) <= tol:
            return False
        return sector is None or all(c in sector for c in e.configs)

    def vertex_ok(v):
        return not g2.is_diagonal_vertex(v)

    if not has_cycle(g2, edge_ok, vertex_ok):
        return []
    reports = []
    count = 0
    for cyc in iter_cycles(g2, edge_ok=edge_ok, vertex_ok=vertex_ok):
        count += 1
        if count > cap:
            raise CycleCapExceeded(f"cycle enumeration exceeded the cap of {cap} cycles")
        witness = tuple(e.configs for e in cyc.edges)
        reports.append(ConstraintReport(condition, witness, cyc.weight, abs(cyc.weight)))
        if len(reports) >= max_violations:
            break
    return reports


def _mismatch_path_reports(rule, condition, max_violations, cap):
    g2 = pair_graph(rule)
    tol = rule.tolerance
    surviving = lambda e: e.mismatch and abs(e.weight) > tol
    diag = g2.diagonal_vertices()
    _, hits_diagonal = reachable_over(g2, diag, surviving)
    if not hits_diagonal:
        return []
    reports = []
    count = 0
    for path in iter_paths(
        g2, diag, diag,
        edge_ok=surviving,
        interior_ok=lambda v: not g2.is_diagonal_vertex(v),
    ):
        count += 1
        if count > cap:
            raise CycleCapExceeded(f"path enumeration exceeded the cap of {cap} paths")
        witness = tuple(e.configs for e in path)
        w = path_weight(path)
        reports.append(ConstraintReport(condition, witness, w, abs(w)))
        if len(reports) >= max_violations:
            break
    return reports


def evaluate_condition(
    rule: RuleTable,
    condition: str,
    *,
    sector: frozenset[Config] | None = None,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
    cycle_cap: int | None = None,
) -> list[ConstraintReport]:
    """All violations of a single condition, truncated to ``max_violations``.

    Surjectivity (I-v) is evaluated by ``surjectivity.check_surjectivity``,
    not here.  The sector for I-ii and I-iv is computed on demand when not
    supplied.
    """
    cap = resolve_cycle_cap(cycle_cap)
    if condition in ("P-i", "I-i"):
        return _norm_cycle_reports(rule, condition, max_violations, cap)
    if condition == "P-ii":
        return _mismatch_cycle_reports(rule, condition, None, max_violations, cap)
    if condition in ("P-iii", "I-iii"):
        return _mismatch_path_reports(rule, condition, max_violations, cap)
    if condition in ("I-ii", "I-iv"):
        if sector is None:
            sector = deterministic_sector(rule)
        if not sector:
            raise NoDeterministicSector(
                "the rule has no deterministic sector; no configuration is admissible "
                "on the infinite lattice")
        if condition == "I-ii":
            return _sector_path_reports(rule, condition, sector, max_violations, cap)
        return _mismatch_cycle_reports(rule, condition, sector, max_violations, cap)
    if condition == "I-v":
        raise ValueError("condition I-v is evaluated by surjectivity.check_surjectivity")
    raise ValueError(f"unknown condition {condition!r}")


def check_periodic(
    rule: RuleTable,
    *,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
    cycle_cap: int | None = None,
) -> Verdict:
    """Decide unitarity of the evolution on every periodic lattice at once."""
    reports: list[ConstraintReport] = []
    for condition in PERIODIC_CONDITIONS:
        reports.extend(evaluate_condition(
            rule, condition, max_violations=max_violations, cycle_cap=cycle_cap))
    return Verdict(not reports, "periodic", tuple(reports))


def check_infinite(
    rule: RuleTable,
    *,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
    cycle_cap: int | None = None,
) -> Verdict:
    """Decide unitarity of the evolution on the infinite lattice.

    Raises :class:`NoDeterministicSector` when the deterministic sector is
    empty (the rule then admits no infinite-lattice configurations at all).
    """
    from .surjectivity import check_surjectivity

    sector = deterministic_sector(rule)
    if not sector:
        raise NoDeterministicSector(
            "the rule has no deterministic sector; no configuration is admissible "
            "on the infinite lattice")
    reports: list[ConstraintReport] = []
    for condition in ("I-i", "I-ii", "I-iii", "I-iv"):
        reports.extend(evaluate_condition(
            rule, condition, sector=sector,
            max_violations=max_violations, cycle_cap=cycle_cap))
    reports.extend(itertools.islice(check_surjectivity(rule, sector), max_violations))
    return Verdict(not reports, "infinite", tuple(reports))
