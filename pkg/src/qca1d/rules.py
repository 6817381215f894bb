"""Rule tables for one-dimensional quantum cellular automata.

A local rule over states {0, ..., q-1} assigns to every length-k
neighborhood string an amplitude vector in C^q.  Tables are dense: one row
per neighborhood, rows ordered with the leftmost cell most significant
(the string "101" for q=2 is row 5).  Every comparison made by this
package (norm one, orthogonality, unit components, determinism) is a
tolerance test using the table's ``tolerance``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np

DEFAULT_TOLERANCE = 1e-9

Config = tuple[int, ...]


class RuleFormatError(ValueError):
    """Malformed rule data: wrong shape, bad keys, non-finite entries."""


def config_index(config: Sequence[int], q: int) -> int:
    """Encode a neighborhood string, leftmost cell most significant."""
    idx = 0
    for s in config:
        idx = idx * q + int(s)
    return idx


def index_config(index: int, q: int, k: int) -> Config:
    """Inverse of :func:`config_index` for strings of length k."""
    digits = []
    for _ in range(k):
        index, r = divmod(index, q)
        digits.append(r)
    return tuple(reversed(digits))


def config_str(config: Sequence[int]) -> str:
    return "".join(str(s) for s in config)


def all_configs(q: int, length: int) -> Iterator[Config]:
    """All strings of the given length in index order."""
    return itertools.product(range(q), repeat=length)


def as_config(value: str | Sequence[int], q: int, length: int) -> Config:
    """Normalize a neighborhood given as digits string or int sequence."""
    if isinstance(value, str):
        try:
            cfg = tuple(int(c) for c in value)
        except ValueError:
            raise RuleFormatError(f"config string {value!r} has non-digit characters")
    else:
        cfg = tuple(int(s) for s in value)
    if len(cfg) != length:
        raise RuleFormatError(f"config {config_str(cfg)!r} has length {len(cfg)}, expected {length}")
    if any(s < 0 or s >= q for s in cfg):
        raise RuleFormatError(f"config {config_str(cfg)!r} has states outside 0..{q - 1}")
    return cfg


@dataclass(frozen=True, eq=False)
class RuleTable:
    """Dense table of amplitude vectors, one per neighborhood.

    ``amplitudes`` has shape (q**k, q); row r holds the amplitude vector of
    the neighborhood with index r, column i the amplitude of output state i.
    """

    q: int
    k: int
    amplitudes: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.q < 2:
            raise RuleFormatError(f"state count q={self.q} must be at least 2")
        if self.k < 1:
            raise RuleFormatError(f"neighborhood size k={self.k} must be at least 1")
        if not self.tolerance > 0:
            raise RuleFormatError(f"tolerance {self.tolerance} must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.q**self.k, self.q):
            raise RuleFormatError(
                f"amplitude table has shape {amps.shape}, expected {(self.q**self.k, self.q)}"
            )
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise RuleFormatError("amplitude table contains non-finite entries")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def config(self, value: str | Sequence[int]) -> Config:
        return as_config(value, self.q, self.k)

    def configs(self) -> Iterator[Config]:
        return all_configs(self.q, self.k)

    def vector(self, config: str | Sequence[int]) -> np.ndarray:
        """Amplitude vector of one neighborhood (read-only view)."""
        return self.amplitudes[config_index(self.config(config), self.q)]

    def amplitude(self, out_state: int, config: str | Sequence[int]) -> complex:
        return complex(self.vector(config)[out_state])

    def with_tolerance(self, tolerance: float) -> "RuleTable":
        return replace(self, tolerance=tolerance)

    def approx_equal(self, other: "RuleTable", tol: float | None = None) -> bool:
        if (self.q, self.k) != (other.q, other.k):
            return False
        tol = self.tolerance if tol is None else tol
        return bool(np.all(np.abs(self.amplitudes - other.amplitudes) <= tol))


def inner(rule: RuleTable, a: str | Sequence[int], b: str | Sequence[int]) -> complex:
    """Sesquilinear inner product of two amplitude vectors.

    The first argument is conjugated: inner(a, b) = sum_i conj(f(i|a)) f(i|b).
    """
    return complex(np.vdot(rule.vector(a), rule.vector(b)))


def parity_transform(rule: RuleTable) -> RuleTable:
    """Reverse every neighborhood: the new table at i1..ik is the old at ik..i1."""
    perm = [config_index(tuple(reversed(cfg)), rule.q) for cfg in rule.configs()]
    return RuleTable(rule.q, rule.k, rule.amplitudes[perm], rule.tolerance)


def state_transpose(rule: RuleTable, perm: Sequence[int], side: str = "both") -> RuleTable:
    """Relabel states by a permutation of {0, ..., q-1}.

    side="input" permutes every cell of the neighborhood, side="output"
    permutes the components of every amplitude vector, side="both" does both.
    """
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(rule.q)):
        raise ValueError(f"{perm} is not a permutation of 0..{rule.q - 1}")
    if side not in ("input", "output", "both"):
        raise ValueError(f"side must be input, output or both, got {side!r}")
    amps = rule.amplitudes
    if side in ("input", "both"):
        rows = [config_index(tuple(perm[s] for s in cfg), rule.q) for cfg in rule.configs()]
        amps = amps[rows]
    if side in ("output", "both"):
        amps = amps[:, list(perm)]
    return RuleTable(rule.q, rule.k, amps, rule.tolerance)


def unit_configs(rule: RuleTable) -> frozenset[Config]:
    """Neighborhoods whose amplitude vector has a component equal to 1.

    Equality means |f(i|config) - 1| <= tolerance; a component of modulus
    one but nonzero phase does not qualify.
    """
    hit = np.any(np.abs(rule.amplitudes - 1.0) <= rule.tolerance, axis=1)
    return frozenset(cfg for cfg, h in zip(rule.configs(), hit) if h)


def deterministic_output(rule: RuleTable, config: str | Sequence[int]) -> int | None:
    """The unique output state with amplitude 1, or None if not unique."""
    vec = rule.vector(config)
    hits = np.flatnonzero(np.abs(vec - 1.0) <= rule.tolerance)
    return int(hits[0]) if len(hits) == 1 else None


def is_deterministic(rule: RuleTable) -> bool:
    """True when every amplitude vector is a unit basis vector (within tolerance)."""
    amps = rule.amplitudes
    ones = np.abs(amps - 1.0) <= rule.tolerance
    zeros = np.abs(amps) <= rule.tolerance
    return bool(np.all(np.sum(ones, axis=1) == 1) and np.all(np.sum(ones | zeros, axis=1) == rule.q))


# ---------------------------------------------------------------------------
# Rule file format: JSON with one amplitude-vector entry per neighborhood:
#   { "q": 2, "k": 2, "tolerance": 1e-9,
#     "amplitudes": { "00": [[re, im], [re, im]], ... } }
# ---------------------------------------------------------------------------


def rule_to_dict(rule: RuleTable) -> dict:
    amplitudes = {}
    for cfg in rule.configs():
        vec = rule.vector(cfg)
        amplitudes[config_str(cfg)] = [[float(z.real), float(z.imag)] for z in vec]
    return {"q": rule.q, "k": rule.k, "tolerance": rule.tolerance, "amplitudes": amplitudes}


def rule_from_dict(data: dict) -> RuleTable:
    if not isinstance(data, dict):
        raise RuleFormatError(f"rule file must hold a JSON object, got {type(data).__name__}")
    for field in ("q", "k", "amplitudes"):
        if field not in data:
            raise RuleFormatError(f"rule file is missing the {field!r} field")
    q, k = data["q"], data["k"]
    if not isinstance(q, int) or not isinstance(k, int):
        raise RuleFormatError("fields 'q' and 'k' must be integers")
    if q > 10:
        raise RuleFormatError("config strings use single digits; q must be at most 10")
    tolerance = data.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tolerance, (int, float)) or not tolerance > 0:
        raise RuleFormatError(f"field 'tolerance' must be a positive number, got {tolerance!r}")
    table = data["amplitudes"]
    if not isinstance(table, dict):
        raise RuleFormatError("field 'amplitudes' must be an object keyed by config strings")
    if len(table) != q**k:
        raise RuleFormatError(f"field 'amplitudes' has {len(table)} entries, expected {q**k}")
    amps = np.zeros((q**k, q), dtype=complex)
    for key, entry in table.items():
        cfg = as_config(key, q, k)
        if not isinstance(entry, list) or len(entry) != q:
            raise RuleFormatError(f"amplitude vector for {key!r} must list {q} [re, im] pairs")
        for i, pair in enumerate(entry):
            if not isinstance(pair, list) or len(pair) != 2:
                raise RuleFormatError(f"entry {i} for config {key!r} is not an [re, im] pair")
            amps[config_index(cfg, q), i] = complex(pair[0], pair[1])
    return RuleTable(q, k, amps, float(tolerance))


def dump_rule(rule: RuleTable) -> str:
    return json.dumps(rule_to_dict(rule), indent=2)


def load_rule(path: str) -> RuleTable:
    """Read a rule file; the path "-" reads standard input."""
    import sys

    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleFormatError(f"rule file {path!r} is not valid JSON: {exc}") from exc
    return rule_from_dict(data)


def save_rule(rule: RuleTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_rule(rule) + "\n")
