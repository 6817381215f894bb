"""Parameterized rule families with unitary global evolution.

Neighborhood-size-2 families: a single-frame family for periodic lattices
(all amplitude vectors parallel to one of two orthogonal directions,
grouped by the last cell) and its quiescent-state variant for infinite
lattices.  Size-3 families: two periodic single-frame families (grouped by
last or middle cell) and two infinite families with deterministic sectors
{000} and {000, 111}.  Parity transforms of each carry an m in the name.

Also here: frame-built rules (explicitly supplied mutually-orthogonal
vector classes), the reversible size-4 deterministic rule of Patt, and
quantization of deterministic reversible rules by a rigid rotation of
state space.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .rules import (
    DEFAULT_TOLERANCE,
    Config,
    RuleTable,
    all_configs,
    as_config,
    config_index,
    config_str,
    is_deterministic,
    deterministic_output,
    parity_transform,
    rule_from_dict,
)


class ParameterError(ValueError):
    """A family parameter is missing, unknown, or violates a constraint."""


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Mapping = field(default_factory=dict)


def _angle(params, name, default=0.0):
    try:
        return float(params.get(name, default))
    except (TypeError, ValueError):
        raise ParameterError(f"parameter {name!r} must be a real number")


def _positive(params, name, default=1.0):
    value = _angle(params, name, default)
    if not value > 0:
        raise ParameterError(f"parameter {name!r} must be positive, got {value}")
    return value


def _check_known(params, known, name):
    unknown = set(params) - set(known)
    if unknown:
        raise ParameterError(f"unknown parameters for {name}: {', '.join(sorted(unknown))}")


def _orthogonal_pair(theta, delta, phase0, phase1, scale0, scale1):
    v0 = scale0 * np.exp(1j * phase0) * np.array(
        [math.cos(theta), np.exp(1j * delta) * math.sin(theta)])
    v1 = scale1 * np.exp(1j * phase1) * np.array(
        [-np.exp(-1j * delta) * math.sin(theta), math.cos(theta)])
    return v0, v1


def _table(q, k, vectors: dict, tolerance):
    amps = np.zeros((q**k, q), dtype=complex)
    for cfg, vec in vectors.items():
        amps[config_index(cfg, q)] = vec
    return RuleTable(q, k, amps, tolerance)


# ---------------------------------------------------------------------------
# k = 2
# ---------------------------------------------------------------------------

_F21_PARAMS = ("alpha", "beta", "theta", "phi1", "phi2", "rho")


def _f21(params, tolerance):
    _check_known(params, _F21_PARAMS, "f21")
    a = _angle(params, "alpha")
    b = _angle(params, "beta")
    th = _angle(params, "theta")
    p1 = _angle(params, "phi1")
    p2 = _angle(params, "phi2")
    rho = _positive(params, "rho")
    c, s = math.cos(th), math.sin(th)
    top = np.array([np.exp(1j * a) * c, np.exp(1j * b) * 1j * s])
    bottom = np.array([np.exp(-1j * b) * 1j * s, np.exp(-1j * a) * c])
    vectors = {
        (0, 0): top,
        (0, 1): np.exp(1j * p1) * rho * bottom,
        (1, 0): np.exp(1j * p2) / rho * top,
        (1, 1): bottom,
    }
    return _table(2, 2, vectors, tolerance)


_F21_00_PARAMS = ("alpha", "beta", "theta", "phi1", "phi3", "rho")


def _f21_00(params, tolerance):
    _check_known(params, _F21_00_PARAMS, "f21_00")
    a = _angle(params, "alpha")
    b = _angle(params, "beta")
    th = _angle(params, "theta")
    p1 = _angle(params, "phi1")
    p3 = _angle(params, "phi3")
    rho = _positive(params, "rho")
    c, s = math.cos(th), math.sin(th)
    vectors = {
        (0, 0): np.array([1.0, 0.0], dtype=complex),
        (0, 1): np.array([0.0, np.exp(1j * p1) * rho]),
        (1, 0): np.array([np.exp(1j * a) * c, np.exp(1j * b) * 1j * s]) / rho,
        (1, 1): np.exp(1j * p3) * np.array([np.exp(-1j * b) * 1j * s, np.exp(-1j * a) * c]),
    }
    return _table(2, 2, vectors, tolerance)


# ---------------------------------------------------------------------------
# k = 3
# ---------------------------------------------------------------------------

_F31_CHART_PARAMS = ("theta", "eta", "xi", "r1", "r2", "r6", "p1", "p2", "p3", "p4", "p5", "p6")
_F31_Z_PARAMS = ("z1", "z2", "z3", "z4", "z5", "z6")


def _f31_scales(params, name):
    """The six scale factors z1..z6, from the chart or given explicitly.

    Chart: free moduli |z1|, |z2|, |z6| and all six phases; |z5| = 1/|z2|,
    |z4| = 1/(|z1||z2|) and |z3| = |z2|/|z6| enforce the three cycle-norm
    constraints by construction.  Explicit z values are validated against
    |z2 z5| = 1, |z1 z2 z4| = 1, |z3 z5 z6| = 1.
    """
    explicit = [p for p in _F31_Z_PARAMS if p in params]
    if explicit:
        if len(explicit) != 6:
            raise ParameterError(f"{name} requires all of z1..z6 when any is given")
        z = [complex(params[p]) for p in _F31_Z_PARAMS]
        checks = (
            ("|z2 z5| = 1", abs(z[1] * z[4])),
            ("|z1 z2 z4| = 1", abs(z[0] * z[1] * z[3])),
            ("|z3 z5 z6| = 1", abs(z[2] * z[4] * z[5])),
        )
        for label, value in checks:
            if abs(value - 1.0) > 1e-9:
                raise ParameterError(f"{name} constraint {label} violated: modulus is {value!r}")
        return z
    r1 = _positive(params, "r1")
    r2 = _positive(params, "r2")
    r6 = _positive(params, "r6")
    moduli = [r1, r2, r2 / r6, 1.0 / (r1 * r2), 1.0 / r2, r6]
    return [m * np.exp(1j * _angle(params, f"p{i + 1}")) for i, m in enumerate(moduli)]


def _f31(params, tolerance, middle=False):
    name = "f30" if middle else "f31"
    _check_known(params, _F31_CHART_PARAMS + _F31_Z_PARAMS, name)
    th = _angle(params, "theta")
    eta = _angle(params, "eta")
    xi = _angle(params, "xi")
    c, s = math.cos(th), math.sin(th)
    b0 = np.array([c, np.exp(1j * eta) * s])
    b1 = np.exp(1j * xi) * np.array([-np.exp(-1j * eta) * s, c])
    z = _f31_scales(params, name)
    if middle:
        on_b0 = {(0, 0, 1): z[0], (1, 0, 0): z[3], (1, 0, 1): z[4]}
        on_b1 = {(0, 1, 0): z[1], (0, 1, 1): z[2], (1, 1, 0): z[5]}
    else:
        on_b0 = {(0, 1, 0): z[1], (1, 0, 0): z[3], (1, 1, 0): z[5]}
        on_b1 = {(0, 0, 1): z[0], (0, 1, 1): z[2], (1, 0, 1): z[4]}
    vectors = {(0, 0, 0): b0, (1, 1, 1): b1}
    vectors.update({cfg: zz * b0 for cfg, zz in on_b0.items()})
    vectors.update({cfg: zz * b1 for cfg, zz in on_b1.items()})
    return _table(2, 3, vectors, tolerance)


_F31_000_PARAMS = (
    "r1", "p1", "m2", "m6",
    "theta01", "delta01", "phi010", "phi011",
    "theta10", "delta10", "phi100", "phi101",
    "theta11", "delta11", "phi110", "phi111",
)


def _f31_000(params, tolerance):
    _check_known(params, _F31_000_PARAMS, "f31_000")
    r1 = _positive(params, "r1")
    m2 = _positive(params, "m2")
    m6 = _positive(params, "m6")
    z1 = r1 * np.exp(1j * _angle(params, "p1"))
    # Cycle-norm constraints fix the remaining vector lengths.
    scales = {
        (0, 1): (m2, m2 / m6),
        (1, 0): (1.0 / (r1 * m2), 1.0 / m2),
        (1, 1): (m6, 1.0),
    }
    vectors = {
        (0, 0, 0): np.array([1.0, 0.0], dtype=complex),
        (0, 0, 1): np.array([0.0, z1]),
    }
    for prefix, (s0, s1) in scales.items():
        tag = config_str(prefix)
        v0, v1 = _orthogonal_pair(
            _angle(params, f"theta{tag}"), _angle(params, f"delta{tag}"),
            _angle(params, f"phi{tag}0"), _angle(params, f"phi{tag}1"), s0, s1)
        vectors[prefix + (0,)] = v0
        vectors[prefix + (1,)] = v1
    return _table(2, 3, vectors, tolerance)


_F31_000_111_PARAMS = (
    "m1", "p1", "m2", "p6",
    "theta01", "delta01", "phi010", "phi011",
    "theta10", "delta10", "phi100", "phi101",
)


def _f31_000_111(params, tolerance):
    _check_known(params, _F31_000_111_PARAMS, "f31_000_111")
    m1 = _positive(params, "m1")
    m2 = _positive(params, "m2")
    scales = {
        (0, 1): (m2, 1.0 / m1),
        (1, 0): (1.0 / (m1 * m2), 1.0 / m2),
    }
    vectors = {
        (0, 0, 0): np.array([1.0, 0.0], dtype=complex),
        (1, 1, 1): np.array([0.0, 1.0], dtype=complex),
        (0, 0, 1): np.array([0.0, m1 * np.exp(1j * _angle(params, "p1"))]),
        (1, 1, 0): np.array([m1 * m2 * np.exp(1j * _angle(params, "p6")), 0.0]),
    }
    for prefix, (s0, s1) in scales.items():
        tag = config_str(prefix)
        v0, v1 = _orthogonal_pair(
            _angle(params, f"theta{tag}"), _angle(params, f"delta{tag}"),
            _angle(params, f"phi{tag}0"), _angle(params, f"phi{tag}1"), s0, s1)
        vectors[prefix + (0,)] = v0
        vectors[prefix + (1,)] = v1
    return _table(2, 3, vectors, tolerance)


# ---------------------------------------------------------------------------
# Reversible deterministic rules and quantization
# ---------------------------------------------------------------------------


def patt_rule(tolerance: float = DEFAULT_TOLERANCE) -> RuleTable:
    """Reversible deterministic size-4 rule: the second cell flips exactly
    when its context reads 0 . 1 0 (first cell 0, third 1, fourth 0)."""
    amps = np.zeros((16, 2), dtype=complex)
    for cfg in all_configs(2, 4):
        i1, i2, i3, i4 = cfg
        out = 1 - i2 if (i1 == 0 and i3 == 1 and i4 == 0) else i2
        amps[config_index(cfg, 2), out] = 1.0
    return RuleTable(2, 4, amps, tolerance)


def frame_rule(
    q: int,
    k: int,
    j: int,
    vectors: Mapping,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RuleTable:
    """Rule from explicitly assigned vectors, validated to be frame-shaped.

    For every length-j prefix gamma, the vectors of neighborhoods starting
    gamma i ... must be orthogonal across different values of i.  Inputs
    that fail this are refused, not re-orthogonalized.  Rules built this
    way satisfy the terminating-mismatch-path condition (P-iii) by
    construction.
    """
    if not 0 < j < k:
        raise ParameterError(f"frame depth j={j} must satisfy 0 < j < k={k}")
    table: dict[Config, np.ndarray] = {}
    for key, value in vectors.items():
        cfg = as_config(key, q, k)
        vec = np.array([complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x)
                        for x in value], dtype=complex)
        if vec.shape != (q,):
            raise ParameterError(f"vector for {config_str(cfg)} must have {q} components")
        table[cfg] = vec
    missing = [c for c in all_configs(q, k) if c not in table]
    if missing:
        raise ParameterError(f"missing vectors for {len(missing)} neighborhoods, "
                             f"e.g. {config_str(missing[0])}")
    for gamma in all_configs(q, j):
        members = {i: [c for c in all_configs(q, k) if c[:j] == gamma and c[j] == i]
                   for i in range(q)}
        for i in range(q):
            for ip in range(i + 1, q):
                for ca in members[i]:
                    for cb in members[ip]:
                        ip_val = complex(np.vdot(table[ca], table[cb]))
                        if abs(ip_val) > tolerance:
                            raise ParameterError(
                                f"vectors for {config_str(ca)} and {config_str(cb)} are not "
                                f"orthogonal (inner product {ip_val!r})")
    return _table(q, k, table, tolerance)


def quantize(det_rule: RuleTable, unitary: np.ndarray) -> RuleTable:
    """Replace each deterministic output basis vector by a rotated copy.

    The new amplitude vector of a neighborhood is the column of ``unitary``
    selected by the neighborhood's deterministic output state.  The rigid
    rotation preserves the single-frame structure, hence unitarity of the
    global evolution.
    """
    if not is_deterministic(det_rule):
        raise ParameterError("quantize requires a deterministic base rule "
                             "(every amplitude vector a unit basis vector)")
    u = np.asarray(unitary, dtype=complex)
    q = det_rule.q
    if u.shape != (q, q):
        raise ParameterError(f"rotation matrix must be {q} x {q}, got {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(q)))
    if defect > max(det_rule.tolerance, 1e-12):
        raise ParameterError(f"rotation matrix is not unitary (defect {defect:.3e})")
    amps = np.zeros_like(det_rule.amplitudes)
    for cfg in det_rule.configs():
        out = deterministic_output(det_rule, cfg)
        amps[config_index(cfg, det_rule.q)] = u[:, out]
    return RuleTable(det_rule.q, det_rule.k, amps, det_rule.tolerance)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_ANGLES = "angles in radians"

FAMILY_SCHEMAS: dict[str, dict] = {
    "f21": {"params": {p: _ANGLES for p in _F21_PARAMS[:-1]} | {"rho": "positive scale"},
            "doc": "size-2 periodic family, vectors framed by the last cell"},
    "f2m1": {"params": {p: _ANGLES for p in _F21_PARAMS[:-1]} | {"rho": "positive scale"},
             "doc": "parity transform of f21"},
    "f21_00": {"params": {p: _ANGLES for p in _F21_00_PARAMS[:-1]} | {"rho": "positive scale"},
               "doc": "size-2 infinite family with quiescent 00"},
    "f2m1_00": {"params": {p: _ANGLES for p in _F21_00_PARAMS[:-1]} | {"rho": "positive scale"},
                "doc": "parity transform of f21_00"},
    "f31": {"params": {"theta": _ANGLES, "eta": _ANGLES, "xi": _ANGLES,
                       "r1": "modulus", "r2": "modulus", "r6": "modulus",
                       "p1..p6": _ANGLES, "z1..z6": "explicit complex scales (optional)"},
            "doc": "size-3 periodic family framed by the last cell"},
    "f30": {"params": {"theta": _ANGLES, "eta": _ANGLES, "xi": _ANGLES,
                       "r1": "modulus", "r2": "modulus", "r6": "modulus",
                       "p1..p6": _ANGLES, "z1..z6": "explicit complex scales (optional)"},
            "doc": "size-3 periodic family framed by the middle cell"},
    "f3m1": {"params": {"same as f31": ""}, "doc": "parity transform of f31"},
    "f31_000": {"params": {p: "" for p in _F31_000_PARAMS},
                "doc": "size-3 infinite family, deterministic sector {000}"},
    "f3m1_000": {"params": {p: "" for p in _F31_000_PARAMS},
                 "doc": "parity transform of f31_000"},
    "f31_000_111": {"params": {p: "" for p in _F31_000_111_PARAMS},
                    "doc": "size-3 infinite family, deterministic sector {000, 111}"},
    "patt": {"params": {}, "doc": "reversible deterministic size-4 rule"},
    "frame": {"params": {"q": "states", "k": "neighborhood", "j": "frame depth",
                         "vectors": "config -> [[re,im] x q] mapping (or JSON file path)"},
              "doc": "rule from explicit orthogonal vector classes"},
    "quantized": {"params": {"base": "rule file path, family name, or rule dict",
                             "unitary": "q x q matrix [[..]] (or JSON file path)"},
                  "doc": "rigid rotation of a deterministic reversible rule"},
}


def family_names() -> list[str]:
    return list(FAMILY_SCHEMAS)


def _load_json_param(value, what):
    if isinstance(value, str):
        if not os.path.exists(value):
            raise ParameterError(f"{what} file {value!r} does not exist")
        with open(value, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return value


def _resolve_base_rule(value, tolerance):
    if isinstance(value, RuleTable):
        return value
    if isinstance(value, str):
        if value in FAMILY_SCHEMAS:
            return make_family(value, {}, tolerance=tolerance)
        data = _load_json_param(value, "base rule")
        return rule_from_dict(data)
    if isinstance(value, dict):
        return rule_from_dict(value)
    raise ParameterError("parameter 'base' must be a rule table, rule dict, family name or path")


def _resolve_matrix(value):
    data = _load_json_param(value, "matrix")
    rows = []
    for row in data:
        rows.append([complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x)
                     for x in row])
    return np.array(rows, dtype=complex)


def make_family(
    spec: FamilySpec | str,
    params: Mapping | None = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RuleTable:
    """Build a rule table from a family name and its parameters."""
    if isinstance(spec, FamilySpec):
        name, params = spec.name, dict(spec.params)
    else:
        name, params = spec, dict(params or {})
    if name == "f21":
        return _f21(params, tolerance)
    if name == "f2m1":
        return parity_transform(_f21(params, tolerance))
    if name == "f21_00":
        return _f21_00(params, tolerance)
    if name == "f2m1_00":
        return parity_transform(_f21_00(params, tolerance))
    if name == "f31":
        return _f31(params, tolerance)
    if name == "f30":
        return _f31(params, tolerance, middle=True)
    if name == "f3m1":
        return parity_transform(_f31(params, tolerance))
    if name == "f31_000":
        return _f31_000(params, tolerance)
    if name == "f3m1_000":
        return parity_transform(_f31_000(params, tolerance))
    if name == "f31_000_111":
        return _f31_000_111(params, tolerance)
    if name == "patt":
        _check_known(params, (), "patt")
        return patt_rule(tolerance)
    if name == "frame":
        _check_known(params, ("q", "k", "j", "vectors"), "frame")
        try:
            q, k, j = int(params["q"]), int(params["k"]), int(params["j"])
        except KeyError as exc:
            raise ParameterError(f"frame requires parameter {exc.args[0]!r}")
        vectors = _load_json_param(params.get("vectors"), "vectors")
        if not isinstance(vectors, Mapping):
            raise ParameterError("parameter 'vectors' must map config strings to vectors")
        return frame_rule(q, k, j, vectors, tolerance)
    if name == "quantized":
        _check_known(params, ("base", "unitary"), "quantized")
        if "base" not in params or "unitary" not in params:
            raise ParameterError("quantized requires parameters 'base' and 'unitary'")
        base = _resolve_base_rule(params["base"], tolerance)
        return quantize(base, _resolve_matrix(params["unitary"]))
    raise ParameterError(f"unknown family {name!r}; known: {', '.join(family_names())}")


# ---------------------------------------------------------------------------
# Seeded parameter draws, honoring the excluded-submanifold margins
# ---------------------------------------------------------------------------


def random_params(name: str, rng: np.random.Generator, margin: float = 0.1) -> dict:
    """Draw generic parameters; amplitudes that must stay nonzero for the
    infinite families are kept at least ``margin`` away from zero."""

    def angles(names):
        return {p: float(rng.uniform(0.0, 2.0 * math.pi)) for p in names}

    def scale():
        return float(np.exp(rng.uniform(-0.6, 0.6)))

    if name in ("f21", "f2m1"):
        return angles(("alpha", "beta", "theta", "phi1", "phi2")) | {"rho": scale()}
    if name in ("f21_00", "f2m1_00"):
        params = angles(("alpha", "beta", "phi1", "phi3")) | {"rho": scale()}
        while True:
            theta = float(rng.uniform(0.0, 2.0 * math.pi))
            if abs(math.cos(theta)) >= margin:
                params["theta"] = theta
                return params
    if name in ("f31", "f30", "f3m1"):
        return (angles(("theta", "eta", "xi", "p1", "p2", "p3", "p4", "p5", "p6"))
                | {"r1": scale(), "r2": scale(), "r6": scale()})
    if name in ("f31_000", "f3m1_000", "f31_000_111"):
        if name == "f31_000_111":
            moduli = {"m1": scale, "m2": scale}
            angle_names = ("p1", "p6", "theta01", "delta01", "phi010", "phi011",
                           "theta10", "delta10", "phi100", "phi101")
            guarded = (((0, 1, 0), 0), ((1, 0, 0), 0), ((0, 1, 1), 1), ((1, 0, 1), 1))
            base_name = "f31_000_111"
        else:
            moduli = {"r1": scale, "m2": scale, "m6": scale}
            angle_names = ("p1", "theta01", "delta01", "phi010", "phi011",
                           "theta10", "delta10", "phi100", "phi101",
                           "theta11", "delta11", "phi110", "phi111")
            guarded = (((0, 1, 0), 0), ((1, 0, 0), 0), ((1, 1, 0), 0))
            base_name = "f31_000"
        while True:
            params = angles(angle_names) | {p: draw() for p, draw in moduli.items()}
            rule = make_family(base_name, params)
            if all(abs(rule.amplitude(out, cfg)) >= margin for cfg, out in guarded):
                return params
    if name == "patt":
        return {}
    raise ParameterError(f"no random draw defined for family {name!r}")
