"""Surjectivity of the infinite-lattice evolution.

A norm-preserving infinite evolution is onto iff two families of finite
quantities all stay away from zero: the border scalars
<rho'_0..rho'_(k-2) | F | gamma rho_0..rho_(k-2)> for every prefix gamma
and every sector pair (rho, rho') coupled by a unit transition amplitude,
and the determinants of the q x q extension matrices Phi whose rows are
the amplitude vectors of a prefix's one-state extensions.

The supporting machinery (restricted evolution on bordered interiors, its
reduced form, and the determinant factorizations relating them) is exposed
for direct validation.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .graphs import deterministic_sector
from .rules import Config, RuleTable, all_configs, as_config, index_config
from .unitarity import ConstraintReport


def extension_matrix(rule: RuleTable, prefix: str | Sequence[int]) -> np.ndarray:
    """q x q matrix whose row i is the amplitude vector of prefix + (i,)."""
    prefix = as_config(prefix, rule.q, rule.k - 1)
    rows = [rule.vector(prefix + (i,)) for i in range(rule.q)]
    return np.array(rows, dtype=complex)


def window_amplitude(rule: RuleTable, output: Sequence[int], input: Sequence[int]) -> complex:
    """Transition amplitude of a finite string under the sliding window.

    The output must be k-1 cells shorter than the input; the amplitude is
    the product of f(output[j] | input[j:j+k]) over all windows.
    """
    k = rule.k
    if len(output) != len(input) - k + 1:
        raise ValueError(
            f"output length {len(output)} does not match input length {len(input)} minus {k - 1}")
    value = complex(1.0)
    for j, out in enumerate(output):
        value *= rule.amplitude(out, tuple(input[j:j + k]))
    return value


def border_scalar(rule: RuleTable, gamma: str | Sequence[int],
                  right: str | Sequence[int], right_out: str | Sequence[int]) -> complex:
    """Amplitude <right_out[:-1] | F | gamma + right[:-1]>."""
    gamma = as_config(gamma, rule.q, rule.k - 1)
    right = rule.config(right)
    right_out = rule.config(right_out)
    return window_amplitude(rule, right_out[:-1], gamma + right[:-1])


def _require_sector(rule, configs: Iterable[Config], sector):
    if sector is None:
        sector = deterministic_sector(rule)
    missing = [c for c in configs if c not in sector]
    if missing:
        from .rules import config_str

        raise ValueError(
            "configs outside the deterministic sector: "
            + ", ".join(config_str(c) for c in missing))
    return sector


def restricted_evolution(
    rule: RuleTable,
    left: str | Sequence[int],
    right: str | Sequence[int],
    right_out: str | Sequence[int],
    n: int,
    *,
    sector: frozenset[Config] | None = None,
) -> np.ndarray:
    """Evolution on length-n interiors between deterministic borders.

    Entry (a', a) is the amplitude of input left[1:] + a + right[:-1]
    producing output a' + right_out[:-1].  Requires left, right, right_out
    in the deterministic sector and f(right_out[-1] | right) = 1.
    """
    if n < 0:
        raise ValueError(f"interior length must be nonnegative, got {n}")
    left, right, right_out = rule.config(left), rule.config(right), rule.config(right_out)
    _require_sector(rule, (left, right, right_out), sector)
    if abs(rule.amplitude(right_out[-1], right) - 1.0) > rule.tolerance:
        raise ValueError(
            f"transition amplitude f({right_out[-1]}|...) on the right border is not 1")
    q = rule.q
    dim = q**n
    matrix = np.zeros((dim, dim), dtype=complex)
    for a_idx in range(dim):
        alpha = index_config(a_idx, q, n)
        input_string = left[1:] + alpha + right[:-1]
        for b_idx in range(dim):
            alpha_out = index_config(b_idx, q, n)
            matrix[b_idx, a_idx] = window_amplitude(rule, alpha_out + right_out[:-1], input_string)
    return matrix


def _column_prefix(rule: RuleTable, left: Config, alpha: Config, n: int) -> Config:
    # Length k-1 prefix governing column alpha: its own tail once the
    # interior is long enough, padded from `left` before that.
    if n >= rule.k - 1:
        return alpha[n - rule.k + 1:]
    return left[n + 1:] + alpha


def reduced_evolution(
    rule: RuleTable,
    left: str | Sequence[int],
    n: int,
    *,
    sector: frozenset[Config] | None = None,
) -> np.ndarray:
    """Border-factor-free form of the restricted evolution.

    Built by the tensor recurrence: the 1 x 1 stage is (1), and stage m+1
    multiplies entry (a', a) by extension-matrix entries Phi[i, j] indexed
    by the column's governing prefix, mapping to entry (a'j, ai).
    """
    if n < 0:
        raise ValueError(f"interior length must be nonnegative, got {n}")
    left = rule.config(left)
    _require_sector(rule, (left,), sector)
    q = rule.q
    matrix = np.ones((1, 1), dtype=complex)
    for m in range(n):
        dim = q**m
        new = np.zeros((dim * q, dim * q), dtype=complex)
        for a_idx in range(dim):
            alpha = index_config(a_idx, q, m)
            phi = extension_matrix(rule, _column_prefix(rule, left, alpha, m))
            for i in range(q):
                for j in range(q):
                    new[j::q, a_idx * q + i] = matrix[:, a_idx] * phi[i, j]
        matrix = new
    return matrix


def column_factor_product(
    rule: RuleTable,
    left: str | Sequence[int],
    right: str | Sequence[int],
    right_out: str | Sequence[int],
    n: int,
) -> complex:
    """Product of the per-column border scalars pulled out of a determinant.

    For n >= k-1 every prefix gamma governs q^(n-k+1) columns; below that
    each interior string contributes once with its padded prefix.
    """
    left, right, right_out = rule.config(left), rule.config(right), rule.config(right_out)
    q, k = rule.q, rule.k
    value = complex(1.0)
    if n >= k - 1:
        for gamma in all_configs(q, k - 1):
            value *= border_scalar(rule, gamma, right, right_out) ** (q ** (n - k + 1))
    else:
        for alpha in all_configs(q, n):
            value *= border_scalar(rule, _column_prefix(rule, left, alpha, n), right, right_out)
    return value


def extension_det_product(rule: RuleTable, left: str | Sequence[int], n: int) -> complex:
    """Product of extension-matrix determinants entering stage n -> n+1."""
    left = rule.config(left)
    q, k = rule.q, rule.k
    value = complex(1.0)
    if n >= k - 1:
        for gamma in all_configs(q, k - 1):
            value *= complex(np.linalg.det(extension_matrix(rule, gamma))) ** (q ** (n - k + 1))
    else:
        for alpha in all_configs(q, n):
            value *= complex(np.linalg.det(
                extension_matrix(rule, _column_prefix(rule, left, alpha, n))))
    return value


def det_factorization_check(
    rule: RuleTable,
    left: str | Sequence[int],
    right: str | Sequence[int],
    right_out: str | Sequence[int],
    n: int,
    *,
    sector: frozenset[Config] | None = None,
    max_interior: int = 3,
) -> bool:
    """Verify det(restricted) = column factors x det(reduced) at one size."""
    if n > max_interior:
        raise ValueError(f"interior length {n} exceeds the configured bound {max_interior}")
    restricted = restricted_evolution(rule, left, right, right_out, n, sector=sector)
    reduced = reduced_evolution(rule, left, n, sector=sector)
    factored = (column_factor_product(rule, left, right, right_out, n)
                * complex(np.linalg.det(reduced)))
    direct = complex(np.linalg.det(restricted))
    return abs(direct - factored) <= rule.tolerance * restricted.shape[0]


def _oriented_reports(rule: RuleTable, sector: frozenset[Config]) -> list[ConstraintReport]:
    tol = rule.tolerance
    q, k = rule.q, rule.k
    reports = []
    for rho in sorted(sector):
        for rho_out in sorted(sector):
            if abs(rule.amplitude(rho_out[-1], rho) - 1.0) > tol:
                continue
            for gamma in all_configs(q, k - 1):
                value = border_scalar(rule, gamma, rho, rho_out)
                if abs(value) <= tol:
                    reports.append(ConstraintReport(
                        "I-v", ("scalar", gamma, rho, rho_out), value, abs(value)))
    for gamma in all_configs(q, k - 1):
        det = complex(np.linalg.det(extension_matrix(rule, gamma)))
        if abs(det) <= tol * q:
            reports.append(ConstraintReport("I-v", ("det", gamma), det, abs(det)))
    return reports


def check_surjectivity(rule: RuleTable, sector: frozenset[Config]) -> list[ConstraintReport]:
    """Violations of the surjectivity constraints, as I-v reports.

    Border scalars are checked for every coupled sector pair (rho, rho')
    and every prefix gamma; extension-matrix determinants once per gamma
    with singularity threshold tolerance x q.

    The border quantities read the lattice rightward, which makes them
    orientation dependent: reflecting the lattice turns the evolution into
    the parity-transformed rule's evolution (up to translation) and leaves
    onto-ness unchanged, yet a rule whose deterministic transitions flow
    leftward can satisfy the constraints in the reflected reading only.
    Onto-ness is therefore certified when either reading direction is
    violation free; violations are reported in the rightward reading.
    """
    if not sector:
        raise ValueError("the deterministic sector is empty")
    reports = _oriented_reports(rule, sector)
    if not reports:
        return []
    from .rules import parity_transform

    mirrored = frozenset(tuple(reversed(c)) for c in sector)
    if not _oriented_reports(parity_transform(rule), mirrored):
        return []
    return reports
