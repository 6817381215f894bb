"""Transfer matrices, generating functions and path-weight monomials.

For a weighted digraph with transfer matrix A, the polynomial
Z(t) = det(I - tA) generates the closed-path weights through
Tr A(t) = -t Z'(t) / Z(t), whose t^n coefficient equals Tr(A^n).
Monomials name path weights symbolically: the factor w_{ab} stands for the
inner product of the amplitude vectors of neighborhoods a and b (a single
index w_a for a squared norm).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import Cycle, Edge, WeightedDiGraph, iter_paths, pair_graph
from .rules import RuleTable, config_index, index_config, inner


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of edge-weight labels in canonical form.

    Each factor is a config-index tuple: (a,) for a norm weight, (a, b)
    with a <= b for a pair weight.  Swapping a pair conjugates its weight,
    so one representative per conjugate pair is kept; factors are sorted.
    """

    factors: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(edges: Iterable[Edge], q: int) -> "Monomial":
        factors = []
        for e in edges:
            if len(e.configs) == 1:
                factors.append((config_index(e.configs[0], q),))
            else:
                a = config_index(e.configs[0], q)
                b = config_index(e.configs[1], q)
                factors.append((min(a, b), max(a, b)))
        return Monomial(tuple(sorted(factors)))

    def evaluate(self, rule: RuleTable) -> complex:
        """Product of the named inner products (canonical argument order)."""
        value = complex(1.0)
        for f in self.factors:
            a = index_config(f[0], rule.q, rule.k)
            b = index_config(f[-1], rule.q, rule.k)
            value *= inner(rule, a, b)
        return value

    def __str__(self) -> str:
        parts = []
        for f in self.factors:
            if len(f) == 1:
                parts.append(f"w_{f[0]}" if f[0] < 10 else f"w_{{{f[0]}}}")
            elif f[0] < 10 and f[1] < 10:
                parts.append(f"w_{{{f[0]}{f[1]}}}")
            else:
                parts.append(f"w_{{{f[0]},{f[1]}}}")
        return "".join(parts)


def monomial_of(item: Cycle | Sequence[Edge], q: int) -> Monomial:
    edges = item.edges if isinstance(item, Cycle) else item
    return Monomial.from_edges(edges, q)


def transfer_matrix(graph: WeightedDiGraph, convention: str = "raw") -> np.ndarray:
    """Vertex-by-vertex matrix; entry (i, j) sums the weights of edges i -> j.

    convention="simplified" (pair graphs only) replaces the diagonal
    subgraph by bookkeeping weights: diagonal self-loops become 0, every
    other diagonal edge becomes 1, mismatch edges keep their true weights.
    Only mismatch-path weights then survive in the generating function.
    """
    if convention not in ("raw", "simplified"):
        raise ValueError(f"unknown convention {convention!r}")
    if convention == "simplified" and graph.kind != "pair":
        raise ValueError("the simplified convention applies to pair graphs only")
    n = len(graph.vertices)
    a = np.zeros((n, n), dtype=complex)
    for e in graph.edges:
        w = e.weight
        if convention == "simplified" and e.diagonal:
            w = 0.0 if e.source == e.target else 1.0
        a[e.source, e.target] += w
    return a


def z_polynomial(a: np.ndarray) -> np.ndarray:
    """Coefficients of det(I - tA), index = power of t.

    Computed by the Faddeev-LeVerrier recurrence; exactly-zero trailing
    coefficients are trimmed.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    m = a.shape[0]
    # char[j] is the s^j coefficient of det(sI - A).
    char = np.zeros(m + 1, dtype=complex)
    char[m] = 1.0
    mat = np.zeros_like(a)
    eye = np.eye(m, dtype=complex)
    for j in range(1, m + 1):
        mat = a @ mat + char[m - j + 1] * eye
        char[m - j] = -np.trace(a @ mat) / j
    coeffs = char[::-1].copy()  # det(I - tA) = t^m det((1/t)I - A)
    last = m
    while last > 0 and coeffs[last] == 0:
        last -= 1
    return coeffs[: last + 1]


def trace_series(a: np.ndarray, order: int) -> np.ndarray:
    """Coefficients 0..order of Tr A(t) = -t Z'(t) / Z(t).

    The t^n coefficient equals Tr(A^n) for n >= 1; the constant term is 0.
    """
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    z = z_polynomial(a)
    if abs(z[0] - 1.0) > 1e-12:
        raise ValueError("generating polynomial must have constant term 1")
    coeffs = np.zeros(order + 1, dtype=complex)
    for n in range(1, order + 1):
        zn = z[n] if n < len(z) else 0.0
        acc = -n * zn
        for i in range(1, n):
            zi = z[i] if i < len(z) else 0.0
            acc -= zi * coeffs[n - i]
        coeffs[n] = acc
    return coeffs


def path_monomials(rule: RuleTable, n: int) -> list[Monomial]:
    """Monomials of length-n mismatch paths terminating on the diagonal.

    Enumerates mismatch-edge paths of the pair graph whose first and last
    vertices are diagonal and whose interior vertices are distinct and off
    the diagonal, then canonicalizes and deduplicates.  The result depends
    only on (q, k), not on the amplitude values.
    """
    if n < 1:
        raise ValueError(f"path length must be at least 1, got {n}")
    g2 = pair_graph(rule)
    diag = g2.diagonal_vertices()
    seen: set[Monomial] = set()
    for path in iter_paths(
        g2,
        diag,
        diag,
        edge_ok=lambda e: e.mismatch,
        interior_ok=lambda v: not g2.is_diagonal_vertex(v),
        exact_len=n,
    ):
        seen.add(Monomial.from_edges(path, rule.q))
    return sorted(seen)
