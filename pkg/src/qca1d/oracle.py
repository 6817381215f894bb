"""Brute-force ground truth on periodic lattices.

The global evolution matrix on N sites has entries
F[out, in] = prod_x f(out_x | in_(x+E)) with periodic indexing, site 0 most
significant in the configuration index.  Unitarity is measured as the
max-norm defect of F^dagger F - I.  States can also be evolved without
materializing F, by contracting the per-site amplitude tensor along the
ring; that path reaches lattice sizes whose dense matrix would not fit.
"""

from __future__ import annotations

import string
from functools import reduce
from typing import Sequence

import numpy as np

from .rules import RuleTable, all_configs, config_index

DEFAULT_MAX_DIM = 4096


class DimensionCapExceeded(RuntimeError):
    """The requested dense matrix exceeds the configured size cap."""


def neighborhood_offsets(offsets: Sequence[int] | None, k: int) -> tuple[int, ...]:
    """Validated neighborhood: k consecutive integers, default 0..k-1."""
    if offsets is None:
        return tuple(range(k))
    offs = tuple(int(e) for e in offsets)
    if len(offs) != k:
        raise ValueError(f"expected {k} offsets, got {len(offs)}")
    if any(b - a != 1 for a, b in zip(offs, offs[1:])):
        raise ValueError(f"offsets {offs} must be consecutive ascending integers")
    return offs


def basis_state(q: int, n_sites: int, config: Sequence[int] | str) -> np.ndarray:
    from .rules import as_config

    cfg = as_config(config, q, n_sites)
    state = np.zeros(q**n_sites, dtype=complex)
    state[config_index(cfg, q)] = 1.0
    return state


def random_state(q: int, n_sites: int, rng: np.random.Generator) -> np.ndarray:
    state = rng.normal(size=q**n_sites) + 1j * rng.normal(size=q**n_sites)
    return state / np.linalg.norm(state)


def global_matrix(
    rule: RuleTable,
    n_sites: int,
    offsets: Sequence[int] | None = None,
    max_dim: int = DEFAULT_MAX_DIM,
) -> np.ndarray:
    """Dense evolution matrix on the N-site ring.

    Column `in` is the Kronecker product over sites of the amplitude
    vectors of the windows read from the input configuration; for a
    deterministic rule every column is a standard basis vector.
    """
    if n_sites < 1:
        raise ValueError(f"need at least one site, got {n_sites}")
    q = rule.q
    dim = q**n_sites
    if dim > max_dim:
        raise DimensionCapExceeded(
            f"dense matrix dimension {dim} exceeds the cap {max_dim}; raise max_dim "
            "or use the matrix-free evolution")
    offs = neighborhood_offsets(offsets, rule.k)
    amps = rule.amplitudes
    matrix = np.empty((dim, dim), dtype=complex)
    for col, cfg in enumerate(all_configs(q, n_sites)):
        windows = [
            config_index(tuple(cfg[(x + e) % n_sites] for e in offs), q)
            for x in range(n_sites)
        ]
        matrix[:, col] = reduce(np.kron, (amps[w] for w in windows))
    return matrix


def unitarity_defect(matrix: np.ndarray) -> float:
    """Max-norm of F^dagger F - I; zero iff the matrix is unitary."""
    matrix = np.asarray(matrix)
    gram = matrix.conj().T @ matrix
    return float(np.max(np.abs(gram - np.eye(matrix.shape[0]))))


# ---------------------------------------------------------------------------
# Matrix-free application
# ---------------------------------------------------------------------------


def _roll_axes(state: np.ndarray, q: int, n: int, shift: int) -> np.ndarray:
    if shift % n == 0:
        return state
    tensor = state.reshape((q,) * n)
    axes = [(i + shift) % n for i in range(n)]
    return np.transpose(tensor, axes).reshape(-1)


def _apply_forward(rule: RuleTable, n: int, vec: np.ndarray) -> np.ndarray:
    q, k = rule.q, rule.k
    b = k - 1
    letters = string.ascii_letters
    if b + 2 * n > len(letters):
        raise ValueError(f"lattice of {n} sites is too large for the contraction ladder")
    p_l, s_l, o_l = letters[:b], letters[b:b + n], letters[b + n:b + 2 * n]
    tensor = rule.amplitudes.reshape((q,) * k + (q,))
    # Boundary cells are duplicated up front so that wrapped windows can read
    # them after the originals have been summed away.
    if b:
        c = np.zeros((q**b, q**b, q ** (n - b)), dtype=complex)
        vr = vec.reshape(q**b, -1)
        for p in range(q**b):
            c[p, p, :] = vr[p]
        c = c.reshape((q,) * (b + n))
    else:
        c = vec.reshape((q,) * n).copy()
    for x in range(n):
        c_sub = p_l + s_l[x:] + o_l[:x]
        window = "".join(s_l[pos] if pos < n else p_l[pos - n] for pos in range(x, x + k))
        out_sub = p_l + s_l[x + 1:] + o_l[:x + 1]
        c = np.einsum(f"{c_sub},{window}{o_l[x]}->{out_sub}", c, tensor)
    if b:
        c = c.sum(axis=tuple(range(b)))
    return c.reshape(-1)


def _apply_adjoint(rule: RuleTable, n: int, vec: np.ndarray) -> np.ndarray:
    q, k = rule.q, rule.k
    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise ValueError(f"lattice of {n} sites is too large for the contraction ladder")
    s_l, o_l = letters[:n], letters[n:2 * n]
    tensor = rule.amplitudes.conj().reshape((q,) * k + (q,))
    c = vec.reshape((q,) * n)
    introduced = 0
    for x in range(n):
        c_sub = s_l[:introduced] + o_l[x:]
        window = "".join(s_l[(x + j) % n] for j in range(k))
        introduced = min(n, x + k)
        out_sub = s_l[:introduced] + o_l[x + 1:]
        c = np.einsum(f"{c_sub},{window}{o_l[x]}->{out_sub}", c, tensor)
    return c.reshape(-1)


def apply_global(
    rule: RuleTable,
    n_sites: int,
    state: np.ndarray,
    adjoint: bool = False,
    offsets: Sequence[int] | None = None,
) -> np.ndarray:
    """Apply the evolution (or its adjoint) without building the matrix.

    A nonzero neighborhood base offset only relabels sites, so it is applied
    as a cyclic rotation around the exact contraction for offsets 0..k-1.
    """
    q, k = rule.q, rule.k
    offs = neighborhood_offsets(offsets, k)
    state = np.asarray(state, dtype=complex)
    if state.shape != (q**n_sites,):
        raise ValueError(f"state has shape {state.shape}, expected ({q**n_sites},)")
    if n_sites < k:
        # Windows wrap more than once; the dense matrix is tiny here.
        matrix = global_matrix(rule, n_sites, offsets=offs, max_dim=q**n_sites)
        return matrix.conj().T @ state if adjoint else matrix @ state
    base = offs[0]
    if adjoint:
        out = _apply_adjoint(rule, n_sites, _roll_axes(state, q, n_sites, -base))
    else:
        out = _roll_axes(_apply_forward(rule, n_sites, state), q, n_sites, base)
    return out


def evolve(
    rule: RuleTable,
    n_sites: int,
    state: np.ndarray,
    steps: int,
    offsets: Sequence[int] | None = None,
    max_dense_dim: int = DEFAULT_MAX_DIM,
) -> np.ndarray:
    """Apply the evolution ``steps`` times to a configuration-space vector."""
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    q = rule.q
    state = np.asarray(state, dtype=complex)
    if state.shape != (q**n_sites,):
        raise ValueError(f"state has shape {state.shape}, expected ({q**n_sites},)")
    if q**n_sites <= max_dense_dim:
        matrix = global_matrix(rule, n_sites, offsets=offsets, max_dim=max_dense_dim)
        for _ in range(steps):
            state = matrix @ state
        return state
    for _ in range(steps):
        state = apply_global(rule, n_sites, state, offsets=offsets)
    return state


def defect_estimate(
    rule: RuleTable,
    n_sites: int,
    samples: int = 8,
    rng: np.random.Generator | None = None,
    offsets: Sequence[int] | None = None,
) -> float:
    """Estimate the unitarity defect as max |F^dag F v - v| over random unit vectors."""
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    for _ in range(samples):
        v = random_state(rule.q, n_sites, rng)
        w = apply_global(rule, n_sites, apply_global(rule, n_sites, v, offsets=offsets),
                         adjoint=True, offsets=offsets)
        worst = max(worst, float(np.max(np.abs(w - v))))
    return worst


def probabilities(state: np.ndarray, tolerance: float = 1e-9) -> np.ndarray:
    """Measurement distribution |amplitude|^2 of a normalized state."""
    state = np.asarray(state)
    norm_sq = float(np.sum(np.abs(state) ** 2))
    if abs(norm_sq - 1.0) > tolerance:
        raise ValueError(f"state is not normalized: |norm^2 - 1| = {abs(norm_sq - 1.0):.3e}")
    return np.abs(state) ** 2


def is_permutation_matrix(matrix: np.ndarray, tol: float = 1e-9) -> bool:
    matrix = np.asarray(matrix)
    ones = np.abs(matrix - 1.0) <= tol
    zeros = np.abs(matrix) <= tol
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))
