"""Frames, a reversible size-4 rule, and quantization by rigid rotation.

Partitioning the amplitude vectors into mutually orthogonal classes keyed
by a fixed cell of the neighborhood kills every terminating mismatch path,
for any neighborhood size.  Reversible deterministic rules show the same
single-frame structure, so rotating their basis vectors by any unitary
keeps the global evolution unitary while making it genuinely quantum.
"""

import numpy as np

from qca1d import (
    check_periodic,
    evaluate_condition,
    frame_rule,
    global_matrix,
    is_permutation_matrix,
    patt_rule,
    quantize,
    unitarity_defect,
)

rng = np.random.default_rng(7)

# Random frame assignment at k = 4, one orthogonal basis per length-j prefix.
q, k, j = 2, 4, 2
vectors = {}
for gamma_idx in range(q**j):
    gamma = tuple(int(b) for b in np.binary_repr(gamma_idx, j))
    th, ph = rng.uniform(0, 2 * np.pi, 2)
    b0 = np.array([np.cos(th), np.exp(1j * ph) * np.sin(th)])
    basis = (b0, np.array([-np.conj(b0[1]), b0[0]]))
    for tail_idx in range(q ** (k - j)):
        tail = tuple(int(b) for b in np.binary_repr(tail_idx, k - j))
        scale = rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        vec = scale * basis[tail[0]]
        vectors["".join(map(str, gamma + tail))] = [[x.real, x.imag] for x in vec]
rule = frame_rule(q, k, j, vectors)
print(f"random frame rule (k={k}, prefix depth j={j}):")
print(f"  terminating-path violations: {len(evaluate_condition(rule, 'P-iii'))}")

# Patt's reversible rule flips the second cell exactly in the 0?10 context.
# It is not frame-shaped over any prefix depth, yet reversibility makes
# every ring evolution a permutation.
patt = patt_rule()
print("\nreversible size-4 rule:")
for n in (4, 5, 6):
    f = global_matrix(patt, n)
    print(f"  N={n}: permutation matrix = {is_permutation_matrix(f)}")
print(f"  graph verdict: unitary = {check_periodic(patt).unitary}")

# Quantize: replace output basis vectors by the columns of a unitary.
th = rng.uniform(0, 2 * np.pi)
rotation = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
rotated = quantize(patt, rotation)
print(f"\nquantized by a rotation of angle {th:.3f}:")
print("  sample amplitude vector |0110>> =", np.round(rotated.vector('0110'), 4))
print(f"  graph verdict: unitary = {check_periodic(rotated).unitary}")
print(f"  ring defect at N=5: {unitarity_defect(global_matrix(rotated, 5)):.2e}")
