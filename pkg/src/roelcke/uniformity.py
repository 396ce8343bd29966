"""Entourage systems on the automorphism group, as exact predicates.

Three indexed families, all parametrized by a partition and a positive
rational tolerance:

* u_deviation  — how far an automorphism is from preserving every cell
  setwise (max over cells of the mass of A_i symmetric-difference its
  preimage); membership in the one-sided entourage is deviation < epsilon,
  strictly.
* w_distance   — max-entry distance between the joint distributions of two
  automorphisms; the pseudometric induced by the Markov compactification.
* roelcke_related — the two-sided relation: T factors exactly as P*S*Q with
  both outer factors of small deviation.

Deviations and distances are returned as exact values; all memberships are
strict comparisons.  A constructive total-boundedness witness (a finite net
of automorphisms covering everything in w_distance) completes the module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from roelcke import density
from roelcke.markov import CouplingMatrix
from roelcke.space import Automorphism, Partition, compose, joint_counts


@dataclass(frozen=True)
class EntourageParams:
    """Indexing data (partition, epsilon) shared by all three families."""

    partition: Partition
    epsilon: Fraction

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def u_deviation(T: Automorphism, partition: Partition) -> Fraction:
    """max over cells of mu(A_i symmetric-difference T^{-1}A_i).

    Zero exactly when T maps every cell onto itself.
    """
    N = partition.space.atom_count
    if T.atom_count != N:
        raise ValueError("automorphism and partition live on different spaces")
    counts = [0] * partition.cell_count
    labels = partition.labels
    for x, y in enumerate(T.forward):
        i, j = labels[x] - 1, labels[y] - 1
        if i != j:
            # x is in A_i but not in T^{-1}A_i, and in T^{-1}A_j but not A_j.
            counts[i] += 1
            counts[j] += 1
    return Fraction(max(counts), N)


def w_distance(S: Automorphism, T: Automorphism, partition: Partition) -> Fraction:
    """Max-entry distance between the joint distributions of S and T.

    A pseudometric: distinct automorphisms that transport the partition
    identically are at distance zero.
    """
    N = partition.space.atom_count
    cs = joint_counts(S, partition)
    ct = joint_counts(T, partition)
    worst = max(
        abs(a - b) for ra, rb in zip(cs, ct) for a, b in zip(ra, rb)
    )
    return Fraction(worst, N)


def roelcke_related(
    S: Automorphism,
    T: Automorphism,
    P: Automorphism,
    Q: Automorphism,
    partition: Partition,
    epsilon: Fraction,
) -> bool:
    """Does (P, Q) witness the two-sided relation T = P*S*Q at level epsilon?

    Requires the product identity to hold atom-exactly and both outer
    factors to have deviation strictly below epsilon.
    """
    if compose(P, compose(S, Q)).forward != T.forward:
        return False
    return (
        u_deviation(P, partition) < epsilon
        and u_deviation(Q, partition) < epsilon
    )


class NetInfeasibleError(ValueError):
    """Raised when no coupling grid realizable on the atoms exists."""


def _enumerate_grid(
    row_rem: list[int], col_rem: list[int], step: int
) -> list[list[list[int]]]:
    """All matrices of nonnegative multiples of `step` with given margins."""
    n = len(row_rem)
    out: list[list[list[int]]] = []
    current: list[list[int]] = []

    def fill_row(i: int, cols: list[int]) -> None:
        if i == n:
            out.append([row[:] for row in current])
            return
        target = row_rem[i]
        row = [0] * n

        def fill_cell(j: int, left: int) -> None:
            if j == n - 1:
                if left <= cols[j] and left % step == 0:
                    row[j] = left
                    current.append(row[:])
                    saved = cols[:]
                    for jj in range(n):
                        cols[jj] -= row[jj]
                    fill_row(i + 1, cols)
                    cols[:] = saved
                    current.pop()
                return
            for v in range(0, min(left, cols[j]) + 1, step):
                row[j] = v
                fill_cell(j + 1, left - v)
            row[j] = 0

        fill_cell(0, target)

    fill_row(0, col_rem[:])
    return out


def precompactness_net(
    partition: Partition,
    epsilon: Fraction,
    atom_count: int,
    max_size: int = 100_000,
) -> list[Automorphism]:
    """A finite net of automorphisms covering the whole group in w_distance.

    Enumerates couplings on a coarse sub-grid of the transportation polytope
    (step chosen as the largest divisor of all cell sizes not exceeding
    epsilon*N, in atoms) and realizes each grid point exactly.  With two
    cells the grid provably covers every automorphism strictly within
    epsilon; for finer partitions coverage is checked, not guaranteed.
    """
    N = atom_count
    if partition.space.atom_count != N:
        raise NetInfeasibleError("partition size does not match atom count")
    sizes = list(partition.cell_sizes)
    g = 0
    for s in sizes:
        g = math.gcd(g, s)
    cap = max(1, math.floor(epsilon * N))
    step = max(d for d in range(1, cap + 1) if g % d == 0)

    grids = _enumerate_grid(sizes, sizes[:], step)
    if not grids:
        raise NetInfeasibleError(
            f"no coupling with margins {sizes} on step-{step} grid"
        )
    if len(grids) > max_size:
        raise NetInfeasibleError(
            f"grid has {len(grids)} points, above the cap {max_size}"
        )
    masses = partition.masses
    net = []
    for counts in grids:
        C = CouplingMatrix(
            entries=tuple(
                tuple(Fraction(c, N) for c in row) for row in counts
            ),
            row_marginals=masses,
            col_marginals=masses,
        )
        net.append(density.realize(C, partition, N))
    return net
