"""Finite measure algebra: equal-mass atoms, partitions, and automorphisms.

The model is a space of N atoms, each of exact mass 1/N.  Automorphisms are
permutations of the atom indices; every measure-theoretic quantity is an
exact `fractions.Fraction`.  The permutation-matrix (Koopman) picture and
the partition-level joint distribution live here as well.

Convention used throughout the package: for an automorphism T and a cell A,
the preimage T^{-1}A is the set {x : T(x) in A}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from roelcke import markov


@dataclass(frozen=True)
class AtomSpace:
    """N atoms, each of measure 1/N; total measure exactly 1."""

    atom_count: int

    def __post_init__(self) -> None:
        if self.atom_count < 1:
            raise ValueError(f"atom_count must be >= 1, got {self.atom_count}")

    @property
    def atom_mass(self) -> Fraction:
        return Fraction(1, self.atom_count)


@dataclass(frozen=True)
class Partition:
    """A labeling of the atoms into cell_count nonempty cells.

    Labels are 1-based (values in 1..cell_count) to match the text
    serialization; cell i (0-based) collects the atoms with label i+1.
    Construct through :func:`make_partition`, which validates.
    """

    space: AtomSpace
    labels: tuple[int, ...]
    cell_count: int

    @cached_property
    def cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.cell_count)]
        for x, lab in enumerate(self.labels):
            out[lab - 1].append(x)
        return tuple(tuple(c) for c in out)

    @cached_property
    def cell_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    @cached_property
    def masses(self) -> tuple[Fraction, ...]:
        N = self.space.atom_count
        return tuple(Fraction(s, N) for s in self.cell_sizes)

    def cell_of(self, x: int) -> int:
        """0-based cell index of atom x."""
        return self.labels[x] - 1


def make_partition(space: AtomSpace, labels: Sequence[int]) -> Partition:
    """Validate a label array and build the partition it describes.

    Every label 1..max(labels) must occur at least once (no empty cells).
    """
    labels = tuple(labels)
    if len(labels) != space.atom_count:
        raise ValueError(
            f"labels has length {len(labels)}, expected {space.atom_count}"
        )
    n = max(labels)
    if min(labels) < 1:
        raise ValueError(f"labels must be >= 1, got {min(labels)}")
    seen = set(labels)
    for cell in range(1, n + 1):
        if cell not in seen:
            raise ValueError(f"cell {cell} is empty")
    return Partition(space=space, labels=labels, cell_count=n)


def trivial_partition(space: AtomSpace) -> Partition:
    """The one-cell partition."""
    return make_partition(space, [1] * space.atom_count)


def discrete_partition(space: AtomSpace) -> Partition:
    """The partition into singletons."""
    return make_partition(space, range(1, space.atom_count + 1))


@dataclass(frozen=True)
class Automorphism:
    """A measure-preserving automorphism: a permutation of atom indices."""

    forward: tuple[int, ...]

    def __post_init__(self) -> None:
        N = len(self.forward)
        seen = [False] * N
        for y in self.forward:
            if not 0 <= y < N or seen[y]:
                raise ValueError(f"forward is not a permutation of 0..{N - 1}")
            seen[y] = True

    @property
    def atom_count(self) -> int:
        return len(self.forward)

    def __call__(self, x: int) -> int:
        return self.forward[x]


def identity(atom_count: int) -> Automorphism:
    return Automorphism(tuple(range(atom_count)))


def compose(S: Automorphism, T: Automorphism) -> Automorphism:
    """The automorphism x -> S(T(x))."""
    if S.atom_count != T.atom_count:
        raise ValueError(
            f"size mismatch: {S.atom_count} vs {T.atom_count}"
        )
    t = T.forward
    s = S.forward
    return Automorphism(tuple(s[t[x]] for x in range(len(t))))


def inverse(T: Automorphism) -> Automorphism:
    inv = [0] * T.atom_count
    for x, y in enumerate(T.forward):
        inv[y] = x
    return Automorphism(tuple(inv))


def swap(atom_count: int, a: int, b: int) -> Automorphism:
    """The transposition of atoms a and b."""
    fwd = list(range(atom_count))
    fwd[a], fwd[b] = fwd[b], fwd[a]
    return Automorphism(tuple(fwd))


def koopman_matrix(T: Automorphism) -> markov.MarkovMatrix:
    """The permutation matrix U with U e_x = e_{T(x)}.

    Acting on observables, (Uf)(y) = f(T^{-1}(y)), so U represents
    composition with the inverse map.
    """
    return markov.MarkovMatrix.from_permutation(T.forward)


def joint_counts(T: Automorphism, partition: Partition) -> list[list[int]]:
    """Atom counts #{x in A_i : T(x) in A_j}, the unnormalized joint table."""
    n = partition.cell_count
    counts = [[0] * n for _ in range(n)]
    labels = partition.labels
    for x, y in enumerate(T.forward):
        counts[labels[x] - 1][labels[y] - 1] += 1
    return counts


def joint_matrix(T: Automorphism, partition: Partition) -> markov.CouplingMatrix:
    """Joint distribution of the partition under T.

    Entry (i, j) is the measure of A_i intersected with T^{-1}A_j, i.e.
    #{x in A_i : T(x) in A_j} / N.  Marginals are the cell masses.
    """
    if T.atom_count != partition.space.atom_count:
        raise ValueError("automorphism and partition live on different spaces")
    N = partition.space.atom_count
    counts = joint_counts(T, partition)
    entries = tuple(
        tuple(Fraction(c, N) for c in row) for row in counts
    )
    masses = partition.masses
    return markov.CouplingMatrix(
        entries=entries, row_marginals=masses, col_marginals=masses
    )
