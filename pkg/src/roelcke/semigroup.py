"""Idempotent structure of the Markov matrix semigroup.

Covers: exact and float idempotency tests, block-averaging (conditional
expectation) idempotents, the two-sided order p <= q and the equivalence of
its one-sided conditions, least idempotents of singly generated closed
subsemigroups via averaged powers, conjugation by automorphisms, and the
classification of permutation-conjugation-invariant idempotents, which for
every size is exactly {identity, projection onto constants}.

Averaging runs in floating point with a stopping rule based on successive
window averages; the window average of powers K^{m+1}..K^{2m} converges
geometrically whenever K has a spectral gap and terminates exactly for
periodic K at window lengths divisible by the period.  Permutation matrices
also get an exact rational route through the period average.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from roelcke.markov import MarkovMatrix, product
from roelcke.space import Automorphism, Partition


def is_idempotent(K: MarkovMatrix) -> bool:
    """Exact test K*K = K."""
    return product(K, K).entries == K.entries


def idempotency_defect(A: np.ndarray) -> float:
    """Max-entry norm of A@A - A, for float-mode candidates."""
    return float(np.max(np.abs(A @ A - A)))


def block_average(partition: Partition) -> MarkovMatrix:
    """Averaging over the cells of a partition: a Markov idempotent.

    Entry (y, x) is 1/|cell| when x and y share a cell, else 0.  Singleton
    cells give the identity; a single cell gives the projection onto the
    constant vectors.
    """
    N = partition.space.atom_count
    sizes = partition.cell_sizes
    labels = partition.labels
    rows = [
        tuple(
            Fraction(1, sizes[labels[y] - 1]) if labels[y] == labels[x] else Fraction(0)
            for x in range(N)
        )
        for y in range(N)
    ]
    return MarkovMatrix(tuple(rows))


@dataclass(frozen=True)
class OrderCheck:
    pq_eq_p: bool
    qp_eq_p: bool

    @property
    def equivalent(self) -> bool:
        return self.pq_eq_p == self.qp_eq_p

    @property
    def below(self) -> bool:
        """p <= q in the idempotent order."""
        return self.pq_eq_p and self.qp_eq_p


def order_check(p: MarkovMatrix, q: MarkovMatrix) -> OrderCheck:
    """Exact one-sided absorption tests pq = p and qp = p.

    Both inputs must be idempotent; for Markov idempotents the two
    conditions always agree, which is what makes the order well defined.
    """
    if not is_idempotent(p):
        raise ValueError("first argument is not idempotent")
    if not is_idempotent(q):
        raise ValueError("second argument is not idempotent")
    return OrderCheck(
        pq_eq_p=product(p, q).entries == p.entries,
        qp_eq_p=product(q, p).entries == p.entries,
    )


def order_check_float(p: np.ndarray, q: np.ndarray, tol: float) -> OrderCheck:
    """Float-mode absorption tests with max-entry tolerance."""
    return OrderCheck(
        pq_eq_p=float(np.max(np.abs(p @ q - p))) < tol,
        qp_eq_p=float(np.max(np.abs(q @ p - p))) < tol,
    )


class CesaroConvergenceError(RuntimeError):
    def __init__(self, last_defect: float, iterations: int):
        self.last_defect = last_defect
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} powers "
            f"(last defect {last_defect:.3e}); slow mixing, not wrongness"
        )


@dataclass(frozen=True)
class IdempotentReport:
    """Detected limit idempotent of the averaged powers of one matrix."""

    matrix: np.ndarray
    idempotency_defect: float
    absorb_left: float  # max-entry norm of pK - p
    absorb_right: float  # max-entry norm of Kp - p
    classification: str  # identity | constants_projection | block_average | other
    iterations: int
    sampled_idempotent_powers: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "idempotency_defect": self.idempotency_defect,
            "absorb_left": self.absorb_left,
            "absorb_right": self.absorb_right,
            "classification": self.classification,
            "iterations": self.iterations,
            "sampled_idempotent_powers": list(self.sampled_idempotent_powers),
        }


def _classify(p: np.ndarray, tol: float) -> str:
    N = p.shape[0]
    if np.max(np.abs(p - np.eye(N))) < tol:
        return "identity"
    if np.max(np.abs(p - 1.0 / N)) < tol:
        return "constants_projection"
    # Block-average pattern: rows of equal atoms are identical, entries are
    # 0 or 1/(block size), blocks consistent.
    labels = [-1] * N
    next_label = 0
    for y in range(N):
        if labels[y] != -1:
            continue
        members = [x for x in range(N) if p[y, x] > tol]
        if not members:
            return "other"
        size = len(members)
        for x in members:
            if abs(p[y, x] - 1.0 / size) > tol or labels[x] != -1:
                return "other"
            labels[x] = next_label
        for a in members:
            for b in members:
                if abs(p[a, b] - 1.0 / size) > tol:
                    return "other"
        next_label += 1
    return "block_average"


def cesaro_idempotent(
    K: MarkovMatrix | np.ndarray,
    tol: float = 1e-8,
    max_iter: int = 10**5,
) -> IdempotentReport:
    """Least idempotent of the closed subsemigroup generated by K.

    Averages consecutive powers over doubling windows until two successive
    window averages agree to tol and the limit candidate is idempotent and
    absorbing to tol.  Records which sampled power indices were themselves
    near-idempotent; the detected limit must sit below all of them in the
    idempotent order (checked by the caller / the suite).
    """
    if isinstance(K, MarkovMatrix):
        A = np.array([[float(v) for v in row] for row in K.entries])
    else:
        A = np.asarray(K, dtype=float)

    power = A.copy()  # K^k
    cum = A.copy()  # sum of K^1..K^k
    k = 1
    m = 1
    cum_at_m = cum.copy()
    prev_window = None
    sampled: list[int] = []
    last_defect = float("inf")
    while 2 * m <= max_iter:
        while k < 2 * m:
            power = power @ A
            cum = cum + power
            k += 1
        if idempotency_defect(power) < tol:
            sampled.append(k)
        window = (cum - cum_at_m) / m
        if prev_window is not None:
            drift = float(np.max(np.abs(window - prev_window)))
            defect = idempotency_defect(window)
            left = float(np.max(np.abs(window @ A - window)))
            right = float(np.max(np.abs(A @ window - window)))
            last_defect = defect
            if drift < tol and defect < tol and left < tol and right < tol:
                return IdempotentReport(
                    matrix=window,
                    idempotency_defect=defect,
                    absorb_left=left,
                    absorb_right=right,
                    classification=_classify(window, max(tol, 1e-6)),
                    iterations=k,
                    sampled_idempotent_powers=tuple(sampled),
                )
        prev_window = window
        cum_at_m = cum.copy()
        m *= 2
    raise CesaroConvergenceError(last_defect, k)


def permutation_period_average(T: Automorphism) -> MarkovMatrix:
    """Exact rational idempotent limit for a permutation matrix.

    The powers are periodic with period the permutation order, so one
    period average is the exact limit: the block average over the orbit
    partition of T.
    """
    N = T.atom_count
    # Orbit partition of T.
    labels = [0] * N
    next_label = 1
    for x in range(N):
        if labels[x]:
            continue
        y = x
        while not labels[y]:
            labels[y] = next_label
            y = T.forward[y]
        next_label += 1
    from roelcke.space import AtomSpace, make_partition

    return block_average(make_partition(AtomSpace(N), labels))


def conjugate(K: MarkovMatrix, g: Automorphism) -> MarkovMatrix:
    """U_g K U_g^{-1}: relabels both indices of K by g."""
    N = K.size
    if g.atom_count != N:
        raise ValueError("size mismatch")
    rows = [[Fraction(0)] * N for _ in range(N)]
    fwd = g.forward
    for y in range(N):
        for x in range(N):
            rows[fwd[y]][fwd[x]] = K.entries[y][x]
    return MarkovMatrix(tuple(tuple(r) for r in rows))


def _pair_orbits(N: int) -> list[list[tuple[int, int]]]:
    """Orbits of index pairs under the transposition (0 1) and the N-cycle.

    These two generate the full symmetric group, so invariance under them
    is invariance under every permutation.
    """
    gens = []
    t = list(range(N))
    if N >= 2:
        t[0], t[1] = t[1], t[0]
    gens.append(t)
    gens.append([(x + 1) % N for x in range(N)])

    seen = [[False] * N for _ in range(N)]
    orbits = []
    for y0 in range(N):
        for x0 in range(N):
            if seen[y0][x0]:
                continue
            orbit = []
            stack = [(y0, x0)]
            seen[y0][x0] = True
            while stack:
                y, x = stack.pop()
                orbit.append((y, x))
                for g in gens:
                    ny, nx = g[y], g[x]
                    if not seen[ny][nx]:
                        seen[ny][nx] = True
                        stack.append((ny, nx))
            orbits.append(orbit)
    return orbits


def invariant_idempotent_classify(N: int) -> list[MarkovMatrix]:
    """All Markov idempotents fixed by conjugation with every permutation.

    Solves the commutant symbolically: invariance forces the matrix to be
    constant on index-pair orbits (diagonal and off-diagonal for N >= 2),
    then idempotency, stochasticity and nonnegativity cut the parameters
    down.  The result is exactly {identity, all-1/N} for every N >= 2.
    """
    if N > 6:
        raise ValueError("exhaustive/symbolic regime is N <= 6")
    orbits = _pair_orbits(N)
    vars_ = sympy.symbols(f"v0:{len(orbits)}", real=True)
    entry = [[None] * N for _ in range(N)]
    for v, orbit in zip(vars_, orbits):
        for y, x in orbit:
            entry[y][x] = v

    eqs = set()
    # One row-sum equation and one idempotency equation per orbit
    # representative; the orbit structure makes the rest redundant, but
    # adding them all is cheap and safe for small N.
    for y in range(N):
        eqs.add(sympy.Eq(sum(entry[y][x] for x in range(N)), 1))
        eqs.add(sympy.Eq(sum(entry[x][y] for x in range(N)), 1))
    for y in range(N):
        for x in range(N):
            eqs.add(
                sympy.Eq(
                    sum(entry[y][k] * entry[k][x] for k in range(N)),
                    entry[y][x],
                )
            )
    solutions = sympy.solve(list(eqs), list(vars_), dict=True)

    orbit_index = {}
    for idx, orbit in enumerate(orbits):
        for pair in orbit:
            orbit_index[pair] = idx

    out = []
    seen_entries = set()
    for sol in solutions:
        vals = [sympy.simplify(sol.get(v, v)) for v in vars_]
        if any(not val.is_number for val in vals):
            continue
        try:
            fracs = [Fraction(int(sympy.Rational(v).p), int(sympy.Rational(v).q))
                     for v in vals]
        except (TypeError, ValueError):
            continue
        if any(f < 0 for f in fracs):
            continue
        rows = tuple(
            tuple(fracs[orbit_index[(y, x)]] for x in range(N))
            for y in range(N)
        )
        if rows in seen_entries:
            continue
        seen_entries.add(rows)
        candidate = MarkovMatrix(rows)
        if is_idempotent(candidate):
            out.append(candidate)
    out.sort(key=lambda mat: mat.entries[0][0], reverse=True)
    return out
