"""Matrix-coefficient functions K -> <Kf, g> and their certificates.

These coefficient functions are positive definite on the group, separate
distinct Markov operators, and are uniformly continuous for the two-sided
entourages; the three facts are certified here by, respectively, a Gram
spectral check, an exact entrywise scan, and an explicit modulus
inequality.  Spectral computations run in floating point with a documented
tolerance; everything else stays exact when the inputs are rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from roelcke.markov import MarkovMatrix
from roelcke.space import Automorphism, compose, inverse

#: Spectral slack for the positive-semidefiniteness certificate.
PSD_TOLERANCE = 1e-9

#: Slack for the uniform-continuity modulus inequality in float mode.
MODULUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ObservableVector:
    """One value per atom; inner products are weighted by the atom mass 1/N.

    Values may be exact rationals or floats; arithmetic follows the inputs.
    """

    values: tuple

    @property
    def atom_count(self) -> int:
        return len(self.values)

    def inner(self, other: "ObservableVector"):
        if self.atom_count != other.atom_count:
            raise ValueError("dimension mismatch")
        total = sum(a * b for a, b in zip(self.values, other.values))
        if isinstance(total, Fraction):
            return total / self.atom_count
        return total / self.atom_count

    @property
    def norm_sq(self):
        return self.inner(self)

    @property
    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq))

    def translate(self, g: Automorphism) -> "ObservableVector":
        """The composition with g^{-1}: value at g(x) is the value at x."""
        if g.atom_count != self.atom_count:
            raise ValueError("dimension mismatch")
        out = [None] * self.atom_count
        for x, y in enumerate(g.forward):
            out[y] = self.values[x]
        return ObservableVector(tuple(out))

    @classmethod
    def indicator(cls, atom_count: int, atoms: Sequence[int]) -> "ObservableVector":
        inside = set(atoms)
        return cls(tuple(Fraction(1) if x in inside else Fraction(0)
                         for x in range(atom_count)))


def matrix_coefficient(K: MarkovMatrix, f: ObservableVector, g: ObservableVector):
    """<Kf, g> with the mass-weighted inner product."""
    N = K.size
    if f.atom_count != N or g.atom_count != N:
        raise ValueError("dimension mismatch")
    kf = [sum(K.entries[y][x] * f.values[x] for x in range(N)) for y in range(N)]
    total = sum(a * b for a, b in zip(kf, g.values))
    if isinstance(total, Fraction):
        return total / N
    return total / N


def gram_psd_check(
    f: ObservableVector, elements: Sequence[Automorphism]
) -> tuple[float, bool]:
    """Minimum eigenvalue of the Gram matrix <U_{a^{-1}b} f, f>.

    Since the translations are unitary, the (a, b) entry equals the inner
    product of the b- and a-translates of f, so the matrix is a genuine
    Gram matrix and must be positive semidefinite up to spectral noise.
    """
    if not elements:
        raise ValueError("need at least one group element")
    N = f.atom_count
    vecs = np.array(
        [[float(v) for v in f.translate(g).values] for g in elements]
    )
    gram = vecs @ vecs.T / N
    min_eig = float(np.linalg.eigvalsh(gram)[0])
    return min_eig, min_eig >= -PSD_TOLERANCE


@dataclass(frozen=True)
class ModulusCheck:
    lhs: float
    rhs: float
    ok: bool


def roelcke_modulus_check(
    P: Automorphism,
    S: Automorphism,
    Q: Automorphism,
    f: ObservableVector,
) -> ModulusCheck:
    """Two-sided uniform continuity of the coefficient function of f.

    Compares |<U_{PSQ} f, f> - <U_S f, f>| against
    ||f|| * (||U_Q f - f|| + ||U_{P^{-1}} f - f||); Cauchy-Schwarz makes
    the bound hold for every input.
    """
    fv = np.array([float(v) for v in f.values])
    N = f.atom_count

    def translate(g: Automorphism, v: np.ndarray) -> np.ndarray:
        out = np.empty_like(v)
        out[np.array(g.forward)] = v
        return out

    def ip(a: np.ndarray, b: np.ndarray) -> float:
        return float(a @ b) / N

    t = compose(P, compose(S, Q))
    lhs = abs(ip(translate(t, fv), fv) - ip(translate(S, fv), fv))
    norm_f = math.sqrt(ip(fv, fv))
    dq = translate(Q, fv) - fv
    dp = translate(inverse(P), fv) - fv
    rhs = norm_f * (math.sqrt(ip(dq, dq)) + math.sqrt(ip(dp, dp)))
    return ModulusCheck(lhs=lhs, rhs=rhs, ok=lhs <= rhs + MODULUS_TOLERANCE)


def separate(
    K1: MarkovMatrix, K2: MarkovMatrix
) -> tuple[ObservableVector, ObservableVector]:
    """Indicator observables whose coefficient distinguishes K1 from K2.

    Scans for a coordinate where the matrices differ and returns the
    corresponding pair of atom indicators; coefficient functions therefore
    separate points of the Markov semigroup.
    """
    if K1.size != K2.size:
        raise ValueError("size mismatch")
    N = K1.size
    for y in range(N):
        for x in range(N):
            if K1.entries[y][x] != K2.entries[y][x]:
                f = ObservableVector.indicator(N, [x])
                g = ObservableVector.indicator(N, [y])
                return f, g
    raise ValueError("matrices are equal; nothing separates them")
