"""Exact transfer-matrix computations over a chain.

The signed sum S = f_1(Y_1)v_1 + ... + f_n(Y_n)v_n has characteristic function
<mu, U_1 A U_2 A ... A U_n 1> with U_j = diag(exp(2 pi i xi f_j(y) v_j)); its
lattice law (integer weights) comes from a forward dynamic program over
(step, state, partial sum).  Both are phrased over a per-step per-state
contribution table c[j, y], which also serves walk-generated sign sets whose
blocks contribute state-dependent integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chains import MarkovChain, SignSystem, WeightSystem
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvalidDistribution,
    NonIntegerWeights,
    NotPrime,
    OutOfRange,
    PreconditionViolated,
    SmallballError,
)

DP_BUDGET = 10**9  # cells = n_states * n_steps * lattice size
RATIONAL_BUDGET = 10**6
MODULUS_SLACK = 1e-12


@dataclass(frozen=True)
class CharFnValue:
    """One evaluation of the sum's characteristic function."""

    re: float
    im: float

    def __post_init__(self):
        if self.modulus > 1.0 + MODULUS_SLACK:
            raise OutOfRange(
                f"characteristic function has modulus {self.modulus!r} > 1"
            )

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


@dataclass(frozen=True)
class SumDistribution:
    """Lattice law of the signed sum; masses[i] sits at lattice point offset+i."""

    offset: int
    masses: np.ndarray
    span: tuple[int, int]
    rational: dict[int, Fraction] | None = None

    def __post_init__(self):
        total = math.fsum(self.masses.tolist())
        if abs(total - 1.0) > 1e-12:
            raise InvalidDistribution(f"masses sum to {total!r}, expected 1")
        if self.masses.min() < 0:
            raise InvalidDistribution(f"negative mass {self.masses.min()!r}")
        if self.offset < self.span[0] or self.offset + self.masses.size - 1 > self.span[1]:
            raise InvalidDistribution("support exceeds the declared span")

    def support(self) -> np.ndarray:
        return self.offset + np.arange(self.masses.size)

    def probability_at(self, s: int) -> float:
        i = int(s) - self.offset
        if 0 <= i < self.masses.size:
            return float(self.masses[i])
        return 0.0

    def max_point_mass(self) -> tuple[int, float]:
        i = int(np.argmax(self.masses))
        return self.offset + i, float(self.masses[i])


def sign_contributions(signs: SignSystem, weights: WeightSystem) -> np.ndarray:
    """c[j, y] = f_j(y) * v_j for scalar weight systems."""
    if weights.dimension != 1:
        raise DimensionMismatch(
            f"transfer computations need scalar weights, got dimension {weights.dimension}"
        )
    if signs.n_steps != weights.n_weights:
        raise DimensionMismatch(
            f"{signs.n_steps} sign functions vs {weights.n_weights} weights"
        )
    if signs.n_steps == 0:
        return np.zeros((0, 1))
    return signs.functions.astype(float) * weights.scalars[:, None]


def char_fn_values(chain: MarkovChain, contribs: np.ndarray, xis) -> np.ndarray:
    """Characteristic function at each xi, vectorized: one matrix sweep per step."""
    xis = np.atleast_1d(np.asarray(xis, dtype=float))
    n = contribs.shape[0]
    if n == 0:
        return np.ones(xis.size, dtype=complex)
    if contribs.shape[1] != chain.n_states:
        raise DimensionMismatch(
            f"contribution table covers {contribs.shape[1]} states, chain has {chain.n_states}"
        )
    phases = np.exp(2j * np.pi * xis[:, None, None] * contribs[None, :, :])
    w = phases[:, n - 1, :].copy()
    at = chain.transition.T
    for j in range(n - 2, -1, -1):
        w = phases[:, j, :] * (w @ at)
    return w @ chain.stationary


def char_fn(chain: MarkovChain, signs: SignSystem, weights: WeightSystem,
            xi: float) -> CharFnValue:
    """E[exp(2 pi i xi S)] computed exactly with n-1 matrix-vector products."""
    val = char_fn_values(chain, sign_contributions(signs, weights), xi)[0]
    return CharFnValue(re=float(val.real), im=float(val.imag))


def _integer_table(contribs: np.ndarray) -> np.ndarray:
    table = np.asarray(contribs)
    rounded = np.round(table)
    if not np.all(table == rounded):
        bad = np.argwhere(table != rounded)[0]
        raise NonIntegerWeights(
            f"contribution at step {bad[0]}, state {bad[1]} is {table[tuple(bad)]!r}"
        )
    return rounded.astype(np.int64)


def distribution_from_contributions(chain: MarkovChain, contribs,
                                    budget: int = DP_BUDGET,
                                    exact: bool = False) -> SumDistribution:
    """Forward DP over (step, state, partial sum) for integer contributions.

    Float masses by default; exact=True reruns the DP in rational arithmetic
    (exact in the binary values of the inputs) and attaches the result.
    """
    table = _integer_table(contribs)
    n, n_states = table.shape
    if n_states != chain.n_states:
        raise DimensionMismatch(
            f"contribution table covers {n_states} states, chain has {chain.n_states}"
        )
    if n == 0:
        raise PreconditionViolated("cannot build a distribution from zero steps")
    # the lattice must hold every intermediate partial sum, not just the final range
    pmin = np.cumsum(table.min(axis=1))
    pmax = np.cumsum(table.max(axis=1))
    glo = int(min(pmin.min(), 0))
    ghi = int(max(pmax.max(), 0))
    lo, hi = int(pmin[-1]), int(pmax[-1])
    size = ghi - glo + 1
    cells = n_states * n * size
    if cells > budget:
        raise BudgetExceeded(f"DP needs {cells} cells, budget is {budget}")

    a_t = chain.transition.T
    dp = np.zeros((n_states, size))
    for y in range(n_states):
        dp[y, int(table[0, y]) - glo] = chain.stationary[y]
    for j in range(1, n):
        mixed = a_t @ dp
        nxt = np.zeros_like(dp)
        for y in range(n_states):
            c = int(table[j, y])
            if c >= 0:
                nxt[y, c:] = mixed[y, : size - c]
            elif c < 0:
                nxt[y, : size + c] = mixed[y, -c:]
        dp = nxt
    masses = dp.sum(axis=0)

    rational = None
    if exact:
        if cells > RATIONAL_BUDGET:
            raise BudgetExceeded(
                f"rational DP needs {cells} cells, budget is {RATIONAL_BUDGET}"
            )
        rational = _rational_dp(chain, table)
        masses = np.zeros(size)
        for s, frac in rational.items():
            masses[s - glo] = float(frac)

    first = int(np.argmax(masses > 0))
    last = size - 1 - int(np.argmax(masses[::-1] > 0))
    trimmed = masses[first:last + 1].copy()
    trimmed.setflags(write=False)
    return SumDistribution(offset=glo + first, masses=trimmed, span=(lo, hi),
                           rational=rational)


def _rational_dp(chain, table):
    n, n_states = table.shape
    a = [[Fraction(x) for x in row] for row in chain.transition.tolist()]
    mu = [Fraction(x) for x in chain.stationary.tolist()]
    layer = [{int(table[0, y]): mu[y]} for y in range(n_states)]
    for j in range(1, n):
        nxt = [dict() for _ in range(n_states)]
        for y in range(n_states):
            row = layer[y]
            for y2 in range(n_states):
                p = a[y][y2]
                if p == 0:
                    continue
                c = int(table[j, y2])
                tgt = nxt[y2]
                for s, mass in row.items():
                    key = s + c
                    tgt[key] = tgt.get(key, Fraction(0)) + mass * p
        layer = nxt
    out: dict[int, Fraction] = {}
    for row in layer:
        for s, mass in row.items():
            out[s] = out.get(s, Fraction(0)) + mass
    return {s: m for s, m in sorted(out.items()) if m != 0}


def exact_sum_distribution(chain: MarkovChain, signs: SignSystem,
                           weights: WeightSystem, budget: int = DP_BUDGET,
                           exact: bool = False) -> SumDistribution:
    """Exact lattice law of f_1(Y_1)v_1 + ... + f_n(Y_n)v_n, integer scalar v."""
    contribs = sign_contributions(signs, weights)
    return distribution_from_contributions(chain, contribs, budget=budget, exact=exact)


def smallball_exact(dist: SumDistribution, x0: float, radius: float) -> float:
    """Mass of the closed window |s - x0| <= radius over the lattice law."""
    if radius < 0:
        raise OutOfRange(f"radius must be nonnegative, got {radius!r}")
    lo = math.ceil(x0 - radius)
    hi = math.floor(x0 + radius)
    i0 = max(lo - dist.offset, 0)
    i1 = min(hi - dist.offset, dist.masses.size - 1)
    if i1 < i0:
        return 0.0
    return math.fsum(dist.masses[i0:i1 + 1].tolist())


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def next_prime_above(bound: int) -> int:
    candidate = max(2, int(bound) + 1)
    while not _is_prime(candidate):
        candidate += 1
    return candidate


def find_prime(weights: WeightSystem) -> int:
    """Smallest prime strictly greater than twice the largest weight.

    Fixing this choice makes the Z_p averages reproducible and keeps any
    single weight from wrapping around the modulus.
    """
    if weights.variant != "distinct-positive-integers":
        raise PreconditionViolated(
            f"find_prime needs distinct positive integers, got variant {weights.variant!r}"
        )
    return next_prime_above(2 * int(weights.scalars.max()))


def zp_fourier_average(chain: MarkovChain, signs: SignSystem,
                       weights: WeightSystem, p: int) -> float:
    """(1/p) sum over xi in Z_p of |E[exp(2 pi i xi S / p)]|."""
    _check_prime_for(weights, p)
    contribs = sign_contributions(signs, weights)
    vals = char_fn_values(chain, contribs, np.arange(p) / p)
    return math.fsum(np.abs(vals).tolist()) / p


def mod_p_point_probability(chain: MarkovChain, signs: SignSystem,
                            weights: WeightSystem, p: int, x0: int) -> float:
    """Pr[S = x0 mod p] by exact Fourier inversion over Z_p."""
    _check_prime_for(weights, p)
    contribs = sign_contributions(signs, weights)
    vals = char_fn_values(chain, contribs, np.arange(p) / p)
    twist = np.exp(-2j * np.pi * np.arange(p) * (int(x0) % p) / p)
    terms = twist * vals
    prob = math.fsum(terms.real.tolist()) / p
    drift = abs(math.fsum(terms.imag.tolist()) / p)
    if drift > 1e-10:
        raise SmallballError(f"inversion left imaginary residue {drift!r}")
    return max(prob, 0.0)


def fold_mod(dist: SumDistribution, p: int) -> np.ndarray:
    """Exact residue-class masses of a lattice law; independent inversion oracle."""
    buckets = [[] for _ in range(p)]
    for i, m in enumerate(dist.masses.tolist()):
        buckets[(dist.offset + i) % p].append(m)
    return np.array([math.fsum(b) for b in buckets])


def _check_prime_for(weights: WeightSystem, p: int):
    if not _is_prime(int(p)):
        raise NotPrime(f"{p} is not prime")
    if weights.n_weights and p < np.abs(weights.scalars).max():
        raise PreconditionViolated(
            f"prime {p} is smaller than the largest weight magnitude "
            f"{np.abs(weights.scalars).max()!r}"
        )
