"""Seeded, versioned instance families.

Fitted constants record the family they were fitted over; the generators here
are deterministic in their seed so failures replay and refits are idempotent.
The version tag changes whenever a generator's output would change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chains import (
    MarkovChain,
    SignSystem,
    WeightSystem,
    make_sign_system,
    make_two_state_chain,
    make_weight_system,
    parity_labels,
    repeated_signs,
    spectral_lambda,
    validate_chain,
)
from .oracles import HolderInstance

FAMILY_VERSION = "v1"
DEFAULT_SEED = 20240513

HALF_UNIT_BUCKETS = (0.0, 0.2, 0.5, 0.8)
HALF_UNIT_N_RANGE = tuple(range(8, 17))
DIFF_N_GRID = (9, 16, 25, 36, 49)
DIFF_LAMBDAS = (0.0, 0.3, 0.6)
PRG_K_GRID = (2, 4)
PRG_N_GRID = (8, 12, 16)
COS_K_MAX = 100
COORD_D_RANGE = tuple(range(2, 65))
SIZE_N_RANGE = tuple(range(4, 4097))
TIGHTNESS_N_GRID = (64, 128, 256, 512, 1024)
TIGHTNESS_LAMBDAS = (0.0, 0.3, 0.6)


@dataclass(frozen=True)
class BoundInstance:
    """A chain + signs + weights + window, ready for a bound comparison."""

    instance_id: str
    chain: MarkovChain
    signs: SignSystem
    weights: WeightSystem
    lam: float
    x0: float
    radius: float


def random_reversible_chain(rng, n_states: int) -> MarkovChain:
    """Random walk on a random symmetric weight matrix; reversible by design."""
    s = rng.uniform(0.05, 1.0, size=(n_states, n_states))
    s = 0.5 * (s + s.T)
    rowsums = s.sum(axis=1)
    return validate_chain(s / rowsums[:, None], rowsums / rowsums.sum())


def random_stochastic_matrix(rng, n_states: int) -> np.ndarray:
    """Generic row-stochastic matrix, almost surely not reversible."""
    a = rng.uniform(0.05, 1.0, size=(n_states, n_states))
    return a / a.sum(axis=1, keepdims=True)


def paired_reversible_chain(rng, n_pairs: int, lam_target: float,
                            wobble: float = 0.049):
    """A reversible chain whose lambda lies within `wobble` of lam_target and
    whose stationary law gives equal mass to paired states, so that pair-
    antisymmetric sign functions are balanced to machine precision.

    Blend of the averaging operator (lambda 0), the pair-swap permutation
    (lambda 1) and a random pair-symmetric chain (norm <= 1 perturbation).
    """
    n = 2 * n_pairs
    perm = np.arange(n).reshape(-1, 2)[:, ::-1].ravel()  # swap within pairs
    s = rng.uniform(0.1, 1.0, size=(n, n))
    s = 0.5 * (s + s.T)
    s = 0.5 * (s + s[perm][:, perm])
    rowsums = s.sum(axis=1)
    rowsums = 0.5 * (rowsums + rowsums[perm])  # exact pair equality
    a0 = s / rowsums[:, None]
    mu = rowsums / rowsums.sum()
    mu = 0.5 * (mu + mu[perm])

    rho = rng.uniform(0.0, min(wobble, 1.0 - lam_target))
    e_mu = np.tile(mu, (n, 1))
    p = np.zeros((n, n))
    p[np.arange(n), perm] = 1.0
    a = (1.0 - lam_target - rho) * e_mu + lam_target * p + rho * a0
    return validate_chain(a, mu)


def pair_antisymmetric_signs(rng, chain: MarkovChain, n_steps: int) -> SignSystem:
    """Random signs flipping across each state pair; exactly balanced."""
    n_pairs = chain.n_states // 2
    r = rng.choice([-1, 1], size=(n_steps, n_pairs))
    functions = np.repeat(r, 2, axis=1)
    functions[:, 1::2] *= -1
    return make_sign_system(functions, chain.stationary, balanced=True)


# ---------------------------------------------------------------------------
# constant-fitting / acceptance families
# ---------------------------------------------------------------------------


def half_unit_family(seed: int = DEFAULT_SEED) -> list[BoundInstance]:
    """Window probabilities vs C/((1-lambda) sqrt(n)): paired reversible chains
    with lambda near each bucket, all-ones weights, closed window of radius 1."""
    rng = np.random.default_rng(seed)
    out = []
    for bucket in HALF_UNIT_BUCKETS:
        for n in HALF_UNIT_N_RANGE:
            for n_pairs in (1, 2):
                chain = paired_reversible_chain(rng, n_pairs, bucket)
                lam = spectral_lambda(chain)
                signs = pair_antisymmetric_signs(rng, chain, n)
                weights = make_weight_system(np.ones(n), "at-least-unit")
                for x0 in (0.0, 1.0):
                    out.append(BoundInstance(
                        instance_id=f"halfunit-b{bucket}-n{n}-N{2 * n_pairs}-x{int(x0)}",
                        chain=chain, signs=signs, weights=weights,
                        lam=lam, x0=x0, radius=1.0))
    return out


HALF_UNIT_FAMILY_DESC = (
    f"half-unit-{FAMILY_VERSION}: paired reversible chains N in (2,4), lambda buckets "
    f"{HALF_UNIT_BUCKETS} within 0.05, n in 8..16, all-ones weights, closed window "
    f"R=1 at x0 in (0,1), seed {DEFAULT_SEED}"
)


def diff_instances() -> list[dict]:
    """Distinct-integer instances v = (1..n) on two-state chains; deterministic."""
    out = []
    for lam in DIFF_LAMBDAS:
        chain = make_two_state_chain(lam)
        for n in DIFF_N_GRID:
            signs = repeated_signs(parity_labels(2), n, chain.stationary,
                                   balanced=True)
            weights = make_weight_system(np.arange(1, n + 1),
                                         "distinct-positive-integers")
            out.append({"instance_id": f"diff-l{lam}-n{n}", "chain": chain,
                        "signs": signs, "weights": weights, "lam": lam, "n": n})
    return out


DIFF_FAMILY_DESC = (
    f"diff-{FAMILY_VERSION}: two-state chains lambda in {DIFF_LAMBDAS}, "
    f"weights 1..n for n in {DIFF_N_GRID}, max point probability"
)

ZP_FAMILY_DESC = (
    f"zp-{FAMILY_VERSION}: two-state chains lambda in {DIFF_LAMBDAS}, "
    f"weights 1..n for n in {DIFF_N_GRID}, mod-p averaged transfer product "
    f"at the fixed smallest prime above twice the largest weight"
)


def esseen_family(seed: int, count: int) -> list[BoundInstance]:
    """Random desk-scale integer instances for Esseen / Z_p domination checks."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n_states = int(rng.integers(2, 5))
        chain = random_reversible_chain(rng, n_states)
        n = int(rng.integers(4, 11))
        signs = make_sign_system(rng.choice([-1, 1], size=(n, n_states)),
                                 chain.stationary)
        weights = make_weight_system(rng.integers(1, 9, size=n).astype(float))
        x0 = float(rng.integers(-3, 4))
        radius = float(rng.choice([0.0, 1.0, 2.0]))
        out.append(BoundInstance(
            instance_id=f"esseen-{i:03d}", chain=chain, signs=signs,
            weights=weights, lam=spectral_lambda(chain), x0=x0, radius=radius))
    return out


ESSEEN_SEED = 20240701
ESSEEN_EXTRA_SEED = 20240702
ESSEEN_COUNT = 200
ESSEEN_FAMILY_DESC = (
    f"esseen-{FAMILY_VERSION}: random reversible chains N in 2..4, n in 4..10, "
    f"integer weights 1..8, x0 in -3..3, R in (0,1,2); "
    f"{ESSEEN_COUNT} instances each from seeds {ESSEEN_SEED} and {ESSEEN_EXTRA_SEED}"
)


def oracle_family(seed: int, count: int) -> list[dict]:
    """Small instances where full path enumeration is affordable."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n_states = int(rng.integers(2, 5))
        chain = random_reversible_chain(rng, n_states)
        n = int(rng.integers(2, 9))
        signs = make_sign_system(rng.choice([-1, 1], size=(n, n_states)),
                                 chain.stationary)
        weights = make_weight_system(rng.integers(1, 6, size=n).astype(float))
        xis = rng.uniform(-2.0, 2.0, size=2)
        out.append({"instance_id": f"oracle-{i:03d}", "chain": chain,
                    "signs": signs, "weights": weights, "xis": xis})
    return out


def holder_family(seed: int, count: int) -> list[HolderInstance]:
    """Splitting-inequality instances: chain-derived T_j and random bounded diagonals."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n_states = int(rng.integers(2, 7))
        chain = random_reversible_chain(rng, n_states)
        lam = spectral_lambda(chain)
        t = chain.transition - (1.0 - lam) * np.tile(chain.stationary, (n_states, 1))
        k = int(rng.integers(1, 7))
        us = []
        for _ in range(k + 1):
            scale = rng.uniform(0.5, 1.0) if rng.random() < 0.3 else 1.0
            us.append(scale * np.exp(2j * np.pi * rng.uniform(size=n_states)))
        out.append(HolderInstance(mu=chain.stationary, lam=lam,
                                  ts=(t,) * k, us=tuple(us)))
    return out


def identity_inputs(seed: int, count: int) -> list[dict]:
    """Random (mu, u, R, T) tuples for the averaging-operator identities."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n_states = int(rng.integers(2, 9))
        mu = rng.dirichlet(np.ones(n_states))
        k = int(rng.integers(1, 6))
        us = [np.exp(2j * np.pi * rng.uniform(size=n_states))
              * rng.uniform(0.5, 1.0, size=n_states) for _ in range(k + 1)]
        r_mats = [rng.normal(size=(n_states, n_states)) for _ in range(k)]
        t_mats = [rng.normal(size=(n_states, n_states)) for _ in range(k)]
        out.append({"mu": mu, "us": us, "r_mats": r_mats, "t_mats": t_mats})
    return out


def prg_instances() -> list[dict]:
    """Expander-walk grid for the PRG bound; deterministic."""
    return [{"instance_id": f"prg-k{k}-n{n}", "k": k, "n": n}
            for k in PRG_K_GRID for n in PRG_N_GRID]


PRG_FAMILY_DESC = (
    f"prg-{FAMILY_VERSION}: MGG degree-8 walks, k in {PRG_K_GRID}, "
    f"n in {PRG_N_GRID}, all-ones weights, x0=0, R=1, exact enumeration"
)

COS_FAMILY_DESC = (
    f"cos-{FAMILY_VERSION}: integral of |cos(2 pi xi)|^k over [-1,1] times "
    f"sqrt(k), k in 1..{COS_K_MAX}"
)

COORD_FAMILY_DESC = (
    f"coord-{FAMILY_VERSION}: reciprocal of median(|v_1|) sqrt(d) for d in "
    f"{COORD_D_RANGE[0]}..{COORD_D_RANGE[-1]}"
)

SIZE_FAMILY_DESC = (
    f"size-{FAMILY_VERSION}: (k + 3 (ceil(n/k) - 1)) / sqrt(n) with k the even-"
    f"rounded-up sqrt(n), n in {SIZE_N_RANGE[0]}..{SIZE_N_RANGE[-1]}"
)


def tightness_instances() -> list[dict]:
    """Two-state chains, all-ones weights, the long-n grid; deterministic."""
    out = []
    for lam in TIGHTNESS_LAMBDAS:
        chain = make_two_state_chain(lam)
        for n in TIGHTNESS_N_GRID:
            out.append({"instance_id": f"tight-l{lam}-n{n}", "chain": chain,
                        "lam": lam, "n": n})
    return out
