"""Brute-force and algebraic oracles for the inequalities used in the proofs.

Everything here is deliberately independent of the transfer engine: the
characteristic function and the sum's law are recomputed by exhaustive path
enumeration, and the splitting/averaging inequalities are evaluated on both
sides directly from their definitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import MarkovChain, SignSystem, WeightSystem
from .errors import BudgetExceeded, HypothesisViolated, PreconditionViolated
from .transfer import CharFnValue, sign_contributions

PATH_BUDGET = 10**7
HOLDER_K_BUDGET = 16
SWITCHING_N_BUDGET = 13


# ---------------------------------------------------------------------------
# L_p(mu) norm utilities
# ---------------------------------------------------------------------------


def lp_norm(v, mu, p) -> float:
    """||v||_{L_p(mu)}; p = inf is the essential sup over the support of mu."""
    v = np.asarray(v)
    mu = np.asarray(mu, dtype=float)
    if p == np.inf or p == "inf":
        support = mu > 0
        return float(np.max(np.abs(v[support]))) if support.any() else 0.0
    return float(np.sum(np.abs(v) ** p * mu) ** (1.0 / p))


def operator_norm_l2mu(m, mu) -> float:
    """||M||_{L2(mu)->L2(mu)} = largest singular value of D^1/2 M D^-1/2."""
    mu = np.asarray(mu, dtype=float)
    root = np.sqrt(mu)
    return float(np.linalg.norm(np.asarray(m) * (root[:, None] / root[None, :]), ord=2))


def averaging_operator(mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    return np.tile(mu, (mu.size, 1))


@dataclass(frozen=True)
class MuNormContext:
    """Norm utilities bound to one stationary law."""

    mu: np.ndarray

    def norm(self, v, p) -> float:
        return lp_norm(v, self.mu, p)

    def operator_norm(self, m) -> float:
        return operator_norm_l2mu(m, self.mu)

    def averaging_operator(self) -> np.ndarray:
        return averaging_operator(self.mu)


# ---------------------------------------------------------------------------
# exhaustive path enumeration
# ---------------------------------------------------------------------------


def _all_paths(n_states: int, n_steps: int, budget: int) -> np.ndarray:
    count = n_states**n_steps
    if count > budget:
        raise BudgetExceeded(f"{count} paths exceed the budget of {budget}")
    return np.indices((n_states,) * n_steps).reshape(n_steps, -1).T


def _path_measure(chain: MarkovChain, paths: np.ndarray) -> np.ndarray:
    w = chain.stationary[paths[:, 0]].copy()
    for i in range(1, paths.shape[1]):
        w *= chain.transition[paths[:, i - 1], paths[:, i]]
    return w


def brute_force_char_fn(chain: MarkovChain, signs: SignSystem,
                        weights: WeightSystem, xi: float,
                        budget: int = PATH_BUDGET) -> CharFnValue:
    """Characteristic function summed over every state path individually."""
    contribs = sign_contributions(signs, weights)
    n = contribs.shape[0]
    if n == 0:
        return CharFnValue(re=1.0, im=0.0)
    paths = _all_paths(chain.n_states, n, budget)
    w = _path_measure(chain, paths)
    sums = np.zeros(paths.shape[0])
    for j in range(n):
        sums += contribs[j, paths[:, j]]
    vals = w * np.exp(2j * np.pi * xi * sums)
    return CharFnValue(re=math.fsum(vals.real.tolist()),
                       im=math.fsum(vals.imag.tolist()))


def brute_force_distribution(chain: MarkovChain, signs: SignSystem,
                             weights: WeightSystem,
                             budget: int = PATH_BUDGET) -> dict[int, float]:
    """Lattice law by path enumeration: {sum value: probability}."""
    contribs = np.rint(sign_contributions(signs, weights)).astype(np.int64)
    n = contribs.shape[0]
    paths = _all_paths(chain.n_states, n, budget)
    w = _path_measure(chain, paths)
    sums = np.zeros(paths.shape[0], dtype=np.int64)
    for j in range(n):
        sums += contribs[j, paths[:, j]]
    out: dict[int, list] = {}
    for s, mass in zip(sums.tolist(), w.tolist()):
        out.setdefault(s, []).append(mass)
    return {s: math.fsum(masses) for s, masses in sorted(out.items())}


# ---------------------------------------------------------------------------
# the alternating-product splitting inequality and its supporting identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderInstance:
    """One instance of the alternating-product splitting inequality."""

    mu: np.ndarray
    lam: float
    ts: tuple  # k matrices, real or complex
    us: tuple  # k+1 vectors with L_inf(mu) norm <= 1

    def __post_init__(self):
        if len(self.us) != len(self.ts) + 1:
            raise PreconditionViolated(
                f"need k+1 diagonal vectors for k = {len(self.ts)} matrices"
            )
        for i, u in enumerate(self.us):
            norm = lp_norm(u, self.mu, np.inf)
            if norm > 1.0 + 1e-12:
                raise PreconditionViolated(f"||u_{i}||_inf(mu) = {norm!r} > 1")

    @property
    def k(self) -> int:
        return len(self.ts)


def t_indices(s) -> list[int]:
    """Indices i in 1..k+1 with padded (0,s,0) zero at both i-1 and i."""
    padded = [0] + list(s) + [0]
    return [i for i in range(1, len(s) + 2) if padded[i] == 0 and padded[i - 1] == 0]


def t_indices_prose(s) -> list[int]:
    """Same set via the edge-cased prose definition; must agree with t_indices."""
    k = len(s)
    out = []
    for i in range(1, k + 2):
        if i == 1:
            ok = k == 0 or s[0] == 0
        elif i == k + 1:
            ok = s[k - 1] == 0
        else:
            ok = s[i - 1] == 0 and s[i - 2] == 0
        if ok:
            out.append(i)
    return out


def extraction_indices(s) -> list[int]:
    """The provably extractable subset: t_indices with the left edge dropped.

    A diagonal factor turns into its mean only when averaging operators flank
    it on both sides; the leftmost diagonal is applied last, so even when
    s_1 = 0 it contributes its L1(mu) norm (at most 1 here), not its mean.
    Counterexample to the full t_indices set: k=1, T=0, lam=0, mu uniform,
    u_1 = (1,-1), u_2 = 1 gives lhs 1 but a mean factor of 0.
    """
    padded = [1] + list(s) + [0]
    return [i for i in range(1, len(s) + 2) if padded[i] == 0 and padded[i - 1] == 0]


def holder_lhs_rhs(inst: HolderInstance) -> tuple[float, float]:
    """Both sides of the splitting inequality, each evaluated from scratch.

    The right-hand side extracts mean factors over extraction_indices; the
    interior indices it shares with t_indices are the only ones the switching
    arguments downstream rely on.
    """
    if inst.k > HOLDER_K_BUDGET:
        raise BudgetExceeded(f"k = {inst.k} exceeds the enumeration budget")
    e_mu = averaging_operator(inst.mu)
    w = np.asarray(inst.us[inst.k], dtype=complex)
    for j in range(inst.k - 1, -1, -1):
        block = np.asarray(inst.ts[j], dtype=complex) + (1.0 - inst.lam) * e_mu
        w = np.asarray(inst.us[j], dtype=complex) * (block @ w)
    lhs = lp_norm(w, inst.mu, 1)

    t_norms = [operator_norm_l2mu(t, inst.mu) for t in inst.ts]
    u_dots = [abs(np.dot(np.asarray(u, dtype=complex), inst.mu)) for u in inst.us]
    terms = []
    for code in range(2**inst.k):
        s = [(code >> j) & 1 for j in range(inst.k)]
        factor = 1.0
        for j, bit in enumerate(s):
            factor *= t_norms[j] if bit else (1.0 - inst.lam)
        for i in extraction_indices(s):
            factor *= u_dots[i - 1]
        terms.append(factor)
    return lhs, math.fsum(terms)


@dataclass(frozen=True)
class IdentityReport:
    """Max violations of the three averaging-operator facts on one input set."""

    averaging_sandwich: float   # E_mu diag(u) E_mu = <u, mu> E_mu, entrywise
    l1_product: float           # ||R_1 E_mu ... R_k 1||_1 <= prod ||R_i 1||_1
    diagonal_contraction: float  # ||(prod U_j T_j) U_{k+1} 1||_1 <= prod ||T_j||_2
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return max(self.averaging_sandwich, self.l1_product,
                   self.diagonal_contraction) <= self.tol


def check_averaging_identities(mu, us, r_mats, t_mats) -> IdentityReport:
    """Evaluate the three identities/inequalities directly on the given inputs.

    us: k+1 vectors (entries of modulus <= 1; us[0] also drives the sandwich
    identity), r_mats: matrices for the L1 product bound, t_mats: k matrices
    for the diagonal contraction.
    """
    mu = np.asarray(mu, dtype=float)
    e_mu = averaging_operator(mu)

    u0 = np.asarray(us[0], dtype=complex)
    lhs = e_mu @ np.diag(u0) @ e_mu
    rhs = np.dot(u0, mu) * e_mu
    sandwich = float(np.max(np.abs(lhs - rhs)))

    w = np.asarray(r_mats[-1], dtype=float) @ np.ones(mu.size)
    bound = lp_norm(w, mu, 1)
    for r in reversed(r_mats[:-1]):
        r = np.asarray(r, dtype=float)
        w = r @ (e_mu @ w)
        bound *= lp_norm(r @ np.ones(mu.size), mu, 1)
    l1_product = max(0.0, lp_norm(w, mu, 1) - bound)

    for i, u in enumerate(us):
        if lp_norm(u, mu, np.inf) > 1.0 + 1e-12:
            raise PreconditionViolated(f"||u_{i}||_inf(mu) > 1")
    w = np.asarray(us[len(t_mats)], dtype=complex).copy()
    bound = 1.0
    for j in range(len(t_mats) - 1, -1, -1):
        t = np.asarray(t_mats[j], dtype=complex)
        w = np.asarray(us[j], dtype=complex) * (t @ w)
        bound *= operator_norm_l2mu(t, mu)
    contraction = max(0.0, lp_norm(w, mu, 1) - bound)

    return IdentityReport(averaging_sandwich=sandwich, l1_product=l1_product,
                          diagonal_contraction=contraction)


# ---------------------------------------------------------------------------
# switching-sequence domination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SwitchingReport:
    """Exact switching-count law versus its binomial minorant."""

    n: int
    lam: float
    r_plus_one_pmf: np.ndarray     # index t-1 holds P[r(s)+1 = t]
    minorant_pmf: np.ndarray       # law of B(floor(n/4)-1, (1-lam)^2) + 1
    dominates: bool
    worst_margin: float            # min over t of P[r+1 >= t] - P[r' >= t]
    inv_sqrt_moment: float         # E[(r(s)+1)^(-1/2)]
    jensen_bound: float            # sqrt(E[1/r'])
    negative_moment_bound: float | None  # 1/(m p) when m >= 1, else None

    @property
    def moment_chain_holds(self) -> bool:
        ok = self.inv_sqrt_moment <= self.jensen_bound + 1e-12
        if self.negative_moment_bound is not None:
            ok = ok and self.jensen_bound <= math.sqrt(self.negative_moment_bound) + 1e-12
        return ok


def _survival(pmf: np.ndarray) -> np.ndarray:
    return np.concatenate([np.cumsum(pmf[::-1])[::-1], [0.0]])


def switching_stats(n: int, lam: float, unit_mask=None) -> SwitchingReport:
    """Exhaustive law of r(s)+1 over s in {0,1}^(n-1) and its binomial minorant.

    r(s) counts adjacent zero pairs s_j = s_{j+1} = 0 at positions whose weight
    has length >= 1 (unit_mask, default all); the minorant adds 1 to a binomial
    with floor(n/4)-1 trials and success probability (1-lam)^2.
    """
    if n < 2:
        raise PreconditionViolated(f"need n >= 2 switching positions, got n = {n}")
    if n > SWITCHING_N_BUDGET:
        raise BudgetExceeded(f"n = {n} exceeds the exhaustive budget {SWITCHING_N_BUDGET}")
    if not 0.0 <= lam <= 1.0:
        raise PreconditionViolated(f"lambda must lie in [0,1], got {lam!r}")
    if unit_mask is None:
        mask = np.ones(n, dtype=bool)
    else:
        mask = np.asarray(unit_mask, dtype=bool)
        if mask.shape != (n,):
            raise PreconditionViolated(f"unit_mask must have length {n}")
    if np.count_nonzero(mask) < n / 2:
        raise HypothesisViolated(
            f"only {np.count_nonzero(mask)} of {n} weights have length >= 1"
        )

    m = n - 1
    codes = np.arange(2**m, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(m)) & 1  # (2^m, m)
    ones = bits.sum(axis=1)
    probs = np.power(lam, ones) * np.power(1.0 - lam, m - ones)
    zero_pairs = (bits[:, :-1] == 0) & (bits[:, 1:] == 0)  # positions j = 0..n-3
    r = (zero_pairs & mask[: n - 2][None, :]).sum(axis=1)
    pmf = np.bincount(r + 1, weights=probs, minlength=n)[1:]

    trials = max(0, n // 4 - 1)
    p2 = (1.0 - lam) ** 2
    minorant = np.zeros(trials + 1)
    for i in range(trials + 1):
        minorant[i] = math.comb(trials, i) * p2**i * (1.0 - p2) ** (trials - i)
    # minorant[i] is P[r' = i+1]

    surv_r = _survival(pmf)
    surv_m = _survival(minorant)
    width = max(surv_r.size, surv_m.size)
    surv_r = np.pad(surv_r, (0, width - surv_r.size))
    surv_m = np.pad(surv_m, (0, width - surv_m.size))
    margins = surv_r - surv_m
    worst = float(margins.min())

    values = np.arange(1, pmf.size + 1, dtype=float)
    inv_sqrt = float(np.dot(pmf, values**-0.5))
    mvals = np.arange(1, minorant.size + 1, dtype=float)
    jensen = math.sqrt(float(np.dot(minorant, 1.0 / mvals)))
    neg_bound = 1.0 / (trials * p2) if trials >= 1 and p2 > 0 else None

    return SwitchingReport(
        n=n, lam=lam, r_plus_one_pmf=pmf, minorant_pmf=minorant,
        dominates=bool(worst >= -1e-12), worst_margin=worst,
        inv_sqrt_moment=inv_sqrt, jensen_bound=jensen,
        negative_moment_bound=neg_bound,
    )
