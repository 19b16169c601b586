"""Finite reversible Markov chains that drive the random signs.

A chain is a row-stochastic matrix together with its stationary law.  The
spectral parameter lambda is the operator norm of A - E_mu acting on L2(mu),
where E_mu is the rank-one averaging operator; lambda = 0 means the steps are
independent and 1 - lambda is the spectral gap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatch,
    HypothesisViolated,
    InvalidDistribution,
    NoUniqueStationary,
    NotReversible,
    NotStationary,
    NotStochastic,
    OutOfRange,
    PreconditionViolated,
    ZeroStationaryMass,
)

# Structural checks tolerate decimal-rounded user input; identities that we
# compute ourselves are held to the tighter tolerance.
STRUCTURAL_TOL = 1e-9
DERIVED_TOL = 1e-12


@dataclass(frozen=True)
class MarkovChain:
    """A validated stationary reversible chain on states 0..n_states-1."""

    n_states: int
    transition: np.ndarray
    stationary: np.ndarray

    def averaging_operator(self) -> np.ndarray:
        """Rank-one stochastic matrix whose every row is the stationary law."""
        return np.tile(self.stationary, (self.n_states, 1))


@dataclass(frozen=True)
class SignSystem:
    """Per-step sign functions f_j: states -> {-1,+1} with stationary means."""

    n_steps: int
    functions: np.ndarray  # (n_steps, n_states), entries exactly +-1
    balances: np.ndarray  # stationary mean of each f_j
    balanced: bool = False

    @property
    def max_imbalance(self) -> float:
        return float(np.max(np.abs(self.balances))) if self.n_steps else 0.0


@dataclass(frozen=True)
class WeightSystem:
    """The fixed vectors v_1..v_n, tagged with the variant they satisfy."""

    dimension: int
    weights: np.ndarray  # (n, dimension)
    variant: str = "general"

    @property
    def n_weights(self) -> int:
        return self.weights.shape[0]

    @property
    def scalars(self) -> np.ndarray:
        if self.dimension != 1:
            raise PreconditionViolated(
                f"scalar weights requested but dimension is {self.dimension}"
            )
        return self.weights[:, 0]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.weights, axis=1)


WEIGHT_VARIANTS = (
    "general",
    "at-least-unit",
    "half-at-least-unit",
    "distinct-positive-integers",
)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _solve_stationary(a: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eig(a.T)
    close = np.where(np.abs(evals - 1.0) <= STRUCTURAL_TOL)[0]
    if close.size == 0:
        raise NoUniqueStationary("no eigenvalue of A^T within 1e-9 of 1")
    if close.size > 1:
        raise NoUniqueStationary(
            f"fixed space has dimension {close.size}; the stationary law is not unique"
        )
    v = evecs[:, close[0]]
    # rotate away a possible complex phase, then normalize to total mass 1
    v = np.real(v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))])))
    total = v.sum()
    if abs(total) < 1e-12:
        raise NoUniqueStationary("fixed vector of A^T has vanishing total mass")
    mu = v / total
    if mu.min() < -STRUCTURAL_TOL:
        raise NoUniqueStationary(
            f"fixed vector has negative mass {mu.min():.3e} at state {int(np.argmin(mu))}"
        )
    mu = np.clip(mu, 0.0, None)
    return mu / mu.sum()


def validate_chain(transition, stationary=None) -> MarkovChain:
    """Validate a raw transition matrix (and optional stationary vector).

    Checks row-stochasticity, stationarity and detailed balance.  When no
    stationary vector is supplied it is computed as the unique left fixed
    probability vector; a fixed space of dimension > 1 is an error rather
    than an arbitrary tie-break.
    """
    a = np.asarray(transition, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotStochastic(f"transition matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise NotStochastic("transition matrix is empty")
    if a.min() < 0:
        i, j = divmod(int(np.argmin(a)), n)
        raise NotStochastic(f"negative entry A[{i},{j}] = {a[i, j]!r}")
    rowsum = a.sum(axis=1)
    worst = int(np.argmax(np.abs(rowsum - 1.0)))
    if abs(rowsum[worst] - 1.0) > STRUCTURAL_TOL:
        raise NotStochastic(f"row {worst} sums to {rowsum[worst]!r}, expected 1")

    if stationary is None:
        mu = _solve_stationary(a)
    else:
        mu = np.asarray(stationary, dtype=float)
        if mu.shape != (n,):
            raise InvalidDistribution(
                f"stationary vector has shape {mu.shape}, expected ({n},)"
            )
        if mu.min() < 0:
            raise InvalidDistribution(
                f"negative stationary mass mu[{int(np.argmin(mu))}] = {mu.min()!r}"
            )
        if abs(mu.sum() - 1.0) > DERIVED_TOL:
            raise InvalidDistribution(f"stationary masses sum to {mu.sum()!r}, expected 1")

    balance = mu[:, None] * a
    gap = balance - balance.T  # mu_i A_ij - mu_j A_ji
    i, j = divmod(int(np.argmax(np.abs(gap))), n)
    if abs(gap[i, j]) > STRUCTURAL_TOL:
        raise NotReversible(
            f"detailed balance fails at ({i},{j}): "
            f"mu_i A_ij = {balance[i, j]!r} vs mu_j A_ji = {balance[j, i]!r}"
        )
    if stationary is not None:
        # detailed balance plus stochasticity already imply stationarity up to
        # accumulated tolerance; this catches gross fixed-point violations
        resid = mu @ a - mu
        worst = int(np.argmax(np.abs(resid)))
        if abs(resid[worst]) > n * STRUCTURAL_TOL:
            raise NotStationary(
                f"mu is not a fixed point: (mu A - mu)[{worst}] = {resid[worst]:.3e}"
            )
    return MarkovChain(n_states=n, transition=_freeze(a), stationary=_freeze(mu))


def spectral_lambda(chain: MarkovChain) -> float:
    """Operator norm of A - E_mu on L2(mu).

    Computed as the largest absolute eigenvalue of the symmetrized matrix
    D^1/2 (A - E_mu) D^-1/2 with D = diag(mu); reversibility makes this the
    L2(mu) operator norm exactly.
    """
    mu = chain.stationary
    if mu.min() <= 0.0:
        raise ZeroStationaryMass(
            f"state {int(np.argmin(mu))} has zero stationary mass; "
            "restrict the chain to its support first"
        )
    root = np.sqrt(mu)
    sym = chain.transition * (root[:, None] / root[None, :]) - np.outer(root, root)
    sym = 0.5 * (sym + sym.T)  # kill the <=1e-9 asymmetry allowed in inputs
    lam = float(np.max(np.abs(np.linalg.eigvalsh(sym))))
    return min(1.0, max(0.0, lam))


def make_two_state_chain(lam: float) -> MarkovChain:
    """The two-state chain with off-diagonal (1+lam)/2; its spectral parameter is lam."""
    if not 0.0 <= lam <= 1.0:
        raise OutOfRange(f"lambda must lie in [0,1], got {lam!r}")
    stay = (1.0 - lam) / 2.0
    switch = (1.0 + lam) / 2.0
    a = np.array([[stay, switch], [switch, stay]])
    return validate_chain(a, np.array([0.5, 0.5]))


def make_independent_chain(mu) -> MarkovChain:
    """Chain whose every row equals mu, i.e. A = E_mu and lambda = 0."""
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size == 0:
        raise InvalidDistribution(f"mu must be a nonempty vector, got shape {mu.shape}")
    if mu.min() < 0:
        raise InvalidDistribution(f"negative mass mu[{int(np.argmin(mu))}] = {mu.min()!r}")
    if abs(mu.sum() - 1.0) > DERIVED_TOL:
        raise InvalidDistribution(f"masses sum to {mu.sum()!r}, expected 1")
    return validate_chain(np.tile(mu, (mu.size, 1)), mu)


def make_sign_system(functions, mu, balanced: bool = False) -> SignSystem:
    """Build a SignSystem, computing per-step balances against mu.

    With balanced=True every balance must vanish to 1e-12 (the hypothesis the
    theorem bounds need); otherwise imbalance is recorded but not rejected,
    since exact probability computations are well defined either way.
    """
    f = np.asarray(functions)
    if f.ndim != 2:
        raise PreconditionViolated(f"sign functions must be 2-d, got shape {f.shape}")
    if f.size and not np.all(np.abs(f) == 1):
        bad = np.argwhere(np.abs(f) != 1)[0]
        raise PreconditionViolated(
            f"sign function entry f[{bad[0]},{bad[1]}] = {f[tuple(bad)]!r} is not +-1"
        )
    mu = np.asarray(mu, dtype=float)
    if f.size and f.shape[1] != mu.size:
        raise DimensionMismatch(
            f"sign functions defined on {f.shape[1]} states but chain has {mu.size}"
        )
    balances = f.astype(float) @ mu if f.size else np.zeros(f.shape[0])
    if balanced and balances.size and np.max(np.abs(balances)) > DERIVED_TOL:
        j = int(np.argmax(np.abs(balances)))
        raise HypothesisViolated(
            f"sign system flagged balanced but E_mu[f_{j}] = {balances[j]:.3e}"
        )
    return SignSystem(
        n_steps=f.shape[0],
        functions=_freeze(f.astype(np.int8)),
        balances=_freeze(balances),
        balanced=balanced,
    )


def parity_labels(n_states: int) -> np.ndarray:
    """+1 on even states, -1 on odd states; the identity labeling when N = 2."""
    return np.where(np.arange(n_states) % 2 == 0, 1, -1).astype(np.int8)


def repeated_signs(label_row, n_steps: int, mu, balanced: bool = False) -> SignSystem:
    """Sign system using the same labeling at every step."""
    row = np.asarray(label_row)
    return make_sign_system(np.tile(row, (n_steps, 1)), mu, balanced=balanced)


def make_weight_system(weights, variant: str = "general") -> WeightSystem:
    """Validate weights against the declared variant and package them."""
    w = np.asarray(weights, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if w.ndim != 2:
        raise PreconditionViolated(f"weights must be 1-d or 2-d, got shape {w.shape}")
    if variant not in WEIGHT_VARIANTS:
        raise PreconditionViolated(f"unknown weight variant {variant!r}")
    n, d = w.shape
    norms = np.linalg.norm(w, axis=1)
    if variant == "at-least-unit":
        if n and norms.min() < 1.0 - DERIVED_TOL:
            raise PreconditionViolated(
                f"|v_{int(np.argmin(norms))}| = {norms.min()!r} < 1"
            )
    elif variant == "half-at-least-unit":
        if np.count_nonzero(norms >= 1.0 - DERIVED_TOL) < n / 2:
            raise PreconditionViolated(
                f"only {np.count_nonzero(norms >= 1.0 - DERIVED_TOL)} of {n} weights "
                "have length >= 1"
            )
    elif variant == "distinct-positive-integers":
        if d != 1:
            raise PreconditionViolated("distinct-positive-integers requires dimension 1")
        vals = w[:, 0]
        if not np.all(vals == np.round(vals)):
            raise PreconditionViolated("weights are not exactly integers")
        if n and vals.min() < 1:
            raise PreconditionViolated(f"weight {vals.min()!r} is not a positive integer")
        if len(set(vals.tolist())) != n:
            raise PreconditionViolated("weights are not distinct")
    return WeightSystem(dimension=d, weights=_freeze(w), variant=variant)


# ---------------------------------------------------------------------------
# chain input file: {"n_states": N, "transition": [[..]..], "stationary": [..]?,
#                     "signs": [[+-1,..] x n]?}
# ---------------------------------------------------------------------------


def parse_chain_document(doc) -> tuple[MarkovChain, SignSystem | None]:
    if not isinstance(doc, dict):
        raise ConfigError("chain document: expected a JSON object at the top level")
    if "n_states" not in doc:
        raise ConfigError("chain document: missing field 'n_states'")
    n = doc["n_states"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"'n_states': expected a positive integer, got {n!r}")
    if "transition" not in doc:
        raise ConfigError("chain document: missing field 'transition'")
    rows = doc["transition"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ConfigError(f"'transition': expected {n} rows, got {_shape_of(rows)}")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"'transition[{i}]': expected {n} numbers, got {_shape_of(row)}")
        for j, x in enumerate(row):
            if not isinstance(x, (int, float)) or isinstance(x, bool):
                raise ConfigError(f"'transition[{i}][{j}]': expected a number, got {x!r}")
    mu = doc.get("stationary")
    if mu is not None:
        if not isinstance(mu, list) or len(mu) != n:
            raise ConfigError(f"'stationary': expected {n} numbers, got {_shape_of(mu)}")
    chain = validate_chain(np.asarray(rows, dtype=float),
                           None if mu is None else np.asarray(mu, dtype=float))
    signs = None
    if doc.get("signs") is not None:
        raw = doc["signs"]
        if not isinstance(raw, list):
            raise ConfigError(f"'signs': expected a list of rows, got {_shape_of(raw)}")
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != n:
                raise ConfigError(f"'signs[{i}]': expected {n} entries, got {_shape_of(row)}")
            for j, x in enumerate(row):
                if x not in (-1, 1):
                    raise ConfigError(f"'signs[{i}][{j}]': expected -1 or 1, got {x!r}")
        signs = make_sign_system(np.asarray(raw), chain.stationary)
    return chain, signs


def load_chain_file(path) -> tuple[MarkovChain, SignSystem | None]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return parse_chain_document(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def load_weights_file(path, variant: str = "general") -> WeightSystem:
    """Weights file: JSON array of numbers (d=1) or of equal-length arrays."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{path}: expected a nonempty JSON array of weights")
    if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        return make_weight_system(np.asarray(raw, dtype=float), variant)
    d = None
    for i, row in enumerate(raw):
        if not isinstance(row, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in row
        ):
            raise ConfigError(f"{path}: weights[{i}] is neither a number nor a number array")
        if d is None:
            d = len(row)
        elif len(row) != d:
            raise ConfigError(f"{path}: weights[{i}] has length {len(row)}, expected {d}")
    return make_weight_system(np.asarray(raw, dtype=float), variant)


def _shape_of(x):
    if isinstance(x, list):
        return f"a list of length {len(x)}"
    return repr(x)
