"""Explicit pseudorandom sign sets from expander walks.

The sign set D collects the concatenated +-1 vertex labels along every walk of
n/k steps on a degree-8 expander over {-1,1}^k; sampling a walk uniformly
(uniform start, uniform edge at each step) uses about k + 3 n/k random bits.
The expander is the Margulis-Gabber-Galil construction on Z_m x Z_m with
m = 2^(k/2): its vertex count is exactly a power of two and its spectral bound
is re-certified numerically instead of trusted.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .chains import MarkovChain, validate_chain
from .errors import (
    BudgetExceeded,
    ConfigError,
    DimensionMismatch,
    HypothesisViolated,
    NotReversible,
    OddK,
    OutOfRange,
    TooLarge,
)
from .rngstreams import uniform_block
from .sampling import McEstimate, from_hits

MGG_DEGREE = 8
CERTIFY_BUDGET = 2**14
DENSE_CERTIFY = 2**10
ENUM_BUDGET = 10**8


@dataclass
class ExpanderGraph:
    """A d-regular multigraph on 2^k vertices identified with {-1,1}^k.

    Vertex v's label is its big-endian bit pattern mapped 1 -> +1, 0 -> -1;
    the high k/2 bits are the first grid coordinate for MGG graphs.
    """

    k: int
    degree: int
    neighbors: np.ndarray  # (2^k, degree), self-loops and parallel edges kept
    certified_lambda: float | None = None

    @property
    def n_vertices(self) -> int:
        return 1 << self.k

    def neighbor(self, vertex: int, edge: int) -> int:
        return int(self.neighbors[vertex, edge])

    def labels(self) -> np.ndarray:
        """(2^k, k) matrix of +-1 labels, row v = label of vertex v."""
        v = np.arange(self.n_vertices)
        bits = (v[:, None] >> np.arange(self.k - 1, -1, -1)[None, :]) & 1
        return (2 * bits - 1).astype(np.int8)

    def normalized_adjacency(self) -> np.ndarray:
        m = np.zeros((self.n_vertices, self.n_vertices))
        rows = np.repeat(np.arange(self.n_vertices), self.degree)
        np.add.at(m, (rows, self.neighbors.ravel()), 1.0 / self.degree)
        return m


def validate_expander(graph: ExpanderGraph) -> None:
    """Regularity and undirectedness: the directed slot multiset is symmetric."""
    nv = graph.n_vertices
    if graph.neighbors.shape != (nv, graph.degree):
        raise DimensionMismatch(
            f"neighbor table has shape {graph.neighbors.shape}, "
            f"expected ({nv}, {graph.degree})"
        )
    if graph.neighbors.min() < 0 or graph.neighbors.max() >= nv:
        raise ConfigError("neighbor table references a vertex out of range")
    counts = scipy.sparse.coo_matrix(
        (np.ones(nv * graph.degree),
         (np.repeat(np.arange(nv), graph.degree), graph.neighbors.ravel())),
        shape=(nv, nv)).tocsr()
    if (counts != counts.T).nnz:
        raise NotReversible("edge multiset is not symmetric; multigraph is directed")


def build_mgg_expander(k: int) -> ExpanderGraph:
    """Degree-8 Margulis-Gabber-Galil multigraph on Z_m x Z_m, m = 2^(k/2).

    The eight neighbor maps come in inverse pairs, so the multigraph is
    undirected; self-loops and parallel edges are kept to preserve regularity.
    """
    if k < 2 or k % 2 != 0:
        raise OddK(f"k must be an even integer >= 2, got {k}")
    m = 1 << (k // 2)
    x, y = np.divmod(np.arange(m * m), m)
    maps = [
        ((x + 2 * y) % m, y), ((x - 2 * y) % m, y),
        ((x + 2 * y + 1) % m, y), ((x - 2 * y - 1) % m, y),
        (x, (y + 2 * x) % m), (x, (y - 2 * x) % m),
        (x, (y + 2 * x + 1) % m), (x, (y - 2 * x - 1) % m),
    ]
    neighbors = np.stack([cx * m + cy for cx, cy in maps], axis=1)
    graph = ExpanderGraph(k=k, degree=MGG_DEGREE, neighbors=neighbors)
    validate_expander(graph)
    return graph


def certify_lambda(graph: ExpanderGraph, budget: int = CERTIFY_BUDGET) -> float:
    """Second-largest absolute eigenvalue of the normalized adjacency matrix.

    Dense eigendecomposition for small graphs, deflated Lanczos above; stores
    the value on the graph.  Graphs beyond the budget must keep a literature
    bound flagged uncertified.
    """
    nv = graph.n_vertices
    if nv > budget:
        raise TooLarge(f"{nv} vertices exceed the certification budget {budget}")
    validate_expander(graph)
    if nv <= DENSE_CERTIFY:
        m = graph.normalized_adjacency()
        lam = float(np.max(np.abs(np.linalg.eigvalsh(m - 1.0 / nv))))
    else:
        counts = scipy.sparse.coo_matrix(
            (np.full(nv * graph.degree, 1.0 / graph.degree),
             (np.repeat(np.arange(nv), graph.degree), graph.neighbors.ravel())),
            shape=(nv, nv)).tocsr()

        def matvec(v):
            return counts @ v - np.mean(v)

        op = scipy.sparse.linalg.LinearOperator((nv, nv), matvec=matvec,
                                                rmatvec=matvec, dtype=float)
        v0 = np.sin(1.0 + np.arange(nv))  # deterministic start vector
        vals = scipy.sparse.linalg.eigsh(op, k=1, which="LM", v0=v0,
                                         return_eigenvectors=False)
        lam = float(np.abs(vals[0]))
    graph.certified_lambda = lam
    return lam


@dataclass(frozen=True)
class PrgSpec:
    """Walk parameters defining the sign multiset D."""

    graph: ExpanderGraph
    n: int

    def __post_init__(self):
        if self.n < 1 or self.n % self.graph.k != 0:
            raise DimensionMismatch(
                f"block length k = {self.graph.k} must divide n = {self.n}; "
                "pad with zero-weight coordinates to the next multiple if needed"
            )

    @property
    def blocks(self) -> int:
        return self.n // self.graph.k

    @property
    def size(self) -> int:
        """|D| counted with walk multiplicity."""
        return self.graph.n_vertices * self.graph.degree ** (self.blocks - 1)

    @property
    def log2_size(self) -> float:
        return self.graph.k + (self.blocks - 1) * math.log2(self.graph.degree)


def enumerate_walks(spec: PrgSpec, budget: int = ENUM_BUDGET):
    """Yield (sign vector in {-1,1}^n, weight) for every walk; weights sum to 1."""
    if spec.size > budget:
        raise BudgetExceeded(f"|D| = {spec.size} exceeds the budget {budget}")
    labels = spec.graph.labels()
    weight = 1.0 / spec.size
    for start in range(spec.graph.n_vertices):
        for edges in itertools.product(range(spec.graph.degree),
                                       repeat=spec.blocks - 1):
            vertex = start
            parts = [labels[vertex]]
            for e in edges:
                vertex = spec.graph.neighbor(vertex, e)
                parts.append(labels[vertex])
            yield np.concatenate(parts), weight


def _walk_sums(spec: PrgSpec, scalars: np.ndarray) -> np.ndarray:
    """Signed sum of every walk in D, enumerated vectorially block by block."""
    labels = spec.graph.labels().astype(float)
    block_w = scalars.reshape(spec.blocks, spec.graph.k)
    contrib = labels @ block_w.T  # (vertices, blocks)
    vertices = np.arange(spec.graph.n_vertices)
    sums = contrib[vertices, 0]
    for j in range(1, spec.blocks):
        vertices = spec.graph.neighbors[vertices].ravel()
        sums = np.repeat(sums, spec.graph.degree) + contrib[vertices, j]
    return sums


def block_contributions(spec: PrgSpec, scalars: np.ndarray) -> np.ndarray:
    """Per-block per-vertex contributions; feeds the transfer-engine cross-check."""
    labels = spec.graph.labels().astype(float)
    block_w = np.asarray(scalars, dtype=float).reshape(spec.blocks, spec.graph.k)
    return block_w @ labels.T  # (blocks, vertices)


def induced_chain(spec: PrgSpec) -> MarkovChain:
    """The walk as a Markov chain: normalized adjacency, uniform stationary law."""
    nv = spec.graph.n_vertices
    return validate_chain(spec.graph.normalized_adjacency(), np.full(nv, 1.0 / nv))


def _check_unit_weights(scalars: np.ndarray, n: int,
                        allow_zero_padding: bool) -> np.ndarray:
    w = np.asarray(scalars, dtype=float)
    if w.shape != (n,):
        raise DimensionMismatch(f"need {n} scalar weights, got shape {w.shape}")
    checked = w[w != 0.0] if allow_zero_padding else w
    if checked.size and checked.min() < 1.0 - 1e-12:
        raise HypothesisViolated(
            f"weight {checked.min()!r} violates the hypothesis v_i >= 1"
        )
    return w


def prg_smallball(spec: PrgSpec, scalars, x0: float, radius: float,
                  mode: str = "exact", samples: int = 100_000, seed: int = 0,
                  budget: int = ENUM_BUDGET, allow_zero_padding: bool = False):
    """P[|sum - x0| <= radius] under the uniform walk measure on D.

    Exact mode enumerates every walk (full multiset, vectorized); sampled mode
    draws walks from counter streams and returns an McEstimate.  Zero weights
    are rejected unless allow_zero_padding is set (the CLI's pad-to-multiple
    convenience); the v_i >= 1 hypothesis then applies to the nonzero entries.
    """
    w = _check_unit_weights(scalars, spec.n, allow_zero_padding)
    if radius < 0:
        raise OutOfRange(f"radius must be nonnegative, got {radius!r}")
    if mode == "exact":
        if spec.size > budget:
            raise BudgetExceeded(f"|D| = {spec.size} exceeds the budget {budget}")
        sums = _walk_sums(spec, w)
        hits = int(np.count_nonzero(np.abs(sums - x0) <= radius))
        return hits / spec.size
    if mode != "sampled":
        raise OutOfRange(f"mode must be 'exact' or 'sampled', got {mode!r}")

    labels = spec.graph.labels().astype(float)
    block_w = w.reshape(spec.blocks, spec.graph.k)
    contrib = labels @ block_w.T
    nv = spec.graph.n_vertices
    hits = 0
    chunk = 1 << 14
    for start in range(0, samples, chunk):
        streams = np.arange(start, min(start + chunk, samples))
        u = uniform_block(seed, streams, spec.blocks)
        vertex = np.minimum((u[:, 0] * nv).astype(np.int64), nv - 1)
        sums = contrib[vertex, 0]
        for j in range(1, spec.blocks):
            edge = np.minimum((u[:, j] * spec.graph.degree).astype(np.int64),
                              spec.graph.degree - 1)
            vertex = spec.graph.neighbors[vertex, edge]
            sums = sums + contrib[vertex, j]
        hits += int(np.count_nonzero(np.abs(sums - x0) <= radius))
    return from_hits(hits, samples, seed)


def even_rounded_sqrt(n: int) -> int:
    """ceil(sqrt(n)) rounded up to the nearest even integer, at least 2."""
    k = math.isqrt(n)
    if k * k < n:
        k += 1
    if k % 2:
        k += 1
    return max(k, 2)


def size_bound_exponent(n: int) -> float:
    """log2 |D| with k = even_rounded_sqrt(n) and padded block count."""
    k = even_rounded_sqrt(n)
    blocks = -(-n // k)
    return k + (blocks - 1) * math.log2(MGG_DEGREE)


# ---------------------------------------------------------------------------
# graph JSON: {"k": .., "degree": .., "neighbors": [[..] x 2^k]}
# ---------------------------------------------------------------------------


def save_graph(graph: ExpanderGraph, path) -> None:
    doc = {"k": graph.k, "degree": graph.degree,
           "neighbors": graph.neighbors.tolist()}
    if graph.certified_lambda is not None:
        doc["certified_lambda"] = graph.certified_lambda
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_graph(path) -> ExpanderGraph:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    for fld in ("k", "degree", "neighbors"):
        if fld not in doc:
            raise ConfigError(f"{path}: missing field '{fld}'")
    graph = ExpanderGraph(
        k=int(doc["k"]), degree=int(doc["degree"]),
        neighbors=np.asarray(doc["neighbors"], dtype=np.int64),
        certified_lambda=doc.get("certified_lambda"),
    )
    validate_expander(graph)
    return graph
