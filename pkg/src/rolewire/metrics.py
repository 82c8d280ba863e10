"""Rewiring quality metrics and tolerance selection.

Mean effective resistance measures propagation bottlenecks; two-hop class
similarity measures how label-aligned the two-hop topology is; the starred
score blends both (z-scored square roots, weighted by the fourth root of
the role-energy fraction) to pick a tolerance from the percentile grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import IO, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    DisconnectedError,
    NegativeInputError,
    NoEligibleNodesError,
    NumericError,
)
from .graph import Graph, NodeData, UNLABELED, bfs_distances, degree_percentile, one_hot_labels
from .partition import quotient, refine_eps_be
from .rewire import RewiredGraph, Variant, build_rewired
from .spectral import srl_report

__all__ = [
    "EpsCandidate",
    "mean_effective_resistance",
    "two_hop_class_similarity",
    "srl_star",
    "select_epsilon",
    "evaluate_candidates",
    "pearson",
    "dump_candidates_csv",
]

PERCENTILE_GRID = (0, 25, 50, 75, 100)


# ---------------------------------------------------------------------------
# Effective resistance
# ---------------------------------------------------------------------------

def _dense_no_loops(adjacency) -> np.ndarray:
    a = adjacency.toarray().astype(float) if sp.issparse(adjacency) \
        else np.asarray(adjacency, dtype=float)
    a = a.copy()
    np.fill_diagonal(a, 0.0)
    return a


def _pattern_connected(a: np.ndarray) -> bool:
    n = a.shape[0]
    if n == 1:
        return True
    adj = [np.flatnonzero(a[u]) for u in range(n)]
    indptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        indptr[u + 1] = indptr[u] + len(adj[u])
    indices = np.concatenate(adj) if indptr[-1] else np.zeros(0, dtype=np.int64)
    return bool((bfs_distances(indptr, indices, 0) >= 0).all())


def mean_effective_resistance(
    adjacency,
    origin_count: Optional[int] = None,
    all_pairs: bool = False,
) -> float:
    """Mean pairwise effective resistance of a weighted graph.

    Treats each weighted edge as a conductance; self-loops are dropped
    (they never carry current). The Laplacian pseudoinverse comes from
    deflating the all-ones nullvector, inverting, and restoring. With
    `origin_count` and all_pairs=False, only unordered pairs among the
    first origin_count nodes are averaged, which makes augmented graphs
    comparable to their source.
    """
    a = _dense_no_loops(adjacency)
    m = a.shape[0]
    if not _pattern_connected(a):
        raise DisconnectedError("effective resistance needs a connected graph")
    span = m if (all_pairs or origin_count is None) else origin_count
    if span < 2:
        raise ValueError("need at least two nodes in the pair set")
    lap = np.diag(a.sum(axis=1)) - a
    ones = np.full((m, m), 1.0 / m)
    lplus = np.linalg.inv(lap + ones) - ones
    diag = np.diag(lplus)
    r = diag[:span, None] + diag[None, :span] - 2.0 * lplus[:span, :span]
    iu = np.triu_indices(span, k=1)
    return float(r[iu].mean())


# ---------------------------------------------------------------------------
# Two-hop class similarity
# ---------------------------------------------------------------------------

def _csr_of(obj: Union[Graph, RewiredGraph]) -> tuple[np.ndarray, np.ndarray, int]:
    """(indptr, indices, original node count) of the nonzero pattern."""
    if isinstance(obj, Graph):
        return obj.indptr, obj.indices, obj.num_nodes
    adj = obj.adjacency.tocsr()
    return adj.indptr.astype(np.int64), adj.indices.astype(np.int64), obj.origin_count


def two_hop_class_similarity(
    graph_or_rewired: Union[Graph, RewiredGraph],
    labels: np.ndarray,
    mask: np.ndarray,
) -> float:
    """Average same-label fraction among labeled exact-distance-2 neighbors.

    Only masked labeled original nodes act as centers; neighbors count
    when they are masked labeled original nodes too (virtual nodes carry
    no labels and never contribute). Centers without any labeled two-hop
    neighbor are skipped.
    """
    indptr, indices, n = _csr_of(graph_or_rewired)
    eligible = np.zeros(len(indptr) - 1, dtype=bool)
    eligible[:n] = mask & (labels != UNLABELED)
    fractions = []
    for v in np.flatnonzero(eligible):
        first = set(int(w) for w in indices[indptr[v]:indptr[v + 1]] if w != v)
        second = set()
        for w in first:
            second.update(int(x) for x in indices[indptr[w]:indptr[w + 1]])
        second.discard(int(v))
        second -= first
        labeled = [u for u in second if u < n and eligible[u]]
        if not labeled:
            continue
        same = sum(1 for u in labeled if labels[u] == labels[v])
        fractions.append(same / len(labeled))
    if not fractions:
        raise NoEligibleNodesError("no masked labeled node has labeled two-hop neighbors")
    return float(np.mean(fractions))


# ---------------------------------------------------------------------------
# Tolerance candidates and the starred score
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsCandidate:
    """One percentile-grid entry with its scores."""

    percentile: int
    eps: float
    k: int
    srl: float
    rho: float
    ncs2: float
    srl_star: float = float("nan")


def _zscores(values: np.ndarray) -> np.ndarray:
    std = float(values.std())           # population standard deviation
    if std == 0.0:
        return np.zeros_like(values)
    return (values - values.mean()) / std


def srl_star(candidates: Sequence[EpsCandidate]) -> list[EpsCandidate]:
    """Blend z-scored sqrt(lift) and sqrt(similarity) per candidate.

    The weight on the lift term is rho**(1/4), taken per candidate;
    z-scores use the population standard deviation across exactly the
    given candidate list, and a zero-variance term contributes zero.
    """
    if not candidates:
        raise ValueError("need at least one candidate")
    for cand in candidates:
        if cand.srl < -1e-12 or cand.ncs2 < -1e-12:
            raise NegativeInputError(
                f"negative score input at percentile {cand.percentile}")
    sqrt_srl = np.sqrt([max(0.0, c.srl) for c in candidates])
    sqrt_ncs = np.sqrt([max(0.0, c.ncs2) for c in candidates])
    z_srl = _zscores(sqrt_srl)
    z_ncs = _zscores(sqrt_ncs)
    scored = []
    for i, cand in enumerate(candidates):
        w = max(0.0, cand.rho) ** 0.25
        scored.append(replace(cand, srl_star=float(w * z_srl[i] + (1.0 - w) * z_ncs[i])))
    return scored


def select_epsilon(candidates: Sequence[EpsCandidate]) -> EpsCandidate:
    """Candidate with the highest starred score; ties favor the smaller
    percentile (the finer partition)."""
    if not candidates:
        raise ValueError("need at least one candidate")
    return min(candidates, key=lambda c: (-c.srl_star, c.percentile))


def evaluate_candidates(
    graph: Graph,
    data: NodeData,
    variant: Variant = Variant.REP_NODES,
    percentiles: Sequence[int] = PERCENTILE_GRID,
    h_degree: int = 2,
) -> list[EpsCandidate]:
    """Score the percentile grid: one rewiring and one report per entry.

    Label information is restricted to the training mask throughout, both
    for the role energies and for the two-hop similarity.
    """
    if variant is Variant.MASTER_NODE:
        raise ValueError("the master-node variant has no tolerance to select")
    y = one_hot_labels(data.labels, data.train_mask)
    candidates = []
    for p in percentiles:
        eps = degree_percentile(graph, p)
        part = refine_eps_be(graph, eps)
        qp = quotient(graph, part)
        rewired = build_rewired(graph, part, qp, variant,
                                features=data.features, eps=eps)
        report = srl_report(graph, rewired, part, y, h_degree=h_degree)
        try:
            ncs2 = two_hop_class_similarity(rewired, data.labels, data.train_mask)
        except NoEligibleNodesError:
            ncs2 = 0.0
        candidates.append(EpsCandidate(
            percentile=int(p), eps=eps, k=part.k,
            srl=report.srl, rho=report.rho, ncs2=ncs2,
        ))
    return srl_star(candidates)


def dump_candidates_csv(
    candidates: Sequence[EpsCandidate],
    chosen: EpsCandidate,
    stream: IO[str],
) -> None:
    stream.write("percentile,eps,k,srl,rho,ncs2,srl_star,selected\n")
    for c in candidates:
        sel = 1 if c.percentile == chosen.percentile else 0
        stream.write(
            f"{c.percentile},{c.eps:.6f},{c.k},{c.srl:.6f},{c.rho:.6f},"
            f"{c.ncs2:.6f},{c.srl_star:.6f},{sel}\n"
        )


# ---------------------------------------------------------------------------
# Correlation helper
# ---------------------------------------------------------------------------

def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("pearson needs two same-length samples of size >= 2")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc * xc).sum() * (yc * yc).sum())
    if denom == 0.0:
        raise NumericError("pearson undefined: zero variance sample")
    return float((xc * yc).sum() / denom)
