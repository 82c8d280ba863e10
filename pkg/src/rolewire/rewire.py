"""Augmented graph construction: one virtual node per partition block.

Each block gets a virtual node adjacent to exactly its members. The block
structure of the augmented adjacency is

    [ A  R ]        virtual-virtual corner: Q    (full, weighted)
    [ R' * ]                                 0    (repnodes)
                                             Q>0  (repedges, unweighted)

The master-node construction is repnodes over the single-block partition.
Virtual-node features are one-hot, appended block-diagonally to X.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError
from .graph import Graph
from .partition import Partition, QuotientPair

__all__ = [
    "Variant",
    "RewiredGraph",
    "build_rewired",
    "augment_features",
    "master_node_adjacency",
    "dump_rewired",
    "load_rewired",
]


class Variant(enum.Enum):
    FULL = "full"
    REP_NODES = "repnodes"
    REP_EDGES = "repedges"
    MASTER_NODE = "mn"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        for v in cls:
            if v.value == text:
                return v
        raise ValueError(f"unknown variant {text!r}")


@dataclass(frozen=True)
class RewiredGraph:
    """Weighted symmetric adjacency over n original + k virtual nodes."""

    adjacency: sp.csr_matrix          # (n+k) x (n+k), float64
    origin_count: int
    virtual_count: int
    variant: Variant
    features: np.ndarray              # (n+k) x (d+k)
    eps: float = 0.0
    residual: float = 0.0

    @property
    def size(self) -> int:
        return self.origin_count + self.virtual_count

    def original_block(self) -> sp.csr_matrix:
        n = self.origin_count
        return self.adjacency[:n, :n]

    def dense_adjacency(self) -> np.ndarray:
        return self.adjacency.toarray()


def augment_features(x: Optional[np.ndarray], n: int, k: int) -> np.ndarray:
    """Block-diagonal [X 0; 0 I_k]; a constant all-ones column stands in
    for X in the featureless regime."""
    if x is None:
        x = np.ones((n, 1))
    if x.shape[0] != n:
        raise DimensionMismatchError(
            f"feature rows {x.shape[0]} != node count {n}")
    d = x.shape[1]
    out = np.zeros((n + k, d + k))
    out[:n, :d] = x
    out[n:, d:] = np.eye(k)
    return out


def build_rewired(
    graph: Graph,
    partition: Partition,
    qpair: QuotientPair,
    variant: Variant,
    features: Optional[np.ndarray] = None,
    eps: float = 0.0,
) -> RewiredGraph:
    """Assemble the augmented adjacency and features for one variant.

    Virtual node j is adjacent (weight 1) to exactly the nodes of block j.
    The virtual-virtual corner is Q for FULL, zero for REP_NODES and
    MASTER_NODE, and the 0/1 pattern of Q for REP_EDGES. MASTER_NODE
    requires the single-block partition.
    """
    n, k = graph.num_nodes, partition.k
    if partition.num_nodes != n:
        raise DimensionMismatchError(
            f"partition covers {partition.num_nodes} nodes, graph has {n}")
    if qpair.R.shape != (n, k):
        raise DimensionMismatchError(
            f"indicator shape {qpair.R.shape} != ({n}, {k})")
    if variant is Variant.MASTER_NODE and k != 1:
        raise DimensionMismatchError(
            "master-node variant requires the single-block partition")

    a = np.zeros((n + k, n + k))
    for u in range(n):
        for v in graph.neighbors(u):
            a[u, v] = 1.0
    a[:n, n:] = qpair.R
    a[n:, :n] = qpair.R.T
    if variant is Variant.FULL:
        corner = (qpair.Q + qpair.Q.T) / 2.0   # symmetrize; equal for exact EPs
    elif variant is Variant.REP_EDGES:
        corner = qpair.Q_bar
    else:
        corner = np.zeros((k, k))
    a[n:, n:] = corner                         # diagonal kept: within-block degree

    adjacency = sp.csr_matrix(a)
    adjacency.sort_indices()
    return RewiredGraph(
        adjacency=adjacency,
        origin_count=n,
        virtual_count=k,
        variant=variant,
        features=augment_features(features, n, k),
        eps=eps,
        residual=qpair.residual,
    )


def master_node_adjacency(graph: Graph) -> sp.csr_matrix:
    """Explicit (n+1)x(n+1) master-node adjacency: one hub tied to all nodes."""
    n = graph.num_nodes
    a = np.zeros((n + 1, n + 1))
    for u in range(n):
        for v in graph.neighbors(u):
            a[u, v] = 1.0
    a[:n, n] = 1.0
    a[n, :n] = 1.0
    m = sp.csr_matrix(a)
    m.sort_indices()
    return m


# ---------------------------------------------------------------------------
# File format: weighted edge list plus key=value metadata sidecar
# ---------------------------------------------------------------------------

def dump_rewired(rg: RewiredGraph, edge_stream: IO[str], meta_stream: IO[str]) -> None:
    coo = sp.triu(rg.adjacency, k=0).tocoo()   # k=0: virtual self-loop weights survive
    order = np.lexsort((coo.col, coo.row))
    for i in order:
        edge_stream.write(f"{coo.row[i]} {coo.col[i]} {coo.data[i]:.6f}\n")
    meta_stream.write(f"n={rg.origin_count}\n")
    meta_stream.write(f"k={rg.virtual_count}\n")
    meta_stream.write(f"variant={rg.variant.value}\n")
    meta_stream.write(f"eps={rg.eps!r}\n")
    meta_stream.write(f"residual={rg.residual!r}\n")


def load_rewired(
    edge_path: Path,
    meta_path: Path,
    features: Optional[np.ndarray] = None,
) -> RewiredGraph:
    """Read back a rewired graph; `features` are the original n x d values
    (the virtual one-hot block is re-appended here)."""
    meta = {}
    for line in Path(meta_path).read_text().splitlines():
        if "=" in line:
            key, val = line.split("=", 1)
            meta[key] = val
    n, k = int(meta["n"]), int(meta["k"])
    a = np.zeros((n + k, n + k))
    for line in Path(edge_path).read_text().splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        a[u, v] = w
        a[v, u] = w
    adjacency = sp.csr_matrix(a)
    adjacency.sort_indices()
    return RewiredGraph(
        adjacency=adjacency,
        origin_count=n,
        virtual_count=k,
        variant=Variant.parse(meta["variant"]),
        features=augment_features(features, n, k),
        eps=float(meta["eps"]),
        residual=float(meta["residual"]),
    )
