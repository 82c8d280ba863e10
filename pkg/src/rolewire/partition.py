"""Tolerance-based equitable partition refinement and quotient matrices.

A partition is equitable when all nodes in a block have the same number of
neighbors in every block; the tolerance variant allows those per-block
counts to differ by at most eps (infinity norm over the count vector).
`refine_eps_be` computes such a partition by iterated splitting;
`color_refinement_oracle` is an independent 1-WL implementation used to
cross-check the eps=0 case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .errors import SizeMismatchError
from .graph import Graph

__all__ = [
    "Partition",
    "QuotientPair",
    "block_degree_vector",
    "block_degree_matrix",
    "refine_eps_be",
    "validate_aep",
    "quotient",
    "color_refinement_oracle",
    "random_partition",
    "load_partition_csv",
    "dump_partition_csv",
    "dump_quotient_csv",
]


@dataclass(frozen=True)
class Partition:
    """Block assignment of nodes 0..n-1 in canonical order.

    Canonical order: blocks sorted by their minimum node id, nodes sorted
    ascending inside each block, block ids dense 0..k-1.
    """

    block_of: np.ndarray          # int64, node -> block id
    blocks: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def num_nodes(self) -> int:
        return len(self.block_of)

    def block_sizes(self) -> np.ndarray:
        return np.array([len(b) for b in self.blocks], dtype=np.int64)

    def indicator(self) -> np.ndarray:
        """Dense n x k 0/1 membership matrix."""
        r = np.zeros((self.num_nodes, self.k))
        r[np.arange(self.num_nodes), self.block_of] = 1.0
        return r

    def as_block_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.blocks)

    @classmethod
    def from_blocks(cls, n: int, raw_blocks: Sequence[Sequence[int]]) -> "Partition":
        """Canonicalize arbitrary disjoint covering blocks."""
        blocks = sorted((tuple(sorted(b)) for b in raw_blocks if len(b)),
                        key=lambda b: b[0])
        block_of = np.full(n, -1, dtype=np.int64)
        for i, b in enumerate(blocks):
            for u in b:
                if block_of[u] != -1:
                    raise ValueError(f"node {u} assigned to two blocks")
                block_of[u] = i
        if np.any(block_of < 0):
            raise ValueError("blocks do not cover all nodes")
        return cls(block_of=block_of, blocks=tuple(blocks))

    @classmethod
    def from_assignment(cls, block_of: Sequence[int]) -> "Partition":
        ids = np.asarray(block_of, dtype=np.int64)
        raw: dict[int, list[int]] = {}
        for u, b in enumerate(ids):
            raw.setdefault(int(b), []).append(u)
        return cls.from_blocks(len(ids), list(raw.values()))


@dataclass(frozen=True)
class QuotientPair:
    """Membership indicator R, quotient Q, its 0/1 pattern, and residual.

    Q averages block-degree counts over each source block, so exact
    equitable partitions give integer entries and zero residual. The
    residual is the largest absolute entry of A R - R Q.
    """

    R: np.ndarray       # n x k, 0/1
    Q: np.ndarray       # k x k, real
    Q_bar: np.ndarray   # k x k, 0/1
    residual: float


# ---------------------------------------------------------------------------
# Block-degree counting
# ---------------------------------------------------------------------------

def block_degree_matrix(graph: Graph, partition: Partition) -> np.ndarray:
    """n x k integer matrix; entry (u, j) counts u's neighbors in block j."""
    n, k = graph.num_nodes, partition.k
    counts = np.zeros((n, k), dtype=np.int64)
    for u in range(n):
        for v in graph.neighbors(u):
            counts[u, partition.block_of[v]] += 1
    return counts


def block_degree_vector(graph: Graph, partition: Partition, u: int) -> np.ndarray:
    """Counts of u's neighbors per block; sums to deg(u)."""
    vec = np.zeros(partition.k, dtype=np.int64)
    for v in graph.neighbors(u):
        vec[partition.block_of[v]] += 1
    return vec


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------

def refine_eps_be(graph: Graph, eps: float) -> Partition:
    """Partition with per-block block-degree spread at most eps.

    Splitting rule, iterated to a fixpoint from the single-block partition:
    for each splitter block of the round-start partition (ascending
    canonical id) and each current block B, sort B's nodes by (neighbor
    count toward the splitter, node id) and greedily group consecutive
    nodes while count - group_min <= eps. At the fixpoint every block has
    per-coordinate count spread <= eps, so validate_aep holds. Ties break
    on node id everywhere; the result is deterministic.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    n = graph.num_nodes
    part = Partition.from_blocks(n, [list(range(n))])
    while True:
        splitters = part.blocks          # round-start snapshot, canonical order
        current: list[list[int]] = [list(b) for b in part.blocks]
        for splitter in splitters:
            in_splitter = np.zeros(n, dtype=bool)
            in_splitter[list(splitter)] = True
            next_blocks: list[list[int]] = []
            for block in current:
                if len(block) == 1:
                    next_blocks.append(block)
                    continue
                counted = sorted(
                    ((int(in_splitter[graph.neighbors(u)].sum()), u) for u in block)
                )
                groups: list[list[int]] = []
                group_min = None
                for cnt, u in counted:
                    if group_min is None or cnt - group_min > eps:
                        groups.append([u])
                        group_min = cnt
                    else:
                        groups[-1].append(u)
                next_blocks.extend(groups)
            current = next_blocks
        refined = Partition.from_blocks(n, current)
        if refined.blocks == part.blocks:
            return refined
        part = refined


def validate_aep(graph: Graph, partition: Partition, eps: float) -> bool:
    """True iff within every block each per-block count spread is <= eps."""
    counts = block_degree_matrix(graph, partition)
    for block in partition.blocks:
        rows = counts[list(block)]
        spread = rows.max(axis=0) - rows.min(axis=0)
        if spread.max(initial=0) > eps:
            return False
    return True


def quotient(graph: Graph, partition: Partition) -> QuotientPair:
    """Block-averaged quotient matrix with its 0/1 pattern and residual.

    Q[i, j] is the mean neighbor count toward block j over nodes of block
    i; Q_bar thresholds strictly at zero using exact integer sums, and the
    residual is max |A R - R Q| entrywise.
    """
    counts = block_degree_matrix(graph, partition)
    k = partition.k
    sums = np.zeros((k, k), dtype=np.int64)
    for i, block in enumerate(partition.blocks):
        sums[i] = counts[list(block)].sum(axis=0)
    sizes = partition.block_sizes().astype(float)
    q = sums / sizes[:, None]
    q_bar = (sums > 0).astype(float)
    r = partition.indicator()
    residual = float(np.abs(counts - q[partition.block_of]).max(initial=0.0))
    return QuotientPair(R=r, Q=q, Q_bar=q_bar, residual=residual)


# ---------------------------------------------------------------------------
# Independent 1-WL oracle
# ---------------------------------------------------------------------------

def color_refinement_oracle(graph: Graph) -> Partition:
    """Coarsest equitable partition via classic color refinement.

    Starts from a uniform coloring and repeatedly recolors each node by
    the multiset of its neighbors' colors until stable. Kept deliberately
    independent of refine_eps_be (different algorithm and data flow) so
    the two can cross-check each other at eps=0.
    """
    n = graph.num_nodes
    colors = np.zeros(n, dtype=np.int64)
    num_colors = 1
    while True:
        signatures = [
            (int(colors[u]), tuple(sorted(int(colors[v]) for v in graph.neighbors(u))))
            for u in range(n)
        ]
        palette = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        new_colors = np.array([palette[sig] for sig in signatures], dtype=np.int64)
        new_count = len(palette)
        if new_count == num_colors:
            break
        colors, num_colors = new_colors, new_count
    return Partition.from_assignment(colors)


# ---------------------------------------------------------------------------
# Random control partitions
# ---------------------------------------------------------------------------

def random_partition(n: int, block_sizes: Sequence[int], seed: int) -> Partition:
    """Uniform random assignment with exactly the given block-size multiset."""
    sizes = list(block_sizes)
    if any(s <= 0 for s in sizes) or sum(sizes) != n:
        raise SizeMismatchError(
            f"block sizes {sizes} must be positive and sum to {n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    raw, start = [], 0
    for s in sizes:
        raw.append([int(u) for u in perm[start:start + s]])
        start += s
    return Partition.from_blocks(n, raw)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def dump_partition_csv(partition: Partition, stream: IO[str]) -> None:
    stream.write("node,block\n")
    for u in range(partition.num_nodes):
        stream.write(f"{u},{int(partition.block_of[u])}\n")


def load_partition_csv(stream: IO[str]) -> Partition:
    header = stream.readline().strip()
    if header != "node,block":
        raise ValueError(f"partition header must be 'node,block', got {header!r}")
    pairs = []
    for raw in stream:
        line = raw.strip()
        if line:
            u, b = line.split(",")
            pairs.append((int(u), int(b)))
    pairs.sort()
    return Partition.from_assignment([b for _, b in pairs])


def dump_quotient_csv(pair: QuotientPair, eps: float, stream: IO[str]) -> None:
    stream.write(f"# eps={eps:.6f} residual={pair.residual:.6f}\n")
    for row in pair.Q:
        stream.write(",".join(f"{v:.6f}" for v in row) + "\n")
