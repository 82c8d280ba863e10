"""Linear polynomial-filter GNN: forward pass, analytic gradients, Adam
training, and the lift-vs-error simulation.

The model is y = S^L X W(1) ... W(L): each of the L layers applies the
normalized shift once and a weight matrix, with no nonlinearity, so the
whole network implements the filter s -> s^L. Teacher labels come from
running this model on an augmented graph and keeping only the original
nodes' outputs; the student trains the same architecture on the original
graph against those labels with full-batch Adam.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, DivergenceError
from .graph import Graph, degree_percentile
from .metrics import pearson
from .partition import quotient, refine_eps_be
from .rewire import RewiredGraph, Variant, build_rewired
from .seeding import derive_seed
from .spectral import normalized_shift, srl_report

__all__ = [
    "LinearGnnWeights",
    "TrainConfig",
    "TsResult",
    "gaussian_init",
    "forward",
    "teacher_labels",
    "crop_to_observed",
    "mse_loss",
    "gradients",
    "train_student",
    "run_ts_experiment",
]


@dataclass(frozen=True)
class LinearGnnWeights:
    """Ordered weight chain W(1)..W(L) with matching inner dimensions."""

    layers: tuple[np.ndarray, ...]

    def __post_init__(self):
        for a, b in zip(self.layers, self.layers[1:]):
            if a.shape[1] != b.shape[0]:
                raise DimensionMismatchError(
                    f"layer dims {a.shape} -> {b.shape} do not chain")
        for w in self.layers:
            if not np.isfinite(w).all():
                raise ValueError("weights must be finite")

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def dim_in(self) -> int:
        return self.layers[0].shape[0]

    @property
    def dim_out(self) -> int:
        return self.layers[-1].shape[1]

    def product(self) -> np.ndarray:
        out = self.layers[0]
        for w in self.layers[1:]:
            out = out @ w
        return out


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.005
    epochs: int = 5000
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    sigmas: Optional[tuple[float, ...]] = None   # None: unit scale per layer

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass(frozen=True)
class TsResult:
    """One simulation point: a lift value against a final training error."""

    srl: float
    mse_final: float
    loss_trace: tuple[float, ...]
    seed: int
    dataset_tag: str = ""
    eps: float = float("nan")


# ---------------------------------------------------------------------------
# Initialization and forward pass
# ---------------------------------------------------------------------------

def gaussian_init(
    dims: Sequence[int],
    sigmas: Sequence[float],
    seed: int,
) -> LinearGnnWeights:
    """Draw W(l)_ij ~ N(0, sigmas[l]^2 / dims[l]), deterministically.

    The variance shrinks with the layer's input dimension so the output
    scale stays controlled across widths.
    """
    if len(sigmas) != len(dims) - 1:
        raise DimensionMismatchError(
            f"{len(dims) - 1} layers need {len(dims) - 1} sigmas, got {len(sigmas)}")
    rng = np.random.default_rng(seed)
    layers = []
    for l in range(len(dims) - 1):
        std = sigmas[l] / np.sqrt(dims[l])
        layers.append(std * rng.standard_normal((dims[l], dims[l + 1])))
    return LinearGnnWeights(layers=tuple(layers))


def forward(shift: np.ndarray, x: np.ndarray, weights: LinearGnnWeights) -> np.ndarray:
    """S^L X W(1)...W(L) with L = number of weight layers."""
    if x.shape[1] != weights.dim_in:
        raise DimensionMismatchError(
            f"features have {x.shape[1]} columns, weights expect {weights.dim_in}")
    if shift.shape[0] != x.shape[0]:
        raise DimensionMismatchError(
            f"shift order {shift.shape[0]} != feature rows {x.shape[0]}")
    out = x
    for _ in range(weights.num_layers):
        out = shift @ out
    return out @ weights.product()


def teacher_labels(rewired: RewiredGraph, weights: LinearGnnWeights) -> np.ndarray:
    """Teacher outputs on the augmented graph, restricted to original nodes."""
    s_rew = normalized_shift(rewired.adjacency)
    full = forward(s_rew, rewired.features, weights)
    return full[:rewired.origin_count, :]


def crop_to_observed(weights: LinearGnnWeights, d: int) -> LinearGnnWeights:
    """Drop the virtual-feature rows of the first layer.

    Because augmented features are block diagonal, the teacher restricted
    to original-node inputs is exactly the same chain with the first
    layer's trailing rows removed.
    """
    first = weights.layers[0][:d, :]
    return LinearGnnWeights(layers=(first,) + weights.layers[1:])


# ---------------------------------------------------------------------------
# Loss and analytic gradients
# ---------------------------------------------------------------------------

def _chain(layers) -> np.ndarray:
    out = layers[0]
    for w in layers[1:]:
        out = out @ w
    return out


def mse_loss(propagated: np.ndarray, weights: LinearGnnWeights,
             y_true: np.ndarray) -> float:
    resid = propagated @ weights.product() - y_true
    return float((resid * resid).sum()) / (y_true.shape[0] * y_true.shape[1])


def gradients(propagated: np.ndarray, weights: LinearGnnWeights,
              y_true: np.ndarray) -> list[np.ndarray]:
    """d(mse)/dW(l) for every layer of the linear chain.

    `propagated` is the precomputed S^L X, shared by all epochs.
    """
    n, d_out = y_true.shape
    num = weights.num_layers
    prefixes = [propagated]                     # prefixes[l] = S^L X W(1..l)
    for w in weights.layers[:-1]:
        prefixes.append(prefixes[-1] @ w)
    suffixes = [np.eye(weights.dim_out)]        # suffixes[i] = W(L-i+1..L)
    for w in reversed(weights.layers[1:]):
        suffixes.append(w @ suffixes[-1])
    suffixes.reverse()                          # suffixes[l] = W(l+2..L) for layer l+1
    err = 2.0 * (prefixes[-1] @ weights.layers[-1] - y_true) / (n * d_out)
    return [prefixes[l].T @ err @ suffixes[l].T for l in range(num)]


def train_student(
    graph: Graph,
    x: np.ndarray,
    y_true: np.ndarray,
    config: TrainConfig,
    num_layers: int = 2,
) -> tuple[LinearGnnWeights, TsResult]:
    """Full-batch Adam on the analytic gradients of the linear chain.

    Hidden widths default to the input feature width; the output width
    follows y_true. The loss trace records the objective after each
    update, so its last entry is the final training error. Deterministic
    for a fixed config.
    """
    if y_true.shape[0] != graph.num_nodes:
        raise DimensionMismatchError("y_true must have one row per node")
    d_in, d_out = x.shape[1], y_true.shape[1]
    dims = [d_in] + [d_in] * (num_layers - 1) + [d_out]
    sigmas = config.sigmas if config.sigmas is not None else (1.0,) * num_layers
    weights = gaussian_init(dims, sigmas, config.seed)

    shift = normalized_shift(graph.dense_adjacency())
    propagated = x
    for _ in range(num_layers):
        propagated = shift @ propagated

    layers = [w.copy() for w in weights.layers]
    m = [np.zeros_like(w) for w in layers]
    v = [np.zeros_like(w) for w in layers]

    def raw_loss(ws):
        resid = propagated @ _chain(ws) - y_true
        return float((resid * resid).sum()) / (y_true.shape[0] * y_true.shape[1])

    trace = []
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, config.epochs + 1):
            if not all(np.isfinite(w).all() for w in layers):
                raise DivergenceError(epoch)
            current = LinearGnnWeights(layers=tuple(layers))
            grads = gradients(propagated, current, y_true)
            t = epoch
            for i, g in enumerate(grads):
                m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g
                v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g
                m_hat = m[i] / (1.0 - config.beta1 ** t)
                v_hat = v[i] / (1.0 - config.beta2 ** t)
                layers[i] = layers[i] - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps)
            loss = raw_loss(layers)
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            trace.append(loss)

    final_weights = LinearGnnWeights(layers=tuple(layers))
    result = TsResult(
        srl=float("nan"),
        mse_final=trace[-1],
        loss_trace=tuple(trace),
        seed=config.seed,
    )
    return final_weights, result


# ---------------------------------------------------------------------------
# Lift-vs-error experiment
# ---------------------------------------------------------------------------

TEACHER_SIGMAS = (1.0, 40.0)


def run_ts_experiment(
    datasets: Sequence[tuple[str, Graph, Optional[np.ndarray]]],
    variants: Sequence[Variant],
    percentiles: Sequence[int],
    config: TrainConfig,
    num_layers: int = 2,
    d_out: int = 3,
    teacher_sigmas: Sequence[float] = TEACHER_SIGMAS,
) -> tuple[list[TsResult], float]:
    """One point per (dataset, variant, percentile): rewire, draw a
    teacher, train a student on the original graph, record the lift and
    the final error. Returns all points plus their Pearson correlation.

    Dataset entries are (tag, graph, features-or-None); missing features
    fall back to the constant column. Teacher draws and student
    initializations take their own sub-seeds per task index.
    """
    results = []
    task = 0
    for tag, graph, features in datasets:
        x = features if features is not None else np.ones((graph.num_nodes, 1))
        d = x.shape[1]
        for variant in variants:
            for p in percentiles:
                eps = degree_percentile(graph, p)
                part = refine_eps_be(graph, eps)
                qp = quotient(graph, part)
                rewired = build_rewired(graph, part, qp, variant,
                                        features=features, eps=eps)
                k = part.k
                teacher_dims = [d + k] + [d + k] * (num_layers - 1) + [d_out]
                if len(teacher_sigmas) != num_layers:
                    raise DimensionMismatchError(
                        "teacher sigma count must match layer count")
                teacher_seed = derive_seed(config.seed, task)
                teacher = gaussian_init(teacher_dims, teacher_sigmas, teacher_seed)
                y_true = teacher_labels(rewired, teacher)

                report = srl_report(graph, rewired, part, y_true,
                                    h_degree=num_layers)
                student_cfg = replace(config, seed=derive_seed(config.seed, task + 1))
                _, res = train_student(graph, x, y_true, student_cfg, num_layers)
                results.append(replace(
                    res, srl=report.srl, dataset_tag=f"{tag}:{variant.value}",
                    eps=eps,
                ))
                task += 2
    corr = pearson([r.srl for r in results], [r.mse_final for r in results])
    return results, corr
