"""Dense symmetric spectral machinery for role-lift diagnostics.

Everything here is 64-bit dense linear algebra at desk scale. The central
quantity is the spectral role lift: project the normalized shifts of the
original and the augmented graph onto the (rotated) role basis, form one
2x2 symmetric matrix per role direction, and measure how much its top
eigenvalue exceeds the role's response on the original graph. Label
energies in the role subspace weight the per-role contributions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import IO, Optional

import numpy as np
import scipy.sparse as sp

from .errors import EmptyLabelsError, NonSymmetricError
from .graph import Graph
from .partition import Partition
from .rewire import RewiredGraph

__all__ = [
    "normalized_shift",
    "role_basis",
    "symmetric_eig",
    "rotate_basis",
    "per_role_lift",
    "role_energies",
    "commutator_norm",
    "bound_error",
    "SrlReport",
    "srl_report",
    "rotated_role_basis",
    "dump_srl_csv",
]

_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


def _as_dense(m) -> np.ndarray:
    if sp.issparse(m):
        return m.toarray().astype(float)
    return np.asarray(m, dtype=float)


def _require_symmetric(m: np.ndarray, what: str) -> None:
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > 1e-12 * scale:
        raise NonSymmetricError(f"{what} is not symmetric")


# ---------------------------------------------------------------------------
# Shifts and bases
# ---------------------------------------------------------------------------

def normalized_shift(adjacency) -> np.ndarray:
    """Self-loop-normalized propagation matrix of a weighted adjacency.

    With B = A + I and D the diagonal of B's row sums, returns
    D^{-1/2} B D^{-1/2}. Every diagonal of B is at least 1, so D is
    invertible without special cases.
    """
    a = _as_dense(adjacency)
    _require_symmetric(a, "adjacency")
    if a.min(initial=0.0) < 0:
        raise ValueError("adjacency weights must be nonnegative")
    b = a + np.eye(a.shape[0])
    dinv = 1.0 / np.sqrt(b.sum(axis=1))
    s = dinv[:, None] * b * dinv[None, :]
    return (s + s.T) / 2.0


def role_basis(r: np.ndarray) -> np.ndarray:
    """Column-orthonormalized block indicator: entry 1/sqrt(|B_j|) on block j."""
    r = np.asarray(r, dtype=float)
    if not np.array_equal(r, r.astype(bool).astype(float)) or \
            not np.array_equal(r.sum(axis=1), np.ones(r.shape[0])):
        raise ValueError("R must be 0/1 with exactly one 1 per row")
    sizes = r.sum(axis=0)
    if np.any(sizes == 0):
        raise ValueError("R has an empty block column")
    return r / np.sqrt(sizes)


def symmetric_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Pivots run row-major over the strict upper triangle with a fixed
    order, so results are bit-deterministic for identical input. Columns
    come back sorted by ascending eigenvalue, each flipped so its first
    non-negligible component is positive.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSymmetricError("matrix must be square")
    _require_symmetric(a, "matrix")
    n = a.shape[0]
    v = np.eye(n)
    norm = float(np.linalg.norm(a))
    if n > 1 and norm > 0.0:
        for _ in range(_JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off <= _JACOBI_TOL * norm:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= 1e-300:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) \
                        if theta != 0.0 else 1.0
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    col_p, col_q = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * col_p - s * col_q
                    a[:, q] = s * col_p + c * col_q
                    row_p, row_q = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s * row_p + c * row_q
                    a[p, q] = a[q, p] = 0.0
                    vcol_p, vcol_q = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vcol_p - s * vcol_q
                    v[:, q] = s * vcol_p + c * vcol_q
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(n):
        nz = np.flatnonzero(np.abs(v[:, j]) > 1e-12)
        if len(nz) and v[nz[0], j] < 0:
            v[:, j] = -v[:, j]
    return w, v


def rotate_basis(c: np.ndarray, s_obs: np.ndarray) -> np.ndarray:
    """Rotate the role basis so the restriction of s_obs becomes diagonal."""
    t = c.T @ s_obs @ c
    t = (t + t.T) / 2.0
    _, v = symmetric_eig(t)
    return c @ v


# ---------------------------------------------------------------------------
# Per-role quantities
# ---------------------------------------------------------------------------

def per_role_lift(
    c_j: np.ndarray,
    s_obs: np.ndarray,
    s_oo: np.ndarray,
    s_vo: np.ndarray,
    s_vv: np.ndarray,
) -> tuple[float, float, float, float, float, float]:
    """Lifted response of one role direction.

    Returns (mu_obs, mu_rew, tau, nu, lambda_plus, delta). The coupling
    tau is the norm of the virtual-block image of c_j; below 1e-12 the
    virtual branch is dropped and lambda_plus falls back to mu_rew.
    """
    mu_obs = float(c_j @ s_obs @ c_j)
    mu_rew = float(c_j @ s_oo @ c_j)
    t_vec = s_vo @ c_j
    tau = float(np.linalg.norm(t_vec))
    if tau < 1e-12:
        nu = 0.0
        lam_plus = mu_rew
    else:
        v_hat = t_vec / tau
        nu = float(v_hat @ s_vv @ v_hat)
        half_gap = (mu_rew - nu) / 2.0
        lam_plus = (mu_rew + nu) / 2.0 + np.sqrt(half_gap * half_gap + tau * tau)
    return mu_obs, mu_rew, tau, nu, float(lam_plus), float(lam_plus - mu_obs)


def role_energies(
    c: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray, float, np.ndarray]:
    """Energy split of a label matrix over the role subspace.

    Returns (rho, omega, e_tot, beta): rho is the fraction of squared
    label mass inside span(c), omega the per-role shares of that mass
    (all zero when the role energy vanishes), e_tot the total squared
    mass, beta the k x C coefficient matrix.
    """
    e_tot = float((y * y).sum())
    if e_tot == 0.0:
        raise EmptyLabelsError("label matrix carries zero energy")
    beta = c.T @ y
    role_energy = float((beta * beta).sum())
    rho = role_energy / e_tot
    if role_energy > 0.0:
        omega = (beta * beta).sum(axis=1) / role_energy
    else:
        omega = np.zeros(c.shape[1])
    return rho, omega, e_tot, beta


def commutator_norm(c: np.ndarray, s_obs: np.ndarray, s_oo: np.ndarray) -> float:
    """Frobenius norm of the commutator of the two restricted shifts."""
    m1 = c.T @ s_obs @ c
    m2 = c.T @ s_oo @ c
    return float(np.linalg.norm(m1 @ m2 - m2 @ m1))


# ---------------------------------------------------------------------------
# Report assembly and the error-bound constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SrlReport:
    """Per-role spectral quantities plus the global lift diagnostics."""

    mu_obs: np.ndarray
    mu_rewired: np.ndarray
    tau: np.ndarray
    nu: np.ndarray
    lambda_plus: np.ndarray
    delta: np.ndarray
    omega: np.ndarray
    rho: float
    srl: float
    srl_per_class: np.ndarray
    e_tot: float
    commutator_norm: float
    kappa0: float
    kappa_max: float
    bound_rhs: float
    negative_delta_count: int
    h_degree: int

    @property
    def k(self) -> int:
        return len(self.delta)


def _filter_and_derivative(h_degree: int, s: float) -> tuple[float, float]:
    return s ** h_degree, h_degree * s ** (h_degree - 1)


def bound_error(
    report: SrlReport,
    h_degree: int,
    beta_obs: Optional[np.ndarray] = None,
) -> tuple[float, float, float]:
    """Constants of the error bound for the filter s^h_degree.

    kappa0 collects squared observed-role coefficients of roles whose
    lifted response is dead (|h(lambda_plus)| < 1e-12); kappa_max is the
    worst endpoint-derivative ratio over the remaining roles. Returns
    (kappa0, kappa_max, kappa0 + kappa_max * e_tot * srl).
    """
    kappa0 = 0.0
    kappa_max = 0.0
    for j in range(report.k):
        h_lam, _ = _filter_and_derivative(h_degree, float(report.lambda_plus[j]))
        if abs(h_lam) < 1e-12:
            if beta_obs is not None:
                kappa0 += float((beta_obs[j] ** 2).sum())
            continue
        slopes = [
            abs(_filter_and_derivative(h_degree, float(report.mu_obs[j]))[1]),
            abs(_filter_and_derivative(h_degree, float(report.lambda_plus[j]))[1]),
        ]
        kappa_j = max(slopes) ** 2 / (h_lam * h_lam)
        kappa_max = max(kappa_max, kappa_j)
    return kappa0, kappa_max, kappa0 + kappa_max * report.e_tot * report.srl


def srl_report(
    graph: Graph,
    rewired: RewiredGraph,
    partition: Partition,
    y: np.ndarray,
    h_degree: int = 2,
    beta_obs: Optional[np.ndarray] = None,
) -> SrlReport:
    """Full spectral-role-lift pipeline for one rewiring.

    Builds both normalized shifts, rotates the role basis so the observed
    restriction is diagonal, lifts each rotated role direction through
    the rewired blocks, and aggregates with the label energies of y
    (n x C, zero rows for unlabeled nodes).
    """
    n = graph.num_nodes
    if rewired.origin_count != n or partition.num_nodes != n or y.shape[0] != n:
        raise ValueError("graph, rewired graph, partition and labels disagree on n")
    s_obs = normalized_shift(graph.dense_adjacency())
    s_rew = normalized_shift(rewired.adjacency)
    s_oo = s_rew[:n, :n]
    s_vo = s_rew[n:, :n]
    s_vv = s_rew[n:, n:]

    c = rotate_basis(role_basis(partition.indicator()), s_obs)
    k = c.shape[1]
    lifts = np.array([per_role_lift(c[:, j], s_obs, s_oo, s_vo, s_vv)
                      for j in range(k)])
    mu_obs, mu_rew, tau, nu, lam_plus, delta = lifts.T

    rho, omega, e_tot, beta = role_energies(c, y)
    srl = rho * float((omega * delta ** 2).sum())

    e_c = (y * y).sum(axis=0)
    role_c = (beta * beta).sum(axis=0)
    num_classes = y.shape[1]
    srl_per_class = np.zeros(num_classes)
    for cls in range(num_classes):
        if e_c[cls] > 0.0 and role_c[cls] > 0.0:
            rho_c = role_c[cls] / e_c[cls]
            omega_c = beta[:, cls] ** 2 / role_c[cls]
            srl_per_class[cls] = rho_c * float((omega_c * delta ** 2).sum())

    partial = SrlReport(
        mu_obs=mu_obs, mu_rewired=mu_rew, tau=tau, nu=nu,
        lambda_plus=lam_plus, delta=delta, omega=omega,
        rho=rho, srl=srl, srl_per_class=srl_per_class, e_tot=e_tot,
        commutator_norm=commutator_norm(c, s_obs, s_oo),
        kappa0=0.0, kappa_max=0.0, bound_rhs=0.0,
        negative_delta_count=int((delta < 0).sum()),
        h_degree=h_degree,
    )
    kappa0, kappa_max, bound_rhs = bound_error(partial, h_degree, beta_obs)
    return replace(partial, kappa0=kappa0, kappa_max=kappa_max, bound_rhs=bound_rhs)


def rotated_role_basis(graph: Graph, partition: Partition) -> np.ndarray:
    """Role basis rotated against the graph's own normalized shift."""
    s_obs = normalized_shift(graph.dense_adjacency())
    return rotate_basis(role_basis(partition.indicator()), s_obs)


def dump_srl_csv(report: SrlReport, stream: IO[str]) -> None:
    stream.write("role,mu_obs,mu_rawr,tau,nu,lambda_plus,delta,omega\n")
    for j in range(report.k):
        stream.write(
            f"{j},{report.mu_obs[j]:.6f},{report.mu_rewired[j]:.6f},"
            f"{report.tau[j]:.6f},{report.nu[j]:.6f},"
            f"{report.lambda_plus[j]:.6f},{report.delta[j]:.6f},"
            f"{report.omega[j]:.6f}\n"
        )
    stream.write(f"# rho={report.rho:.6f}\n")
    stream.write(f"# srl={report.srl:.6f}\n")
    stream.write(f"# commutator_norm={report.commutator_norm:.6f}\n")
    stream.write(f"# kappa0={report.kappa0:.6f}\n")
    stream.write(f"# kappa_max={report.kappa_max:.6f}\n")
    stream.write(f"# bound_rhs={report.bound_rhs:.6f}\n")
    stream.write(f"# E_tot={report.e_tot:.6f}\n")
