"""ALM engine for multi-view subspace clustering via constrained bilinear
factorization, plus the single-view low-rank-representation baseline.

Each view's coefficient matrix is factorized as Z_i = U_i V with U_i^T U_i = I,
so every view shares the encoding V (and hence the trace norm) while keeping a
view-specific basis. The augmented Lagrangian couples three constraint blocks
(X_i = X_i Z_i + E_i, Z_i = U_i V, V = L) with multipliers Y1_i, Y2_i, Y3 and
a growing penalty mu.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg import solve as linear_solve

from .proxops import DegenerateMatrixError, procrustes, prox_l21, svt

# Scale of the noise used to recover from an all-zero Procrustes argument
# (happens on the first pass, when V is still zero).
_RESEED_SCALE = 1e-6


@dataclass
class SolverConfig:
    lam: float = 100.0
    k: int = 8
    rho: float = 1.9
    mu0: float = 1e-4
    mu_max: float = 1e6
    eps: float = 1e-6
    max_iter: int = 300
    seed: int = 0

    def validate(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.rho < 1:
            raise ValueError("rho must be >= 1")
        if not (0 < self.mu0 <= self.mu_max):
            raise ValueError("need 0 < mu0 <= mu_max")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class SolverState:
    Z: list
    E: list
    U: list
    V: np.ndarray
    L: np.ndarray
    Y1: list
    Y2: list
    Y3: np.ndarray
    mu: float
    rng: np.random.Generator


@dataclass
class SolverResult:
    Z: np.ndarray
    Z_views: list
    residual_history: np.ndarray
    iterations: int
    converged: bool


def init_state(data, config: SolverConfig) -> SolverState:
    """Allocate all ALM variables. Everything starts at zero except the
    per-view coefficients, which are small seeded Gaussians (std 0.01)."""
    config.validate()
    n, v, k = data.n, data.v, config.k
    if k >= n:
        raise ValueError(f"factor dimension k={k} must be below n={n}")
    rng = np.random.default_rng(config.seed)
    Z = [0.01 * rng.standard_normal((n, n)) for _ in range(v)]
    E = [np.zeros_like(X) for X in data.views]
    U = [np.zeros((n, k)) for _ in range(v)]
    Y1 = [np.zeros_like(X) for X in data.views]
    Y2 = [np.zeros((n, n)) for _ in range(v)]
    return SolverState(
        Z=Z,
        E=E,
        U=U,
        V=np.zeros((k, n)),
        L=np.zeros((k, n)),
        Y1=Y1,
        Y2=Y2,
        Y3=np.zeros((k, n)),
        mu=config.mu0,
        rng=rng,
    )


def update_V(state: SolverState, data) -> np.ndarray:
    """V from the normal equations mu(I + sum U_i^T U_i) V = T_VB.

    Solved as an SPD linear system; the coefficient matrix is k x k.
    """
    k = state.V.shape[0]
    A = np.eye(k)
    B = state.mu * state.L - state.Y3
    for Ui, Y2i, Zi in zip(state.U, state.Y2, state.Z):
        A = A + Ui.T @ Ui
        B = B + Ui.T @ Y2i + state.mu * (Ui.T @ Zi)
    state.V = linear_solve(state.mu * A, B, assume_a="pos")
    return state.V


def update_L(state: SolverState, lam: float) -> np.ndarray:
    """L = svt(V + Y3/mu, lam/mu): the trace-norm proximal step."""
    state.L = svt(state.V + state.Y3 / state.mu, lam / state.mu)
    return state.L


def update_E(state: SolverState, data, i: int) -> np.ndarray:
    """Column-shrinkage step on the self-representation residual of view i."""
    X = data.views[i]
    T = X - X @ state.Z[i] + state.Y1[i] / state.mu
    state.E[i] = prox_l21(T, 1.0 / state.mu)
    return state.E[i]


def update_U(state: SolverState, i: int) -> np.ndarray:
    """Orthogonal Procrustes step: U_i = polar factor of (Z_i + Y2_i/mu) V^T.

    A zero argument (first pass, V still zero) is recovered once by adding
    tiny seeded noise to V; a second failure propagates.
    """
    M = (state.Z[i] + state.Y2[i] / state.mu) @ state.V.T
    try:
        state.U[i] = procrustes(M)
    except DegenerateMatrixError:
        state.V = state.V + _RESEED_SCALE * state.rng.standard_normal(state.V.shape)
        M = (state.Z[i] + state.Y2[i] / state.mu) @ state.V.T
        state.U[i] = procrustes(M)
    return state.U[i]


def gram_factor(X):
    """Cholesky factor of (I + X^T X), iteration-invariant for a fixed view."""
    n = X.shape[1]
    return cho_factor(np.eye(n) + X.T @ X)


def update_Z(state: SolverState, data, i: int, factor=None) -> np.ndarray:
    """Z_i from mu(I + X^T X) Z_i = T_ZB; the RHS is divided by mu so one
    cached factorization of (I + X^T X) serves every iteration."""
    X = data.views[i]
    mu = state.mu
    rhs = (
        state.U[i] @ state.V
        - state.Y2[i] / mu
        + X.T @ (state.Y1[i] / mu + X - state.E[i])
    )
    if factor is None:
        factor = gram_factor(X)
    state.Z[i] = cho_solve(factor, rhs)
    return state.Z[i]


def update_multipliers(state: SolverState, data, rho: float, mu_max: float):
    """Multiplier ascent on all three constraint blocks, then grow mu."""
    mu = state.mu
    for i, X in enumerate(data.views):
        state.Y1[i] = state.Y1[i] + mu * (X - X @ state.Z[i] - state.E[i])
        state.Y2[i] = state.Y2[i] + mu * (state.Z[i] - state.U[i] @ state.V)
    state.Y3 = state.Y3 + mu * (state.V - state.L)
    state.mu = min(rho * mu, mu_max)


def _per_view_residuals(state: SolverState, data):
    x_res = [
        np.max(np.abs(X - X @ Zi - Ei))
        for X, Zi, Ei in zip(data.views, state.Z, state.E)
    ]
    z_res = [
        np.max(np.abs(Zi - Ui @ state.V)) for Zi, Ui in zip(state.Z, state.U)
    ]
    v_res = np.max(np.abs(state.V - state.L))
    return x_res, z_res, v_res


def residuals(state: SolverState, data):
    """View-averaged max-abs residuals of the three constraint blocks."""
    x_res, z_res, v_res = _per_view_residuals(state, data)
    return (float(np.mean(x_res)), float(np.mean(z_res)), float(v_res))


def consensus_Z(state: SolverState) -> np.ndarray:
    """Cross-view aggregate coefficient matrix: mean of U_i V."""
    n = state.Z[0].shape[0]
    Z = np.zeros((n, n))
    for Ui in state.U:
        Z = Z + Ui @ state.V
    return Z / len(state.U)


def solve(data, config: SolverConfig, callback=None) -> SolverResult:
    """Run the alternating-minimization loop to convergence or max_iter.

    Per-iteration order: V, L, then for each view E, U, Z, then all
    multipliers and mu. Stops when the averaged residuals and every
    per-view max-abs residual fall below eps. `callback(iteration, state)`,
    if given, is invoked after each iteration's primal updates.
    """
    state = init_state(data, config)
    factors = [gram_factor(X) for X in data.views]
    history = []
    converged = False
    iterations = 0
    for _ in range(config.max_iter):
        iterations += 1
        update_V(state, data)
        update_L(state, config.lam)
        for i in range(data.v):
            update_E(state, data, i)
            update_U(state, i)
            update_Z(state, data, i, factors[i])
        x_res, z_res, v_res = _per_view_residuals(state, data)
        triple = (float(np.mean(x_res)), float(np.mean(z_res)), float(v_res))
        history.append(triple)
        if callback is not None:
            callback(iterations, state)
        update_multipliers(state, data, config.rho, config.mu_max)
        if (
            max(triple) < config.eps
            and max(x_res) < config.eps
            and max(z_res) < config.eps
        ):
            converged = True
            break
    return SolverResult(
        Z=consensus_Z(state),
        Z_views=[Zi.copy() for Zi in state.Z],
        residual_history=np.array(history),
        iterations=iterations,
        converged=converged,
    )


@dataclass
class LrrResult:
    Z: np.ndarray
    E: np.ndarray
    residual_history: np.ndarray
    iterations: int
    converged: bool


def lrr_solve(X, lam: float, config: SolverConfig | None = None) -> LrrResult:
    """Single-view low-rank representation baseline.

    Minimizes ||E||_{2,1} + lam * ||Z||_* subject to X = XZ + E via inexact
    ALM with the auxiliary split Z = J (J carries the trace norm). Shares the
    rho / mu schedule of the multi-view solver.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    config = config or SolverConfig(lam=lam)
    X = np.asarray(X, dtype=float)
    n = X.shape[1]
    Z = np.zeros((n, n))
    J = np.zeros((n, n))
    E = np.zeros_like(X)
    Y1 = np.zeros_like(X)
    Y2 = np.zeros((n, n))
    mu = config.mu0
    factor = gram_factor(X)
    history = []
    converged = False
    iterations = 0
    for _ in range(config.max_iter):
        iterations += 1
        J = svt(Z + Y2 / mu, lam / mu)
        T = X - X @ Z + Y1 / mu
        E = prox_l21(T, 1.0 / mu)
        rhs = J - Y2 / mu + X.T @ (Y1 / mu + X - E)
        Z = cho_solve(factor, rhs)
        x_res = float(np.max(np.abs(X - X @ Z - E)))
        z_res = float(np.max(np.abs(Z - J)))
        history.append((x_res, z_res))
        Y1 = Y1 + mu * (X - X @ Z - E)
        Y2 = Y2 + mu * (Z - J)
        mu = min(config.rho * mu, config.mu_max)
        if x_res < config.eps and z_res < config.eps:
            converged = True
            break
    return LrrResult(
        Z=Z,
        E=E,
        residual_history=np.array(history),
        iterations=iterations,
        converged=converged,
    )
