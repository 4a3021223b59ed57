"""Box-constrained quadratic programs solved by Hopfield-style dynamics.

Minimises ``E(x) = 1/2 x^T Q x + c^T x`` over ``lower <= x <= upper`` with
the projected gradient iteration

    x <- clip(x - dt (Q x + c), lower, upper)

which is the forward-Euler discretisation of the gradient flow with the
state clipped to the box. Its fixed points are exactly the stationary
points of the QP. With ``W = I - eta Q`` and bias ``-eta c`` the same
iteration is a recurrent network of clipping nodes, which is how
:func:`map_qp_to_network` places it on a broadcast-and-weight network.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .laser import InputSignal
from .network import ClipParams, NetworkSpec, build_network, simulate_network

__all__ = [
    "QpProblem",
    "HopfieldConfig",
    "QpResult",
    "ConvergenceReport",
    "QpMapping",
    "WeightOverflowError",
    "solve_qp",
    "projected_gradient",
    "map_qp_to_network",
    "solve_via_network",
    "convergence_report",
    "penalty_qp",
    "random_spd_problem",
]

SYMMETRY_TOL = 1e-12


class WeightOverflowError(ValueError):
    """The requested eta drives some network weight outside [-1, 1]."""

    def __init__(self, message, eta_max):
        super().__init__(message)
        self.eta_max = eta_max


@dataclass(frozen=True)
class QpProblem:
    Q: np.ndarray
    c: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        n = Q.shape[0]
        if Q.shape != (n, n):
            raise ValueError("Q must be square")
        if not np.all(np.isfinite(Q)):
            raise ValueError("Q must be finite")
        scale = max(1.0, float(np.max(np.abs(Q)))) if n else 1.0
        if np.max(np.abs(Q - Q.T), initial=0.0) > SYMMETRY_TOL * scale:
            raise ValueError("Q must be symmetric")
        c = np.broadcast_to(np.asarray(self.c, dtype=float), (n,)).copy()
        lo = np.broadcast_to(np.asarray(self.lower, dtype=float), (n,)).copy()
        hi = np.broadcast_to(np.asarray(self.upper, dtype=float), (n,)).copy()
        if np.any(~(lo < hi)):
            raise ValueError("bounds must satisfy lower < upper")
        for name, v in (("Q", Q), ("c", c), ("lower", lo), ("upper", hi)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def n(self) -> int:
        return self.c.size

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.Q @ x + self.c @ x)

    def gradient(self, x) -> np.ndarray:
        return self.Q @ x + self.c

    def projected_gradient(self, x) -> np.ndarray:
        return projected_gradient(self, x)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.Q)

    @property
    def convex(self) -> bool:
        return bool(self.eigenvalues.min() >= -1e-12 * max(1.0, abs(self.eigenvalues).max()))


@dataclass(frozen=True)
class HopfieldConfig:
    """Discretisation of the gradient flow.

    ``dt=None`` picks ``1 / lambda_max(Q)``. ``eta`` is the network drive
    gain used by the mapped-network path.
    """

    dt: float | None = None
    max_steps: int = 100_000
    tol: float = 1e-8
    eta: float | None = None

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")


@dataclass
class QpResult:
    x: np.ndarray
    objective: float
    trajectory: np.ndarray
    converged: bool
    steps: int
    objectives: np.ndarray
    grad_norms: np.ndarray
    convex: bool
    dt: float


@dataclass
class ConvergenceReport:
    steps_to_tol: int | None
    objectives: np.ndarray
    monotone: bool | None
    convex: bool


def projected_gradient(problem: QpProblem, x) -> np.ndarray:
    """Gradient with components pointing out of an active bound zeroed."""
    x = np.asarray(x, dtype=float)
    g = problem.gradient(x)
    at_lo = (x <= problem.lower) & (g > 0)
    at_hi = (x >= problem.upper) & (g < 0)
    return np.where(at_lo | at_hi, 0.0, g)


def solve_qp(problem: QpProblem, config: HopfieldConfig | None = None, x0=None) -> QpResult:
    """Minimise the QP by projected gradient iteration.

    Stops once the infinity norm of the projected gradient falls below
    ``config.tol`` or after ``config.max_steps`` steps; non-convergence is
    reported through ``converged``. Non-convex Q triggers a warning since
    only a stationary point is reached.

    Returns
    -------
    QpResult
        ``trajectory`` holds every iterate including ``x0``.
    """
    config = config or HopfieldConfig()
    convex = problem.convex
    if not convex:
        warnings.warn("Q is not positive semidefinite; the result is only a stationary point",
                      RuntimeWarning, stacklevel=2)
    lam_max = float(np.abs(problem.eigenvalues).max()) if problem.n else 1.0
    dt = config.dt if config.dt is not None else 1.0 / max(lam_max, 1e-300)
    lo, hi = problem.lower, problem.upper
    x = 0.5 * (lo + hi) if x0 is None else np.clip(np.asarray(x0, dtype=float), lo, hi)

    traj = [x.copy()]
    objs = [problem.objective(x)]
    norms = [float(np.max(np.abs(projected_gradient(problem, x)), initial=0.0))]
    steps = 0
    converged = norms[0] < config.tol
    while not converged and steps < config.max_steps:
        x = np.clip(x - dt * problem.gradient(x), lo, hi)
        steps += 1
        traj.append(x.copy())
        objs.append(problem.objective(x))
        norms.append(float(np.max(np.abs(projected_gradient(problem, x)), initial=0.0)))
        if not math.isfinite(norms[-1]):
            break
        converged = norms[-1] < config.tol
    return QpResult(x, objs[-1], np.array(traj), converged, steps, np.array(objs),
                    np.array(norms), convex, dt)


def convergence_report(trajectory, problem: QpProblem | None = None, tol=1e-8,
                       objectives=None) -> ConvergenceReport:
    """Steps to tolerance and the objective curve of a trajectory.

    Pass a :class:`QpResult` directly, or a trajectory array with its
    problem. The monotone-descent check is only meaningful for convex
    problems; for non-convex ones ``monotone`` is None.
    """
    if isinstance(trajectory, QpResult):
        res = trajectory
        traj, objs, norms, convex = res.trajectory, res.objectives, res.grad_norms, res.convex
    else:
        if problem is None:
            raise ValueError("a problem is needed to evaluate a bare trajectory")
        traj = np.atleast_2d(np.asarray(trajectory, dtype=float))
        if traj.size == 0:
            raise ValueError("empty trajectory")
        objs = np.array([problem.objective(x) for x in traj]) if objectives is None \
            else np.asarray(objectives, dtype=float)
        norms = np.array([np.max(np.abs(projected_gradient(problem, x)), initial=0.0)
                          for x in traj])
        convex = problem.convex
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    hit = np.flatnonzero(norms < tol)
    steps = int(hit[0]) if hit.size else None
    monotone = None
    if convex:
        slack = 1e-12 * np.maximum(1.0, np.abs(objs[:-1]))
        monotone = bool(np.all(np.diff(objs) <= slack))
    return ConvergenceReport(steps, objs, monotone, convex)


@dataclass
class QpMapping:
    """How a QP is laid out on a network of clipping nodes."""

    eta: float
    weights: np.ndarray
    bias: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    eta_max: float


def _eta_max(Q):
    # largest eta keeping every entry of I - eta Q inside [-1, 1]
    n = Q.shape[0]
    off = np.abs(Q[~np.eye(n, dtype=bool)])
    bounds = [1.0 / off.max()] if off.size and off.max() > 0 else []
    d = np.diag(Q)
    # 1 - eta d in [-1, 1]: eta d <= 2 for d > 0; d < 0 needs eta |d| <= 0
    if np.any(d < 0):
        return 0.0
    pos = d[d > 0]
    if pos.size:
        bounds.append(2.0 / pos.max())
    return min(bounds) if bounds else math.inf


def map_qp_to_network(problem: QpProblem, eta: float, x0=None, wavelengths=None):
    """Network of clipping nodes whose synchronous update is one projected
    gradient step of size ``eta``.

    Node i outputs ``x_i - lower_i`` (nonnegative optical power); the
    offsets are folded into the biases so that the node state follows
    ``x <- clip((I - eta Q) x - eta c, lower, upper)``.

    Returns
    -------
    NetworkSpec, QpMapping
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    Q = problem.Q
    n = problem.n
    W = np.eye(n) - eta * Q
    eta_max = _eta_max(Q)
    if np.any(np.abs(W) > 1.0 + 1e-12):
        i, j = np.unravel_index(np.argmax(np.abs(W)), W.shape)
        raise WeightOverflowError(
            f"eta={eta:g} gives |W[{i},{j}]| = {abs(W[i, j]):.4g} > 1; "
            f"eta must not exceed {eta_max:.6g}", eta_max)
    W = np.clip(W, -1.0, 1.0)
    lam_max = float(np.max(problem.eigenvalues)) if n else 0.0
    if eta * lam_max >= 2.0:
        warnings.warn(f"eta={eta:g} is not below 2/lambda_max = {2.0 / lam_max:.6g}; "
                      "the network iteration may oscillate instead of converging",
                      RuntimeWarning, stacklevel=2)
    bias = -eta * problem.c + W @ problem.lower
    x0 = 0.5 * (problem.lower + problem.upper) if x0 is None else np.asarray(x0, dtype=float)
    params = [ClipParams(float(lo), float(hi), float(x)) for lo, hi, x
              in zip(problem.lower, problem.upper, x0)]
    inputs = [InputSignal.constant(b) for b in bias]
    lams = wavelengths if wavelengths is not None else 1550.0 + 0.4 * np.arange(n)
    spec = NetworkSpec(W, params, tuple(lams), inputs)
    return spec, QpMapping(eta, W, bias, problem.lower.copy(), problem.upper.copy(), eta_max)


def solve_via_network(problem: QpProblem, eta: float, steps: int, x0=None):
    """Run the mapped network for ``steps`` updates; returns the final x."""
    spec, _ = map_qp_to_network(problem, eta, x0=x0)
    net = build_network(spec, mode="ideal")
    res = simulate_network(net, dt=1.0, T=float(steps))
    return res.G[-1].copy()


def penalty_qp(Q, c, lower, upper, A_eq=None, b_eq=None, A_ineq=None, b_ineq=None, rho=100.0,
               slack_upper=None):
    """Fold linear constraints into a box QP with quadratic penalties.

    ``A_eq x = b_eq`` adds ``rho/2 |A_eq x - b_eq|^2``. ``A_ineq x <= b_ineq``
    gets one slack variable per row, ``A x + s = b`` with ``0 <= s <=
    slack_upper``, penalised the same way. The solution only satisfies
    the constraints approximately, to within O(1/rho).

    Returns
    -------
    QpProblem
        Over ``(x, s)``; the first ``len(c)`` entries are x.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    n = c.size
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (n,))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (n,))
    blocks_Q = Q.copy()
    blocks_c = c.copy()
    if A_eq is not None:
        A = np.atleast_2d(np.asarray(A_eq, dtype=float))
        b = np.asarray(b_eq, dtype=float)
        blocks_Q = blocks_Q + rho * A.T @ A
        blocks_c = blocks_c - rho * A.T @ b
    if A_ineq is None:
        return QpProblem(blocks_Q, blocks_c, lower, upper)
    A = np.atleast_2d(np.asarray(A_ineq, dtype=float))
    b = np.asarray(b_ineq, dtype=float)
    m = A.shape[0]
    B = np.hstack([A, np.eye(m)])
    full_Q = np.zeros((n + m, n + m))
    full_Q[:n, :n] = blocks_Q
    full_Q = full_Q + rho * B.T @ B
    full_c = np.concatenate([blocks_c, np.zeros(m)]) - rho * B.T @ b
    if slack_upper is None:
        # generous bound on how slack any row can be inside the x box
        span = np.abs(A) @ (upper - lower) + np.abs(b - A @ lower)
        slack_upper = np.maximum(span, 1.0)
    s_hi = np.broadcast_to(np.asarray(slack_upper, dtype=float), (m,))
    return QpProblem(full_Q, full_c, np.concatenate([lower, np.zeros(m)]),
                     np.concatenate([upper, s_hi]))


def random_spd_problem(n, rng, cond=10.0, interior=True, box=10.0):
    """Random SPD QP, optionally with the optimum strictly inside the box.

    Eigenvalues are spread log-uniformly over ``[1, cond]``. With
    ``interior`` the linear term is chosen as ``-Q x_star`` for an
    ``x_star`` drawn inside the middle half of the box.
    """
    A = rng.standard_normal((n, n))
    U, _ = np.linalg.qr(A)
    lam = np.exp(rng.uniform(0.0, math.log(cond), n))
    Q = (U * lam) @ U.T
    Q = 0.5 * (Q + Q.T)
    if interior:
        x_star = rng.uniform(-0.5 * box, 0.5 * box, n)
        c = -Q @ x_star
    else:
        c = rng.standard_normal(n) * box * cond
    return QpProblem(Q, c, -box * np.ones(n), box * np.ones(n))
