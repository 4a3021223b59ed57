"""Excitable-laser neuron models.

Two-section gain/saturable-absorber laser (Yamada model)::

    dG/dt = gamma_G * (A - G - G*I) + theta(t)
    dQ/dt = gamma_Q * (B - Q - a*Q*I)
    dI/dt = gamma_I * (G - Q - 1) * I + epsilon * G

and its near-threshold leaky integrate-and-fire reduction::

    dG/dt = -gamma_G * (G - A) + theta(t);  G > G_thresh -> spike, G <- G_reset

Time is measured in photon lifetimes. Both integrators are fixed-step
classical RK4 and share a vectorised step so that network co-simulation
(``neurophot.network``) reproduces isolated runs bit for bit.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

__all__ = [
    "StepSizeError",
    "SimulationError",
    "YamadaParams",
    "YamadaState",
    "LifParams",
    "InputSignal",
    "SpikeTrain",
    "YamadaResult",
    "LifResult",
    "CircuitResult",
    "yamada_derivative",
    "simulate_yamada",
    "simulate_lif",
    "simulate_circuit",
    "lif_from_circuit",
    "detect_spikes",
    "pulse_shape_statistics",
    "excitability_threshold",
    "write_trajectory_csv",
    "write_spikes_csv",
]

# dt * max(rate) must stay below this for RK4 to resolve the fastest mode
MAX_STEP_RATE = 0.1


class StepSizeError(ValueError):
    """Raised when the time step does not resolve the fastest rate."""


class SimulationError(RuntimeError):
    """Raised when the integrated state becomes non-finite."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


# =============================================================================
# Parameter and state types
# =============================================================================
@dataclass(frozen=True)
class YamadaParams:
    """Yamada model parameters (dimensionless, rates in inverse photon lifetimes).

    The defaults sit just below the lasing threshold (A - B < 1) with a
    saturable absorber that bleaches faster than the gain (a > 1), which is
    the excitable regime.
    """

    A: float = 6.5
    B: float = 5.9
    a: float = 2.0
    gamma_G: float = 0.05
    gamma_Q: float = 0.05
    gamma_I: float = 1.0
    epsilon: float = 1e-6

    def __post_init__(self):
        for name in ("gamma_G", "gamma_Q", "gamma_I", "a"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        for name in ("A", "B"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def restoring(cls, **overrides) -> "YamadaParams":
        """Excitable regime with strong pulse restoration.

        Closer to the lasing threshold and with an absorber that recovers
        twice as fast as the gain. Output pulse energy varies by about 2%
        across kicks of 1.5x to 3x threshold, and a kick arriving while the
        gain is still depleted is ignored instead of re-igniting a burst.
        """
        values = dict(A=8.0, B=7.05, a=2.0, gamma_Q=0.1)
        values.update(overrides)
        return cls(**values)

    @property
    def max_rate(self) -> float:
        return max(self.gamma_G, self.gamma_Q, self.gamma_I)

    def rest_state(self) -> "YamadaState":
        """Off-state fixed point.

        With ``epsilon == 0`` this is exactly ``(A, B, 0)``. Otherwise the
        spontaneous-emission term holds a small steady intensity which is
        found by root bracketing on the reduced one-dimensional equation.
        """
        if self.epsilon == 0.0:
            return YamadaState(self.A, self.B, 0.0)
        if self.A - self.B - 1.0 >= 0:
            raise ValueError("rest_state requires A - B < 1 (below lasing threshold)")

        def residual(i):
            g = self.A / (1.0 + i)
            q = self.B / (1.0 + self.a * i)
            return self.gamma_I * (g - q - 1.0) * i + self.epsilon * g

        hi = 1e-12
        while residual(hi) > 0:
            hi *= 10.0
        i_rest = brentq(residual, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        return YamadaState(self.A / (1.0 + i_rest), self.B / (1.0 + self.a * i_rest), i_rest)


@dataclass(frozen=True)
class YamadaState:
    G: float
    Q: float
    I: float

    def as_array(self) -> np.ndarray:
        return np.array([self.G, self.Q, self.I], dtype=float)


@dataclass(frozen=True)
class LifParams:
    """Leaky integrate-and-fire parameters in laser-gain units."""

    gamma_G: float = 0.05
    A: float = 0.0
    G_thresh: float = 1.0
    G_reset: float = 0.0
    refractory: float = 0.0
    allow_self_firing: bool = False

    def __post_init__(self):
        if not self.gamma_G > 0:
            raise ValueError("gamma_G must be strictly positive")
        if not self.G_reset < self.G_thresh:
            raise ValueError("G_reset must be below G_thresh")
        if self.G_thresh <= self.A and not self.allow_self_firing:
            raise ValueError("G_thresh <= A makes the neuron fire on its own; "
                             "pass allow_self_firing=True if intended")
        if self.refractory < 0:
            raise ValueError("refractory must be >= 0")

    @property
    def max_rate(self) -> float:
        return self.gamma_G


@dataclass(frozen=True)
class InputSignal:
    """Input perturbation theta(t).

    A signal is the sum of an optional continuous part (a sampled series at a
    fixed step, linearly interpolated and zero outside its support, and/or a
    callable) and an optional train of weighted impulses. Impulses act as
    instantaneous increments of the integrated variable at the nearest grid
    point.
    """

    samples: np.ndarray | None = None
    sample_dt: float | None = None
    t0: float = 0.0
    func: Callable[[np.ndarray], np.ndarray] | None = None
    impulse_times: tuple = ()
    impulse_areas: tuple = ()

    def __post_init__(self):
        if self.samples is not None:
            samples = np.asarray(self.samples, dtype=float)
            if samples.ndim != 1:
                raise ValueError("samples must be one-dimensional")
            if self.sample_dt is None or not self.sample_dt > 0:
                raise ValueError("sampled input needs a positive sample_dt")
            object.__setattr__(self, "samples", samples)
        times = tuple(float(t) for t in self.impulse_times)
        areas = tuple(float(a) for a in self.impulse_areas)
        if len(times) != len(areas):
            raise ValueError("impulse_times and impulse_areas differ in length")
        if any(t1 < t0 for t0, t1 in zip(times, times[1:])):
            raise ValueError("impulse times must be non-decreasing")
        if not all(math.isfinite(a) for a in areas):
            raise ValueError("impulse areas must be finite")
        object.__setattr__(self, "impulse_times", times)
        object.__setattr__(self, "impulse_areas", areas)

    # -- constructors --------------------------------------------------------
    @classmethod
    def none(cls) -> "InputSignal":
        return cls()

    @classmethod
    def sampled(cls, values, dt, t0=0.0) -> "InputSignal":
        return cls(samples=np.asarray(values, dtype=float), sample_dt=float(dt), t0=float(t0))

    @classmethod
    def impulses(cls, times, areas) -> "InputSignal":
        times = list(times)
        areas = list(areas) if np.ndim(areas) else [float(areas)] * len(times)
        order = sorted(range(len(times)), key=lambda k: times[k])
        return cls(impulse_times=tuple(times[k] for k in order),
                   impulse_areas=tuple(areas[k] for k in order))

    @classmethod
    def function(cls, func) -> "InputSignal":
        return cls(func=func)

    @classmethod
    def constant(cls, value) -> "InputSignal":
        value = float(value)
        return cls(func=lambda t: np.full(np.shape(t), value))

    # -- combination ---------------------------------------------------------
    def scaled(self, k: float) -> "InputSignal":
        """Return ``k * theta(t)``."""
        func = None
        if self.func is not None:
            f = self.func
            func = lambda t: k * np.asarray(f(t), dtype=float)  # noqa: E731
        return InputSignal(
            samples=None if self.samples is None else k * self.samples,
            sample_dt=self.sample_dt,
            t0=self.t0,
            func=func,
            impulse_times=self.impulse_times,
            impulse_areas=tuple(k * a for a in self.impulse_areas),
        )

    def __add__(self, other: "InputSignal") -> "InputSignal":
        if self.samples is not None and other.samples is not None:
            raise ValueError("cannot add two sampled inputs; resample into one series")
        funcs = [f for f in (self.func, other.func) if f is not None]
        if len(funcs) == 2:
            f1, f2 = funcs
            func = lambda t: np.asarray(f1(t), float) + np.asarray(f2(t), float)  # noqa: E731
        else:
            func = funcs[0] if funcs else None
        sampled = self if self.samples is not None else other
        pairs = sorted(zip(self.impulse_times + other.impulse_times,
                           self.impulse_areas + other.impulse_areas), key=lambda p: p[0])
        return InputSignal(
            samples=sampled.samples, sample_dt=sampled.sample_dt, t0=sampled.t0, func=func,
            impulse_times=tuple(p[0] for p in pairs), impulse_areas=tuple(p[1] for p in pairs),
        )

    # -- evaluation ----------------------------------------------------------
    @property
    def has_continuous(self) -> bool:
        return self.samples is not None or self.func is not None

    def value(self, t) -> np.ndarray:
        """Continuous part of theta at time(s) ``t`` (impulses excluded)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        if self.samples is not None:
            grid = self.t0 + self.sample_dt * np.arange(self.samples.size)
            out = out + np.interp(t, grid, self.samples, left=0.0, right=0.0)
        if self.func is not None:
            out = out + np.broadcast_to(np.asarray(self.func(t), dtype=float), t.shape)
        return out

    def half_step_grid(self, dt: float, n_steps: int) -> np.ndarray:
        """Continuous input at ``t = k * dt / 2`` for k = 0..2*n_steps."""
        if not self.has_continuous:
            return np.zeros(2 * n_steps + 1)
        return self.value(0.5 * dt * np.arange(2 * n_steps + 1))

    def impulse_grid(self, dt: float, n_steps: int) -> np.ndarray:
        """Impulse areas binned to the nearest grid index 0..n_steps-1."""
        kicks = np.zeros(n_steps + 1)
        for t, area in zip(self.impulse_times, self.impulse_areas):
            k = int(round(t / dt))
            if 0 <= k < n_steps:
                kicks[k] += area
        return kicks


@dataclass
class SpikeTrain:
    """Spike events: peak time, peak intensity and pulse energy."""

    times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    peaks: np.ndarray = field(default_factory=lambda: np.zeros(0))
    energies: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.peaks = np.asarray(self.peaks, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if not (self.times.shape == self.peaks.shape == self.energies.shape):
            raise ValueError("times, peaks and energies must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("spike times must be strictly increasing")

    def __len__(self):
        return self.times.size

    def __iter__(self):
        return iter(zip(self.times.tolist(), self.peaks.tolist(), self.energies.tolist()))


@dataclass
class YamadaResult:
    t: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    I: np.ndarray
    spikes: SpikeTrain

    def state(self, k=-1) -> YamadaState:
        return YamadaState(float(self.G[k]), float(self.Q[k]), float(self.I[k]))


@dataclass
class LifResult:
    t: np.ndarray
    G: np.ndarray
    spikes: SpikeTrain


@dataclass
class CircuitResult:
    t: np.ndarray
    V: np.ndarray
    spike_times: np.ndarray


# =============================================================================
# Yamada model
# =============================================================================
def yamada_derivative(state, params: YamadaParams, theta=0.0):
    """Right-hand side of the Yamada equations, with f(G) = G.

    ``state`` may be a :class:`YamadaState` or anything unpacking to
    ``(G, Q, I)``; array-valued components are handled elementwise.

    Returns
    -------
    (dG, dQ, dI) : tuple
    """
    G, Q, I = (state.G, state.Q, state.I) if isinstance(state, YamadaState) else state
    p = params
    dG = p.gamma_G * (p.A - G - G * I) + theta
    dQ = p.gamma_Q * (p.B - Q - p.a * Q * I)
    dI = p.gamma_I * (G - Q - 1.0) * I + p.epsilon * G
    return dG, dQ, dI


def yamada_rk4_step(G, Q, I, theta0, theta_mid, theta1, dt, params):
    """One classical RK4 step with I clamped at zero afterwards.

    Works on floats or equal-shaped arrays; ``params`` may hold arrays for
    per-node parameters.
    """
    h2 = 0.5 * dt
    k1 = yamada_derivative((G, Q, I), params, theta0)
    k2 = yamada_derivative((G + h2 * k1[0], Q + h2 * k1[1], I + h2 * k1[2]), params, theta_mid)
    k3 = yamada_derivative((G + h2 * k2[0], Q + h2 * k2[1], I + h2 * k2[2]), params, theta_mid)
    k4 = yamada_derivative((G + dt * k3[0], Q + dt * k3[1], I + dt * k3[2]), params, theta1)
    h6 = dt / 6.0
    G = G + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    Q = Q + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    I = I + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    if isinstance(I, np.ndarray):
        return G, Q, np.maximum(I, 0.0)
    return G, Q, (I if I > 0.0 else 0.0)


def check_step(dt, rate, T=None):
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if dt * rate > MAX_STEP_RATE * (1 + 1e-12):
        raise StepSizeError(
            f"dt={dt} does not resolve the fastest rate {rate} (need dt*rate <= {MAX_STEP_RATE})")
    if T is not None and not T > 0:
        raise ValueError(f"horizon T must be positive, got {T}")


def n_steps_for(T, dt):
    return int(round(T / dt))


def simulate_yamada(params: YamadaParams, input: InputSignal | None = None, dt=0.05, T=200.0,
                    initial: YamadaState | None = None, spike_threshold=0.5, dead_time=0.0):
    """Integrate the Yamada model with fixed-step RK4.

    Parameters
    ----------
    params : YamadaParams
    input : InputSignal, optional
        Perturbation added to dG/dt. Impulses are applied as increments of G.
    dt, T : float
        Step and horizon. ``dt * max(gamma)`` must not exceed 0.1.
    initial : YamadaState, optional
        Defaults to the off-state fixed point, ``params.rest_state()``.
    spike_threshold, dead_time : float
        Passed to :func:`detect_spikes` on the intensity trace.

    Returns
    -------
    YamadaResult
    """
    check_step(dt, params.max_rate, T)
    input = input or InputSignal.none()
    n = n_steps_for(T, dt)
    start = initial if initial is not None else params.rest_state()
    theta = input.half_step_grid(dt, n).tolist()
    kicks = input.impulse_grid(dt, n).tolist()

    G = np.empty(n + 1)
    Q = np.empty(n + 1)
    I = np.empty(n + 1)
    g, q, i = start.G, start.Q, start.I
    for k in range(n):
        g = g + kicks[k]
        G[k], Q[k], I[k] = g, q, i
        g, q, i = yamada_rk4_step(g, q, i, theta[2 * k], theta[2 * k + 1], theta[2 * k + 2],
                                  dt, params)
        i = float(i)
        if not (math.isfinite(g) and math.isfinite(q) and math.isfinite(i)):
            raise SimulationError(f"non-finite Yamada state at t={(k + 1) * dt:g}", (k + 1) * dt)
    G[n], Q[n], I[n] = g, q, i
    t = dt * np.arange(n + 1)
    spikes = detect_spikes(I, spike_threshold, dead_time, t=t)
    return YamadaResult(t, G, Q, I, spikes)


def excitability_threshold(params: YamadaParams, dt=0.05, T=300.0, hi=None, rtol=1e-4,
                           spike_threshold=0.5):
    """Smallest impulse area (kick in G) that fires a spike from rest.

    Found by bisection on the number of spikes elicited by a single impulse
    at t = 0. ``hi`` defaults to the kick that puts G at the lasing
    threshold G = B + 1 plus a margin, doubled until it fires.
    """
    rest = params.rest_state()

    def fires(area):
        res = simulate_yamada(params, InputSignal.impulses([0.0], [area]), dt, T,
                              initial=rest, spike_threshold=spike_threshold)
        return len(res.spikes) > 0

    lo = 0.0
    hi = hi if hi is not None else max(params.B + 1.0 - rest.G, 0.0) + 0.1
    while not fires(hi):
        lo = hi
        hi *= 2.0
        if hi > 1e6:
            raise SimulationError("no finite impulse area fires a spike")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if fires(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# =============================================================================
# Leaky integrate-and-fire reduction and its circuit form
# =============================================================================
def lif_rk4_step(G, theta0, theta_mid, theta1, dt, gamma_G, A):
    h2 = 0.5 * dt
    k1 = -gamma_G * (G - A) + theta0
    k2 = -gamma_G * (G + h2 * k1 - A) + theta_mid
    k3 = -gamma_G * (G + h2 * k2 - A) + theta_mid
    k4 = -gamma_G * (G + dt * k3 - A) + theta1
    return G + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def simulate_lif(params: LifParams, input: InputSignal | None = None, dt=0.01, T=100.0,
                 G0=None):
    """Integrate the LIF gain model with threshold/reset.

    The threshold is tested on the grid after impulses are applied and
    after each RK4 step; a crossing fires a spike at that grid time, resets
    G to ``G_reset`` and holds it there (ignoring input) for
    ``params.refractory``.
    """
    check_step(dt, params.max_rate, T)
    input = input or InputSignal.none()
    n = n_steps_for(T, dt)
    theta = input.half_step_grid(dt, n).tolist()
    kicks = input.impulse_grid(dt, n).tolist()

    G = np.empty(n + 1)
    g = params.A if G0 is None else float(G0)
    spikes = []
    hold_until = -math.inf
    for k in range(n + 1):
        t = k * dt
        held = t < hold_until - 1e-9 * dt
        if held:
            g = params.G_reset
        else:
            g = g + kicks[k]
            if g > params.G_thresh:
                spikes.append(t)
                g = params.G_reset
                hold_until = t + params.refractory
                held = params.refractory > 0
        G[k] = g
        if k == n:
            break
        if not held:
            g = lif_rk4_step(g, theta[2 * k], theta[2 * k + 1], theta[2 * k + 2], dt,
                             params.gamma_G, params.A)
    t = dt * np.arange(n + 1)
    ones = np.ones(len(spikes))
    return LifResult(t, G, SpikeTrain(spikes, ones * params.G_thresh, ones))


def lif_from_circuit(R_m, C_m, V_L, V_thresh, V_reset, refractory=0.0):
    """Map membrane-circuit parameters onto the laser LIF model.

    gamma_G = 1 / (R_m C_m), A = V_L, G = V_m, thresholds carry over. The
    circuit equation ``C_m dV/dt = -(V - V_L)/R_m + I_app`` gives
    ``theta(t) = I_app(t) / C_m``; when ``I_app`` is expressed as the
    equivalent voltage drive ``R_m * I_app`` this is the familiar
    ``I_app / (R_m C_m)``.

    Returns
    -------
    params : LifParams
    input_scale : float
        Multiply the circuit current by this to obtain theta.
    """
    if not (R_m > 0 and C_m > 0):
        raise ValueError("R_m and C_m must be strictly positive")
    params = LifParams(gamma_G=1.0 / (R_m * C_m), A=V_L, G_thresh=V_thresh, G_reset=V_reset,
                       refractory=refractory, allow_self_firing=True)
    return params, 1.0 / C_m


def simulate_circuit(R_m, C_m, V_L, V_thresh, V_reset, I_app: InputSignal | None = None,
                     dt=0.01, T=100.0, V0=None, refractory=0.0):
    """Integrate the membrane circuit ``C_m dV/dt = -(V - V_L)/R_m + I_app``.

    Independent of :func:`simulate_lif`; used to check the parameter mapping.
    Impulses in ``I_app`` are charge packets (voltage jump q / C_m).
    """
    if not (R_m > 0 and C_m > 0):
        raise ValueError("R_m and C_m must be strictly positive")
    check_step(dt, 1.0 / (R_m * C_m), T)
    I_app = I_app or InputSignal.none()
    n = n_steps_for(T, dt)
    current = I_app.half_step_grid(dt, n).tolist()
    charge = I_app.impulse_grid(dt, n).tolist()

    def dvdt(v, i):
        return (-(v - V_L) / R_m + i) / C_m

    V = np.empty(n + 1)
    v = V_L if V0 is None else float(V0)
    spikes = []
    hold_until = -math.inf
    for k in range(n + 1):
        t = k * dt
        held = t < hold_until - 1e-9 * dt
        if held:
            v = V_reset
        else:
            v = v + charge[k] / C_m
            if v > V_thresh:
                spikes.append(t)
                v = V_reset
                hold_until = t + refractory
                held = refractory > 0
        V[k] = v
        if k == n:
            break
        if not held:
            i0, im, i1 = current[2 * k], current[2 * k + 1], current[2 * k + 2]
            k1 = dvdt(v, i0)
            k2 = dvdt(v + 0.5 * dt * k1, im)
            k3 = dvdt(v + 0.5 * dt * k2, im)
            k4 = dvdt(v + dt * k3, i1)
            v = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return CircuitResult(dt * np.arange(n + 1), V, np.asarray(spikes))


# =============================================================================
# Spike extraction
# =============================================================================
def detect_spikes(trace, threshold, dead_time=0.0, t=None, dt=None) -> SpikeTrain:
    """Extract one event per supra-threshold excursion of an intensity trace.

    Each event is stamped at the excursion's intensity peak; its energy is
    the trapezoidal integral of the trace over the excursion. An excursion
    that starts within ``dead_time`` of the previous event is merged into it.

    Parameters
    ----------
    trace : array_like
        Intensity samples.
    threshold : float
        Detection level (> 0).
    dead_time : float
        Merge window (>= 0).
    t : array_like, optional
        Sample times. Otherwise ``dt`` (default 1) sets a uniform grid.
    """
    trace = np.asarray(trace, dtype=float)
    if trace.size == 0:
        raise ValueError("empty trace")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if dead_time < 0:
        raise ValueError("dead_time must be >= 0")
    if t is None:
        t = (1.0 if dt is None else dt) * np.arange(trace.size)
    t = np.asarray(t, dtype=float)

    above = trace > threshold
    edges = np.diff(np.concatenate(([0], above.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)  # exclusive

    times, peaks, energies = [], [], []
    for s, e in zip(starts, stops):
        seg = slice(s, e)
        k = s + int(np.argmax(trace[seg]))
        energy = float(trapezoid(trace[seg], t[seg])) if e - s > 1 else 0.0
        if times and t[s] - times[-1] < dead_time:
            energies[-1] += energy
            if trace[k] > peaks[-1]:
                times[-1], peaks[-1] = float(t[k]), float(trace[k])
            continue
        times.append(float(t[k]))
        peaks.append(float(trace[k]))
        energies.append(energy)
    return SpikeTrain(times, peaks, energies)


def pulse_shape_statistics(train: SpikeTrain):
    """Mean pulse energy and relative spread (std / mean) of a spike train."""
    if len(train) < 2:
        raise ValueError("pulse statistics need at least two spikes")
    mean = float(np.mean(train.energies))
    return mean, float(np.std(train.energies) / mean)


# =============================================================================
# Export
# =============================================================================
def _fmt(x):
    return format(float(x), ".17g")


def write_trajectory_csv(path, result: YamadaResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "G", "Q", "I"])
        for row in zip(result.t, result.G, result.Q, result.I):
            w.writerow([_fmt(v) for v in row])


def write_spikes_csv(path, train: SpikeTrain):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_spike", "peak", "energy"])
        for row in train:
            w.writerow([_fmt(v) for v in row])
