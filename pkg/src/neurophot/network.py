"""Broadcast-and-weight networks of photonic neurons.

Every node emits on its own WDM carrier into a broadcast loop. Each node
listening on that loop weights all carriers with its own weight bank,
sums them on a balanced photodetector and drives its nonlinear element::

    theta_i(t) = gain * sum_j w_ij P_j(t - tau_ij) + external_i(t)

Nodes are co-integrated synchronously on a fixed grid. Every edge has a
delay of at least one step, so the drive over the next step only depends
on outputs already computed and recurrent loops need no algebraic solve.
Within a step the drive is linearly interpolated between grid points.

Node kinds
----------
YamadaParams
    Excitable laser; emitted power is ``output_coupling * I``.
LifParams
    Threshold/reset gain model; each spike is delivered downstream as an
    impulse of area ``output_coupling``.
RelayParams
    Linear export node: re-emits its (unscaled, rectified) weighted input
    on another loop's carrier.
ClipParams
    Continuous node whose output is the box-clipped weighted input, used
    for Hopfield-style iterations. Emitted power is measured from the
    lower bound so that it stays nonnegative.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import nnls

from .laser import (
    InputSignal,
    LifParams,
    SimulationError,
    SpikeTrain,
    YamadaParams,
    check_step,
    detect_spikes,
    n_steps_for,
    yamada_rk4_step,
    lif_rk4_step,
)
from .weightbank import (
    HeaterModel,
    MIN_SPACING_LINEWIDTHS,
    MrrFilter,
    WeightBank,
    detuning_for_weight,
    max_channel_count,
    quantize,
)

__all__ = [
    "CapacityError",
    "RelayParams",
    "ClipParams",
    "NetworkSpec",
    "BankTemplate",
    "Network",
    "NetworkResult",
    "wdm_weighted_sum",
    "build_network",
    "simulate_network",
    "pattern_recognition_circuit",
    "add_export_node",
    "write_network_traces",
    "write_spike_events",
]


class CapacityError(ValueError):
    """A loop carries more channels than its weight banks can resolve."""


@dataclass(frozen=True)
class RelayParams:
    """Export node: output power equals its weighted input, rectified."""


@dataclass(frozen=True)
class ClipParams:
    """Continuous node ``x = clip(sum_j w_ij P_j + external, lower, upper)``."""

    lower: float = -1.0
    upper: float = 1.0
    x0: float | None = None

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("ClipParams needs lower < upper")

    @property
    def start(self) -> float:
        x0 = 0.5 * (self.lower + self.upper) if self.x0 is None else float(self.x0)
        return min(max(x0, self.lower), self.upper)


_KINDS = {YamadaParams: "yamada", LifParams: "lif", RelayParams: "relay", ClipParams: "clip"}


def _kind(params):
    try:
        return _KINDS[type(params)]
    except KeyError:
        raise TypeError(f"unsupported node parameters {type(params).__name__}") from None


def wdm_weighted_sum(powers, weights) -> float:
    """Balanced-detector output ``sum_i w_i x_i`` of a weighted WDM signal."""
    x = np.asarray(powers, dtype=float)
    w = np.asarray(weights, dtype=float)
    if x.shape != w.shape or x.ndim != 1:
        raise ValueError(f"powers and weights differ in shape: {x.shape} vs {w.shape}")
    if np.any(x < 0):
        raise ValueError("optical powers must be nonnegative")
    if np.any(np.abs(w) > 1):
        raise ValueError("weights must lie in [-1, 1]")
    return float(np.dot(w, x))


@dataclass
class NetworkSpec:
    """Description of a broadcast-and-weight network.

    Parameters
    ----------
    weight_matrix : (N, N) array
        ``w_ij`` weights the output of node j into node i; entries in [-1, 1].
    neuron_params : list
        One of YamadaParams, LifParams, RelayParams, ClipParams per node.
    wavelengths : sequence of float
        Carrier of each node (nm), unique within the loop it emits on.
    external_inputs : list of InputSignal, optional
    loop_id : sequence of int, optional
        Loop each node listens on (and emits on unless exported).
    exports : list of (node, source_loop, dest_loop)
        Nodes that listen on ``source_loop`` and emit on ``dest_loop``.
    drive_gain : float
        Photocurrent to pump-perturbation scale for spiking nodes.
    output_coupling : float
        Emitted power per unit intensity (Yamada) or impulse area per
        spike (LIF).
    delay : float, optional
        Uniform propagation delay; defaults to one time step.
    edge_delays : (N, N) array, optional
        Per-edge delays overriding ``delay`` (entries for zero weights are
        ignored).
    """

    weight_matrix: np.ndarray
    neuron_params: list
    wavelengths: tuple
    external_inputs: list | None = None
    loop_id: tuple | None = None
    exports: list = field(default_factory=list)
    drive_gain: float = 1.0
    output_coupling: float = 1.0
    delay: float | None = None
    edge_delays: np.ndarray | None = None

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.weight_matrix, dtype=float))
        n = len(self.neuron_params)
        if W.shape != (n, n):
            raise ValueError(f"weight matrix must be {n}x{n}, got {W.shape}")
        if not np.all(np.isfinite(W)) or np.any(np.abs(W) > 1):
            raise ValueError("weights must be finite and lie in [-1, 1]")
        self.weight_matrix = W
        self.neuron_params = list(self.neuron_params)
        for p in self.neuron_params:
            _kind(p)
        self.wavelengths = tuple(float(x) for x in self.wavelengths)
        if len(self.wavelengths) != n:
            raise ValueError("one wavelength per node is required")
        if self.external_inputs is None:
            self.external_inputs = [InputSignal.none() for _ in range(n)]
        self.external_inputs = [x if x is not None else InputSignal.none()
                                for x in self.external_inputs]
        if len(self.external_inputs) != n:
            raise ValueError("one external input per node is required")
        self.loop_id = tuple(int(x) for x in (self.loop_id if self.loop_id is not None else [0] * n))
        if len(self.loop_id) != n:
            raise ValueError("one loop id per node is required")
        self.exports = [tuple(int(v) for v in e) for e in self.exports]
        seen = set()
        for node, src, dst in self.exports:
            if not 0 <= node < n:
                raise ValueError(f"export refers to unknown node {node}")
            if node in seen:
                raise ValueError(f"node {node} exported twice")
            seen.add(node)
            if self.loop_id[node] != src:
                raise ValueError(f"export node {node} listens on loop {self.loop_id[node]}, not {src}")
        for loop, nodes in self.emitters().items():
            lams = [self.wavelengths[j] for j in nodes]
            if len(set(lams)) != len(lams):
                raise ValueError(f"duplicate wavelength on loop {loop}")
        listen = np.array(self.loop_id)
        emit = np.array(self.emit_loops)
        crossing = (W != 0) & (listen[:, None] != emit[None, :])
        if np.any(crossing):
            i, j = np.argwhere(crossing)[0]
            raise ValueError(f"node {i} on loop {listen[i]} cannot weight node {j}, "
                             f"which emits on loop {emit[j]}; add an export node")
        if self.delay is not None and not self.delay > 0:
            raise ValueError("propagation delay must be positive")
        if self.edge_delays is not None:
            D = np.asarray(self.edge_delays, dtype=float)
            if D.shape != (n, n) or np.any(D[W != 0] <= 0):
                raise ValueError("edge delays must be an NxN array, positive on every edge")
            self.edge_delays = D

    @property
    def N(self) -> int:
        return len(self.neuron_params)

    @property
    def emit_loops(self) -> tuple:
        out = list(self.loop_id)
        for node, _, dst in self.exports:
            out[node] = dst
        return tuple(out)

    def emitters(self) -> dict:
        """Nodes emitting on each loop, by loop id."""
        loops = {}
        for j, loop in enumerate(self.emit_loops):
            loops.setdefault(loop, []).append(j)
        return loops

    def permuted(self, order) -> "NetworkSpec":
        """Relabel nodes so that new node k is old node ``order[k]``."""
        order = np.asarray(order, dtype=int)
        if sorted(order.tolist()) != list(range(self.N)):
            raise ValueError("order must be a permutation")
        inv = np.argsort(order)
        return replace(
            self,
            weight_matrix=self.weight_matrix[np.ix_(order, order)],
            neuron_params=[self.neuron_params[k] for k in order],
            wavelengths=tuple(self.wavelengths[k] for k in order),
            external_inputs=[self.external_inputs[k] for k in order],
            loop_id=tuple(self.loop_id[k] for k in order),
            exports=[(int(inv[n]), s, d) for n, s, d in self.exports],
            edge_delays=None if self.edge_delays is None
            else self.edge_delays[np.ix_(order, order)],
        )


@dataclass(frozen=True)
class BankTemplate:
    """Recipe for the per-node weight banks of a loop.

    The default finesse ``fsr / fwhm`` is 368.
    """

    fwhm: float = 0.1
    fsr: float = 36.8
    rest_offset: float = 0.8
    dac_bits: int | None = 12
    max_current: float = 4e-3
    k0: float = 3000.0
    decay_length: float = 0.6
    resistance: float = 500.0
    thermo_optic: float = 0.08

    @property
    def finesse(self) -> float:
        return self.fsr / self.fwhm

    def build(self, channels) -> WeightBank:
        channels = np.sort(np.asarray(channels, dtype=float))
        n = channels.size
        filters = tuple(MrrFilter(c - self.rest_offset, self.fwhm, self.fsr) for c in channels)
        heater = HeaterModel.exponential(n, k0=self.k0, decay_length=self.decay_length,
                                         resistance=self.resistance, thermo_optic=self.thermo_optic)
        return WeightBank(filters, heater, tuple(channels), adc_bits=None,
                          dac_bits=self.dac_bits, max_current=self.max_current)


def _realize_row(bank: WeightBank, targets) -> np.ndarray:
    """Weights a bank actually applies when set through its thermal model.

    Detunings come from the Lorentzian inverse; targets below the unheated
    weight stay unheated. Heater powers solve the cross-talk model (falling
    back to nonnegative least squares), then pass through the DAC.
    """
    fwhm = np.array([f.fwhm for f in bank.filters])
    rest = np.array(bank.channels) - np.array([f.lambda0 for f in bank.filters])
    with np.errstate(invalid="ignore"):
        detune = detuning_for_weight(targets, fwhm)
    shift = np.clip(rest - detune, 0.0, None)
    M = bank.heater.shift_matrix
    s = np.linalg.solve(M, shift)
    if np.any(s < 0):
        s, _ = nnls(M, shift)
    currents = quantize(np.sqrt(np.clip(s, 0.0, bank.max_current ** 2)), bank.dac_bits,
                        0.0, bank.max_current)
    x = 2.0 * (rest - M @ (currents * currents)) / fwhm
    return (1.0 - x * x) / (1.0 + x * x)


@dataclass
class Network:
    """An executable network: spec plus the weights its banks realize."""

    spec: NetworkSpec
    weights: np.ndarray
    mode: str
    capacity: int
    banks: dict
    template: BankTemplate
    finesse: float
    spacing: float


def build_network(spec: NetworkSpec, bank_template: BankTemplate | None = None, finesse=None,
                  spacing=MIN_SPACING_LINEWIDTHS, mode="physics") -> Network:
    """Check loop capacities and instantiate each node's weight bank.

    Parameters
    ----------
    finesse : float, optional
        Bank finesse for the capacity check; defaults to the template's.
    spacing : float
        Minimum channel spacing in linewidths.
    mode : {"physics", "ideal"}
        ``physics`` sets each row through ring detunings, heater cross-talk
        and DAC quantization; ``ideal`` uses the weight matrix as given.
    """
    if mode not in ("physics", "ideal"):
        raise ValueError(f"unknown weight mode {mode!r}")
    template = bank_template or BankTemplate()
    finesse = template.finesse if finesse is None else float(finesse)
    capacity = max_channel_count(finesse, spacing)
    emitters = spec.emitters()
    for loop, nodes in sorted(emitters.items()):
        if len(nodes) > capacity:
            raise CapacityError(f"loop {loop} carries {len(nodes)} channels; finesse {finesse:g} "
                                f"at {spacing:g} linewidths supports {capacity}")
    W = spec.weight_matrix.copy()
    banks = {}
    if mode == "physics":
        for loop, nodes in emitters.items():
            lams = np.array([spec.wavelengths[j] for j in nodes])
            order = np.argsort(lams)
            cols = np.array(nodes)[order]
            bank = template.build(lams[order])
            banks[loop] = bank
            for i in range(spec.N):
                if spec.loop_id[i] != loop:
                    continue
                W[i, cols] = _realize_row(bank, spec.weight_matrix[i, cols])
    return Network(spec, W, mode, capacity, banks, template, finesse, float(spacing))


def add_export_node(network: Network, source_loop: int, dest_loop: int, wavelength: float,
                    weights=None, targets=None) -> Network:
    """Append a relay that listens on one loop and re-emits on another.

    Parameters
    ----------
    weights : dict or sequence, optional
        Weight per source node, as ``{node: w}`` or a full length-N row.
    targets : dict, optional
        ``{dest_node: w}`` weights of the relay's carrier into nodes on
        the destination loop.
    """
    spec = network.spec
    n = spec.N
    row = np.zeros(n + 1)
    if isinstance(weights, dict):
        for j, w in weights.items():
            row[j] = w
    elif weights is not None:
        row[:n] = np.asarray(weights, dtype=float)
    W = np.zeros((n + 1, n + 1))
    W[:n, :n] = spec.weight_matrix
    W[n] = row
    for i, w in (targets or {}).items():
        W[i, n] = w
    D = None
    if spec.edge_delays is not None:
        D = np.full((n + 1, n + 1), spec.delay if spec.delay is not None else np.nan)
        D[:n, :n] = spec.edge_delays
    new = replace(
        spec,
        weight_matrix=W,
        neuron_params=spec.neuron_params + [RelayParams()],
        wavelengths=spec.wavelengths + (float(wavelength),),
        external_inputs=spec.external_inputs + [InputSignal.none()],
        loop_id=spec.loop_id + (int(source_loop),),
        exports=spec.exports + [(n, int(source_loop), int(dest_loop))],
        edge_delays=D,
    )
    return build_network(new, network.template, finesse=network.finesse,
                         spacing=network.spacing, mode=network.mode)


@dataclass
class NetworkResult:
    """Traces (rows = time, columns = node) and per-node spikes.

    ``G``, ``Q``, ``I`` hold the Yamada variables (LIF gain in ``G``;
    clip-node output in ``G``); unused entries are NaN. ``P`` is the
    emitted optical power.
    """

    t: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    I: np.ndarray
    P: np.ndarray
    spikes: list
    kinds: tuple

    def spike_events(self):
        """Merged ``(node, t_spike)`` events sorted by time then node."""
        ev = [(j, float(t)) for j, tr in enumerate(self.spikes) for t in tr.times]
        return sorted(ev, key=lambda e: (e[1], e[0]))


def _delay_steps(spec: NetworkSpec, dt):
    base = 1 if spec.delay is None else max(1, int(round(spec.delay / dt)))
    if spec.edge_delays is None:
        return base, None
    W = spec.weight_matrix
    D = np.where(W != 0, spec.edge_delays, np.nan)
    D = np.where(np.isnan(D), base * dt, D)
    steps = np.maximum(1, np.rint(D / dt)).astype(int)
    return base, steps


def simulate_network(network: Network, dt=0.05, T=200.0, spike_threshold=0.5):
    """Synchronously co-integrate all nodes with fixed-step RK4.

    Returns
    -------
    NetworkResult
    """
    spec = network.spec
    N = spec.N
    W = network.weights
    kinds = tuple(_kind(p) for p in spec.neuron_params)
    rates = [p.max_rate for p in spec.neuron_params if isinstance(p, (YamadaParams, LifParams))]
    check_step(dt, max(rates) if rates else 0.0, T)
    n = n_steps_for(T, dt)
    base, steps = _delay_steps(spec, dt)

    idx = {k: np.array([j for j in range(N) if kinds[j] == k], dtype=int) for k in _KINDS.values()}
    yi, li, ri, ci = idx["yamada"], idx["lif"], idx["relay"], idx["clip"]
    gain = spec.drive_gain
    c_out = spec.output_coupling

    ext_half = np.zeros((2 * n + 1, N))
    ext_kick = np.zeros((n + 1, N))
    for j, sig in enumerate(spec.external_inputs):
        ext_half[:, j] = sig.half_step_grid(dt, n)
        ext_kick[:, j] = sig.impulse_grid(dt, n)

    # emitted power and impulse history; times before 0 repeat the initial output
    P = np.zeros((n + 1, N))
    A = np.zeros((n + 1, N))

    if steps is None:
        groups = [(base, W)]
    else:
        groups = [(int(d), np.where(steps == d, W, 0.0)) for d in np.unique(steps)]
    # zero blocks never contribute
    groups = [(d, Wd) for d, Wd in groups if np.any(Wd != 0)]

    def wsum(hist, k):
        out = np.zeros(N)
        for d, Wd in groups:
            out = out + Wd @ hist[k - d if k >= d else 0]
        return out

    def wsum_impulses(k):
        out = np.zeros(N)
        for d, Wd in groups:
            if k >= d:
                out = out + Wd @ A[k - d]
        return out

    # Yamada state
    if yi.size:
        yp = [spec.neuron_params[j] for j in yi]
        ypar = YamadaParams.__new__(YamadaParams)
        for name in ("A", "B", "a", "gamma_G", "gamma_Q", "gamma_I", "epsilon"):
            object.__setattr__(ypar, name, np.array([getattr(p, name) for p in yp]))
        rest = [p.rest_state() for p in yp]
        g = np.array([s.G for s in rest])
        q = np.array([s.Q for s in rest])
        i_ = np.array([s.I for s in rest])
    # LIF state
    if li.size:
        lp = [spec.neuron_params[j] for j in li]
        l_gamma = np.array([p.gamma_G for p in lp])
        l_A = np.array([p.A for p in lp])
        l_thr = np.array([p.G_thresh for p in lp])
        l_reset = np.array([p.G_reset for p in lp])
        l_ref = np.array([p.refractory for p in lp])
        lg = l_A.copy()
        hold_until = np.full(li.size, -math.inf)
        lif_spikes = [[] for _ in li]
    # clip state
    if ci.size:
        cp = [spec.neuron_params[j] for j in ci]
        c_lo = np.array([p.lower for p in cp])
        c_hi = np.array([p.upper for p in cp])
        cx = np.array([p.start for p in cp])

    G = np.full((n + 1, N), np.nan)
    Q = np.full((n + 1, N), np.nan)
    I = np.full((n + 1, N), np.nan)

    S_next = None
    for k in range(n + 1):
        t = k * dt
        imp = wsum_impulses(k)
        kick = ext_kick[k] + gain * imp
        raw_kick = ext_kick[k] + imp
        S = S_next if S_next is not None else wsum(P, k)

        if yi.size:
            g = g + kick[yi]
            G[k, yi], Q[k, yi], I[k, yi] = g, q, i_
            P[k, yi] = c_out * i_
        if li.size:
            held = t < hold_until - 1e-9 * dt
            lg = np.where(held, l_reset, lg + kick[li])
            fire = ~held & (lg > l_thr)
            if fire.any():
                for m in np.flatnonzero(fire):
                    lif_spikes[m].append(t)
                A[k, li[fire]] = c_out
                lg = np.where(fire, l_reset, lg)
                hold_until = np.where(fire, t + l_ref, hold_until)
                held = held | (fire & (l_ref > 0))
            G[k, li] = lg
        if ri.size:
            P[k, ri] = np.maximum(S[ri] + ext_half[2 * k, ri], 0.0)
            A[k, ri] = np.maximum(raw_kick[ri], 0.0)
        if ci.size:
            if k > 0:
                cx = np.clip(S[ci] + ext_half[2 * k, ci], c_lo, c_hi)
            G[k, ci] = cx
            P[k, ci] = cx - c_lo

        if k == n:
            break
        S_next = wsum(P, k + 1)
        if yi.size:
            th0 = gain * S[yi] + ext_half[2 * k, yi]
            thm = gain * (0.5 * (S[yi] + S_next[yi])) + ext_half[2 * k + 1, yi]
            th1 = gain * S_next[yi] + ext_half[2 * k + 2, yi]
            g, q, i_ = yamada_rk4_step(g, q, i_, th0, thm, th1, dt, ypar)
            if not (np.all(np.isfinite(g)) and np.all(np.isfinite(q)) and np.all(np.isfinite(i_))):
                raise SimulationError(f"non-finite network state at t={(k + 1) * dt:g}",
                                      (k + 1) * dt)
        if li.size:
            th0 = gain * S[li] + ext_half[2 * k, li]
            thm = gain * (0.5 * (S[li] + S_next[li])) + ext_half[2 * k + 1, li]
            th1 = gain * S_next[li] + ext_half[2 * k + 2, li]
            lg = np.where(held, lg, lif_rk4_step(lg, th0, thm, th1, dt, l_gamma, l_A))
            if not np.all(np.isfinite(lg)):
                raise SimulationError(f"non-finite network state at t={(k + 1) * dt:g}",
                                      (k + 1) * dt)

    tgrid = dt * np.arange(n + 1)
    spikes = [SpikeTrain() for _ in range(N)]
    for j in yi:
        spikes[j] = detect_spikes(I[:, j], spike_threshold, 0.0, t=tgrid)
    if li.size:
        for m, j in enumerate(li):
            ones = np.ones(len(lif_spikes[m]))
            spikes[j] = SpikeTrain(lif_spikes[m], ones * l_thr[m], ones * c_out)
    return NetworkResult(tgrid, G, Q, I, P, spikes, kinds)


def pattern_recognition_circuit(intervals, input_times=(), input_area=1.5, weight=0.6,
                                window_fraction=0.2, base_delay=0.1, refractory=None):
    """Chain of LIF coincidence detectors tuned to a spike-interval pattern.

    Node 0 receives the input spikes and node 1 is its prompt copy. Stage k
    (node k + 1) listens to the previous stage delayed by
    ``intervals[k-1] + base_delay`` and to the copy delayed by
    ``k * base_delay`` (stage 1 takes node 0 itself as its delayed input).
    Each arrival alone is sub-threshold and two coincident arrivals fire,
    so the last node fires iff consecutive input spikes are separated by
    ``intervals`` within the coincidence window
    ``window_fraction * min(intervals)``. Residue of earlier sub-threshold
    arrivals widens the window slightly.

    Parameters
    ----------
    intervals : sequence of float
        Expected inter-spike intervals.
    input_times : sequence of float
        Spike times fed to node 0 as impulses of ``input_area``.
    weight : float
        Arrival size as a fraction of the unit firing threshold, in (0.5, 1).
    refractory : float, optional
        Refractory hold of every node; defaults to half the window.

    Returns
    -------
    NetworkSpec
        The output is the last node. Use a ``dt`` that divides
        ``base_delay``.
    """
    intervals = [float(d) for d in intervals]
    if not intervals or any(not d > 0 for d in intervals):
        raise ValueError("intervals must be positive")
    if not 0.5 < weight < 1.0:
        raise ValueError("weight must lie in (0.5, 1) for coincidence detection")
    window = window_fraction * min(intervals)
    refractory = 0.5 * window if refractory is None else float(refractory)
    if min(intervals) <= refractory:
        raise ValueError(f"interval {min(intervals):g} is not longer than the refractory "
                         f"period {refractory:g}")
    # a lone arrival has decayed to 1 - weight when the window closes
    gamma = math.log(weight / (1.0 - weight)) / window
    # spike impulses exceed the unit threshold so a full-weight edge relays
    coupling = 1.25
    m = len(intervals)
    N = m + 2
    W = np.zeros((N, N))
    D = np.zeros((N, N))
    W[1, 0], D[1, 0] = 1.0, base_delay
    W[2, 0], D[2, 0] = weight / coupling, intervals[0] + 2 * base_delay
    W[2, 1], D[2, 1] = weight / coupling, base_delay
    for k in range(2, m + 1):
        node = k + 1
        W[node, node - 1], D[node, node - 1] = weight / coupling, intervals[k - 1] + base_delay
        W[node, 1], D[node, 1] = weight / coupling, k * base_delay
    lif = LifParams(gamma_G=gamma, A=0.0, G_thresh=1.0, G_reset=0.0, refractory=refractory)
    inputs = [InputSignal.none() for _ in range(N)]
    inputs[0] = InputSignal.impulses(list(input_times), [float(input_area)] * len(input_times))
    lams = 1550.0 + 0.4 * np.arange(N)
    return NetworkSpec(W, [lif] * N, tuple(lams), inputs, output_coupling=coupling,
                       edge_delays=D)


def _fmt(x):
    return format(float(x), ".17g")


def write_network_traces(path, result: NetworkResult):
    """CSV with columns ``t`` then ``P<j>`` and the node state per node."""
    N = result.P.shape[1]
    header = ["t"]
    for j in range(N):
        header += [f"P{j}", f"G{j}", f"Q{j}", f"I{j}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, t in enumerate(result.t):
            row = [_fmt(t)]
            for j in range(N):
                row += [_fmt(result.P[k, j]), _fmt(result.G[k, j]), _fmt(result.Q[k, j]),
                        _fmt(result.I[k, j])]
            w.writerow(row)


def write_spike_events(path, result: NetworkResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node", "t_spike"])
        for j, t in result.spike_events():
            w.writerow([j, _fmt(t)])
