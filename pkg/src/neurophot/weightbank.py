"""Microring (MRR) weight banks: filter physics, heater tuning, calibration.

Each channel i of a bank is weighted by ring i. The ring's drop port has a
Lorentzian line shape, the through port gets the rest (lossless), and a
balanced photodetector reports ``weight = drop - through`` in [-1, 1].
Rings rest on the blue side of their carrier; heating red-shifts them
toward the carrier, sweeping the weight up the filter roll-off toward +1.

Heater powers ``p_j = R * I_j**2`` raise ring temperatures through the
cross-talk matrix K (K/W), and temperatures shift resonances by the
thermo-optic coefficient (nm/K)::

    shift = thermo_optic * K @ (R * I**2)

Calibration is feedforward only. ``calibrate_interpolation`` sweeps one
heater and interpolates; ``calibrate_model_based`` fits the thermal model
with O(N) measurements so that all channels can be set simultaneously.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, nnls

__all__ = [
    "CalibrationError",
    "InfeasibleTargetError",
    "DacRangeError",
    "MrrFilter",
    "HeaterModel",
    "WeightBank",
    "Bench",
    "ChannelCalibration",
    "CalibrationModel",
    "AccuracyReport",
    "quantize",
    "mrr_transmission",
    "effective_weight",
    "detuning_for_weight",
    "heaters_to_detunings",
    "detunings_to_heaters",
    "calibrate_interpolation",
    "calibrate_model_based",
    "apply_weights",
    "evaluate_accuracy",
    "weight_accuracy",
    "weight_precision",
    "PrecisionReport",
    "max_channel_count",
    "MEASUREMENTS_PER_CHANNEL",
    "MIN_SPACING_LINEWIDTHS",
    "MAX_SPACING_LINEWIDTHS",
    "write_calibration_report",
]

# per-channel budget of the model-based routine: heater, filter, amplifier stages
MEASUREMENTS_PER_CHANNEL = {"heater": 10, "filter": 20, "amplifier": 4}

# minimum channel spacing for a 3 dB cross-weight penalty, depending on bus length
MIN_SPACING_LINEWIDTHS = 3.41
MAX_SPACING_LINEWIDTHS = 4.61


class CalibrationError(RuntimeError):
    pass


class InfeasibleTargetError(ValueError):
    pass


class DacRangeError(ValueError):
    pass


def quantize(x, bits, lo, hi):
    """Uniform mid-tread quantizer with ``2**bits`` levels spanning [lo, hi].

    ``bits=None`` means infinite resolution (values are only clipped).
    """
    x = np.clip(np.asarray(x, dtype=float), lo, hi)
    if bits is None:
        return x
    step = (hi - lo) / (2 ** int(bits) - 1)
    return lo + np.round((x - lo) / step) * step


# =============================================================================
# Filter physics
# =============================================================================
@dataclass(frozen=True)
class MrrFilter:
    lambda0: float
    fwhm: float
    fsr: float

    def __post_init__(self):
        if not self.fwhm > 0:
            raise ValueError("fwhm must be positive")
        if not self.fsr > self.fwhm:
            raise ValueError("fsr must exceed fwhm (finesse > 1)")

    @property
    def finesse(self) -> float:
        return self.fsr / self.fwhm

    def shifted(self, delta) -> "MrrFilter":
        return MrrFilter(self.lambda0 + float(delta), self.fwhm, self.fsr)


def mrr_transmission(filt: MrrFilter, wavelength):
    """Drop and through power fractions at ``wavelength`` (nm).

    Lorentzian drop ``1 / (1 + (2 (lambda - lambda0) / fwhm)**2)``; the
    through port carries the remainder.
    """
    x = 2.0 * (np.asarray(wavelength, dtype=float) - filt.lambda0) / filt.fwhm
    drop = 1.0 / (1.0 + x * x)
    through = 1.0 - drop
    if drop.ndim == 0:
        return float(drop), float(through)
    return drop, through


def effective_weight(filt: MrrFilter, wavelength):
    """Balanced-detection weight ``drop - through`` in [-1, 1]."""
    drop, through = mrr_transmission(filt, wavelength)
    return drop - through


def detuning_for_weight(weight, fwhm):
    """Magnitude of carrier-resonance detuning that yields ``weight``.

    Inverse of the Lorentzian: ``|d| = fwhm/2 * sqrt((1 - w) / (1 + w))``.
    Infinite for ``w = -1``.
    """
    w = np.asarray(weight, dtype=float)
    if np.any(np.abs(w) > 1):
        raise ValueError("weights must lie in [-1, 1]")
    with np.errstate(divide="ignore"):
        return 0.5 * fwhm * np.sqrt((1.0 - w) / (1.0 + w))


def _linearized(weight):
    # 2*detuning/fwhm; linear in heater power for a Lorentzian line
    w = np.clip(np.asarray(weight, dtype=float), -1.0, 1.0)
    with np.errstate(divide="ignore"):
        return np.sqrt((1.0 - w) / (1.0 + w))


# =============================================================================
# Heaters and the bank
# =============================================================================
@dataclass(frozen=True)
class HeaterModel:
    """Electro-thermal tuning model.

    Parameters
    ----------
    resistance : float or array
        Heater resistance(s) in ohm.
    thermo_optic : float
        Resonance shift per kelvin (nm/K).
    crosstalk : (N, N) array
        Temperature rise of ring i per watt dissipated in heater j (K/W).
    """

    resistance: object
    thermo_optic: float
    crosstalk: np.ndarray

    def __post_init__(self):
        K = np.atleast_2d(np.asarray(self.crosstalk, dtype=float))
        if K.shape[0] != K.shape[1]:
            raise ValueError("cross-talk matrix must be square")
        if np.any(K < 0):
            raise ValueError("cross-talk entries must be nonnegative")
        d = np.diag(K)
        if np.any(d <= 0):
            raise ValueError("cross-talk diagonal must be strictly positive")
        off = K - np.diag(d)
        if np.any(off >= d[:, None]):
            raise ValueError("cross-talk matrix must be diagonally dominant (K_ii > K_ij)")
        R = np.broadcast_to(np.asarray(self.resistance, dtype=float), d.shape).copy()
        if np.any(R <= 0):
            raise ValueError("heater resistance must be positive")
        if not self.thermo_optic > 0:
            raise ValueError("thermo_optic must be positive")
        K.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "crosstalk", K)
        object.__setattr__(self, "resistance", R)

    @property
    def n(self) -> int:
        return self.crosstalk.shape[0]

    @property
    def shift_matrix(self) -> np.ndarray:
        """Resonance shift (nm) per squared heater current (A^2)."""
        return self.thermo_optic * self.crosstalk * self.resistance[None, :]

    @classmethod
    def exponential(cls, n, k0=3000.0, pitch=1.0, decay_length=0.6, resistance=500.0,
                    thermo_optic=0.08):
        """Nearest-neighbour style coupling ``K_ij = k0 * exp(-|i-j| pitch / L)``."""
        idx = np.arange(n)
        K = k0 * np.exp(-np.abs(idx[:, None] - idx[None, :]) * pitch / decay_length)
        return cls(resistance, thermo_optic, K)


@dataclass(frozen=True)
class WeightBank:
    """A bank of N rings, one per WDM carrier, with heaters and converters.

    ``max_current`` is the DAC full scale (A). ``adc_bits``/``dac_bits`` of
    ``None`` mean infinite resolution.
    """

    filters: tuple
    heater: HeaterModel
    channels: tuple
    adc_bits: int | None = 12
    dac_bits: int | None = 12
    max_current: float = 4e-3

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        object.__setattr__(self, "channels", tuple(float(c) for c in self.channels))
        n = len(self.filters)
        if len(self.channels) != n or self.heater.n != n:
            raise ValueError("filters, channels and heater matrix must agree in size")
        if n and np.any(np.diff(self.channels) <= 0):
            raise ValueError("carrier wavelengths must be strictly increasing")
        if n and self.channels[-1] - self.channels[0] >= min(f.fsr for f in self.filters):
            raise ValueError("carriers must fit within one free spectral range")
        if not self.max_current > 0:
            raise ValueError("max_current must be positive")

    @property
    def n(self) -> int:
        return len(self.filters)

    @classmethod
    def uniform(cls, n, center=1550.0, spacing=1.6, fwhm=0.1, fsr=12.0, rest_offset=0.8,
                heater=None, **kwargs):
        """Evenly spaced carriers, each ring parked ``rest_offset`` nm blue of its carrier."""
        channels = center + spacing * (np.arange(n) - (n - 1) / 2)
        filters = tuple(MrrFilter(c - rest_offset, fwhm, fsr) for c in channels)
        heater = heater if heater is not None else HeaterModel.exponential(n)
        return cls(filters, heater, tuple(channels), **kwargs)

    def with_converters(self, adc_bits="keep", dac_bits="keep") -> "WeightBank":
        return WeightBank(self.filters, self.heater, self.channels,
                          self.adc_bits if adc_bits == "keep" else adc_bits,
                          self.dac_bits if dac_bits == "keep" else dac_bits,
                          self.max_current)

    def dac(self, currents):
        """Currents actually delivered by the DAC for the requested ones."""
        return quantize(currents, self.dac_bits, 0.0, self.max_current)

    def resonances(self, currents) -> np.ndarray:
        rest = np.array([f.lambda0 for f in self.filters])
        return rest + heaters_to_detunings(currents, self)

    def weights(self, currents) -> np.ndarray:
        """True effective weights for delivered heater currents."""
        res = self.resonances(currents)
        return np.array([effective_weight(f.shifted(r - f.lambda0), c)
                         for f, r, c in zip(self.filters, res, self.channels)])


def heaters_to_detunings(currents, bank: WeightBank) -> np.ndarray:
    """Forward thermal model: resonance shifts (nm) for heater currents (A)."""
    I = np.asarray(currents, dtype=float)
    if I.shape != (bank.n,):
        raise ValueError(f"expected {bank.n} currents, got shape {I.shape}")
    if np.any(I < 0) or np.any(I > bank.max_current * (1 + 1e-12)):
        raise DacRangeError(f"currents must lie in [0, {bank.max_current}] A")
    return bank.heater.shift_matrix @ (I * I)


def detunings_to_heaters(target, bank: WeightBank) -> np.ndarray:
    """Reverse thermal model: heater currents producing the target shifts.

    Solves ``shift_matrix @ s = target`` for squared currents ``s``.
    Raises :class:`InfeasibleTargetError` when any heater would need
    negative power.
    """
    target = np.asarray(target, dtype=float)
    M = bank.heater.shift_matrix
    if np.linalg.matrix_rank(M) < bank.n:
        raise np.linalg.LinAlgError("cross-talk matrix is singular")
    s = np.linalg.solve(M, target)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(s))))
    if np.any(s < -tol):
        raise InfeasibleTargetError(
            f"target shifts need negative heater power on heater(s) {np.flatnonzero(s < -tol).tolist()}")
    return np.sqrt(np.maximum(s, 0.0))


# =============================================================================
# Simulated measurement bench
# =============================================================================
@dataclass
class Bench:
    """Simulated lab hardware around a bank, counting every measurement.

    ``readout_noise`` (weight units) and ``current_noise`` (A) add seeded
    Gaussian noise; both default to zero (noiseless physics). Spectral
    measurements return exact resonance wavelengths.
    """

    bank: WeightBank
    readout_noise: float = 0.0
    current_noise: float = 0.0
    channel_power: object = 1.0
    seed: int = 0
    count: int = 0
    log: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)
        self.channel_power = np.broadcast_to(
            np.asarray(self.channel_power, dtype=float), (self.bank.n,)).copy()

    def _tick(self, kind):
        self.count += 1
        self.log[kind] = self.log.get(kind, 0) + 1

    def _drive(self, currents):
        I = self.bank.dac(np.asarray(currents, dtype=float))
        if self.current_noise:
            I = np.clip(I + self.rng.normal(0, self.current_noise, I.shape), 0, self.bank.max_current)
        return I

    def measure_spectrum(self, currents):
        """Resonance wavelengths of all rings and heater voltages (one measurement)."""
        self._tick("spectrum")
        I = self._drive(currents)
        return self.bank.resonances(I), self.bank.heater.resistance * I, I

    def measure_weights(self, currents):
        """Balanced readout of every channel, normalised by its total power."""
        self._tick("weights")
        I = self._drive(currents)
        w = self.bank.weights(I)
        if self.readout_noise:
            w = w + self.rng.normal(0, self.readout_noise, w.shape)
        return quantize(w, self.bank.adc_bits, -1.0, 1.0)

    def measure_power(self, channel, level):
        """Detected total power of one channel at an amplifier drive level."""
        self._tick("amplifier")
        p = self.channel_power[channel] * level
        full_scale = 2.0 * float(np.max(self.channel_power))
        return float(quantize(p, self.bank.adc_bits, 0.0, full_scale))

    def achieved_weights(self, currents):
        """Ground-truth weights for commanded currents (not counted)."""
        return self.bank.weights(self._drive(currents))


# =============================================================================
# Calibration
# =============================================================================
@dataclass
class ChannelCalibration:
    """Monotone map from weight to isolated squared heater current.

    Stored as a piecewise-linear interpolant of ``I**2`` against the
    linearised weight coordinate ``sqrt((1-w)/(1+w))``, with linear
    extrapolation past the ends.
    """

    channel: int
    x: np.ndarray
    s: np.ndarray
    w_min: float
    w_max: float
    n_measurements: int

    def squared_current(self, weight) -> np.ndarray:
        x = _linearized(weight)
        xs, ss = self.x, self.s
        if xs.size == 1:
            return np.full(np.shape(x), ss[0])
        out = np.interp(x, xs, ss)
        lo_slope = (ss[1] - ss[0]) / (xs[1] - xs[0])
        hi_slope = (ss[-1] - ss[-2]) / (xs[-1] - xs[-2])
        out = np.where(x < xs[0], ss[0] + lo_slope * (x - xs[0]), out)
        out = np.where(np.isinf(x), ss[-1], out)
        out = np.where(np.isfinite(x) & (x > xs[-1]), ss[-1] + hi_slope * (x - xs[-1]), out)
        return np.maximum(out, 0.0)

    def current(self, weight) -> np.ndarray:
        return np.sqrt(self.squared_current(weight))

    def weight(self, squared_current) -> np.ndarray:
        """Inverse map, extrapolated the same way; heating past the
        resonance gives a negative coordinate and a falling weight."""
        sq = np.asarray(squared_current, dtype=float)
        xs, ss = self.x[::-1], self.s[::-1]
        if xs.size == 1:
            return np.full(sq.shape, self.w_min)
        x = np.interp(sq, ss, xs)
        lo_slope = (xs[1] - xs[0]) / (ss[1] - ss[0])
        hi_slope = (xs[-1] - xs[-2]) / (ss[-1] - ss[-2])
        x = np.where(sq < ss[0], xs[0] + lo_slope * (sq - ss[0]), x)
        x = np.where(sq > ss[-1], xs[-1] + hi_slope * (sq - ss[-1]), x)
        return (1 - x ** 2) / (1 + x ** 2)


@dataclass
class CalibrationModel:
    channels: list
    shift_matrix: np.ndarray | None = None
    crosstalk: np.ndarray | None = None
    resistance: np.ndarray | None = None
    rest_resonances: np.ndarray | None = None
    channel_gain: np.ndarray | None = None
    residuals: dict = field(default_factory=dict)
    n_measurements: int = 0

    @property
    def model_based(self) -> bool:
        return self.shift_matrix is not None


@dataclass
class AccuracyReport:
    channel: int
    max_error: float
    span: float
    dB: float
    bits: float


def _sweep_currents(bank, n_points):
    # uniform in heater power, i.e. in resonance shift
    return bank.max_current * np.sqrt(np.linspace(0.0, 1.0, n_points))


def _fit_branch(channel, drives, measured, n_measurements):
    drives = np.asarray(drives, dtype=float)
    measured = np.asarray(measured, dtype=float)
    k_top = int(np.argmax(measured))
    if k_top == 0:
        raise CalibrationError(f"channel {channel}: weight does not rise with heating")
    # the sample at the peak may lie past resonance; keep it only if the sweep ended there
    stop = k_top + 1 if k_top == measured.size - 1 else k_top
    w = measured[:stop]
    s = drives[:stop] ** 2
    if np.any(np.diff(w) < 0):
        raise CalibrationError(f"channel {channel}: non-monotone roll-off branch "
                               "(resonance passed through the carrier?)")
    # quantised plateaus: keep the last sample of each run of equal readings
    keep = np.append(np.diff(w) > 0, True)
    w, s = w[keep], s[keep]
    if w.size < 2:
        raise CalibrationError(f"channel {channel}: fewer than two distinct readings on the branch")
    x = _linearized(w)[::-1]
    s = s[::-1]
    finite = np.isfinite(x)
    return ChannelCalibration(channel, x[finite], s[finite], float(w[0]),
                              float(measured[k_top]), n_measurements)


def calibrate_interpolation(bank: WeightBank, channel: int, n_points: int, bench: Bench | None = None):
    """Interpolation-based calibration of one channel, others unheated.

    Sweeps the channel's heater over ``n_points`` currents evenly spaced in
    power across the DAC range, reads the weight through the ADC, and keeps
    the roll-off branch below the resonance peak.

    Returns
    -------
    ChannelCalibration, AccuracyReport
    """
    if n_points < 4:
        raise ValueError("interpolation calibration needs at least 4 points")
    bench = bench if bench is not None else Bench(bank)
    drives = _sweep_currents(bank, n_points)
    measured = []
    applied = []
    for I in drives:
        currents = np.zeros(bank.n)
        currents[channel] = I
        measured.append(bench.measure_weights(currents)[channel])
        applied.append(bank.dac(currents)[channel])
    cal = _fit_branch(channel, applied, measured, n_points)
    return cal, evaluate_accuracy(bank, cal)


def evaluate_accuracy(bank: WeightBank, cal: ChannelCalibration, n_verify=2001) -> AccuracyReport:
    """Worst-case weight error of a single-channel calibration on a dense sweep.

    Targets span the weights reachable with this heater alone, from the
    unheated weight up to +1.
    """
    w0 = float(bank.weights(np.zeros(bank.n))[cal.channel])
    targets = np.linspace(w0, 1.0, n_verify)
    I = np.minimum(cal.current(targets), bank.max_current)
    errors = np.empty(n_verify)
    currents = np.zeros(bank.n)
    for k, (target, i) in enumerate(zip(targets, I)):
        currents[cal.channel] = i
        errors[k] = abs(bank.weights(bank.dac(currents))[cal.channel] - target)
    span = 1.0 - w0
    max_error = float(errors.max())
    dB, bits = weight_accuracy(span, max_error) if max_error > 0 else (math.inf, math.inf)
    return AccuracyReport(cal.channel, max_error, span, dB, bits)


def _lstsq_checked(A, y, what):
    if np.linalg.matrix_rank(A) < A.shape[1]:
        raise CalibrationError(f"rank-deficient measurement set for {what}")
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef, y - A @ coef


def calibrate_model_based(bank: WeightBank, points_per_stage=None, bench: Bench | None = None):
    """Fit the thermal cross-talk model and per-channel filter maps.

    Stages per channel j (default 10 + 20 + 4 = 34 measurements):

    heater
        Drive heater j alone at increasing currents, record all ring
        resonances and the heater voltage. Fits R_j and column j of the
        shift matrix; ``K = shift / (thermo_optic * R)``.
    filter
        Sweep heater j alone and read channel j's weight, giving the
        weight -> isolated-power interpolant.
    amplifier
        Read channel j's detected power at several amplifier levels and
        fit its optical gain.

    The thermo-optic coefficient is taken as a known material constant.
    """
    stages = dict(MEASUREMENTS_PER_CHANNEL)
    if points_per_stage is not None:
        stages.update(points_per_stage)
    n = bank.n
    if n < 1:
        raise ValueError("bank has no channels")
    bench = bench if bench is not None else Bench(bank)
    start = bench.count

    # heater stage
    n_h = stages["heater"]
    M = np.zeros((n, n))
    R = np.zeros(n)
    rest = np.zeros((n, n))
    res_heater = []
    levels = bank.max_current * np.sqrt(np.linspace(0.0, 1.0, n_h + 1)[1:]) if n_h else np.zeros(0)
    for j in range(n):
        lam, volts, applied = [], [], []
        for I in levels:
            currents = np.zeros(n)
            currents[j] = I
            l, v, i_applied = bench.measure_spectrum(currents)
            lam.append(l)
            volts.append(v[j])
            applied.append(i_applied[j])
        applied = np.asarray(applied)
        if applied.size < 2:
            raise CalibrationError("rank-deficient measurement set for the heater stage")
        (R[j],), r_res = _lstsq_checked(applied[:, None], np.asarray(volts), f"heater {j} resistance")
        A = np.column_stack([np.ones_like(applied), applied ** 2])
        coef, l_res = _lstsq_checked(A, np.asarray(lam), f"heater {j} shifts")
        rest[:, j] = coef[0]
        M[:, j] = coef[1]
        res_heater.append(float(np.max(np.abs(l_res))))
    K = M / (bank.heater.thermo_optic * R[None, :])

    # filter stage
    channel_cals = []
    for j in range(n):
        cal, _ = calibrate_interpolation(bank, j, stages["filter"], bench=bench)
        channel_cals.append(cal)

    # amplifier stage
    n_a = stages["amplifier"]
    gain = np.zeros(n)
    for j in range(n):
        amp = np.linspace(0.25, 1.0, n_a)
        readings = np.array([bench.measure_power(j, a) for a in amp])
        (gain[j],), _ = _lstsq_checked(amp[:, None], readings, f"amplifier {j}")

    return CalibrationModel(
        channels=channel_cals, shift_matrix=M, crosstalk=K, resistance=R,
        rest_resonances=rest.mean(axis=1), channel_gain=gain,
        residuals={"heater_shift_max": max(res_heater) if res_heater else 0.0},
        n_measurements=bench.count - start,
    )


def _check_targets(w, n):
    w = np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"expected {n} target weights, got shape {w.shape}")
    if np.any(np.abs(w) > 1):
        raise ValueError("target weights must lie in [-1, 1]")
    return w


def _model_weights(M, cals, s):
    # weights the calibration model predicts for squared currents s
    iso = (M @ s) / np.diag(M)
    return np.array([float(c.weight(p)) for p, c in zip(iso, cals)])


def _weight_fit(M, cals, w, s0, s_max):
    """Nonnegative squared currents minimising predicted weight error."""
    s0 = np.clip(s0, 0.0, s_max)
    scale = s_max
    fit = least_squares(lambda u: _model_weights(M, cals, u * scale) - w, s0 / scale,
                        bounds=(0.0, 1.0), xtol=1e-12, ftol=1e-12)
    return fit.x * scale


def apply_weights(bank: WeightBank, calib, w, bench: Bench | None = None, tolerance=0.1):
    """Compute heater currents for target weights and report what is achieved.

    ``calib`` is a :class:`CalibrationModel` or a list of per-channel
    :class:`ChannelCalibration` (independent single-channel control, which
    ignores cross-talk). With a model, the isolated powers read off the
    interpolants are converted to the shifts they would produce, and the
    reverse thermal model distributes them over all heaters. If that needs
    negative power somewhere, the nonnegative least-squares solution is
    used as the start of a bounded fit of the model's predicted weights;
    if the predicted weight error exceeds ``tolerance`` the target is
    reported infeasible.

    Returns
    -------
    currents : ndarray
        Currents delivered by the DAC.
    achieved : ndarray
        Weights measured on the (simulated) hardware.
    """
    w = _check_targets(w, bank.n)
    bench = bench if bench is not None else Bench(bank)
    if isinstance(calib, CalibrationModel):
        cals = calib.channels
        M = calib.shift_matrix
    else:
        cals = list(calib)
        M = None
    if len(cals) != bank.n:
        raise ValueError("calibration does not cover every channel")

    s_iso = np.array([c.squared_current(wi) for c, wi in zip(cals, w)], dtype=float)
    if M is None:
        s = s_iso
    else:
        shifts = np.diag(M) * s_iso
        s = np.linalg.solve(M, shifts)
        if np.any(s < 0):
            s = _weight_fit(M, cals, w, nnls(M, shifts)[0], bank.max_current ** 2)
            worst = float(np.max(np.abs(_model_weights(M, cals, s) - w)))
            if worst > tolerance:
                raise InfeasibleTargetError(
                    f"weights not reachable under cross-talk (predicted error {worst:.3g})")
    currents = np.sqrt(np.maximum(s, 0.0))
    if np.any(currents > bank.max_current * (1 + 1e-12)):
        raise InfeasibleTargetError("target needs more current than the DAC can deliver")
    delivered = bank.dac(currents)
    return delivered, bench.achieved_weights(currents)


@dataclass
class PrecisionReport:
    spread: float
    span: float
    bits: float


def weight_precision(bank: WeightBank, calib, w, bench: Bench, repeats=20, span=2.0):
    """Repeatability of applying the same weight vector ``repeats`` times.

    The spread is the largest peak-to-peak variation of any channel's
    achieved weight; it is nonzero only when ``bench`` injects drive
    noise. Equivalent bits are ``log2(span / spread)``.
    """
    if repeats < 2:
        raise ValueError("precision needs at least two repeats")
    runs = np.array([apply_weights(bank, calib, w, bench=bench)[1] for _ in range(repeats)])
    spread = float(np.max(runs.max(axis=0) - runs.min(axis=0)))
    bits = math.inf if spread == 0 else math.log2(span / spread)
    return PrecisionReport(spread, span, bits)


def weight_accuracy(span, max_error):
    """Dynamic range (dB) and equivalent bits of a weight controller."""
    if not max_error > 0:
        raise ValueError("max_error must be positive")
    if not span > 0:
        raise ValueError("weight span must be positive")
    ratio = span / max_error
    return 10.0 * math.log10(ratio), math.log2(ratio)


def max_channel_count(finesse, spacing_linewidths=MIN_SPACING_LINEWIDTHS) -> int:
    """WDM channels a weight bank of the given finesse can carry.

    Rounded to nearest (half up), never negative.
    """
    if not finesse > 0:
        raise ValueError("finesse must be positive")
    if not spacing_linewidths >= 1:
        raise ValueError("channel spacing must be at least one linewidth")
    return max(0, int(math.floor(finesse / spacing_linewidths + 0.5)))


def write_calibration_report(path, reports):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["channel", "max_error", "bits", "dB"])
        for r in reports:
            w.writerow([r.channel, format(r.max_error, ".17g"), format(r.bits, ".17g"),
                        format(r.dB, ".17g")])
