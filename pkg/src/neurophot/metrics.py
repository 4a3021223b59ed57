"""Multiply-accumulate (MAC) based hardware metrics and reference data.

A processor of N neurons with fan-in M performs ``N * M`` MACs per time
step. The reference rows below are citable data, not recomputed values:
several of them are estimates whose inputs are not all published.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

__all__ = [
    "ProcessorSpec",
    "ReferenceRow",
    "REFERENCE_TABLE",
    "REFERENCE_NOTES",
    "energy_per_mac",
    "total_mac_throughput",
    "format_reference_table",
    "reference_table_csv",
]


def _positive(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and v > 0 and not math.isnan(v)):
            raise ValueError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class ProcessorSpec:
    """Inputs of the MAC metrics for one processor.

    ``mac_rate_per_processor`` is the per-synapse MAC rate (1/s) and
    ``area_per_mac`` is in um^2.
    """

    name: str
    mac_rate_per_processor: float
    wallplug_power: float
    neurons: int
    fan_in: int
    area_per_mac: float
    synapse_precision: float

    def __post_init__(self):
        _positive(mac_rate_per_processor=self.mac_rate_per_processor,
                  wallplug_power=self.wallplug_power, neurons=self.neurons, fan_in=self.fan_in,
                  area_per_mac=self.area_per_mac, synapse_precision=self.synapse_precision)

    @property
    def energy_per_mac(self) -> float:
        return energy_per_mac(self.wallplug_power, self.neurons, self.fan_in,
                              self.mac_rate_per_processor)

    @property
    def throughput(self) -> float:
        return total_mac_throughput(self.neurons, self.fan_in, self.mac_rate_per_processor)


def energy_per_mac(wallplug, neurons, fan_in, mac_rate) -> float:
    """Energy per MAC in joules: ``wallplug / (neurons * fan_in * mac_rate)``."""
    _positive(wallplug=wallplug, neurons=neurons, fan_in=fan_in, mac_rate=mac_rate)
    return wallplug / (neurons * fan_in * mac_rate)


def total_mac_throughput(neurons, fan_in, rate) -> float:
    """MAC/s of N neurons with fan-in M at ``rate``; saturates at the
    largest finite float instead of overflowing."""
    _positive(neurons=neurons, fan_in=fan_in, rate=rate)
    # work in logs so that huge inputs saturate rather than overflow
    log_total = math.log(neurons) + math.log(fan_in) + math.log(rate)
    if log_total >= math.log(sys.float_info.max):
        return sys.float_info.max
    return float(neurons) * float(fan_in) * float(rate)


@dataclass(frozen=True)
class ReferenceRow:
    """One published comparison row.

    ``mac_rate`` in MAC/s per processor, ``energy_pj`` in pJ per MAC,
    ``area_um2`` in um^2 per MAC. ``fan_in_approx`` marks an approximate
    fan-in. ``notes`` are keys into :data:`REFERENCE_NOTES`.
    """

    name: str
    mac_rate: float
    mac_rate_label: str
    energy_pj: float
    fan_in: int
    fan_in_approx: bool
    area_um2: float
    precision_bits: float
    notes: tuple = ()


REFERENCE_NOTES = {
    1: "estimate for a spiking network on a hybrid III-V/Si photonic integrated circuit",
    2: "estimate for optimized sub-wavelength structures such as photonic crystals",
    3: "one MAC per integrated spike; fan-in counts possible connections per neuron",
    4: "electronic rows: wall-plug power / neurons / MAC rate per processor",
    5: "area per MAC: chip or board size / (neurons x fan-in), overheads included",
    6: "event-based digital system; figures from a typical application",
}

REFERENCE_TABLE = (
    ReferenceRow("Photonic Hybrid III-V/Si", 20e9, "20 GHz", 0.26, 108, False, 205.0, 5.1,
                 (1, 3, 5)),
    ReferenceRow("Sub-λ Photonics (future trend)", 200e9, "200 GHz", 0.0007, 200, True,
                 20.0, 8.0, (2, 3, 5)),
    ReferenceRow("HICANN", 22.4e6, "22.4 MHz", 198.4, 224, False, 780.0, 4.0, (3, 4, 5)),
    ReferenceRow("TrueNorth", 2.5e3, "2.5 kHz", 0.27, 256, False, 4.9, 5.0, (3, 4, 5)),
    ReferenceRow("Neurogrid", 40.1e3, "40.1 kHz", 119.0, 4096, False, 7.1, 13.0, (3, 4, 5)),
    ReferenceRow("SpiNNaker", 3.2e3, "3.2 kHz", 6e5, 320, False, 217.0, 16.0, (3, 4, 5, 6)),
)

_COLUMNS = ("chip", "mac_rate_per_processor", "energy_per_mac_pJ", "fan_in", "area_per_mac_um2",
            "synapse_precision_bit", "notes")


def _g(x):
    return format(x, "g")


def _cells(row: ReferenceRow):
    fan = ("~" if row.fan_in_approx else "") + str(row.fan_in)
    return (row.name, row.mac_rate_label, _g(row.energy_pj), fan, _g(row.area_um2),
            _g(row.precision_bits), ",".join(str(n) for n in row.notes))


def format_reference_table() -> str:
    """Fixed-width text rendering with the notes listed underneath."""
    rows = [_COLUMNS] + [_cells(r) for r in REFERENCE_TABLE]
    widths = [max(len(r[k]) for r in rows) for k in range(len(_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines += [f"[{k}] {text}" for k, text in REFERENCE_NOTES.items()]
    return "\n".join(lines) + "\n"


def reference_table_csv() -> str:
    """Machine-readable rows with SI numeric values."""
    out = ["chip,mac_rate_hz,energy_per_mac_pj,fan_in,fan_in_approx,area_per_mac_um2,"
           "synapse_precision_bit,notes"]
    for r in REFERENCE_TABLE:
        out.append(",".join([f'"{r.name}"', format(r.mac_rate, ".17g"), format(r.energy_pj, ".17g"),
                             str(r.fan_in), str(r.fan_in_approx).lower(),
                             format(r.area_um2, ".17g"), format(r.precision_bits, ".17g"),
                             '"' + ";".join(str(n) for n in r.notes) + '"']))
    return "\n".join(out) + "\n"
