"""Simulation toolkit for photonic spiking neural networks.

Modules
-------
laser
    Excitable-laser (Yamada) and leaky integrate-and-fire neuron dynamics.
weightbank
    Microring weight banks: filter physics, thermal tuning, calibration.
network
    Broadcast-and-weight networks co-simulated on a fixed grid.
qp
    Box-constrained quadratic programs on Hopfield-style networks.
metrics
    Multiply-accumulate hardware metrics and reference data.
"""

__version__ = "0.1.0"
