"""Series Circuits of MSS Devices and Resistors.

Example usage:

>>> from mss_memristor.circuit import SeriesCircuit, MssDevice, Resistor, solve_series_step
>>> circuit = SeriesCircuit([MssDevice(params), Resistor(1e-3)], drive, grid)
>>> result = solve_series_step(circuit, 0.5)
"""
from .elements import Element, MssDevice, Resistor, element_iv, element_voltage, is_strictly_increasing
from .solver import SeriesCircuit, CircuitStepResult, solve_series_step, solve_series_voltages
from .errors import SolverError
