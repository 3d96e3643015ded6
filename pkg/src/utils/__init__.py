# Metrics, pulse files and random streams
from src.utils.metrics import evaluate_propagator, gate_error, project_computational
from src.utils.pulse_io import read_pulses, write_pulses
from src.utils.seeding import noise_stream

__all__ = [
    "evaluate_propagator",
    "gate_error",
    "project_computational",
    "read_pulses",
    "write_pulses",
    "noise_stream",
]
