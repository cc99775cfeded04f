from .cox import (
    CoxModel,
    DegenerateEstimateError,
    InexactCoxMH,
    cox_basis,
    cox_log_posterior,
    inexact_mh_cox_step,
    benchmark_intensity,
    simulate_cox_data,
)
from .discrete import DiscreteProposal, discrete_target, exact_barker
from .sensor import SensorData, sensor_log_posterior, simulate_sensor_data
from .targets import gamma_target, mixture_target

__all__ = [
    "CoxModel",
    "DegenerateEstimateError",
    "DiscreteProposal",
    "InexactCoxMH",
    "SensorData",
    "cox_basis",
    "cox_log_posterior",
    "discrete_target",
    "exact_barker",
    "gamma_target",
    "inexact_mh_cox_step",
    "mixture_target",
    "benchmark_intensity",
    "sensor_log_posterior",
    "simulate_cox_data",
    "simulate_sensor_data",
]
