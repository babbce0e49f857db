"""Kernelized-autoencoding plus centroid prediction (KAEP) for dynamic
multi-objective optimisation, on top of NSGA-II."""

from .benchmarks import PROBLEMS, DynamicProblem, get_problem
from .core import BoxBounds, Individual, Population, clamp_to_bounds, dominates, make_rng
from .dynamics import TimeController, archive_detectors, detect_change, time_at
from .harness import ExperimentConfig, RunResult, run_dmoea, run_experiment, write_results
from .kernels import BACKEND
from .prediction import KernelSpec, ResponseStrategy, Strategy, kaep_respond, respond

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoxBounds",
    "DynamicProblem",
    "ExperimentConfig",
    "Individual",
    "KernelSpec",
    "PROBLEMS",
    "Population",
    "ResponseStrategy",
    "RunResult",
    "Strategy",
    "TimeController",
    "archive_detectors",
    "clamp_to_bounds",
    "detect_change",
    "dominates",
    "get_problem",
    "kaep_respond",
    "make_rng",
    "respond",
    "run_dmoea",
    "run_experiment",
    "time_at",
    "write_results",
]
