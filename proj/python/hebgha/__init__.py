"""Hebbian / GHA online-learning laboratory.

Thin Python veneer over the C++ core: the classical Hebbian rule, the
Generalized Hebbian Algorithm, a Jacobi spectral oracle, dataset
ingestion/splitting, and the discrete-event AER fabric simulator.
"""

from hebgha._hebgha import (
    Dataset,
    HebghaError,
    Topology,
    accuracy,
    autocorrelation,
    build_torus,
    component_variances,
    energy_estimate,
    frobenius_delta,
    gha_output,
    gha_step,
    gha_train,
    hebbian_train,
    jacobi_eigendecompose,
    load_csv,
    lower_triangular_of,
    memory_estimate,
    multicast_deliveries,
    reconstruction_error,
    row_alignment,
    run_distributed_gha,
    run_experiment_json,
    seeded_uniform_matrix,
    shortest_hops,
    split,
    standardize,
    synth_gaussian,
)

__all__ = [
    "Dataset",
    "HebghaError",
    "Topology",
    "accuracy",
    "autocorrelation",
    "build_torus",
    "component_variances",
    "energy_estimate",
    "frobenius_delta",
    "gha_output",
    "gha_step",
    "gha_train",
    "hebbian_train",
    "jacobi_eigendecompose",
    "load_csv",
    "lower_triangular_of",
    "memory_estimate",
    "multicast_deliveries",
    "reconstruction_error",
    "row_alignment",
    "run_distributed_gha",
    "run_experiment_json",
    "seeded_uniform_matrix",
    "shortest_hops",
    "split",
    "standardize",
    "synth_gaussian",
]

__version__ = "0.1.0"
