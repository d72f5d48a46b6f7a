"""Fused Gromov-Wasserstein distances, barycenters and geodesics."""

from ._core import (
    FgwError,
    StructuredObject,
    adjusted_rand_index,
    apply_loss_tensor,
    barycenter,
    concentration_experiment,
    equivalent_objects,
    feature_cost_matrix,
    fgw,
    fgw_objective,
    fuse_features_into_structure,
    gromov_wasserstein,
    interpolate,
    isometric_graphs,
    mds,
    noisy_loop_graphs,
    recover_adjacency,
    reparameterize_alpha,
    sbm,
    shifted_image_pair,
    shortest_path_object,
    silhouette_score,
    solve_linear_ot,
    toy_trees,
    two_hump_series,
    validate,
    wasserstein,
)

__version__ = "0.1.0"

__all__ = [
    "FgwError",
    "StructuredObject",
    "adjusted_rand_index",
    "apply_loss_tensor",
    "barycenter",
    "concentration_experiment",
    "equivalent_objects",
    "feature_cost_matrix",
    "fgw",
    "fgw_objective",
    "fuse_features_into_structure",
    "gromov_wasserstein",
    "interpolate",
    "isometric_graphs",
    "mds",
    "noisy_loop_graphs",
    "recover_adjacency",
    "reparameterize_alpha",
    "sbm",
    "shifted_image_pair",
    "shortest_path_object",
    "silhouette_score",
    "solve_linear_ot",
    "toy_trees",
    "two_hump_series",
    "validate",
    "wasserstein",
]
