"""Computational toolkit for hyperbolic-graph boundary geometry.

Finite truncations of hyperbolic graphs carry computable versions of the
asymptotic machinery: hyperbolicity estimators, visual boundary metrics,
distance quasi-cocycles and barycenters, approximatively invariant measure
sequences, boundary-measure projections, and the CAT(-1) hyperbolization of
CAT(0) bases.
"""

__version__ = "0.1.0"

from .amenability import (DecayRow, DensityMeasure, SandwichInstance,
                          build_lambda_n, cesaro_average, cesaro_geodesic,
                          cesaro_tv, check_sandwich, lambda_decay_experiment,
                          pre_patterson, ray_bundle_set, ray_bundle_sets,
                          sandwich_bound, tv_le_sandwich_bound)
from .approx import (AtomReport, PartitionOfUnity, build_partition,
                     extract_atoms, project_pi_n, weakstar_convergence_check)
from .barycenter import (BarycenterResult, Classification, barycenter_stability_check,
                         classify_measure, escape_profile, push_measure,
                         quasi_barycenter, rebalance, relabel_horizon)
from .cocycles import (CocycleContext, b_infinity_check, barycenter_functional,
                       barycenter_functional_rows, boundary_measure,
                       busemann_oscillation, busemann_quasi, distance_cocycle,
                       make_context, read_boundary_measure, uniform_boundary,
                       write_boundary_measure)
from .errors import (AtomTooHeavy, DivergentNormalizer, GraphError,
                     HorizonTooShallow, TruncationTooShallow)
from .generators import (cycle, free_group, free_product_cyclic, from_spec,
                         grid, read_graph, regular_tree,
                         regular_tree_branch_swap, write_graph)
from .graph import (GeodesicSegment, Graph, HorizonPoint, delta_four_point,
                    delta_rips, enumerate_geodesics, fellow_traveling,
                    gromov_product, gromov_products_from)
from .growth import (GrowthProfile, TemperedReport, critical_exponent,
                     fit_growth_rate, growth_profile, packing_number,
                     tempered_check)
from .hyperbolization import (EuclideanBase, HSpace, MetricTree, TreePoint,
                              cat_minus1_check, cat_minus1_suite, h2_distance,
                              hspace_euclidean_line, isometry_action_check,
                              random_metric_tree, side_point)
from .measures import (FiniteMeasure, SignedMeasure, counting_restriction,
                       dirac, hahn_split, tv_distance)
from .metrics import (QuasiMetricTable, build_quasimetric_table,
                      default_visual_exponent, inner_metric, metric_ball,
                      visual_quasimetric)


def hdistance(space, p, q) -> float:
    """Distance in a hyperbolized space (alias of HSpace.distance)."""
    return space.distance(p, q)
