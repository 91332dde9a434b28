from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgeom import (DivergentNormalizer, GraphError, HorizonTooShallow,
                     SandwichInstance, TruncationTooShallow, build_lambda_n,
                     cesaro_average, cesaro_geodesic, cesaro_tv, check_sandwich,
                     enumerate_geodesics, free_group, gridic if False else grid,
                     hspace_euclidean_line, lambda_decay_experiment, make_context,
                     pre_patterson, püush_measure if False else push_measure,
                     ray_bundle_sets, regular_tree, regular_tree_branch_swap,
                     sandwich_bound, tv_distance, tv_le_sandwich_bound)
