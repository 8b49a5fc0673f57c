"""Block-code parameter geometry, code fractals, and code thermodynamics."""

__version__ = "0.1.0"

from .codes import (Code, CodeParams, GeneratorMatrix, LogRatio, Word, code_params,
                    compare_rates, hamming_distance, make_linear_code,
                    make_reed_solomon, min_distance, random_code,
                    satisfies_singleton)
from .errors import ConvergenceError, PreconditionError
from .fractal import (CoordinateSubspace, FractalDimensions, box_count,
                      box_count_estimate, fractal_dimensions, similarity_dimension,
                      subspace_cells, subspace_count, threshold_scan)
from .measures import (CylinderAssignment, MonotoneMap, Potential,
                       check_semimeasure, critical_beta_semimeasure,
                       cylinder_products, induced_multifractal_pf,
                       induced_multifractal_uniform, measure_from_potential,
                       mixture_semimeasure, perron_frobenius,
                       pushforward_semimeasure, radon_nikodym_constant,
                       ruelle_apply)
from .plane import (CodePoint, Envelope, classical_bounds, code_point,
                    cone_partition, empirical_envelope, envelope_height,
                    envelope_polyline, lower_cone_contains, multiplicity_probe,
                    render_plane_svg)
from .spoiling import (Delete, Insert, Restrict, apply_spoiling, delete_branch,
                       is_linear, kind_ii_coordinate, letter_class_sizes,
                       numeric_spoil, spoil_descendants)
from .thermo import (CodeFamily, FamilyZeta, LambdaReport, LanguageReport,
                     PartitionValue, ProjectionReport, Weights, critical_beta,
                     family_zeta, kms_state_value, lambda_series,
                     language_generating, partition_function, product_grid,
                     product_partition, projection_state_and_vn_dim)
