"""Exact construction, verification and classification of the BM
quasi-Hermitian varieties of PG(3, q^2) for odd q."""

from .errors import (DomainError, FieldError, InvariantViolation, ParamError)
from .field import Field, default_modulus, is_irreducible
from .projgeom import Space
from .variety import (BMParams, OmegaPartition, PointSet, SpectrumReport,
                      build_point_set, hyperplane_spectrum, member_B,
                      member_F, member_M, member_M_affine_alt,
                      omega_partition, unchecked_params, validate_params)
from .lines import (LineCensus, contained_lines, line_census, pencil_check,
                    ri_incidence_check)
from .graph import (CollinearityGraph, GraphStats, connectivity_and_diameter,
                    distance_witness, omega3_structure)
from .classify import (ClassKey, Collineation, apply_collineation,
                       are_equivalent, class_grouping, class_key,
                       class_representative, count_classes_bruteforce,
                       count_classes_formula, delta_invariant, delta_orbits,
                       find_collineation, normalize_to_epsilon,
                       stabilizer_order)

__version__ = "0.1.0"
