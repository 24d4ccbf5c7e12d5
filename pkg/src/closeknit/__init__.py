"""Invariant commensurable sub-objects through meet-semilattice fixed points.

The engine closes a seed family under its symmetry generators, locates a
strong element (one realizing the minimal down-set of distances to the
family), and returns the greatest meet of increments, which is fixed by
every symmetry.  Three concrete lattices are provided (finite subsets,
subgroups of a finite permutation group, subspaces of F_p^n), plus
direct tabular models, exact [0,1]-valued formula evaluators, and
brute-force oracles that certify every output.
"""

from .abstract import (AbstractInstance, AbstractLattice, load_abstract,
                       random_valid_instance, tabulate_instance)
from .contlogic import (MetricStructure, delta_phi_n_group, delta_phi_n_set,
                        delta_phi_n_vect, discrete_reduction,
                        structure_from_group, structure_from_sets,
                        structure_from_subspaces)
from .engine import (Certificate, EngineOptions, Instance, ValidationReport,
                     argmax_set, compute_m, find_strong, greatest_n, n_of,
                     orbit_closure, solve, strong_elements,
                     validate_conditions, verify_certificate)
from .errors import (AssociativityViolation, CapExceeded, CloseKnitError,
                     ConditionViolation, ContractViolation,
                     ElementCapExceeded, EnumerationCapExceeded,
                     EquivarianceViolation, IncrementViolation,
                     InputFormatError, InvalidAction, MonotonicityViolation,
                     OrbitCapExceeded, StrongSearchExhausted,
                     StructureMismatch)
from .galois import GaloisInstance, solve_galois
from .groups import (GroupInstance, PermGroup, Subgroup, closure,
                     conjugate_action, increment_group, index_of,
                     measure_group, product_set, subgroup_from_perms)
from .indexposet import (DownSet, IndexValue, downset_of, leq, maximal_in,
                         nat, strictly_below)
from .oracle import all_subgroups, all_subspaces, feasible_set, invariant_subsets
from .sets import FiniteSubset, SetInstance, measure_set
from .vect import SubspaceBasis, VectorInstance, add, codim, intersect, \
    matrix_action, measure_vect

__all__ = [name for name in dir() if not name.startswith("_")]
