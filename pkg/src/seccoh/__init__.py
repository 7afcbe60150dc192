"""seccoh: exact semi-equivariant Cech cohomology at finite scale.

Computes the cohomology of finite group actions with coefficients in
finite gamma-groups, classifies semi-equivariant principal bundles by
transition cocycles, and solves the lifting problem for central
extensions through the Dixmier-Douady obstruction class.  Everything is
exact integer arithmetic, verified against brute-force oracles.
"""

__version__ = "0.1.0"

from .bundles import (BruteLiftings, CombinatorialBundle, LiftingClassification,
                      SectionFamily, bundle_from_cocycle, bundle_iso_check,
                      bundle_violations, canonical_sections, cocycle_from_sections,
                      enumerate_liftings_bruteforce, lifting_equivalent,
                      perturbed_sections, roundtrip_check, solve_liftings)
from .cochains import (Cochain, coboundary, cochain_from_list, compose,
                       constant_cochain, homotopy, invert, make_cochain,
                       map_coefficients, random_cochain, restrict, scale,
                       twisted_pullback)
from .cohomology import (CohomologyClass, CohomologyGroup, HomPresentation,
                         class_of, cohomology, connecting_abelian,
                         cochain_coords, cochain_from_coords,
                         les_exactness_check, linearize_coboundary,
                         refinement_action_check, solve_coboundary_equation)
from .groups import (AbelianPresentation, CentralExtensionData, FiniteGammaGroup,
                     FiniteGroup, GammaAction, GroupHom, abelian_presentation,
                     central_extension, check_central_extension, check_gamma_group,
                     gamma_group, group_axiom_violations, hom_violations,
                     identity_hom, is_equivariant, make_cyclic, section_of,
                     semidirect_product, trivial_action)
from .scenario_io import (cochain_entries, parse_scenario, parse_scenario_data,
                          scenario_digest)
from .simplicial import (Cover, GammaSpace, MultiIndex, Refinement, Scenario,
                         SimplexPoint, action_violations, cover_violations,
                         degeneracy_index, face_index, induced_refinement,
                         refine_scenario, refinement_violations, twist,
                         verify_face_compat, verify_simplicial_identities,
                         verify_twist_identities)
from .transition import (CocycleEquivalence, TCCompareReport, TransitionCocycle,
                         apply_equivalence, coboundary_cocycle, dd, delta0, delta1,
                         equivalence_holds, find_equivalence, identity_cocycle,
                         is_tc0, is_tc1, section_lift, solve_coboundary,
                         tc0_elements, tc0_violations, tc1_h1_compare, tc1_orbits,
                         tc1_violations)
from .validation import (AuditReport, BudgetExceededError, NonAbelianError,
                         ScenarioError, SeccohError, ValidationError)
