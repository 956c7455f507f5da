"""Executable domain theory for finite quantaloid-enriched categories."""

from .category import (Preorder, QCategory, QDistributor, QFunctor, check_adjoint, cograph,
                       compose_functors, dist_compose, dist_join, dist_leq, dist_lres, dist_rres,
                       graph, identity_distributor, identity_functor, is_fully_faithful, is_skeletal,
                       iso_classes, underlying_preorder, validate_category, validate_distributor,
                       validate_functor)
from .continuity import (algebraic_equivalence, check_algebraic, check_continuous,
                         check_interpolation, compacts, is_compact, phi_s, sigma_and_s, way_below,
                         way_below_functor)
from .errors import (EnumerationCapExceeded, ForeignElement, InternalInconsistency, MismatchFound,
                     NotDivisible, NotOver2, ParseError, PreconditionFailed, QDomainError,
                     SubsetSearchCapExceeded, TypeMismatch, ValidationError, Violation)
from .ideals import (CLASS_IDS, IdealClass, check_cocomplete, check_cocontinuous, check_conical,
                     check_conical_ideal, check_flat, check_irreducible, check_weakly_flat,
                     get_class, is_phi_distributor, membership, phi_category, saturation_harness)
from .lattice import FiniteLattice, validate_lattice
from .models import (CATALOG, NAMED_POSETS, boolean2, cat2_to_poset, chain_quantale, check_q_power,
                     fixture, named_poset, poset_to_2cat, powerset_quantale, q_power, q_power_d)
from .oracle import PosetOracle, cross_validate, generate_posets, poset_oracle
from .presheaf import (Copresheaf, Presheaf, colim, copresheaf_category, enumerate_copresheaves,
                       enumerate_presheaves, f_from, f_to, inhabited, inhabited_co, make_copresheaf,
                       make_presheaf, presheaf_category, representable, sup,
                       sup_in_presheaf_category, yoneda)
from .quantaloid import (Quantale, Quantaloid, b_q, check_divisible, lres, rres, validate_quantale,
                         validate_quantaloid)

# short predicate names
is_irreducible = check_irreducible
is_flat = check_flat
is_weakly_flat = check_weakly_flat

__version__ = "0.1.0"
