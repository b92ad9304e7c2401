"""Exact-arithmetic A-infinity minimal models over the rationals.

Homotopy transfer of finite-dimensional dgas (and A-infinity structures) to
minimal models, theta extensions and their explicit two-operation models,
the filtered symplectic two-row structures, duality-based corrections of
higher operations, and vanishing certificates.  Everything is computed over
exact rationals with deterministic echelon pivoting; every theorem-shaped
claim is verified by an identity checker rather than assumed.
"""

from .graded import (AlgebraError, AxiomViolation, BudgetExceeded,
                     DependencyError, GradedLinearMap, GradedSpace,
                     InvalidWitness, MalformedInput, MultiLinearMap, NotExact,
                     Scalar, SplittingData, Vector, apply_homotopy_Q,
                     compute_splitting, solve_linear)
from .report import CheckEntry, Report
from .dga import (CohomologyRing, Dga, check_dga_axioms, cohomology_ring,
                  kodaira_thurston_model, make_cpn_cohomology,
                  make_free_graded_commutative_dga, make_torus_cohomology)
from .ainf import (AInfMorphism, AInfStructure, PDStructure, check_morphism,
                   check_pd_cyclic, check_stasheff, check_strict_unitality,
                   check_strict_unitality_morphism, dga_to_ainf,
                   identity_morphism, make_pd_structure, sigma_permute,
                   star_coefficient)
from .transfer import (TransferResult, VanishingCertificate, compute_F_p,
                       kadeishvili_transfer, strictly_unital_transfer,
                       vanishing_profile, verify_transfer)
from .extension import (ExtensionDga, FormalExtensionModel, TorusWitness,
                        cpn_formality_witness, extend_dga, extension_morphism,
                        formal_extension_minimal_model,
                        torus_nonformality_witness)
from .symplectic import (FilteredComplex, LefschetzContext, SymplecticModel,
                         TTYStructure, apply_operator, build_filtered_complex,
                         build_lefschetz_context, build_symplectic_model,
                         build_tty_structure, compare_with_extension,
                         kodaira_thurston_symplectic, lefschetz_decompose,
                         torus_symplectic)
from .pdcorrect import (CorrectionResult, CyclicPDInput, build_delta,
                        pd_correct)

__version__ = "0.1.0"
