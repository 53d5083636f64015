"""p-adic theta calculus on Serre-Tate expansions for unitary-group signatures.

Exact arithmetic over Z/p^M, Young-symmetrizer expansions of canonical
highest-weight functionals, diagonal theta operators on shifted series,
weight congruences, restriction to signature partitions, and desk-scale
Eisenstein-measure moment tables with Kummer-congruence certification.
"""

from .padic import INFINITY, PAdicInt, RingCtx, factorial_exact
from .weights import (PAdicCharacterApprox, PartitionedSignature, Signature,
                      Weight, is_dominant, is_pure, is_sum_symmetric,
                      is_symmetric, restrict_components, weight_congruent,
                      weyl_conjugate_to_dominant)
from .series import MonomialSeries, ShiftedSeries, VarLabel, variable_labels
from .symmetrizer import (GroupAlgebraElement, SymmetrizedFunctional,
                          apply_functional, functional_product, lcan_expand,
                          weighted_apply, young_symmetrizer)
from .theta import (CharacterZeta, FiniteOrderCharacter, ThetaWord,
                    congruence_sweep, phi_equivalence_report, phi_kappa_minor,
                    phi_oracle, phi_zeta, theta_chi_apply, theta_kappa_apply,
                    theta_word_apply)
from .pullback import (RestrictionMap, build_restriction,
                       check_pure_commutation, extend_via_weyl, res_series)
from .family import (FData, HermitianExponent, MomentChar, QExpansion,
                     ToyCMContext, UnitCharacter, apply_theta_q, build_F,
                     coefficient, enumerate_hermitian, kummer_certify,
                     measure_moment, norm_knu)

__version__ = "0.1.0"
