"""p-ary sequence families of period (p^n - 1)/2 built from decimated m-sequences,
with exact correlation spectra and Weil-bound checks."""

from .char_sums import (AdditiveCharacter, CyclotomicInteger, MultiplicativeCharacter,
                        check_additive_weil, check_hybrid_weil, gauss_sum, hybrid_sum)
from .correlation import (ParamPair, SpectrumReport, bound_value, family_spectrum,
                          kernel_eval, kernel_for_family, naive_correlation, param_reduce,
                          reachable_params)
from .finite_field import FieldCtx, FieldElement, build_field
from .sequences import (FamilyIndex, FamilySpec, PSequence, cyclic_inequivalence_check,
                        decimate, family_enumerate, family_member, m_sequence)

__version__ = "0.1.0"
