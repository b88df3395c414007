"""tamerec: symbolic-numeric verification of tame-symbol reciprocity laws,
lifted reciprocity maps, norm constructions, and the Chow dilogarithm on
rational curves and surfaces over a fixed number field."""

__version__ = "0.1.0"

from .numfield import (ComplexBall, FieldElement, NumberField, embed,
                       embed_complex, is_root_of_unity, make_field,
                       rational_field)
from .chains import (INF, BlochSum, ConstAtom, Factored, FactoredFunction,
                     FieldTag, LinearAtom, MixedSum, SurfaceAtom, TIrredAtom,
                     WedgeSum, XPolyAtom, cross_ratio, delta, delta2,
                     five_term, mixed_of, wedge_mul, wedge_of_functions)
from .tame import (SIGMA, Valuation, ord_ff, residue_value, tame_mixed,
                   tame_wedge, total_tame_mixed, total_tame_wedge, weil_check)
from .homotopy import (LiftedReciprocityMap, bloch_invariants_match,
                       h_rational, h_rational_map, is_lifted_reciprocity_map,
                       mobius_substitute, zero_map)
from .normlift import (FTValuation, GeneralPoint, H_h, ResidueElement,
                       ValuationExtension, classify_valuation,
                       curve_tame_oracle, embed_line_wedge, factor_in_L,
                       general_support, lift_mixed, lift_wedge, norm_map,
                       pullback_map, pullback_mixed, pullback_wedge,
                       regroup_wedge, residue_mixed, residue_one_minus,
                       residue_wedge, tame_ft_mixed, tame_ft_wedge,
                       valuation_extensions)
from .surface import (GENERATOR_SHAPES, SurfaceDivisor, curve_atom,
                      parshin_point_check, snc_check, surface_reciprocity_check,
                      surface_tame, surface_wedge)
from .dilognum import (ORIENTATION, IntegrandSpec, bloch_wigner,
                       bloch_wigner_mp, chow_integral, l2_tilde)
