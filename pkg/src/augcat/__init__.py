"""Augmentation categories of systems of semi-free DGAs over GF(2^e).

Build or load a system of link-graded DGAs, enumerate augmentations, twist
differentials, read off the A-infinity operations on the dual chord module,
and compute the localised and consistent augmentation categories.
"""

from .algebra import Field, FreeProductSpec, GroupElement, Poly, chord_word, get_field, unit_word
from .augment import Augmentation, TwistedDifferential, brute_force_augs, diagonal_aug, enumerate_augs, twist
from .ainfty import HomComplex, check_ainf, dual_oracle_mk, mk
from .category import (
    ConsistentCategory,
    LocalizedCategory,
    PreAugCategory,
    check_family,
    compare_constructions,
    consistent_aug_cat,
    functor_from_family,
    h0_category,
    loc_hom,
    w_class,
)
from .dga import ChordGen, SemiFreeDGA, dga_check
from .fileformat import FormatError, dump_system, parse_family, parse_system
from .morphism import DGAMorphism, destabilise, elementary_auto, stabilise, verify_chain_map
from .ncopy import n_copy, n_copy_system
from .report import Finding, Report
from .system import DGASystem, check_system

__version__ = "0.1.0"
