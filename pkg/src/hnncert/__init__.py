"""Finitely presented groups, their HNN splittings over a map onto Z, cyclic covers,
and certificates of acylindrical hyperbolicity from a positive l2-Betti lower bound."""

from .certify import Certificate, audit_certificate, certify, render_certificate
from .covers import betti_of_cover, cover_hnn_data, kernel_presentation
from .hnn import HnnSplitting, rewrite_relator, split_as_hnn, verify_splitting
from .intlin import abelianization, smith_normal_form
from .l2est import betti_growth, l2_bounds
from .presentations import FinitePresentation, apply_tietze, deficiency
from .textio import parse_presentation
from .words import Word
from .zmaps import ZHomomorphism, find_zmap, normalize_stable_letter, verify_zmap

__version__ = "0.1.0"

__all__ = [
    "Certificate", "FinitePresentation", "HnnSplitting", "Word", "ZHomomorphism",
    "abelianization", "apply_tietze", "audit_certificate", "betti_growth", "betti_of_cover",
    "certify", "cover_hnn_data", "deficiency", "find_zmap", "kernel_presentation", "l2_bounds",
    "normalize_stable_letter", "parse_presentation", "render_certificate", "rewrite_relator",
    "smith_normal_form", "split_as_hnn", "verify_splitting", "verify_zmap",
]
