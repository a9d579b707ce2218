"""Windmill separators, disc diagrams and coherence certificates for finite
presentations and combinatorial 2-complexes."""

from .words import (AlphabetSplit, Presentation, PresentationError, alternation_decompose, normalize_word,
                    parse_presentation, parse_word, period_decompose)
from .complex import TwoComplex, build_standard_complex, find_redundant_faces, parse_complex
from .folding import LabeledGraph, fold_graph, is_pi1_injective, short_kernel_witness, subdivide_by_words

__version__ = "0.1.0"
