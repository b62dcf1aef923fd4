"""Taxonomy-driven text segmentation.

Adjacent text blocks are clustered by the similarity of their entities'
taxonomy classes, optionally blended with lexical cosine similarity; the
resulting merge tree is flattened into linear segments and scored with the
standard probe-window error metrics.
"""

from .annotation import AnnotatedDocument, Entity, Sentence, gazetteer_annotate, load_annotations, remote_annotate, save_annotations
from .dataset import GenSpec, SegmentedDocument, generate, read_choi, reference_segmentation, write_choi
from .errors import ConfigError, FormatError, RemoteServiceError, TaxosegError
from .metrics import EvalConfig, EvalReport, choose_k, evaluate_documents, pk_score, window_diff_score
from .segmentation import Dendrogram, Segmentation, WindowConfig, build_dendrogram, flatten, make_blocks, segment_document
from .similarity import Block, SimilarityWeights, block_lsim, block_osim, ent_sim, hybrid_sim
from .taxonomy import Taxonomy, load_taxonomy
from .textprep import build_term_vector, cosine, porter_stem, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument", "Block", "ConfigError", "Dendrogram", "Entity",
    "EvalConfig", "EvalReport", "FormatError", "GenSpec", "RemoteServiceError",
    "SegmentedDocument", "Segmentation", "Sentence", "SimilarityWeights",
    "Taxonomy", "TaxosegError", "WindowConfig", "block_lsim", "block_osim",
    "build_dendrogram", "build_term_vector", "choose_k", "cosine", "ent_sim",
    "evaluate_documents", "flatten", "gazetteer_annotate", "generate",
    "hybrid_sim", "load_annotations", "load_taxonomy", "make_blocks",
    "pk_score", "porter_stem", "read_choi", "reference_segmentation",
    "remote_annotate", "save_annotations", "segment_document", "tokenize",
    "window_diff_score", "write_choi",
]
