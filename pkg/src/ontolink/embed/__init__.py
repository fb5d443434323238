from .io import export_text, load_sparse_embedding, save_sparse_embedding
from .snore import SnoreScorer, SparseEmbedding, snore_fit, snore_score
from .spectral import SpectralEmbedding, SpectralScorer, spectral_fit
from .transe import KGEmbedding, TransEScorer, transe_fit, transe_score

__all__ = [
    "SparseEmbedding",
    "snore_fit",
    "snore_score",
    "SnoreScorer",
    "SpectralEmbedding",
    "spectral_fit",
    "SpectralScorer",
    "KGEmbedding",
    "transe_fit",
    "transe_score",
    "TransEScorer",
    "save_sparse_embedding",
    "load_sparse_embedding",
    "export_text",
]
