"""Python bindings for the sensorium core operations."""

from ._core import (
    agnes_ward,
    cut,
    distance_matrix,
    dominant_modality,
    exclusivity,
    extract_windows,
    lemmatize,
    pai_score,
    pearson,
    silhouette,
    standardize,
    sweep_k,
    train_cbow,
)

__all__ = [
    "agnes_ward",
    "cut",
    "distance_matrix",
    "dominant_modality",
    "exclusivity",
    "extract_windows",
    "lemmatize",
    "pai_score",
    "pearson",
    "silhouette",
    "standardize",
    "sweep_k",
    "train_cbow",
]
