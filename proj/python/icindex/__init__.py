"""Concordance metrics for drug-target affinity predictions."""

from __future__ import annotations

from typing import Hashable, Iterable, NamedTuple, Sequence

import numpy as np

from . import _core
from ._core import (
    AlignmentError,
    DuplicatePairError,
    IcindexError,
    InvalidValueError,
    ParseError,
    SchemaError,
    SizeLimitError,
)

__version__ = _core.__version__

__all__ = [
    "MetricResult",
    "Decomposition",
    "metric",
    "accuracy",
    "c_index",
    "c_index_drugwise",
    "c_index_targetwise",
    "ic_index",
    "decompose_2x2",
    "densify",
    "IcindexError",
    "ParseError",
    "SchemaError",
    "DuplicatePairError",
    "InvalidValueError",
    "AlignmentError",
    "SizeLimitError",
]


class MetricResult(NamedTuple):
    value: float
    numerator: float
    denominator: int
    defaulted: bool


class Decomposition(NamedTuple):
    grand_mean: float
    drug_main: float
    target_main: float
    interaction: float


def metric(name, drug_ids, target_ids, y, pred, *, tie_tolerance=0.0, averaging="pooled",
           orientation="auto", threads=1) -> MetricResult:
    """Evaluate ``name`` (accuracy, c_index, c_index_drugwise, c_index_targetwise,
    ic_index or a short alias) on dense integer ids."""
    return MetricResult(*_core.metric(
        name, np.asarray(drug_ids), np.asarray(target_ids), y, pred,
        tie_tolerance=tie_tolerance, averaging=averaging, orientation=orientation, threads=threads))


def accuracy(drug_ids, target_ids, y, pred) -> MetricResult:
    return metric("accuracy", drug_ids, target_ids, y, pred)


def c_index(drug_ids, target_ids, y, pred, **options) -> MetricResult:
    return metric("c_index", drug_ids, target_ids, y, pred, **options)


def c_index_drugwise(drug_ids, target_ids, y, pred, **options) -> MetricResult:
    return metric("c_index_drugwise", drug_ids, target_ids, y, pred, **options)


def c_index_targetwise(drug_ids, target_ids, y, pred, **options) -> MetricResult:
    return metric("c_index_targetwise", drug_ids, target_ids, y, pred, **options)


def ic_index(drug_ids, target_ids, y, pred, **options) -> MetricResult:
    return metric("ic_index", drug_ids, target_ids, y, pred, **options)


def decompose_2x2(cells: Sequence[Sequence[float]]) -> Decomposition:
    return Decomposition(*_core.decompose_2x2(cells))


def densify(ids: Iterable[Hashable]) -> tuple[np.ndarray, list]:
    """Map arbitrary ids to codes 0..k-1 in order of first appearance.

    Returns the uint32 code array and the list of distinct ids, so that
    ``names[codes[i]] == ids[i]``.
    """
    index: dict = {}
    codes = [index.setdefault(x, len(index)) for x in ids]
    return np.asarray(codes, dtype=np.uint32), list(index)
