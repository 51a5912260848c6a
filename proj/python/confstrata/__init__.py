"""Forests, nests, strata and weight/Koszul computations for configuration spaces."""

import json

from ._core import (
    CapExceeded,
    HypothesisRefused,
    InputError,
    ResourceLimit,
    check_con_functor,
    check_level_functor,
    check_simplicial_identities,
    default_order,
    enumerate_forests,
    forest_count,
    forest_dot,
    is_forest,
    nest_count,
    poset_round_trip,
    run,
    strata_poset,
    stratum_intersect,
    validate_li_order,
)
from . import _core


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def hilbert_series(variety, n, truncation):
    """Graded dimensions of H*(Conf_n(X×R)) for a variety descriptor (dict or JSON text)."""
    return _core._hilbert_series(_text(variety), n, truncation)


def purity_check(variety, n, truncation):
    return _core._purity_check(_text(variety), n, truncation)


def koszul_criterion(presentation, truncation=10):
    result = _core._koszul_criterion(_text(presentation), truncation)
    result["dual"] = json.loads(result["dual"])
    return result


__all__ = [
    "CapExceeded",
    "HypothesisRefused",
    "InputError",
    "ResourceLimit",
    "check_con_functor",
    "check_level_functor",
    "check_simplicial_identities",
    "default_order",
    "enumerate_forests",
    "forest_count",
    "forest_dot",
    "hilbert_series",
    "is_forest",
    "koszul_criterion",
    "nest_count",
    "poset_round_trip",
    "purity_check",
    "run",
    "strata_poset",
    "stratum_intersect",
    "validate_li_order",
]
