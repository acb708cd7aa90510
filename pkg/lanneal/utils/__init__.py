"""Utility functions and classes."""

from .distance import closest_pair, min_pair_distance, pairwise_distances
from .io import (
    LannealJSONEncoder,
    is_jsonable,
    load_dataframe,
    save_dataframe,
    save_dict_to_hdf5,
    save_report,
    save_to_json,
)
from .logging import log_configuration, parse_log_level, setup_logger
from .multiprocessing import (
    batch_evaluate,
    check_multiprocessing_start_method,
    create_pool,
    initialise_pool_variables,
)
from .stats import mean_and_stderr, paired_difference

__all__ = [
    "LannealJSONEncoder",
    "batch_evaluate",
    "check_multiprocessing_start_method",
    "closest_pair",
    "create_pool",
    "initialise_pool_variables",
    "is_jsonable",
    "load_dataframe",
    "log_configuration",
    "mean_and_stderr",
    "min_pair_distance",
    "paired_difference",
    "pairwise_distances",
    "parse_log_level",
    "save_dataframe",
    "save_dict_to_hdf5",
    "save_report",
    "save_to_json",
    "setup_logger",
]
