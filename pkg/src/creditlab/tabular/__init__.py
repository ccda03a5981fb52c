from .io import DATA_DIR_ENV, load_dataset, resolve_data_dir
from .preprocess import OTHER, PreprocessPlan, apply_preprocess, fit_preprocess, transform_columns
from .profiles import DatasetProfile, bundled_profiles, load_profile, parse_profile
from .schema import ColumnSpec, Table
from .split import SplitSpec, split

__all__ = [
    "ColumnSpec",
    "Table",
    "DatasetProfile",
    "parse_profile",
    "load_profile",
    "bundled_profiles",
    "load_dataset",
    "resolve_data_dir",
    "DATA_DIR_ENV",
    "PreprocessPlan",
    "fit_preprocess",
    "apply_preprocess",
    "transform_columns",
    "OTHER",
    "SplitSpec",
    "split",
]
