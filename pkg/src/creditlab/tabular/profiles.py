"""Dataset profile files.

A profile is a plain-text key/value file describing how to read one dataset:
delimiter, header presence, column schema in file order, label/sensitive
recodings, and expected shape used as an integrity check after load.
Profiles for the supported datasets ship in the ``profiles/`` directory next
to this module; a data directory supplies the raw files themselves.

Format: one ``key = value`` per line, ``#`` comments, repeated ``column``
keys in file order::

    name = german
    delimiter = whitespace
    column = checking_status categorical
    column = duration numeric
    label_recode = 1:0 2:1
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from .schema import ColumnSpec

_BOOL = {"true": True, "false": False}


@dataclass
class DatasetProfile:
    name: str
    file: str
    delimiter: str = "comma"  # comma | whitespace
    header: bool = True
    columns: list[ColumnSpec] = field(default_factory=list)  # empty = infer from header
    label: str = ""
    label_recode: dict[str, int] = field(default_factory=dict)
    sensitive: str = ""
    sensitive_recode: dict[str, int] = field(default_factory=dict)
    missing_values: tuple[str, ...] = ("", "NA", "?", "XNA")
    expected_rows: int | None = None
    expected_positive_rate: float | None = None
    synthetic: str = ""  # generator id; empty = real dataset, must be fetched
    synth_seed: int = 0
    policy_features: tuple[str, ...] = ()  # explicit reject-policy feature list
    policy_feature_fraction: float = 0.4  # hash-split fraction when no explicit list

    def data_path(self, data_dir: str | Path) -> Path:
        return Path(data_dir) / self.file


def _parse_recode(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for pair in text.replace(",", " ").split():
        raw, _, target = pair.partition(":")
        if target not in ("0", "1"):
            raise ConfigError(f"recode target must be 0 or 1, got {pair!r}")
        out[raw] = int(target)
    return out


def parse_profile(text: str, origin: str = "<string>") -> DatasetProfile:
    values: dict[str, str] = {}
    columns: list[ColumnSpec] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, value = key.strip(), value.strip()
        if key == "column":
            parts = value.split()
            if len(parts) not in (2, 3):
                raise ConfigError(f"{origin}:{lineno}: column needs 'name kind [role]'")
            name, kind = parts[0], parts[1]
            role = parts[2] if len(parts) == 3 else "feature"
            columns.append(ColumnSpec(name, kind, role))
        elif key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        else:
            values[key] = value

    def take(key: str, default=None):
        return values.pop(key, default)

    if "name" not in values or "file" not in values:
        raise ConfigError(f"{origin}: profile requires 'name' and 'file'")
    prof = DatasetProfile(name=take("name"), file=take("file"))
    prof.delimiter = take("delimiter", "comma")
    if prof.delimiter not in ("comma", "whitespace"):
        raise ConfigError(f"{origin}: delimiter must be comma or whitespace")
    prof.header = _BOOL.get(take("header", "true").lower(), True)
    prof.columns = columns
    prof.label = take("label", "")
    prof.sensitive = take("sensitive", "")
    if "label_recode" in values:
        prof.label_recode = _parse_recode(take("label_recode"))
    if "sensitive_recode" in values:
        prof.sensitive_recode = _parse_recode(take("sensitive_recode"))
    if "missing_values" in values:
        prof.missing_values = tuple(take("missing_values").split())
    if "expected_rows" in values:
        prof.expected_rows = int(take("expected_rows"))
    if "expected_positive_rate" in values:
        prof.expected_positive_rate = float(take("expected_positive_rate"))
    prof.synthetic = take("synthetic", "")
    prof.synth_seed = int(take("synth_seed", "0"))
    if "policy_features" in values:
        prof.policy_features = tuple(take("policy_features").replace(",", " ").split())
    prof.policy_feature_fraction = float(take("policy_feature_fraction", "0.4"))
    if values:
        raise ConfigError(f"{origin}: unknown profile keys {sorted(values)}")
    if not prof.label:
        raise ConfigError(f"{origin}: profile requires 'label'")
    return prof


def load_profile(name_or_path: str | Path) -> DatasetProfile:
    """Load a bundled profile by name, or any profile by path."""
    path = Path(name_or_path)
    if path.suffix == ".profile" and path.exists():
        return parse_profile(path.read_text(), origin=str(path))
    ref = importlib.resources.files("creditlab.tabular") / "profiles" / f"{name_or_path}.profile"
    if not ref.is_file():
        raise ConfigError(f"unknown dataset profile {name_or_path!r}")
    return parse_profile(ref.read_text(), origin=str(name_or_path))


def bundled_profiles() -> list[str]:
    root = importlib.resources.files("creditlab.tabular") / "profiles"
    return sorted(p.name[: -len(".profile")] for p in root.iterdir() if p.name.endswith(".profile"))
