"""Run configuration and manifests.

Configs are flat JSON objects validated against a declarative key table per
subcommand: type and range checks, defaults, and hard rejection of unknown
keys (error messages carry a JSON path such as ``$.sweeps``).  A manifest
records everything needed to reproduce a run byte-for-byte: the validated
config, the root seed, the code version, and the SHA-256 of the artifact the
run wrote.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any

from .errors import ConfigError

SCHEMA_VERSION = 1

MANIFEST_KEYS = (
    "schema_version",
    "command",
    "config",
    "root_seed",
    "code_version",
    "created",
    "csv",
    "csv_sha256",
)


@dataclass(frozen=True)
class Key:
    """Schema entry for one config key."""

    kind: str  # "num" | "int" | "bool" | "str" | "num_list" | "int_list" | "window_list"
    required: bool = False
    default: Any = None
    low: float | None = None  # inclusive bound where set
    high: float | None = None
    choices: tuple[str, ...] | None = None


_MODEL_KEYS = {
    "coeffs": Key("num_list", default=()),
    "h_mean": Key("num", default=0.0),
    "h_std": Key("num", default=0.0, low=0.0),
}

_MINIMIZER_KEYS = {
    "k_max": Key("int", default=4, low=0),
    "order": Key("int", default=64, low=1),
}

COMMANDS: dict[str, dict[str, Key]] = {
    "cw": {
        "beta": Key("num", required=True, low=0.0),
        "u": Key("num", low=0.0, high=1.0),
        "order": Key("int", default=64, low=1),
        **_MODEL_KEYS,
    },
    "parisi": {
        **_MODEL_KEYS,
        **_MINIMIZER_KEYS,
        "restarts": Key("int", default=8, low=1),
        "one_atom_scan": Key("bool", default=False),
        "scan_qs": Key("num_list", default=tuple(i / 20 for i in range(20))),
    },
    "free-energy": {
        "beta": Key("num", required=True, low=0.0),
        **_MODEL_KEYS,
        **_MINIMIZER_KEYS,
        "scan_step": Key("num", default=1e-3, low=1e-6, high=0.1),
        "tol_omega": Key("num", default=1e-6, low=0.0),
        "merge_radius": Key("num", default=1e-4, low=0.0),
    },
    "region": {
        "u": Key("num", required=True, low=0.0, high=1.0),
        "beta": Key("num", required=True, low=0.0),
        **_MODEL_KEYS,
        **_MINIMIZER_KEYS,
        "scan_step": Key("num", default=1e-3, low=1e-6, high=0.1),
    },
    "simulate": {
        "beta": Key("num", required=True, low=0.0),
        **_MODEL_KEYS,
        "n_list": Key("int_list", default=(8, 12, 16, 20, 24)),
        "n_disorder": Key("int", default=100, low=1),
        "sweeps": Key("int", default=10_000, low=1),
        "burn_in": Key("int", default=1_000, low=0),
        "n_replicas": Key("int", default=2, low=1),
        "include_cold": Key("bool", default=True),
        "blocks": Key("int", default=20, low=2),
        "m_windows": Key("window_list", default=()),
        "overlap_thresholds": Key("num_list", default=()),
        "sign_eps": Key("num", default=0.05, low=0.0),
        "gg_level": Key("int", default=0, low=0),
        "gg_psi": Key("str", default="x", choices=("x", "x2", "abs")),
        "gg_absolute": Key("bool", default=False),
        "enumeration_crosscheck": Key("bool", default=False),
        "want_r4": Key("bool", default=False),
    },
    "enumerate": {
        "beta": Key("num", required=True, low=0.0),
        **_MODEL_KEYS,
        "n": Key("int", required=True, low=1),
        "n_disorder": Key("int", default=1, low=1),
        "want_r4": Key("bool", default=False),
    },
    "verify": {},
}


def _is_num(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _range_check(value: float, key: Key, path: str) -> None:
    if key.low is not None and value < key.low:
        raise ConfigError(f"value {value!r} below minimum {key.low}", path)
    if key.high is not None and value > key.high:
        raise ConfigError(f"value {value!r} above maximum {key.high}", path)


def _check_value(value: Any, key: Key, path: str) -> Any:
    kind = key.kind
    if kind == "num":
        if not _is_num(value):
            raise ConfigError(f"expected a number, got {value!r}", path)
        _range_check(value, key, path)
        return float(value)
    if kind == "int":
        if not _is_int(value):
            raise ConfigError(f"expected an integer, got {value!r}", path)
        _range_check(value, key, path)
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"expected true/false, got {value!r}", path)
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"expected a string, got {value!r}", path)
        if key.choices is not None and value not in key.choices:
            raise ConfigError(
                f"expected one of {list(key.choices)}, got {value!r}", path
            )
        return value
    if kind == "num_list":
        if not isinstance(value, list):
            raise ConfigError(f"expected a list of numbers, got {value!r}", path)
        out = []
        for i, item in enumerate(value):
            if not _is_num(item):
                raise ConfigError(f"expected a number, got {item!r}", f"{path}[{i}]")
            out.append(float(item))
        return tuple(out)
    if kind == "int_list":
        if not isinstance(value, list):
            raise ConfigError(f"expected a list of integers, got {value!r}", path)
        out = []
        for i, item in enumerate(value):
            if not _is_int(item):
                raise ConfigError(f"expected an integer, got {item!r}", f"{path}[{i}]")
            out.append(int(item))
        return tuple(out)
    if kind == "window_list":
        if not isinstance(value, list):
            raise ConfigError(f"expected a list of [lo, hi] pairs, got {value!r}", path)
        out = []
        for i, item in enumerate(value):
            ipath = f"{path}[{i}]"
            if not isinstance(item, list) or len(item) != 2:
                raise ConfigError(f"expected a [lo, hi] pair, got {item!r}", ipath)
            lo, hi = item
            if not (_is_num(lo) and _is_num(hi)):
                raise ConfigError(f"expected numeric bounds, got {item!r}", ipath)
            if not lo <= hi:
                raise ConfigError(f"window bounds out of order: {item!r}", ipath)
            out.append((float(lo), float(hi)))
        return tuple(out)
    raise AssertionError(f"unhandled key kind {kind!r}")


def validate_config(command: str, raw: Any, where: str = "$") -> dict[str, Any]:
    """Validate and normalize a raw config object for one subcommand.

    Fills defaults, coerces list values to tuples, and returns a dict that
    round-trips through the manifest.  Every failure is a ConfigError whose
    field attribute is a JSON path into the offending entry.
    """
    if command not in COMMANDS:
        known = ", ".join(sorted(COMMANDS))
        raise ConfigError(f"unknown command {command!r}; expected one of: {known}")
    if not isinstance(raw, dict):
        raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}", where)
    schema = COMMANDS[command]
    version = raw.get("schema_version", SCHEMA_VERSION)
    if not _is_int(version) or version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version!r} (this build reads version "
            f"{SCHEMA_VERSION})",
            f"{where}.schema_version",
        )
    unknown = sorted(k for k in raw if k != "schema_version" and k not in schema)
    if unknown:
        paths = ", ".join(f"{where}.{k}" for k in unknown)
        raise ConfigError(
            f"unknown key(s) for command {command!r}: {paths}", f"{where}.{unknown[0]}"
        )
    out: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
    for name, key in schema.items():
        path = f"{where}.{name}"
        if name not in raw:
            if key.required:
                raise ConfigError("missing required key", path)
            out[name] = key.default
        else:
            out[name] = _check_value(raw[name], key, path)
    return out


def load_config(path: str, command: str) -> dict[str, Any]:
    """Read a JSON config file and validate it for the given subcommand."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    return validate_config(command, raw)


# ---------------------------------------------------------------------------
# manifests


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def build_manifest(
    command: str,
    config: dict[str, Any],
    root_seed: int,
    artifact_name: str,
    artifact_bytes: bytes,
) -> dict[str, Any]:
    """Assemble the reproduction record for a completed run.

    ``csv`` names the primary artifact (CSV for bulk output, JSON report
    otherwise); ``csv_sha256`` pins its exact bytes.  ``created`` is the only
    field allowed to differ between a run and its replay.
    """
    from . import __version__

    cfg = {k: _jsonable(v) for k, v in config.items()}
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": cfg,
        "root_seed": int(root_seed),
        "code_version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "csv": artifact_name,
        "csv_sha256": sha256_hex(artifact_bytes),
    }


def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def manifest_to_bytes(manifest: dict[str, Any]) -> bytes:
    return (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_manifest(path: str) -> dict[str, Any]:
    """Read and validate a manifest; the embedded config is re-validated."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read manifest: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"manifest {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("manifest must be a JSON object", "$")
    missing = sorted(set(MANIFEST_KEYS) - set(raw))
    if missing:
        raise ConfigError(f"manifest missing key(s): {', '.join(missing)}", "$")
    unknown = sorted(set(raw) - set(MANIFEST_KEYS))
    if unknown:
        raise ConfigError(f"manifest has unknown key(s): {', '.join(unknown)}", "$")
    if not _is_int(raw["schema_version"]) or raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported manifest schema_version {raw['schema_version']!r}",
            "$.schema_version",
        )
    command = raw["command"]
    if command not in COMMANDS or command == "verify":
        raise ConfigError(f"manifest command {command!r} is not replayable", "$.command")
    if not _is_int(raw["root_seed"]) or raw["root_seed"] < 0:
        raise ConfigError(
            f"root_seed must be a nonnegative integer, got {raw['root_seed']!r}",
            "$.root_seed",
        )
    for name in ("code_version", "created", "csv", "csv_sha256"):
        if not isinstance(raw[name], str):
            raise ConfigError(f"expected a string, got {raw[name]!r}", f"$.{name}")
    out = dict(raw)
    out["config"] = validate_config(command, raw["config"], where="$.config")
    return out
