"""Config validation and manifest round trips."""

import json

import pytest

from skcw.config import (
    MANIFEST_KEYS,
    SCHEMA_VERSION,
    build_manifest,
    load_config,
    load_manifest,
    manifest_to_bytes,
    sha256_hex,
    validate_config,
)
from skcw.errors import ConfigError


def test_defaults_filled_and_lists_become_tuples():
    cfg = validate_config("parisi", {"coeffs": [0.5, 0.25]})
    assert cfg["schema_version"] == SCHEMA_VERSION
    assert cfg["coeffs"] == (0.5, 0.25)
    assert cfg["h_mean"] == 0.0
    assert cfg["h_std"] == 0.0
    assert cfg["k_max"] == 4
    assert cfg["order"] == 64
    assert cfg["restarts"] == 8
    assert cfg["one_atom_scan"] is False
    assert cfg["scan_qs"] == tuple(i / 20 for i in range(20))


def test_simulate_defaults():
    cfg = validate_config("simulate", {"beta": 1.0})
    assert cfg["n_list"] == (8, 12, 16, 20, 24)
    assert cfg["n_disorder"] == 100
    assert cfg["sweeps"] == 10_000
    assert cfg["include_cold"] is True
    assert cfg["gg_psi"] == "x"
    assert cfg["m_windows"] == ()


def test_missing_required_key():
    with pytest.raises(ConfigError) as exc:
        validate_config("cw", {})
    assert exc.value.field == "$.beta"
    assert "missing required" in str(exc.value)


def test_unknown_key_rejected_with_path():
    with pytest.raises(ConfigError) as exc:
        validate_config("cw", {"beta": 1.5, "sweeps": 100})
    assert exc.value.field == "$.sweeps"
    assert "$.sweeps" in str(exc.value)


def test_unknown_command_lists_known_ones():
    with pytest.raises(ConfigError) as exc:
        validate_config("frobnicate", {})
    msg = str(exc.value)
    assert "simulate" in msg and "cw" in msg


def test_non_object_config_rejected():
    with pytest.raises(ConfigError):
        validate_config("cw", [1, 2, 3])
    with pytest.raises(ConfigError):
        validate_config("cw", "beta=2")


def test_schema_version_checked():
    ok = validate_config("cw", {"beta": 2.0, "schema_version": SCHEMA_VERSION})
    assert ok["beta"] == 2.0
    with pytest.raises(ConfigError) as exc:
        validate_config("cw", {"beta": 2.0, "schema_version": 99})
    assert exc.value.field == "$.schema_version"
    with pytest.raises(ConfigError):
        # string "1" is not an integer
        validate_config("cw", {"beta": 2.0, "schema_version": "1"})


def test_bool_is_not_a_number():
    with pytest.raises(ConfigError) as exc:
        validate_config("cw", {"beta": True})
    assert exc.value.field == "$.beta"


def test_float_is_not_an_integer():
    with pytest.raises(ConfigError) as exc:
        validate_config("parisi", {"order": 32.0})
    assert exc.value.field == "$.order"


def test_int_accepted_where_number_expected():
    cfg = validate_config("cw", {"beta": 2})
    assert cfg["beta"] == 2.0
    assert isinstance(cfg["beta"], float)


def test_bool_kind_rejects_int():
    with pytest.raises(ConfigError):
        validate_config("simulate", {"beta": 1.0, "include_cold": 1})


def test_str_choices_enforced():
    with pytest.raises(ConfigError) as exc:
        validate_config("simulate", {"beta": 1.0, "gg_psi": "cube"})
    assert exc.value.field == "$.gg_psi"
    assert "x2" in str(exc.value)


def test_range_bounds():
    with pytest.raises(ConfigError):
        validate_config("cw", {"beta": -0.5})
    with pytest.raises(ConfigError):
        validate_config("cw", {"beta": 2.0, "u": 1.5})
    with pytest.raises(ConfigError):
        validate_config("free-energy", {"beta": 1.0, "scan_step": 0.5})
    # inclusive endpoints pass
    cfg = validate_config("free-energy", {"beta": 1.0, "scan_step": 0.1})
    assert cfg["scan_step"] == 0.1


def test_num_list_element_path():
    with pytest.raises(ConfigError) as exc:
        validate_config("parisi", {"coeffs": [0.5, "x"]})
    assert exc.value.field == "$.coeffs[1]"
    with pytest.raises(ConfigError):
        validate_config("parisi", {"coeffs": 0.5})  # scalar is not a list


def test_int_list_element_path():
    with pytest.raises(ConfigError) as exc:
        validate_config("simulate", {"beta": 1.0, "n_list": [8.5, 12]})
    assert exc.value.field == "$.n_list[0]"


def test_window_list_validation():
    cfg = validate_config("simulate", {"beta": 1.0, "m_windows": [[0.1, 0.3], [-1, 1]]})
    assert cfg["m_windows"] == ((0.1, 0.3), (-1.0, 1.0))
    with pytest.raises(ConfigError) as exc:
        validate_config("simulate", {"beta": 1.0, "m_windows": [[0.1]]})
    assert exc.value.field == "$.m_windows[0]"
    with pytest.raises(ConfigError):
        validate_config("simulate", {"beta": 1.0, "m_windows": [[0.5, 0.2]]})
    with pytest.raises(ConfigError):
        validate_config("simulate", {"beta": 1.0, "m_windows": [["a", 0.2]]})


def test_where_prefix_propagates():
    with pytest.raises(ConfigError) as exc:
        validate_config("cw", {}, where="$.config")
    assert exc.value.field == "$.config.beta"


def test_load_config_roundtrip(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"beta": 1.5, "coeffs": [0.4]}))
    cfg = load_config(str(p), "cw")
    assert cfg["beta"] == 1.5
    assert cfg["coeffs"] == (0.4,)


def test_load_config_bad_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.json"), "cw")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad), "cw")


def test_sha256_hex_known_value():
    assert (
        sha256_hex(b"")
        == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    )
    assert len(sha256_hex(b"abc")) == 64


def _manifest():
    cfg = validate_config("enumerate", {"beta": 0.8, "coeffs": [0.5], "n": 6})
    return build_manifest("enumerate", cfg, 7, "enumerate.csv", b"header\n1,2\n")


def test_build_manifest_shape():
    m = _manifest()
    assert tuple(sorted(m)) == tuple(sorted(MANIFEST_KEYS))
    assert m["schema_version"] == SCHEMA_VERSION
    assert m["command"] == "enumerate"
    assert m["root_seed"] == 7
    assert m["csv"] == "enumerate.csv"
    assert m["csv_sha256"] == sha256_hex(b"header\n1,2\n")
    # tuples in the config must have become JSON-safe lists
    assert m["config"]["coeffs"] == [0.5]
    json.dumps(m)  # serializable as-is


def test_manifest_bytes_are_order_independent():
    m = _manifest()
    shuffled = dict(reversed(list(m.items())))
    assert manifest_to_bytes(m) == manifest_to_bytes(shuffled)
    assert manifest_to_bytes(m).endswith(b"\n")


def test_load_manifest_roundtrip(tmp_path):
    m = _manifest()
    p = tmp_path / "m.json"
    p.write_bytes(manifest_to_bytes(m))
    loaded = load_manifest(str(p))
    assert loaded["command"] == "enumerate"
    assert loaded["root_seed"] == 7
    # embedded config is re-validated, so lists come back as tuples
    assert loaded["config"]["coeffs"] == (0.5,)
    assert loaded["config"]["n"] == 6


def _write_variant(tmp_path, mutate):
    m = json.loads(manifest_to_bytes(_manifest()))
    mutate(m)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(m))
    return str(p)


def test_load_manifest_missing_key(tmp_path):
    path = _write_variant(tmp_path, lambda m: m.pop("csv"))
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert "csv" in str(exc.value)


def test_load_manifest_unknown_key(tmp_path):
    path = _write_variant(tmp_path, lambda m: m.update(extra=1))
    with pytest.raises(ConfigError):
        load_manifest(path)


def test_load_manifest_bad_schema_version(tmp_path):
    path = _write_variant(tmp_path, lambda m: m.update(schema_version=2))
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert exc.value.field == "$.schema_version"


def test_load_manifest_verify_not_replayable(tmp_path):
    def mutate(m):
        m["command"] = "verify"
        m["config"] = {}

    path = _write_variant(tmp_path, mutate)
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert exc.value.field == "$.command"


def test_load_manifest_bad_root_seed(tmp_path):
    path = _write_variant(tmp_path, lambda m: m.update(root_seed=-3))
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert exc.value.field == "$.root_seed"


def test_load_manifest_nonstring_field(tmp_path):
    path = _write_variant(tmp_path, lambda m: m.update(code_version=5))
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert exc.value.field == "$.code_version"


def test_load_manifest_revalidates_embedded_config(tmp_path):
    path = _write_variant(tmp_path, lambda m: m["config"].update(bogus=1))
    with pytest.raises(ConfigError) as exc:
        load_manifest(path)
    assert exc.value.field == "$.config.bogus"


def test_load_manifest_not_a_file(tmp_path):
    with pytest.raises(ConfigError):
        load_manifest(str(tmp_path / "absent.json"))
    lst = tmp_path / "list.json"
    lst.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_manifest(str(lst))
