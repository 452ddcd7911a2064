import pytest

from config.settings import (
    CONFIG_ENV_VAR,
    ConfigError,
    SolverConfig,
    dump_settings,
    load_settings,
    parse_settings,
)


def test_parse_settings_coerces_each_field_type():
    cfg = parse_settings(
        """
        # tighter search
        grad_tol = 1e-13
        max_iters = 60
        seed_grid = 32x64
        section_rho = 0.5, 1.0 1.5
        log_level = DEBUG   # trailing comment
        """
    )

    assert cfg.grad_tol == 1e-13
    assert cfg.max_iters == 60
    assert cfg.seed_grid == (32, 64)
    assert cfg.section_rho == [0.5, 1.0, 1.5]
    assert cfg.log_level == "DEBUG"
    assert cfg.accept_tol == SolverConfig().accept_tol


def test_parse_settings_rejects_unknown_keys_and_bad_values():
    with pytest.raises(ConfigError, match="unknown setting"):
        parse_settings("grid = 3")
    with pytest.raises(ConfigError, match="invalid value for max_iters"):
        parse_settings("max_iters = many")
    with pytest.raises(ConfigError, match="expected 'key = value'"):
        parse_settings("max_iters 40")


def test_dumped_settings_parse_back_unchanged():
    cfg = SolverConfig().with_overrides(seed_grid=(8, 16), workers=4)

    assert parse_settings(dump_settings(cfg)) == cfg


def test_load_settings_prefers_the_explicit_path(tmp_path, monkeypatch):
    env_file = tmp_path / "env.cfg"
    env_file.write_text("workers = 3\n", encoding="utf-8")
    explicit = tmp_path / "explicit.cfg"
    explicit.write_text("workers = 5\n", encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(env_file))

    assert load_settings().workers == 3
    assert load_settings(explicit).workers == 5


def test_load_settings_without_a_file_uses_defaults(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)

    assert load_settings() == SolverConfig()


def test_missing_config_file_raises(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config file"):
        load_settings(tmp_path / "nope.cfg")
