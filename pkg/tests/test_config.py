import json

import pytest

from subspacepdf.config import (
    DEFAULT_CONFIG,
    bench_setting,
    get_workers,
    is_verbose,
    l2_config,
    load_config,
    section,
    solver_config,
)
from subspacepdf.errors import ConfigurationError
from subspacepdf.subspace import SolverConfig


def test_missing_file_gives_defaults(isolated_config):
    config = load_config(isolated_config)
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG
    assert get_workers(config) == 4
    assert solver_config(config) == SolverConfig()


def test_sections_are_merged_over_defaults(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({"solver": {"max_iters": 50}, "general": {"workers": 2}}), encoding='utf-8')
    config = load_config(str(path))
    assert config["solver"]["max_iters"] == 50
    assert config["solver"]["grad_tol"] == 1e-8
    assert get_workers(config) == 2
    assert DEFAULT_CONFIG["solver"]["max_iters"] == 10000


def test_invalid_file_warns_and_falls_back(tmp_path, capsys):
    path = tmp_path / 'config.json'
    path.write_text("{not json", encoding='utf-8')
    assert load_config(str(path)) == DEFAULT_CONFIG
    assert 'Warning' in capsys.readouterr().err


def test_solver_overrides():
    config = load_config('/nonexistent/config.json')
    assert solver_config(config, max_iters=7, grad_tol=None).max_iters == 7
    config["solver"]["param_floor"] = -1.0
    with pytest.raises(ConfigurationError):
        solver_config(config)


def test_l2_config_scales_the_search_window():
    config = load_config('/nonexistent/config.json')
    config["l2"]["refine_iters"] = 12
    fit = l2_config(config, 2.0)
    assert fit.search_lo == pytest.approx(0.1)
    assert fit.search_hi == pytest.approx(10.0)
    assert fit.refine_iters == 12


def test_top_level_must_be_an_object(tmp_path, capsys):
    path = tmp_path / 'config.json'
    path.write_text("[1, 2]", encoding='utf-8')
    assert load_config(str(path)) == DEFAULT_CONFIG
    assert 'top level' in capsys.readouterr().err


@pytest.mark.parametrize("workers", [0, -2, 1.5, "4", True])
def test_workers_are_checked_on_access(workers):
    config = load_config('/nonexistent/config.json')
    config["general"]["workers"] = workers
    with pytest.raises(ConfigurationError):
        get_workers(config)


def test_sections_must_be_objects(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({"solver": 3, "l2": "wide", "bench": None}), encoding='utf-8')
    config = load_config(str(path))
    with pytest.raises(ConfigurationError):
        solver_config(config)
    with pytest.raises(ConfigurationError):
        l2_config(config, 1.0)
    with pytest.raises(ConfigurationError):
        bench_setting(config, "trials")
    assert section(config, "residual") == {"quad_points": 2001}


def test_unknown_settings_are_configuration_errors():
    config = load_config('/nonexistent/config.json')
    config["solver"]["step"] = 2.0
    with pytest.raises(ConfigurationError):
        solver_config(config)
    config = load_config('/nonexistent/config.json')
    config["l2"]["width"] = 2.0
    with pytest.raises(ConfigurationError):
        l2_config(config, 1.0)
    config["l2"] = {"lo_factor": "low"}
    with pytest.raises(ConfigurationError):
        l2_config(config, 1.0)


def test_bench_setting_falls_back_to_defaults():
    config = {"bench": {"trials": 7}}
    assert bench_setting(config, "trials") == 7
    assert bench_setting(config, "n_bins") == 15
    assert is_verbose({}) is False
