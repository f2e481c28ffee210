"""
tests/test_config_stats.py - Settings, experiment configs, errors, RNG streams, stats and artifacts

Run: pytest tests/test_config_stats.py -v
"""

import json
import pickle
from collections import Counter

import numpy as np
import pytest

from forestlab.artifacts import build_manifest, canonical_json, config_hash, write_csv, write_json
from forestlab.config import DEFAULT_SETTINGS, Settings, default_settings, load_config
from forestlab.errors import ConfigError, ContractViolation, DomainError, ForestLabError, ResourceError, StatisticalFailure, StepBudgetExceeded
from forestlab.experiments import ExperimentConfig, kirchhoff_edges, njl_grid, parse_chain
from forestlab.lattice import LatticeBoxSpec, build_lattice_box
from forestlab.rng import RngStream, UniformBuffer
from forestlab.stats import chi_square_gof, chi_square_two_sample, fit_envelope, mean_ci, proportion_ci, total_variation, tv_bootstrap

# ============================================================================
# Settings and configuration
# ============================================================================


def test_settings_replace():
    tight = DEFAULT_SETTINGS.replace(vertex_budget=10)
    assert tight.vertex_budget == 10
    assert DEFAULT_SETTINGS.vertex_budget == Settings().vertex_budget
    assert default_settings() is DEFAULT_SETTINGS
    with pytest.raises(ConfigError) as info:
        DEFAULT_SETTINGS.replace(vertex_budjet=10)
    assert info.value.field == "vertex_budjet"


def test_load_config(tmp_path):
    good = tmp_path / "good.json"
    good.write_text('{"radius": 2}')
    assert load_config(good) == {"radius": 2}
    for text in ["[1, 2]", "{not json"]:
        bad = tmp_path / "bad.json"
        bad.write_text(text)
        with pytest.raises(ConfigError):
            load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_experiment_config_from_mapping():
    config = ExperimentConfig.from_mapping({"experiment": "njl", "n-values": "1,2", "m_values": [4, 8], "radius": "4", "n_max": None})
    assert config.n_values == (1, 2)
    assert config.m_values == (4, 8)
    assert config.radius == 4
    assert config.n_max is None
    assert config.as_dict()["n_values"] == [1, 2]
    assert config.box().radius == 4


@pytest.mark.parametrize("data, field", [
    ({"radius": 3}, "experiment"),
    ({"experiment": "nope"}, "experiment"),
    ({"experiment": "sample", "colour": 1}, "colour"),
    ({"experiment": "sample", "radius": 0}, "radius"),
    ({"experiment": "sample", "radius": 2.5}, "radius"),
    ({"experiment": "sample", "replicas": True}, "replicas"),
    ({"experiment": "sample", "ball": 5, "radius": 3}, "ball"),
    ({"experiment": "sample", "trunk": "box", "dimension": 3}, "dimension"),
    ({"experiment": "sample", "trunk": "spiral"}, "trunk"),
    ({"experiment": "cuttime", "dimension": 5}, "dimension"),
    ({"experiment": "kac", "chain": "ring:4"}, "chain"),
    ({"experiment": "kac", "chain": "cycle:x"}, "chain"),
    ({"experiment": "resample-test", "replicas": 1}, "replicas"),
    ({"experiment": "sample", "budget_vertices": 0}, "budget_vertices"),
])
def test_experiment_config_errors(data, field):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_mapping(data)
    assert info.value.field == field


def test_config_budget_becomes_settings():
    config = ExperimentConfig.from_mapping({"experiment": "sample", "budget_vertices": 50})
    assert config.settings().vertex_budget == 50
    assert ExperimentConfig(experiment="sample").settings() is DEFAULT_SETTINGS


def test_parse_chain():
    assert parse_chain("cycle:4").size == 4
    assert parse_chain("two-state:0.25").transition[0, 1] == pytest.approx(0.25)
    assert parse_chain("cycle").size == 3


def test_njl_grid_covers_log_envelope():
    config = ExperimentConfig(experiment="njl", n_values=(1, 2), m_values=(2,))
    core, full = njl_grid(config)
    assert core == [(1, 2), (2, 2)]
    assert full == [(1, 2), (2, 2), (3, 2), (4, 2)]


def test_kirchhoff_edges_are_interior_and_near_origin():
    spec = LatticeBoxSpec(2, 2)
    graph = build_lattice_box(spec)
    edges = kirchhoff_edges(spec, graph, 4)
    assert len(edges) == 4
    for e in edges:
        assert spec.wired_vertex not in graph.edges[e].tolist()
        assert spec.origin in graph.edges[e].tolist()


# ============================================================================
# Errors
# ============================================================================

@pytest.mark.parametrize("error", [
    ConfigError("radius", "must be >= 1"),
    ResourceError("vertex", 200, 100),
    StepBudgetExceeded(10),
    StatisticalFailure(5, "two-sided LERW"),
])
def test_errors_survive_pickling(error):
    back = pickle.loads(pickle.dumps(error))
    assert type(back) is type(error)
    assert str(back) == str(error)
    assert isinstance(back, ForestLabError)


def test_error_hierarchy():
    assert issubclass(StepBudgetExceeded, ResourceError)
    assert issubclass(DomainError, ValueError)
    assert issubclass(ContractViolation, ForestLabError)
    err = StepBudgetExceeded(10)
    assert (err.requested, err.limit) == (11, 10)


# ============================================================================
# RNG streams
# ============================================================================

def test_streams_are_reproducible_and_distinct():
    a = RngStream(1, 2).generator().random(5)
    assert np.array_equal(a, RngStream(1, 2).generator().random(5))
    assert not np.array_equal(a, RngStream(1, 3).generator().random(5))
    assert not np.array_equal(a, RngStream(1, 2).substream(0).generator().random(5))
    assert RngStream(1, 2).substream(0).substream(4).path == (0, 4)


def test_uniform_buffer_choice_range():
    buf = UniformBuffer(np.random.default_rng(0), block=16)
    picks = [buf.choice(3) for _ in range(3000)]
    assert set(picks) == {0, 1, 2}
    assert abs(picks.count(0) / 3000 - 1 / 3) < 0.05


# ============================================================================
# Statistics
# ============================================================================

def test_mean_ci():
    mean, half = mean_ci([1.0, 2.0, 3.0, 4.0])
    assert mean == pytest.approx(2.5)
    assert 0 < half < 3
    assert mean_ci([5.0]) == (5.0, float("inf"))
    p, h = proportion_ci(30, 100)
    assert p == pytest.approx(0.3)
    assert h == pytest.approx(1.959964 * np.sqrt(0.21 / 100), rel=1e-5)


def test_chi_square_helpers():
    assert chi_square_gof([250, 250, 250, 250], [1, 1, 1, 1]).p_value == pytest.approx(1.0)
    assert not chi_square_gof([400, 100, 250, 250], [1, 1, 1, 1]).passed
    # sparse cells pooled into one
    pooled = chi_square_gof([98, 1, 1], [0.98, 0.01, 0.01])
    assert pooled.dof == 1
    assert chi_square_two_sample(Counter(a=50, b=50), Counter(a=50, b=50)).passed
    assert not chi_square_two_sample(Counter(a=90, b=10), Counter(a=10, b=90)).passed


def test_total_variation_and_bootstrap():
    assert total_variation({"a": 1, "b": 1}, {"a": 1, "b": 1}) == 0.0
    assert total_variation({"a": 1}, {"b": 3}) == pytest.approx(1.0)
    same = tv_bootstrap(Counter(a=500, b=500), Counter(a=510, b=490), np.random.default_rng(0), resamples=500)
    assert same.consistent_with_zero
    different = tv_bootstrap(Counter(a=800, b=200), Counter(a=200, b=800), np.random.default_rng(0), resamples=500)
    assert not different.consistent_with_zero


def test_fit_envelope():
    C, resid = fit_envelope([1, 2, 3], [2, 4, 6])
    assert C == pytest.approx(2.0)
    assert np.allclose(resid, 0.0)
    assert fit_envelope([0, 0], [1, 2])[0] == 0.0


# ============================================================================
# Artifacts
# ============================================================================

def test_csv_and_json_artifacts(tmp_path):
    path = write_csv(tmp_path / "out" / "t.csv", ["a", "b"], [(1, 0.1), (2, 1 / 3)])
    assert path.read_text() == "a,b\n1,0.1\n2,0.3333333333333333\n"
    write_json(tmp_path / "t.json", {"b": np.int64(2), "a": np.array([1.5]), "s": {3, 1}})
    assert json.loads((tmp_path / "t.json").read_text()) == {"a": [1.5], "b": 2, "s": [1, 3]}
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out", "t.json"], "no temporary files left behind"
    with pytest.raises(TypeError):
        canonical_json({"x": object()})


def test_config_hash_and_manifest():
    config = {"radius": 3, "experiment": "sample"}
    assert config_hash(config) == config_hash({"experiment": "sample", "radius": 3})
    assert config_hash(config) != config_hash({**config, "radius": 4})
    manifest = build_manifest("sample", config, 7, 1.23456, ["b.csv", "a.csv"], censoring_rate=0.0)
    assert manifest["artifacts"] == ["a.csv", "b.csv"]
    assert manifest["seed"] == 7
    assert manifest["wall_time_seconds"] == 1.235
    assert manifest["config_sha256"] == config_hash(config)
    assert {"forestlab", "python", "numpy", "scipy", "networkx"} <= set(manifest["versions"])


if __name__ == "__main__":
    pytest.main(["-v", __file__])
