import json

import numpy as np
import pytest

from gbs_dks import InputError, charikar_greedy, double_factorial, induced_edge_count
from gbs_dks import harness
from gbs_dks.harness import (
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    derive_rng,
    emit_outputs,
    fig1_sweep,
    fig3_compare,
    load_config,
    load_fig3_json,
    resolve_graph,
)
from gbs_dks.sampler import clear_table_memo


def small_config(tmp_path, **overrides) -> ExperimentConfig:
    raw = {
        "experiment": "unit",
        "graph": {"erdos_renyi": {"n": 12, "p": 0.5, "seed": 3}},
        "k": 4,
        "out_dir": str(tmp_path / "out"),
        "seed": 11,
        "methods": ["uniform-rs", "gbs-rs", "uniform-sa", "gbs-sa"],
        "repetitions": 3,
        "checkpoints": [1, 2, 5, 10],
        "anneal": {"t0": 0.01, "steps": 10, "min_keep": 2},
    }
    raw.update(overrides)
    return config_from_dict(raw)


class TestDeriveRng:
    def test_reproducible_and_distinct(self):
        a = derive_rng(5, 0, 1).random(4)
        b = derive_rng(5, 0, 1).random(4)
        c = derive_rng(5, 0, 2).random(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestFig1Sweep:
    def test_row_count_and_flags(self):
        r = fig1_sweep(k=8, graphs_per_prob=4, seed=2)
        assert len(r.rows) == 40
        assert r.zero_hafnian_count == sum(1 for row in r.rows if row.hafnian == 0)
        for row in r.rows:
            assert (row.bound_edges is None) == (row.hafnian == 0)
            if row.bound_edges is not None:
                assert row.bound_edges <= row.edges

    def test_complete_rows_at_p_one(self):
        r = fig1_sweep(k=16, probs=(1.0,), graphs_per_prob=2, seed=0)
        for row in r.rows:
            assert row.edges == 120
            assert row.hafnian == double_factorial(15) == 2_027_025

    def test_reproducible(self):
        assert fig1_sweep(k=8, graphs_per_prob=3, seed=5).rows == \
            fig1_sweep(k=8, graphs_per_prob=3, seed=5).rows

    def test_odd_k_rejected(self):
        with pytest.raises(InputError):
            fig1_sweep(k=7, graphs_per_prob=1)


class TestConfig:
    def test_round_trip(self, tmp_path):
        cfg = small_config(tmp_path)
        again = config_from_dict(json.loads(json.dumps(config_to_dict(cfg))))
        assert again == cfg

    def test_unknown_keys_rejected(self, tmp_path):
        with pytest.raises(InputError, match="unknown config keys"):
            small_config(tmp_path, typo_key=1)

    def test_unknown_anneal_keys_rejected(self, tmp_path):
        with pytest.raises(InputError, match="unknown anneal keys"):
            small_config(tmp_path, anneal={"t0": 0.01, "cooling": "linear"})

    def test_missing_required_keys(self):
        with pytest.raises(InputError, match="missing config keys"):
            config_from_dict({"experiment": "x"})

    def test_bad_checkpoints(self, tmp_path):
        with pytest.raises(InputError):
            small_config(tmp_path, checkpoints=[5, 2])
        with pytest.raises(InputError):
            small_config(tmp_path, checkpoints=[0, 2])

    def test_bad_method(self, tmp_path):
        with pytest.raises(InputError):
            small_config(tmp_path, methods=["gbs-rs", "mystery"])

    def test_load_config_file(self, tmp_path):
        cfg = small_config(tmp_path)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(config_to_dict(cfg)))
        assert load_config(path) == cfg

    def test_load_config_rejects_bad_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        with pytest.raises(InputError):
            load_config(path)


class TestResolveGraph:
    def test_erdos_renyi_source(self):
        g, meta = resolve_graph({"erdos_renyi": {"n": 6, "p": 0.5, "seed": 1}})
        assert g.n == 6 and meta["source"]["erdos_renyi"]["n"] == 6

    def test_planted_source(self):
        g, meta = resolve_graph({"planted": {"seed": 2}})
        assert g.n == 30 and len(meta["planted_subset"]) == 10

    def test_file_source(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("3\n0 1\n")
        g, meta = resolve_graph({"file": str(p)})
        assert g.n == 3

    def test_bad_sources(self):
        with pytest.raises(InputError):
            resolve_graph({"nope": {}})
        with pytest.raises(InputError):
            resolve_graph({"planted": {"seed": 1, "oops": 2}})
        with pytest.raises(InputError):
            resolve_graph({})


class TestFig3Compare:
    def test_single_repetition_equals_direct_run(self, tmp_path):
        cfg = small_config(tmp_path, repetitions=1, checkpoints=[1],
                           methods=["uniform-rs"])
        result = fig3_compare(cfg)
        curve = result.curves["uniform-rs"]
        g, _ = resolve_graph(cfg.graph)
        from gbs_dks import uniform_explore

        rng = derive_rng(cfg.seed, 0, 0)
        first = uniform_explore(g, cfg.k, rng)
        assert curve.mean == [float(induced_edge_count(g, first))]
        assert curve.stddev == [0.0]

    def test_greedy_reference_matches_standalone(self, tmp_path):
        cfg = small_config(tmp_path, methods=["uniform-rs"], repetitions=2)
        result = fig3_compare(cfg)
        g, _ = resolve_graph(cfg.graph)
        assert result.references["greedy"] == induced_edge_count(g, charikar_greedy(g, cfg.k))
        assert result.curves["uniform-rs"].references == result.references

    def test_curve_means_non_decreasing(self, tmp_path):
        result = fig3_compare(small_config(tmp_path))
        for curve in result.curves.values():
            assert all(a <= b + 1e-12 for a, b in zip(curve.mean, curve.mean[1:]))
        clear_table_memo()

    def test_same_distribution_across_master_seeds(self, tmp_path):
        # two seed streams of the same method agree within two standard errors
        base = small_config(tmp_path, methods=["uniform-rs"], repetitions=80,
                            checkpoints=[1, 5, 20])
        r1 = fig3_compare(base)
        r2 = fig3_compare(config_from_dict({**json.loads(json.dumps(config_to_dict(base))), "seed": 77}))
        c1, c2 = r1.curves["uniform-rs"], r2.curves["uniform-rs"]
        for mu1, sd1, mu2, sd2 in zip(c1.mean, c1.stddev, c2.mean, c2.stddev):
            se = (sd1**2 / 80 + sd2**2 / 80) ** 0.5
            assert abs(mu1 - mu2) <= 2.5 * se + 1e-9

    def test_failure_dumps_partial_results(self, tmp_path, monkeypatch):
        cfg = small_config(tmp_path, methods=["uniform-rs", "uniform-sa"])

        def explode(*a, **kw):
            raise RuntimeError("boom")

        monkeypatch.setattr(harness, "simulated_annealing", explode)
        with pytest.raises(RuntimeError):
            fig3_compare(cfg)
        dump = tmp_path / "out" / "unit-partial.json"
        assert dump.exists()
        payload = json.loads(dump.read_text())
        assert payload["partial"] and "uniform-rs" in payload["curves"]


class TestEmitOutputs:
    def test_csv_row_count(self, tmp_path):
        cfg = small_config(tmp_path)
        result = fig3_compare(cfg)
        (path,) = emit_outputs(result, "csv", tmp_path / "out")
        lines = path.read_text().splitlines()
        assert lines[0] == "method,checkpoint,mean,stddev"
        assert len(lines) == 1 + len(cfg.methods) * len(cfg.checkpoints)
        clear_table_memo()

    def test_json_round_trip_reproduces_curves(self, tmp_path):
        result = fig3_compare(small_config(tmp_path))
        (path,) = emit_outputs(result, "json", tmp_path / "out")
        back = load_fig3_json(path)
        assert back["curves"] == result.curves
        assert back["graph_fingerprint"] == result.graph_fingerprint
        assert back["config"] == result.config
        clear_table_memo()

    def test_fig1_csv_and_json(self, tmp_path):
        r = fig1_sweep(k=8, graphs_per_prob=3, seed=1)
        (csv_path,) = emit_outputs(r, "csv", tmp_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "p,edges,hafnian,bound_edges"
        assert len(lines) == 1 + len(r.rows)
        (json_path,) = emit_outputs(r, "json", tmp_path)
        payload = json.loads(json_path.read_text())
        assert payload["zero_hafnian_rows"] == r.zero_hafnian_count
        assert len(payload["rows"]) == len(r.rows)

    def test_fig1_svg_reports_omitted_rows(self, tmp_path):
        r = fig1_sweep(k=8, graphs_per_prob=4, seed=2)
        assert r.zero_hafnian_count > 0
        (svg_path,) = emit_outputs(r, "svg", tmp_path)
        text = svg_path.read_text()
        assert f"omitted {r.zero_hafnian_count} zero-hafnian rows" in text

    def test_fig3_svg_written(self, tmp_path):
        result = fig3_compare(small_config(tmp_path, methods=["uniform-rs"], repetitions=2))
        (path,) = emit_outputs(result, "svg", tmp_path / "out")
        assert path.read_text().lstrip().startswith("<?xml")

    def test_unknown_format_rejected(self, tmp_path):
        r = fig1_sweep(k=8, graphs_per_prob=1, seed=1)
        with pytest.raises(InputError):
            emit_outputs(r, "xlsx", tmp_path)
        with pytest.raises(InputError):
            emit_outputs(object(), "csv", tmp_path)

    def test_byte_identical_reruns(self, tmp_path):
        cfg = small_config(tmp_path)
        a = emit_outputs(fig3_compare(cfg), "csv", tmp_path / "a")[0].read_bytes()
        clear_table_memo()
        b = emit_outputs(fig3_compare(cfg), "csv", tmp_path / "b")[0].read_bytes()
        assert a == b
        clear_table_memo()
