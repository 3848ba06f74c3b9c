import math
from fractions import Fraction

import numpy as np
import pytest

from subchain.errors import DivergedError, UnstableError
from subchain.model import ChainConfig, SfcSpec, VnfSpec, reliability
from subchain.queueing import sfc_response
from subchain.sim.availability import estimate_availability
from subchain.sim.engine import SimConfig, run_replication, run_simulation
from subchain.sim.rng import RngStream, exponential_from_uniform, replication_seed, rng_exponential
from subchain.sim.topology import build_topology

from oracles import enumerate_availability


class ForcedUniform:
    def __init__(self, u):
        self.u = u

    def uniform(self):
        return self.u


class TestRng:
    def test_inverse_transform_identity(self):
        assert rng_exponential(1.0, ForcedUniform(math.exp(-1))) == pytest.approx(1.0, rel=1e-15)
        assert exponential_from_uniform(1.0, 5.0) == 0.0

    def test_sample_mean(self):
        stream = RngStream(7)
        draws = [rng_exponential(200.0, stream) for _ in range(10**6)]
        assert sum(draws) / len(draws) == pytest.approx(0.005, rel=0.01)

    def test_uniforms_in_half_open_unit_interval(self):
        stream = RngStream(3)
        us = [stream.uniform() for _ in range(50_000)]
        assert all(0.0 < u <= 1.0 for u in us)

    def test_same_seed_same_sequence(self):
        a, b = RngStream(42), RngStream(42)
        assert [a.uniform() for _ in range(20_000)] == [b.uniform() for _ in range(20_000)]
        assert RngStream(42).uniform() != RngStream(43).uniform()

    def test_replication_streams_depend_only_on_seed_and_index(self):
        first = RngStream(replication_seed(9, 3)).uniform()
        assert RngStream(replication_seed(9, 3)).uniform() == first
        assert RngStream(replication_seed(9, 4)).uniform() != first

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            rng_exponential(0.0, RngStream(1))


class TestTopology:
    def test_sc(self, table1):
        topo = build_topology(table1, ChainConfig.sc())
        assert len(topo.stations) == 4
        assert all(st.servers == 1 and st.service_rate == 200 for st in topo.stations)
        assert topo.entry_probs == (1.0,)

    def test_subchains(self, table1):
        topo = build_topology(table1, ChainConfig.subchain_mm1(3))
        assert len(topo.stations) == 12 and topo.n_branches == 3
        assert topo.entry_probs == pytest.approx((1 / 3,) * 3)
        for b in range(3):
            path = topo.path(b)
            assert [topo.stations[i].stage for i in path] == [0, 1, 2, 3]
            assert all(topo.stations[i].service_rate == pytest.approx(200 / 3) for i in path)

    def test_shared_scheduler(self, table1):
        topo = build_topology(table1, ChainConfig.mmm(3))
        assert len(topo.stations) == 4
        assert all(st.servers == 3 and st.service_rate == pytest.approx(200 / 3) for st in topo.stations)

    def test_backups_carry_no_traffic(self, table1):
        assert build_topology(table1, ChainConfig.scb(2)) == build_topology(table1, ChainConfig.sc())

    def test_every_path_visits_every_stage(self):
        sfc = SfcSpec(tuple(VnfSpec(m, 0.9) for m in (150, 300, 500)), 100.0, 1.0)
        for cfg in (ChainConfig.sc(), ChainConfig.subchain_mm1(4), ChainConfig.mmm(5)):
            topo = build_topology(sfc, cfg)
            assert math.fsum(topo.entry_probs) == pytest.approx(1.0)
            for b in range(topo.n_branches):
                assert [topo.stations[i].stage for i in topo.path(b)] == [0, 1, 2]


def small(table1, cfg, **kw):
    kw.setdefault("warmup_departures", 2000)
    kw.setdefault("measured_departures", 20_000)
    kw.setdefault("replications", 3)
    kw.setdefault("seed", 11)
    return SimConfig(build_topology(table1, cfg), table1.arrival_rate, **kw)


class TestEngine:
    def test_refuses_tiny_runs(self, table1):
        with pytest.raises(ValueError, match="measured_departures"):
            small(table1, ChainConfig.sc(), measured_departures=999)

    def test_unstable_detected_before_running(self):
        sfc = SfcSpec((VnfSpec(200, 0.9), VnfSpec(100, 0.9)), 100.0, 1.0)
        with pytest.raises(UnstableError):
            run_simulation(SimConfig(build_topology(sfc, ChainConfig.mmm(2)), 100.0))

    def test_diverged(self, table1):
        with pytest.raises(DivergedError):
            run_simulation(small(table1, ChainConfig.sc(), queue_bound=3))

    def test_bit_reproducible(self, table1):
        cfg = small(table1, ChainConfig.subchain_mm1(2))
        a, b = run_simulation(cfg), run_simulation(cfg)
        assert a.per_replication_means == b.per_replication_means
        assert a.mean_response == b.mean_response and a.ci95_halfwidth == b.ci95_halfwidth

    def test_parallel_replications_match_sequential(self, table1):
        cfg = small(table1, ChainConfig.mmm(3), replications=2, measured_departures=5000)
        assert run_simulation(cfg, workers=2).per_replication_means == run_simulation(cfg).per_replication_means

    def test_replication_k_independent_of_count(self, table1):
        three = run_simulation(small(table1, ChainConfig.sc(), replications=3))
        two = run_simulation(small(table1, ChainConfig.sc(), replications=2))
        assert three.per_replication_means[:2] == two.per_replication_means

    def test_result_shape(self, table1):
        res = run_simulation(small(table1, ChainConfig.sc()))
        assert len(res.per_replication_means) == 3
        assert res.departures_counted == 60_000
        assert res.ci95_halfwidth >= 0 and res.seed == 11

    def test_single_replication_has_no_finite_ci(self, table1):
        res = run_simulation(small(table1, ChainConfig.sc(), replications=1))
        assert res.ci95_halfwidth == math.inf

    def test_single_station_mm1(self):
        sfc = SfcSpec((VnfSpec(200, 0.9),), 100.0, 1.0)
        res = run_simulation(small(sfc, ChainConfig.sc(), measured_departures=50_000))
        assert res.mean_response == pytest.approx(0.01, rel=0.03)

    @pytest.mark.parametrize("label", ["SC", "MM1(2)", "MMm(3)"])
    def test_close_to_closed_form(self, table1, label):
        cfg = ChainConfig.parse(label)
        res = run_simulation(small(table1, cfg))
        assert res.mean_response == pytest.approx(sfc_response(table1, cfg), rel=0.04)

    @pytest.mark.parametrize("label", ["SC", "MM1(3)", "MMm(6)"])
    def test_littles_law(self, table1, label):
        res = run_simulation(small(table1, ChainConfig.parse(label)))
        assert res.mean_in_system == pytest.approx(table1.arrival_rate * res.mean_response, rel=0.02)

    def test_split_is_binomial(self, table1):
        l = 4
        res = run_simulation(small(table1, ChainConfig.subchain_mm1(l)))
        total = sum(res.route_counts)
        sigma = math.sqrt(total * (1 / l) * (1 - 1 / l))
        for c in res.route_counts:
            assert abs(c - total / l) <= 3 * sigma

    def test_warmup_changes_measurement_window(self, table1):
        topo = build_topology(table1, ChainConfig.sc())
        a = run_replication(topo, 100.0, 0, 5000, replication_seed(1, 0))
        b = run_replication(topo, 100.0, 1000, 5000, replication_seed(1, 0))
        assert a.mean_response != b.mean_response
        assert a.departures == b.departures == 5000


class TestAvailability:
    def test_perfect_vnfs(self):
        sfc = SfcSpec.homogeneous(3, 200, 1.0, 100, 1.0)
        for label in ("SC", "SCB(2)", "MM1(3)", "MMm(4)"):
            est = estimate_availability(sfc, ChainConfig.parse(label), 10_000, 1)
            assert est.estimate == 1.0 and est.ci95_halfwidth == 0.0

    def test_refuses_few_trials(self, table1):
        with pytest.raises(ValueError):
            estimate_availability(table1, ChainConfig.sc(), 9_999, 1)

    def test_deterministic(self, table1):
        a = estimate_availability(table1, ChainConfig.subchain_mm1(3), 50_000, 5)
        b = estimate_availability(table1, ChainConfig.subchain_mm1(3), 50_000, 5)
        assert a == b

    @pytest.mark.parametrize("label", ["SC", "SCB(1)", "MM1(2)", "MM1(3)", "MMm(2)"])
    def test_against_state_enumeration(self, label):
        ps = [Fraction(4, 5), Fraction(1, 2), Fraction(19, 20)]
        cfg = ChainConfig.parse(label)
        kind = {"SC": "SC", "SCB": "SCB", "MM1": "MM1", "MMm": "MMm"}[cfg.kind.value]
        exact = float(enumerate_availability(ps, kind, cfg.count))
        sfc = SfcSpec(tuple(VnfSpec(200, float(p)) for p in ps), 100.0, 1.0)
        est = estimate_availability(sfc, cfg, 200_000, 99)
        assert abs(est.estimate - exact) <= 3 * est.sigma(exact)

    def test_table1_plain_chain(self, table1):
        est = estimate_availability(table1, ChainConfig.sc(), 10**6, 2024)
        sigma = math.sqrt(0.6561 * 0.3439 / 10**6)
        assert sigma == pytest.approx(4.75e-4, rel=0.01)
        assert abs(est.estimate - 0.6561) <= 3 * sigma

    def test_ci_covers_closed_form_usually(self):
        rng = np.random.default_rng(5)
        covered = 0
        for i in range(40):
            sfc = SfcSpec(tuple(VnfSpec(200, float(rng.uniform(0.5, 0.99))) for _ in range(3)), 100.0, 1.0)
            cfg = ChainConfig.mmm(2)
            est = estimate_availability(sfc, cfg, 20_000, i)
            covered += abs(est.estimate - reliability(sfc, cfg)) <= est.ci95_halfwidth
        # 95% intervals: 40 draws, fewer than 33 covered has probability < 1e-3
        assert covered >= 33
