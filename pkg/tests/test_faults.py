import copy

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonsim.faults import (ALARM_KINDS, FaultKind, FaultRates, FaultRegister,
                           apply_fault, clear_fault, paired_alarm, sample_event)
from sonsim.radio import ClusterConfig, build_cluster


def make_cells():
    cells, _ = build_cluster(ClusterConfig(ues_per_cell=1), seed=0)
    return cells


class TestRates:
    def test_defaults(self):
        r = FaultRates()
        assert r.p[0] == pytest.approx(5 / 9)
        assert all(x == pytest.approx(1 / 9) for x in r.p[1:5])
        assert r.p[5:] == (0.0, 0.0, 0.0, 0.0)

    def test_five_values_padded(self):
        r = FaultRates((1.0, 0.0, 0.0, 0.0, 0.0))
        assert len(r.p) == 9

    def test_bad_sum_rejected(self):
        with pytest.raises(ValueError):
            FaultRates((0.5, 0.1, 0.1, 0.1, 0.1))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            FaultRates((1.2, -0.05, -0.05, -0.05, -0.05))


class TestSampleEvent:
    def test_all_normal(self):
        rates = FaultRates((1.0, 0, 0, 0, 0))
        reg = FaultRegister()
        rng = np.random.default_rng(0)
        assert all(sample_event(rates, reg, rng) == FaultKind.NORMAL
                   for _ in range(100))

    def test_inadmissible_clear_degrades_to_normal(self):
        # all mass on the azimuth-restored clear event, empty register
        rates = FaultRates((0, 0, 0, 0, 0, 1.0, 0, 0, 0))
        reg = FaultRegister()
        rng = np.random.default_rng(0)
        assert all(sample_event(rates, reg, rng) == FaultKind.NORMAL
                   for _ in range(100))

    def test_admissible_clear_passes_through(self):
        rates = FaultRates((0, 0, 0, 0, 0, 1.0, 0, 0, 0))
        reg = FaultRegister()
        reg.increment(FaultKind.AZIMUTH_DRIFT)
        rng = np.random.default_rng(0)
        assert sample_event(rates, reg, rng) == FaultKind.AZIMUTH_RESTORED

    def test_default_frequencies(self):
        rates = FaultRates()
        reg = FaultRegister()
        rng = np.random.default_rng(123)
        n = 100_000
        draws = np.array([int(sample_event(rates, reg, rng)) for _ in range(n)])
        for kind in range(1, 5):
            assert (draws == kind).mean() == pytest.approx(1 / 9, abs=0.01)
        assert (draws == 0).mean() == pytest.approx(5 / 9, abs=0.01)


class TestApplyClear:
    def test_feeder_fault(self):
        cells = make_cells()
        reg = FaultRegister()
        apply_fault(FaultKind.FEEDER_FAULT, cells, reg, np.random.default_rng(0))
        assert cells[0].tx_power_delta == -3.0
        assert reg.bits == (False, False, False, True)
        assert reg.active_count == 1

    def test_normal_is_noop(self):
        cells = make_cells()
        snapshot = copy.deepcopy(cells)
        reg = FaultRegister()
        apply_fault(FaultKind.NORMAL, cells, reg, np.random.default_rng(0))
        assert cells == snapshot
        assert reg.active_count == 0

    def test_clear_event_kind_rejected(self):
        cells = make_cells()
        with pytest.raises(ValueError):
            apply_fault(FaultKind.AZIMUTH_RESTORED, cells, FaultRegister(),
                        np.random.default_rng(0))

    def test_neighbor_down_twice_hits_two_cells(self):
        cells = make_cells()
        reg = FaultRegister()
        rng = np.random.default_rng(1)
        apply_fault(FaultKind.NEIGHBOR_DOWN, cells, reg, rng)
        apply_fault(FaultKind.NEIGHBOR_DOWN, cells, reg, rng)
        down = [c.cell_id for c in cells if not c.is_up]
        assert len(down) == 2
        assert 0 not in down  # managed cell never downed
        assert reg.count(FaultKind.NEIGHBOR_DOWN) == 2
        assert reg.active_count == 1  # one alarm type set

    def test_repeat_feeder_counts_without_compounding(self):
        cells = make_cells()
        reg = FaultRegister()
        rng = np.random.default_rng(1)
        apply_fault(FaultKind.FEEDER_FAULT, cells, reg, rng)
        apply_fault(FaultKind.FEEDER_FAULT, cells, reg, rng)
        assert cells[0].tx_power_delta == -3.0
        assert reg.count(FaultKind.FEEDER_FAULT) == 2

    def test_azimuth_drift_accumulates(self):
        cells = make_cells()
        reg = FaultRegister()
        rng = np.random.default_rng(1)
        apply_fault(FaultKind.AZIMUTH_DRIFT, cells, reg, rng)
        apply_fault(FaultKind.AZIMUTH_DRIFT, cells, reg, rng)
        assert cells[0].azimuth_offset == 60.0

    @pytest.mark.parametrize("kind", list(ALARM_KINDS))
    def test_roundtrip_restores_cells(self, kind):
        cells = make_cells()
        snapshot = copy.deepcopy(cells)
        reg = FaultRegister()
        apply_fault(kind, cells, reg, np.random.default_rng(3))
        assert cells != snapshot
        clear_fault(kind, cells, reg)
        assert cells == snapshot
        assert reg.active_count == 0
        assert reg.counts == (0, 0, 0, 0)

    def test_partial_clear_keeps_bit(self):
        cells = make_cells()
        reg = FaultRegister()
        rng = np.random.default_rng(2)
        apply_fault(FaultKind.NEIGHBOR_DOWN, cells, reg, rng)
        first_down = [c.cell_id for c in cells if not c.is_up][0]
        apply_fault(FaultKind.NEIGHBOR_DOWN, cells, reg, rng)
        clear_fault(FaultKind.NEIGHBOR_DOWN, cells, reg)
        assert reg.count(FaultKind.NEIGHBOR_DOWN) == 1
        assert reg.bits[FaultKind.NEIGHBOR_DOWN - 1] is True
        # oldest outage restored first
        assert cells[first_down].is_up

    def test_clear_on_empty_register_is_noop(self):
        cells = make_cells()
        snapshot = copy.deepcopy(cells)
        reg = FaultRegister()
        clear_fault(FaultKind.FEEDER_FAULT, cells, reg)
        assert cells == snapshot
        assert reg.active_count == 0


class TestPairing:
    def test_paired_alarm(self):
        assert paired_alarm(FaultKind.AZIMUTH_RESTORED) == FaultKind.AZIMUTH_DRIFT
        assert paired_alarm(FaultKind.FEEDER_RESTORED) == FaultKind.FEEDER_FAULT
        with pytest.raises(ValueError):
            paired_alarm(FaultKind.NORMAL)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.sampled_from(range(1, 5))),
                max_size=60))
def test_register_invariants_under_random_ops(ops):
    cells = make_cells()
    reg = FaultRegister()
    rng = np.random.default_rng(0)
    for is_apply, kind in ops:
        if is_apply:
            apply_fault(FaultKind(kind), cells, reg, rng)
        else:
            clear_fault(FaultKind(kind), cells, reg)
        assert all(c >= 0 for c in reg.counts)
        assert reg.active_count == sum(1 for c in reg.counts if c > 0)
        assert reg.active_count <= 4


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_sampler_never_emits_inadmissible_clears(seed):
    rates = FaultRates((0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1))
    cells = make_cells()
    reg = FaultRegister()
    rng = np.random.default_rng(seed)
    for _ in range(200):
        ev = sample_event(rates, reg, rng)
        if ev >= FaultKind.AZIMUTH_RESTORED:
            assert reg.is_active(paired_alarm(ev))
            clear_fault(paired_alarm(ev), cells, reg)
        elif ev != FaultKind.NORMAL:
            apply_fault(ev, cells, reg, rng)
