"""Simulator kernel: integration, thresholds, refractory, carryover."""

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from spikelogic.sim import Network, NeuronParams, Synapse


def single_neuron(params: NeuronParams | None = None):
    net = Network()
    nid = net.add_neuron(params)
    net.record(nid)
    return net, nid


class TestConstruction:
    def test_ids_are_dense(self):
        net = Network()
        assert net.add_neuron() == 0
        assert net.add_source([1]) == 1
        assert net.add_neuron() == 2

    def test_bad_neuron_params(self):
        with pytest.raises(ValueError):
            NeuronParams(threshold_quanta=0)
        with pytest.raises(ValueError):
            NeuronParams(refractory_ms=-1)
        with pytest.raises(ValueError):
            NeuronParams(carryover_factor=Fraction(1))
        with pytest.raises(ValueError):
            NeuronParams(carryover_factor=Fraction(-1, 2))

    def test_bad_source_schedules(self):
        net = Network()
        with pytest.raises(ValueError):
            net.add_source([-1])
        with pytest.raises(ValueError):
            net.add_source([2, 2])
        with pytest.raises(ValueError):
            net.add_source([3, 1])

    def test_connect_validation(self):
        net = Network()
        a = net.add_neuron()
        src = net.add_source([0])
        with pytest.raises(ValueError):
            net.connect(99, a, 1, 1)
        with pytest.raises(ValueError):
            net.connect(a, 99, 1, 1)
        with pytest.raises(ValueError, match="sources cannot receive"):
            net.connect(a, src, 1, 1)
        with pytest.raises(ValueError, match="nonzero"):
            net.connect(src, a, 0, 1)
        with pytest.raises(ValueError, match="delay"):
            net.connect(src, a, 1, 0)

    def test_record_unknown_id(self):
        net = Network()
        with pytest.raises(ValueError):
            net.record(7)

    def test_run_needs_positive_duration(self):
        net = Network()
        with pytest.raises(ValueError):
            net.run(0)


class TestFiring:
    def test_spike_at_arrival(self):
        net, nid = single_neuron()
        net.connect(net.add_source([3]), nid, 1, 2)
        assert net.run(8).times(nid) == (5,)

    @given(st.integers(min_value=0, max_value=40))
    def test_single_quantum_fires_once(self, t):
        net, nid = single_neuron()
        net.connect(net.add_source([t]), nid, 1, 1)
        assert net.run(t + 3).times(nid) == (t + 1,)

    def test_threshold_oracle_exhaustive(self):
        # every subset of three weighted inputs against a plain sum
        weights = (1, 2, -1)
        for threshold in (1, 2, 3):
            for mask in range(8):
                net, nid = single_neuron(
                    NeuronParams(threshold_quanta=threshold))
                for k, w in enumerate(weights):
                    if (mask >> k) & 1:
                        net.connect(net.add_source([1]), nid, w, 1)
                total = sum(w for k, w in enumerate(weights)
                            if (mask >> k) & 1)
                want = (2,) if total >= threshold else ()
                assert net.run(4).times(nid) == want

    def test_exact_cancellation_does_not_fire(self):
        net, nid = single_neuron()
        src = net.add_source([1])
        net.connect(src, nid, 2, 1)
        net.connect(src, nid, -2, 1)
        assert net.run(4).times(nid) == ()

    def test_sustained_train_every_ms(self):
        net, nid = single_neuron()
        net.connect(net.add_source(range(0, 9)), nid, 1, 1)
        assert net.run(10).times(nid) == tuple(range(1, 10))

    def test_refractory_blocks_second_fire(self):
        net, nid = single_neuron(NeuronParams(refractory_ms=2))
        net.connect(net.add_source([1, 2, 3]), nid, 1, 1)
        # fires at 2, blocked at 3, fires again at 4
        assert net.run(6).times(nid) == (2, 4)

    def test_self_loop_holds_state(self):
        net, nid = single_neuron()
        net.connect(nid, nid, 1, 1)
        net.connect(net.add_source([2]), nid, 1, 1)
        assert net.run(8).times(nid) == (3, 4, 5, 6, 7)


class TestCarryover:
    def test_zero_carryover_forgets_subthreshold_charge(self):
        net, nid = single_neuron(NeuronParams(threshold_quanta=2))
        net.connect(net.add_source([1, 2]), nid, 1, 1)
        assert net.run(5).times(nid) == ()

    def test_half_carryover_accumulates(self):
        params = NeuronParams(threshold_quanta=3,
                              carryover_factor=Fraction(1, 2))
        net, nid = single_neuron(params)
        net.connect(net.add_source([1, 2]), nid, 2, 1)
        # charge at t=2: 2; at t=3: 2 + 1 = 3 -> fires
        assert net.run(6).times(nid) == (3,)

    def test_residual_resets_after_fire(self):
        params = NeuronParams(threshold_quanta=2,
                              carryover_factor=Fraction(1, 2))
        net, nid = single_neuron(params)
        net.connect(net.add_source([1, 2, 3]), nid, 2, 1)
        # fires every step; residual cleared each time, never compounds
        assert net.run(6).times(nid) == (2, 3, 4)

    def test_negative_residual_clamped(self):
        params = NeuronParams(carryover_factor=Fraction(1, 2))
        net, nid = single_neuron(params)
        net.connect(net.add_source([1]), nid, -5, 1)
        net.connect(net.add_source([2]), nid, 1, 1)
        # the inhibitory residue must not linger past the clamp
        assert net.run(5).times(nid) == (3,)


class TestDeterminism:
    def _demo_net(self, order):
        net = Network()
        a = net.add_neuron()
        b = net.add_neuron(NeuronParams(threshold_quanta=2))
        s1 = net.add_source([1, 3, 4])
        s2 = net.add_source([2, 3])
        edges = [(s1, a, 1, 1), (s2, a, -1, 1), (s1, b, 1, 1),
                 (s2, b, 1, 1), (a, b, 1, 2)]
        for k in order:
            net.connect(*edges[k])
        net.record(a, b)
        return net

    def test_repeated_runs_identical(self):
        net = self._demo_net(range(5))
        assert net.run(9) == net.run(9)

    def test_synapse_order_irrelevant(self):
        reference = self._demo_net(range(5)).run(9)
        for order in permutations(range(5)):
            assert self._demo_net(order).run(9) == reference

    @given(st.lists(st.integers(min_value=0, max_value=30),
                    min_size=1, max_size=12, unique=True))
    def test_no_spikes_outside_duration(self, times):
        duration = 12
        net, nid = single_neuron()
        net.connect(net.add_source(sorted(times)), nid, 1, 3)
        record = net.run(duration)
        assert all(0 <= t < duration for t in record.times(nid))
        assert record.duration_ms == duration


def test_synapse_is_plain_data():
    syn = Synapse(0, 1, -2, 3)
    assert (syn.source, syn.target, syn.weight_quanta, syn.delay_ms) == \
        (0, 1, -2, 3)
