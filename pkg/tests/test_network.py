import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neurophot.laser import InputSignal, LifParams, YamadaParams, simulate_lif, simulate_yamada
from neurophot.network import (
    BankTemplate,
    CapacityError,
    ClipParams,
    NetworkSpec,
    RelayParams,
    add_export_node,
    build_network,
    pattern_recognition_circuit,
    simulate_network,
    wdm_weighted_sum,
    write_network_traces,
    write_spike_events,
)

LAMS = 1550.0 + 0.4 * np.arange(8)


def _times(result):
    return [list(s.times) for s in result.spikes]


def test_weighted_sum_examples():
    assert wdm_weighted_sum([0.3, 0.7], [0.0, 0.0]) == 0.0
    assert wdm_weighted_sum([0.3, 0.3], [1.0, -1.0]) == 0.0
    assert wdm_weighted_sum([1, 2, 1], [0.5, 0.25, -0.75]) == pytest.approx(0.25)


def test_weighted_sum_validation():
    with pytest.raises(ValueError):
        wdm_weighted_sum([1.0, 2.0], [0.5])
    with pytest.raises(ValueError):
        wdm_weighted_sum([-1.0], [0.5])
    with pytest.raises(ValueError):
        wdm_weighted_sum([1.0], [1.5])


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5)),
                min_size=1, max_size=12))
def test_weighted_sum_linear_in_weights(cols):
    x, w1, w2 = (np.array(c) for c in zip(*cols))
    total = wdm_weighted_sum(x, w1 + w2)
    parts = wdm_weighted_sum(x, w1) + wdm_weighted_sum(x, w2)
    assert total == pytest.approx(parts, abs=1e-12 * (1 + np.sum(x)))


def test_single_yamada_node_reduces_to_isolated_laser(restoring):
    inp = InputSignal.impulses([5, 150], [0.5, 0.8]) + InputSignal.function(
        lambda t: 0.001 * np.sin(t))
    ref = simulate_yamada(restoring, inp, dt=0.05, T=300)
    net = build_network(NetworkSpec([[0.0]], [restoring], [1550.0], [inp]), mode="ideal")
    res = simulate_network(net, dt=0.05, T=300)
    assert np.array_equal(ref.G, res.G[:, 0])
    assert np.array_equal(ref.Q, res.Q[:, 0])
    assert np.array_equal(ref.I, res.I[:, 0])
    assert np.array_equal(ref.spikes.times, res.spikes[0].times)


def test_single_lif_node_reduces_to_isolated_neuron():
    lif = LifParams(gamma_G=0.1, A=0.0, G_thresh=1, refractory=2)
    inp = InputSignal.impulses([5, 6, 20], [0.7, 0.5, 1.2]) + InputSignal.constant(0.02)
    ref = simulate_lif(lif, inp, dt=0.01, T=50)
    res = simulate_network(build_network(NetworkSpec([[0.0]], [lif], [1550.0], [inp]),
                                         mode="ideal"), dt=0.01, T=50)
    assert np.array_equal(ref.G, res.G[:, 0])
    assert np.array_equal(ref.spikes.times, res.spikes[0].times)


def _random_recurrent(restoring, kick, rng, n=5):
    W = rng.uniform(-1, 1, (n, n)) * (rng.random((n, n)) < 0.6)
    np.fill_diagonal(W, 0.0)
    inputs = [InputSignal.impulses([5.0 + 20 * j], [2 * kick]) if j % 2 == 0 else None
              for j in range(n)]
    return NetworkSpec(W, [restoring] * n, tuple(LAMS[:n]), inputs, drive_gain=0.01, delay=10.0)


def test_permutation_equivariance(restoring, kick_threshold, rng):
    spec = _random_recurrent(restoring, kick_threshold, rng)
    order = rng.permutation(spec.N)
    base = simulate_network(build_network(spec, mode="ideal"), T=300)
    perm = simulate_network(build_network(spec.permuted(order), mode="ideal"), T=300)
    assert sum(len(s) for s in base.spikes) > 0
    for k, j in enumerate(order):
        assert perm.spikes[k].times == pytest.approx(base.spikes[j].times, abs=1e-9)
        assert np.allclose(perm.P[:, k], base.P[:, j], atol=1e-12)


def test_zero_network_is_silent(restoring):
    spec = NetworkSpec(np.zeros((3, 3)), [restoring] * 3, tuple(LAMS[:3]))
    res = simulate_network(build_network(spec), dt=0.05, T=2000)
    assert all(len(s) == 0 for s in res.spikes)


def test_spec_validation(restoring):
    with pytest.raises(ValueError, match="duplicate wavelength"):
        NetworkSpec(np.zeros((2, 2)), [restoring] * 2, (1550.0, 1550.0))
    with pytest.raises(ValueError):
        NetworkSpec([[0, 1.2], [0, 0]], [restoring] * 2, tuple(LAMS[:2]))
    with pytest.raises(ValueError, match="export node"):
        NetworkSpec([[0, 0.5], [0, 0]], [restoring] * 2, tuple(LAMS[:2]), loop_id=(0, 1))
    with pytest.raises(TypeError):
        NetworkSpec([[0.0]], [object()], (1550.0,))
    # the same carrier may be reused on different loops
    NetworkSpec(np.zeros((2, 2)), [restoring] * 2, (1550.0, 1550.0), loop_id=(0, 1))


def test_capacity_is_enforced_per_loop(restoring):
    with pytest.raises(CapacityError, match="108"):
        build_network(NetworkSpec(np.zeros((150, 150)), [restoring] * 150,
                                  tuple(1500 + 0.1 * np.arange(150))),
                      finesse=368, spacing=3.41, mode="ideal")
    lams = np.r_[1500 + 0.1 * np.arange(80), 1500 + 0.1 * np.arange(80)]
    net = build_network(NetworkSpec(np.zeros((160, 160)), [restoring] * 160, tuple(lams),
                                    loop_id=[0] * 80 + [1] * 80),
                        finesse=368, spacing=3.41, mode="ideal")
    assert net.capacity == 108


def test_export_into_full_loop_is_rejected(restoring):
    spec = NetworkSpec(np.zeros((3, 3)), [restoring] * 3, tuple(LAMS[:3]), loop_id=(0, 1, 1))
    net = build_network(spec, finesse=2 * 3.41, mode="ideal")
    assert net.capacity == 2
    with pytest.raises(CapacityError):
        add_export_node(net, 0, 1, 1551.0, {0: 1.0})


def test_unit_export_relays_source_one_step_late(restoring, kick_threshold):
    spec = NetworkSpec(np.zeros((2, 2)), [restoring] * 2, (1550.0, 1550.4),
                       [InputSignal.impulses([5], [2 * kick_threshold]), None],
                       loop_id=(0, 1), drive_gain=0.01)
    net = add_export_node(build_network(spec, mode="ideal"), 0, 1, 1551.0, {0: 1.0}, {1: 1.0})
    res = simulate_network(net, dt=0.05, T=100)
    assert res.kinds[2] == "relay"
    assert np.array_equal(res.P[1:, 2], res.P[:-1, 0])
    assert len(res.spikes[0]) == 1 and len(res.spikes[1]) == 1


def test_two_loops_match_single_loop(restoring, kick_threshold):
    seed = [InputSignal.impulses([5], [2 * kick_threshold])] + [None] * 3
    chain = np.zeros((4, 4))
    chain[1, 0] = chain[2, 1] = chain[3, 2] = 1.0
    single = NetworkSpec(chain, [restoring] * 4, tuple(LAMS[:4]), seed, drive_gain=0.01)
    split_W = chain.copy()
    split_W[2, 1] = 0.0
    split = NetworkSpec(split_W, [restoring] * 4, (1550.0, 1550.4, 1550.0, 1550.4), seed,
                        loop_id=(0, 0, 1, 1), drive_gain=0.01)
    net = add_export_node(build_network(split, mode="ideal"), 0, 1, 1551.0, {1: 1.0}, {2: 1.0})
    a = simulate_network(build_network(single, mode="ideal"), dt=0.05, T=300)
    b = simulate_network(net, dt=0.05, T=300)
    for j in range(4):
        assert len(a.spikes[j]) == len(b.spikes[j]) == 1
        assert b.spikes[j].times[0] - a.spikes[j].times[0] == pytest.approx(0.0 if j < 2 else 0.05,
                                                                         abs=0.05 + 1e-9)


def test_feedforward_chain_latency_is_cumulative(restoring, kick_threshold):
    W = np.zeros((3, 3))
    W[1, 0] = W[2, 1] = 1.0
    spec = NetworkSpec(W, [restoring] * 3, tuple(LAMS[:3]),
                       [InputSignal.impulses([5], [2 * kick_threshold]), None, None],
                       drive_gain=0.01, delay=5.0)
    res = simulate_network(build_network(spec, mode="ideal"), dt=0.05, T=300)
    t = [s.times for s in res.spikes]
    assert [len(x) for x in t] == [1, 1, 1]
    hop1, hop2 = t[1][0] - t[0][0], t[2][0] - t[1][0]
    assert hop1 > 5.0 and hop2 > 5.0
    # every hop costs the delay plus build-up; the kicked first node fires a
    # slightly different pulse than the optically driven ones
    assert t[2][0] - t[0][0] == pytest.approx(2 * hop1, abs=1.0)
    assert hop2 == pytest.approx(hop1, abs=1.0)


def test_pattern_circuit_recognises_its_intervals():
    def output(times):
        spec = pattern_recognition_circuit([10.0, 15.0], input_times=times)
        res = simulate_network(build_network(spec, mode="ideal"), dt=0.05,
                               T=(times[-1] if times else 0) + 60)
        return len(res.spikes[-1])

    assert output([5, 15, 30]) == 1
    assert output([5, 35, 50]) == 0
    assert output([5, 15, 45]) == 0
    assert output([]) == 0


def test_pattern_circuit_in_physics_mode():
    spec = pattern_recognition_circuit([10.0, 15.0], input_times=[5, 15, 30])
    net = build_network(spec)
    assert np.max(np.abs(net.weights - spec.weight_matrix)) < 0.02
    assert len(simulate_network(net, dt=0.05, T=100).spikes[-1]) == 1


def test_pattern_circuit_validation():
    with pytest.raises(ValueError):
        pattern_recognition_circuit([])
    with pytest.raises(ValueError):
        pattern_recognition_circuit([10.0, -1.0])
    with pytest.raises(ValueError, match="refractory"):
        pattern_recognition_circuit([10.0, 2.0], refractory=3.0)


def test_clip_node_saturates(restoring):
    clip = ClipParams(lower=-1.0, upper=1.0, x0=0.0)
    spec = NetworkSpec([[0.0]], [clip], (1550.0,), [InputSignal.constant(5.0)])
    res = simulate_network(build_network(spec, mode="ideal"), dt=1.0, T=5)
    assert np.all(res.G[1:, 0] == 1.0)
    assert np.all(res.P[1:, 0] == 2.0)
    assert isinstance(RelayParams(), RelayParams)


def test_physics_weights_track_targets(restoring):
    W = np.array([[0, 0.7, -0.3], [0.2, 0, 0.9], [-0.8, 0.5, 0]])
    net = build_network(NetworkSpec(W, [restoring] * 3, tuple(LAMS[:3])),
                        BankTemplate(dac_bits=None))
    assert np.max(np.abs(net.weights - W)) < 1e-6
    errors = [np.max(np.abs(build_network(NetworkSpec(W, [restoring] * 3, tuple(LAMS[:3])),
                                          BankTemplate(dac_bits=b)).weights - W))
              for b in (6, 12)]
    assert errors[0] > errors[1] > 0


def test_writers(tmp_path, restoring, kick_threshold):
    spec = NetworkSpec(np.zeros((2, 2)), [restoring] * 2, tuple(LAMS[:2]),
                       [InputSignal.impulses([5], [2 * kick_threshold]), None])
    res = simulate_network(build_network(spec, mode="ideal"), T=60)
    write_network_traces(tmp_path / "traces.csv", res)
    write_spike_events(tmp_path / "spikes.csv", res)
    lines = (tmp_path / "traces.csv").read_text().splitlines()
    assert lines[0] == "t,P0,G0,Q0,I0,P1,G1,Q1,I1"
    assert len(lines) == len(res.t) + 1
    events = (tmp_path / "spikes.csv").read_text().splitlines()
    assert events[0] == "node,t_spike" and len(events) == 2
    assert float(events[1].split(",")[1]) == res.spikes[0].times[0]
