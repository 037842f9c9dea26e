import math

import numpy as np
import pytest

import qsense


def test_qubit_optimum():
    prior = qsense.Prior.gaussian(0.0, 1.0)
    t, mse = qsense.find_tmax(prior, qsense.Spectrum.qubit(), qsense.ProbeState.flat(2))
    assert t == pytest.approx(1.0, abs=1e-4)
    assert mse == pytest.approx(1 - math.exp(-1), abs=1e-6)


def test_personick_estimators_are_symmetric():
    prior = qsense.Prior.gaussian(0.0, 1.0)
    sol = qsense.personick(prior, [1, 1], [1.0, -1.0], 1.0)
    est = sorted(sol.estimators)
    assert est[0] == pytest.approx(-est[1])
    assert abs(est[1]) == pytest.approx(math.exp(-0.5))


def test_bounds_hold_for_random_states():
    rng = np.random.default_rng(3)
    prior = qsense.Prior.gaussian(0.0, 1.0)
    for n in range(2, 6):
        c = rng.normal(size=n) + 1j * rng.normal(size=n)
        spec = rng.uniform(-1, 1, size=n).tolist()
        t = float(rng.uniform(0, 6))
        m = qsense.optimal_mse(prior, c, spec, t)
        assert m >= qsense.entropic_bound(prior, n) - 1e-9
        assert m >= qsense.bcrb(prior, c, spec, t) - 1e-9


def test_sequential_and_swaps():
    a, coeff = qsense.sequential_optimum()
    assert a == pytest.approx(0.63, abs=0.01)
    assert coeff == pytest.approx(0.08, abs=0.005)
    plan = qsense.sequential_plan(1.0, a, 4)
    assert plan["variances"][3] == pytest.approx(plan["R"] ** 3)
    assert qsense.swap_spectrum(0.75) == pytest.approx([0.75, 0.25, -0.25, -0.75])


def test_lift_and_ion_schedule():
    sim, closed = qsense.lift_round_trip([0.5, -0.2, 0.1], [0.6, 0.64, 0.48], 2.0, 0.9)
    assert np.max(np.abs(sim - closed)) < 1e-12
    text = qsense.compile_protocol(qsense.Spectrum.equally_gapped(3), [0.3, 0.5j, 0.6], 1.5, 3, 0.4)
    assert qsense.verify_schedule(text) < 1e-9
    assert qsense.flip_pulse_count(1, 3) == 10
    assert qsense.flip_pulse_count(3, 3) == 5


def test_onthefly_trace():
    trace = qsense.onthefly(qsense.Prior.gaussian(0.0, 1.0), steps=2)
    mses = [s["mse"] for s in trace["steps"]]
    assert all(b <= a + 1e-12 for a, b in zip(mses, mses[1:]))
    for s in trace["steps"]:
        assert sum(s["weights"]) == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        qsense.Prior.gaussian(0.0, -1.0)
    with pytest.raises(NotImplementedError):
        qsense.bcrb(qsense.Prior.uniform(-1, 1), [1, 1], [1, -1], 1.0)
