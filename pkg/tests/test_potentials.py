import numpy as np
import pytest

from wigprop import (
    Drive,
    PotentialSpec,
    evaluate,
    free,
    gaussian_barrier,
    harmonic,
    is_time_dependent,
    morse,
    morse_unsquared,
    quartic,
)


def test_quartic_reference_value():
    assert evaluate(quartic(0.1), 2.0) == pytest.approx(1.6, rel=1e-15)


def test_free_is_zero_everywhere():
    x = np.linspace(-50, 50, 11)
    np.testing.assert_array_equal(evaluate(free(), x), np.zeros_like(x))


def test_harmonic_zero_at_origin():
    assert evaluate(harmonic(m=2.3, omega=0.7), 0.0) == 0.0


def test_harmonic_shift_difference_identity(rng):
    # U(x-s) - U(x+s) = -2 m omega^2 x s, the workhorse identity of the
    # potential phase factor for quadratic wells
    m, omega = 1.7, 0.9
    u = harmonic(m, omega)
    x = rng.uniform(-5, 5, size=50)
    s = rng.uniform(-3, 3, size=50)
    lhs = evaluate(u, x - s) - evaluate(u, x + s)
    rhs = -2.0 * m * omega**2 * x * s
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-13)


def test_morse_minimum_and_dissociation_limit():
    u = morse(D=20.0, a=0.16, x0=0.0)
    assert evaluate(u, 0.0) == 0.0
    val50 = evaluate(u, 50.0)
    assert val50 == pytest.approx(20.0 * (1 - np.exp(-0.16 * 50.0)) ** 2, rel=1e-14)
    assert abs(val50 - 20.0) < 0.02


def test_morse_offset_center():
    u = morse(D=5.0, a=0.5, x0=1.25)
    assert evaluate(u, 1.25) == 0.0


def test_morse_unsquared_formula():
    u = morse_unsquared(D=20.0, a=0.16, x0=0.0)
    x = np.array([-2.0, 0.0, 3.0])
    np.testing.assert_allclose(
        evaluate(u, x), 20.0 * (1 - np.exp(-0.16 * x)), rtol=1e-14
    )
    # unbounded below on the steep side, unlike the squared form
    assert evaluate(u, -40.0) < -1e3


def test_gaussian_barrier_defaults():
    u = gaussian_barrier()
    assert evaluate(u, 0.0) == pytest.approx(3.0)
    assert evaluate(u, 1.0) == pytest.approx(3.0 * np.exp(-0.5), rel=1e-14)


def test_drive_adds_dipole_term():
    u = quartic(0.1, drive=Drive(E0=0.25, omega=2.0, phi=0.3))
    t = 0.8
    field = 0.25 * np.sin(2.0 * t + 0.3)
    x = np.array([-1.0, 0.5, 4.0])
    np.testing.assert_allclose(
        evaluate(u, x, t), 0.1 * x**4 - x * field, rtol=1e-14
    )


def test_is_time_dependent():
    assert not is_time_dependent(quartic(0.1))
    assert is_time_dependent(quartic(0.1, drive=Drive(E0=0.1, omega=1.0)))
    # zero-amplitude drives are dropped at construction
    assert not is_time_dependent(quartic(0.1, drive=Drive(E0=0.0, omega=1.0)))


@pytest.mark.parametrize(
    "build",
    [
        lambda: harmonic(m=-1.0),
        lambda: harmonic(omega=0.0),
        lambda: morse(D=-5.0),
        lambda: morse(a=0.0),
        lambda: gaussian_barrier(sigma=-1.0),
        lambda: PotentialSpec("quartic", {"c": np.inf}),
        lambda: PotentialSpec("nonsense", {}),
        lambda: PotentialSpec("quartic", {"c": 0.1, "extra": 1.0}),
        lambda: PotentialSpec("harmonic", {"m": 1.0}),
    ],
)
def test_invalid_specs_rejected(build):
    with pytest.raises(ValueError):
        build()


def test_evaluate_preserves_shape():
    u = morse()
    x = np.zeros((7, 5))
    assert evaluate(u, x).shape == (7, 5)
    assert np.isscalar(evaluate(u, 1.0)) or evaluate(u, 1.0).shape == ()
