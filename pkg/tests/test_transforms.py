import numpy as np
import pytest

from wigprop import (
    Field,
    Rep,
    RepresentationError,
    make_grid,
    lambdap_to_xp,
    lambdap_to_xtheta,
    lambdatheta_to_xtheta,
    worker_count,
    xp_to_xtheta,
    xtheta_to_lambdap,
    xtheta_to_lambdatheta,
    xtheta_to_xp,
)
from conftest import random_field_data
from oracles import dft_reference_axis

ROUNDTRIPS = [
    (Rep.XP, xp_to_xtheta, xtheta_to_xp),
    (Rep.XTHETA, xtheta_to_xp, xp_to_xtheta),
    (Rep.XTHETA, xtheta_to_lambdap, lambdap_to_xtheta),
    (Rep.LAMBDA_P, lambdap_to_xtheta, xtheta_to_lambdap),
    (Rep.XTHETA, xtheta_to_lambdatheta, lambdatheta_to_xtheta),
]


@pytest.mark.parametrize("shape", [(16, 8), (64, 32)])
@pytest.mark.parametrize("start_rep, fwd, back", ROUNDTRIPS)
def test_roundtrips_are_identities(rng, shape, start_rep, fwd, back):
    g = make_grid(shape[0], shape[1], 3.0, 5.0, 1.0)
    data = random_field_data(rng, g)
    f = Field(data.copy(), start_rep, g)
    out = back(fwd(f))
    assert out.rep is start_rep
    rel = np.max(np.abs(out.data - data)) / np.max(np.abs(data))
    assert rel < 1e-13


def test_square_composition_closes(rng):
    # XP -> XTHETA -> LAMBDA_P -> XP must be the identity
    g = make_grid(32, 16, 2.0, 4.0, 1.0)
    data = random_field_data(rng, g)
    f = Field(data.copy(), Rep.XP, g)
    out = lambdap_to_xp(xtheta_to_lambdap(xp_to_xtheta(f)))
    rel = np.max(np.abs(out.data - data)) / np.max(np.abs(data))
    assert rel < 1e-13


def test_forward_axis1_matches_explicit_dft(rng, small_grid):
    data = random_field_data(rng, small_grid)
    out = xp_to_xtheta(Field(data.copy(), Rep.XP, small_grid))
    ref = dft_reference_axis(data, axis=1)
    np.testing.assert_allclose(out.data, ref, atol=1e-12 * np.max(np.abs(ref)))


def test_inverse_axis1_matches_explicit_dft(rng, small_grid):
    data = random_field_data(rng, small_grid)
    out = xtheta_to_xp(Field(data.copy(), Rep.XTHETA, small_grid))
    ref = dft_reference_axis(data, axis=1, inverse=True)
    np.testing.assert_allclose(out.data, ref, atol=1e-12 * np.max(np.abs(ref)))


def test_forward_axis0_matches_explicit_dft(rng, small_grid):
    data = random_field_data(rng, small_grid)
    out = xtheta_to_lambdatheta(Field(data.copy(), Rep.XTHETA, small_grid))
    ref = dft_reference_axis(data, axis=0)
    np.testing.assert_allclose(out.data, ref, atol=1e-12 * np.max(np.abs(ref)))


def test_workhorse_map_matches_explicit_dft(rng, small_grid):
    data = random_field_data(rng, small_grid)
    out = xtheta_to_lambdap(Field(data.copy(), Rep.XTHETA, small_grid))
    ref = dft_reference_axis(dft_reference_axis(data, axis=0), axis=1, inverse=True)
    np.testing.assert_allclose(out.data, ref, atol=1e-12 * np.max(np.abs(ref)))
    # the two axis transforms commute
    ref_swapped = dft_reference_axis(
        dft_reference_axis(data, axis=1, inverse=True), axis=0
    )
    np.testing.assert_allclose(ref, ref_swapped, atol=1e-12 * np.max(np.abs(ref)))


def test_impulse_becomes_constant_row(small_grid):
    data = np.zeros(small_grid.shape, dtype=complex)
    data[3, 0] = 1.0  # impulse at p index 0
    out = xp_to_xtheta(Field(data, Rep.XP, small_grid))
    np.testing.assert_allclose(out.data[3], np.ones(small_grid.np), atol=1e-15)
    assert np.max(np.abs(np.delete(out.data, 3, axis=0))) == 0.0


def test_constant_row_becomes_impulse(small_grid):
    data = np.zeros(small_grid.shape, dtype=complex)
    data[5] = 1.0
    out = xtheta_to_xp(Field(data, Rep.XTHETA, small_grid))
    assert out.data[5, 0] == pytest.approx(1.0, abs=1e-15)
    assert np.max(np.abs(out.data[5, 1:])) < 1e-15


def test_gaussian_width_reciprocity():
    # |B(theta)| of a Gaussian in p with width sigma_p is Gaussian with width 1/sigma_p
    g = make_grid(4, 256, 1.0, 12.0, 1.0)
    sigma_p = 1.5
    data = np.tile(np.exp(-g.p**2 / (2 * sigma_p**2)), (g.nx, 1)).astype(complex)
    out = xp_to_xtheta(Field(data.copy(), Rep.XP, g))
    ref = dft_reference_axis(data, axis=1)
    np.testing.assert_allclose(out.data, ref, atol=1e-11 * np.max(np.abs(ref)))
    profile = np.abs(out.data[0])
    theta = g.theta
    width = np.sqrt(np.sum(profile * theta**2) / np.sum(profile))
    assert width == pytest.approx(1.0 / sigma_p, rel=1e-3)


def test_workhorse_map_is_linear(rng, small_grid):
    fa = random_field_data(rng, small_grid)
    fb = random_field_data(rng, small_grid)
    alpha, beta = 1.7 - 0.3j, -0.4 + 2.1j
    combined = xtheta_to_lambdap(
        Field(alpha * fa + beta * fb, Rep.XTHETA, small_grid)
    ).data
    separate = (
        alpha * xtheta_to_lambdap(Field(fa, Rep.XTHETA, small_grid)).data
        + beta * xtheta_to_lambdap(Field(fb, Rep.XTHETA, small_grid)).data
    )
    np.testing.assert_allclose(combined, separate, atol=1e-12 * np.max(np.abs(combined)))


def test_all_ones_through_workhorse_map(small_grid):
    # ones -> x-forward piles everything on lambda = 0 (weight nx), and the
    # theta-inverse of that constant row is an impulse at p index 0
    data = np.ones(small_grid.shape, dtype=complex)
    out = xtheta_to_lambdap(Field(data, Rep.XTHETA, small_grid))
    expected = np.zeros(small_grid.shape, dtype=complex)
    expected[0, 0] = small_grid.nx
    ref = dft_reference_axis(dft_reference_axis(data, axis=0), axis=1, inverse=True)
    np.testing.assert_allclose(out.data, expected, atol=1e-12 * small_grid.nx)
    np.testing.assert_allclose(out.data, ref, atol=1e-12 * small_grid.nx)


def test_norm_scaling_conventions(rng, small_grid):
    data = random_field_data(rng, small_grid)
    n2 = np.sum(np.abs(data) ** 2)
    fwd = xp_to_xtheta(Field(data.copy(), Rep.XP, small_grid))
    assert np.sum(np.abs(fwd.data) ** 2) == pytest.approx(small_grid.np * n2, rel=1e-12)
    back = xtheta_to_xp(fwd)
    assert np.sum(np.abs(back.data) ** 2) == pytest.approx(n2, rel=1e-12)


def test_hermitian_symmetry_of_real_input(rng):
    g = make_grid(16, 12, 3.0, 3.0, 1.0)
    data = rng.standard_normal(g.shape).astype(complex)
    b = xp_to_xtheta(Field(data, Rep.XP, g)).data
    scale = np.max(np.abs(b))
    for n in range(g.np):
        if n == g.np // 2:
            continue
        np.testing.assert_allclose(
            b[:, n], np.conj(b[:, (g.np - n) % g.np]), atol=1e-13 * scale
        )


@pytest.mark.parametrize(
    "op, wrong_rep",
    [
        (xp_to_xtheta, Rep.XTHETA),
        (xtheta_to_xp, Rep.XP),
        (xtheta_to_lambdap, Rep.LAMBDA_P),
        (lambdap_to_xtheta, Rep.XP),
        (xtheta_to_lambdatheta, Rep.LAMBDA_THETA),
        (lambdatheta_to_xtheta, Rep.XTHETA),
        (lambdap_to_xp, Rep.XP),
    ],
)
def test_wrong_representation_rejected(small_grid, op, wrong_rep):
    f = Field(np.zeros(small_grid.shape, complex), wrong_rep, small_grid)
    with pytest.raises(RepresentationError):
        op(f)


def test_field_shape_validated(small_grid):
    with pytest.raises(ValueError, match="shape"):
        Field(np.zeros((3, 3), complex), Rep.XP, small_grid)


def test_zero_field_stays_zero(small_grid):
    f = Field(np.zeros(small_grid.shape, complex), Rep.XP, small_grid)
    out = xp_to_xtheta(f)
    assert out.rep is Rep.XTHETA
    assert np.all(out.data == 0)


def test_worker_count_env_cap(monkeypatch):
    monkeypatch.setenv("PROG_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("WIGPROP_THREADS", "2")  # takes precedence
    assert worker_count() <= 2
    monkeypatch.setenv("WIGPROP_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv("WIGPROP_THREADS", "lots")
    with pytest.raises(ValueError):
        worker_count()
