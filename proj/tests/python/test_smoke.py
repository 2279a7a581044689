import math

import numpy as np
import pytest

import gaborwf as gw


def test_sample_gaussian():
    g = gw.Grid.symmetric(4.0, 0.5)
    u = gw.sample("gaussian:0,1", g)
    assert u.dtype == np.complex128
    np.testing.assert_allclose(u, np.exp(-np.pi * g.points() ** 2), atol=1e-15)


def test_stft_of_gaussian_matches_closed_form():
    x = gw.Grid(-1.0, 0.5, 5)
    xi = gw.Grid(-1.0, 0.5, 5)
    V = gw.stft("gaussian:0,1", x, xi)
    X, XI = np.meshgrid(x.points(), xi.points(), indexing="ij")
    np.testing.assert_allclose(np.abs(V), np.exp(-np.pi * (X**2 + XI**2) / 2) / math.sqrt(2), rtol=1e-12)


def test_stft_sampled_and_analytic_agree():
    g = gw.Grid.symmetric(16.0, 1.0 / 64)
    u = gw.sample("gaussian:0.5,1.3", g)
    x = gw.Grid(-1.0, 0.5, 5)
    xi = gw.Grid(-1.0, 0.25, 9)
    a = gw.stft("gaussian:0.5,1.3", x, xi)
    b = gw.stft(u, x, xi, grid=g)
    np.testing.assert_allclose(b, a, atol=1e-9)


def test_coefficients_shape():
    c = gw.gabor_coefficients("delta:0", gw.Lattice(0.5, 0.5, 3, 2))
    assert c.shape == (7, 5)


def test_frame_bounds_and_dual():
    L = gw.Lattice()
    r = gw.frame_bounds(L)
    assert 0 < r["A"] <= r["B"]
    grid, dual, iters, res = gw.dual_window(L)
    assert dual.shape == (grid.count,)
    assert res < 1e-8


def test_wavefront_of_delta_and_chirp():
    e = gw.estimate_wavefront("delta:0")
    assert e.K == 72
    assert 18 in e.flagged and 54 in e.flagged
    assert e.classes[18].kind == gw.DecayKind.NONDECAYING
    ok, fp, missed = e.check_rays([math.pi / 2, 3 * math.pi / 2])
    assert ok and not fp and not missed

    c = gw.estimate_wavefront("chirp:1")
    ok, _, _ = c.check_rays([math.pi / 4, 5 * math.pi / 4])
    assert ok
    assert gw.estimate_wavefront("gaussian:0,1").flagged == []


def test_transport_of_delta_by_quarter_rotation():
    e = gw.estimate_wavefront("delta:0")
    moved = e.transport(gw.classical_flow("harmonic", math.pi / 2))
    assert set(moved.flagged) == set(gw.estimate_wavefront("planewave:0").flagged)


def test_propagation_and_flow():
    S = gw.classical_flow("free", 0.5)
    np.testing.assert_allclose(S, [[1, math.pi], [0, 1]], atol=1e-12)
    g = gw.Grid.symmetric(8.0, 1.0 / 32)
    u0 = gw.sample("gaussian:0,1", g)
    ut = gw.propagate("harmonic", g, u0, 0.7)
    assert np.linalg.norm(ut) == pytest.approx(np.linalg.norm(u0), rel=1e-9)
    assert gw.verify_propagation("delta:0", "free", 0.5)["pass"]


def test_errors_map_to_python_classes():
    with pytest.raises(gw.DomainError):
        gw.sample("chirp:0", gw.Grid.symmetric(2.0, 0.5))
    with pytest.raises(gw.NotAFrame):
        gw.frame_bounds(gw.Lattice(1.0, 1.0, 4, 4))
    with pytest.raises(gw.NearSingularTime):
        g = gw.Grid.symmetric(4.0, 0.25)
        gw.propagate("harmonic", g, gw.sample("gaussian:0,1", g), math.pi - 0.01)
    with pytest.raises(gw.Error):
        gw.propagate("wobble", gw.Grid.symmetric(2.0, 0.5), np.zeros(9), 1.0)
    assert issubclass(gw.InsufficientLattice, gw.Error)


def test_atom_round_trip():
    assert gw.normalize_atom(" CHIRP:2e-1 ") == "chirp:0.2"
