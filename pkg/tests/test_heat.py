"""Heat kernel: closed forms, oracle equivalence, conservation, and the lift."""

import math

import numpy as np
import pytest

from fuhp.field import field_context
from fuhp.heat import (
    build_group_graph,
    fourier_coefficient_check,
    heat_kernel_oracle,
    heat_kernel_spectral,
    initial_condition_check,
    method_of_images_check,
    mobius_action,
)
from fuhp.spherical import radial_eigenbasis
from fuhp.uhp import act, base_point, build_graph, laplacian


@pytest.fixture(scope="module")
def q3():
    ctx = field_context(3, delta=2)
    graph = build_graph(ctx, 1)
    return ctx, graph, radial_eigenbasis(graph)


def closed_form_q3(t):
    e4, e6 = math.exp(-4 * t), math.exp(-6 * t)
    return {0: 1 + 3 * e4 + 2 * e6, 1: 1 - e6, 2: 1 - 3 * e4 + 2 * e6}


def test_q3_closed_form(q3):
    ctx, graph, table = q3
    for t in (0.0, 0.5, 1.0, 5.0):
        kern = heat_kernel_spectral(table, t)
        expect = closed_form_q3(t)
        for r in (0, 1, 2):
            assert kern.by_radius[r] == pytest.approx(expect[r], abs=1e-12)


def test_spectral_t0_is_delta(q3):
    _, _, table = q3
    kern = heat_kernel_spectral(table, 0.0)
    assert kern.by_radius[0] == pytest.approx(6, abs=1e-12)
    assert kern.by_radius[1] == pytest.approx(0, abs=1e-12)
    assert kern.by_radius[2] == pytest.approx(0, abs=1e-12)


def test_half_value_time(q3):
    _, _, table = q3
    t = math.log(2) / 6
    assert heat_kernel_spectral(table, t).by_radius[1] == pytest.approx(0.5, abs=1e-12)


def test_negative_time_rejected(q3):
    ctx, graph, table = q3
    with pytest.raises(ValueError):
        heat_kernel_spectral(table, -0.1)
    with pytest.raises(ValueError):
        heat_kernel_oracle(graph, -1.0)


def test_oracle_matches_spectral(q3):
    ctx, graph, table = q3
    for t in (0.01, 1.0):
        spec = heat_kernel_spectral(table, t)
        orac = heat_kernel_oracle(graph, t)
        for r in (0, 1, 2):
            assert spec.by_radius[r] == pytest.approx(orac.by_radius[r], abs=1e-10)


def test_oracle_t0_and_longtime(q3):
    ctx, graph, _ = q3
    k0 = heat_kernel_oracle(graph, 0.0)
    base_i = graph.index[base_point()]
    expect = np.zeros(graph.n)
    expect[base_i] = 6.0
    np.testing.assert_allclose(k0.by_vertex, expect, atol=1e-10)
    k_inf = heat_kernel_oracle(graph, 50.0)
    np.testing.assert_allclose(k_inf.by_vertex, 1.0, atol=1e-10)


def test_mass_conservation_and_positivity():
    for q, r_s in ((3, 1), (5, 2), (7, 1)):
        ctx = field_context(q)
        graph = build_graph(ctx, r_s)
        table = radial_eigenbasis(graph)
        for t in (0.0, 0.1, 1.0, 10.0):
            kern = heat_kernel_oracle(graph, t)
            assert kern.by_vertex.mean() == pytest.approx(1.0, abs=1e-10)
            spec = heat_kernel_spectral(table, t)
            assert min(spec.by_radius.values()) >= -1e-12


def test_initial_condition_constant_function(q3):
    ctx, graph, _ = q3
    res = initial_condition_check(graph, np.ones(graph.n), [1.0, 0.1, 1e-6])
    assert max(res) <= 1e-12  # mass conservation makes the residual vanish


def test_initial_condition_indicator(q3):
    ctx, graph, _ = q3
    f = np.zeros(graph.n)
    f[graph.index[base_point()]] = 1.0
    t_grid = [1e-2, 1e-4, 1e-6]
    res = initial_condition_check(graph, f, t_grid)
    # closed form: residual = |(E(t;0) - 6)/6| = |3(e^{-4t}-1) + 2(e^{-6t}-1)|/6
    for t, got in zip(t_grid, res):
        expect = abs(3 * (math.exp(-4 * t) - 1) + 2 * (math.exp(-6 * t) - 1)) / 6
        assert got == pytest.approx(expect, abs=1e-12)
    assert res[2] <= 3e-5
    assert res[2] <= res[1] <= res[0]


def test_initial_condition_random_bounded():
    rng = np.random.default_rng(7)
    ctx = field_context(5)
    graph = build_graph(ctx, 1)
    for _ in range(5):
        f = rng.random(graph.n)
        res = initial_condition_check(graph, f, [1e-6])
        assert res[0] <= 2 * 6 * 1e-6 * f.max() + 1e-10


def test_fourier_coefficients_q3(q3):
    _, _, table = q3
    rep0 = fourier_coefficient_check(table, 0.0)
    np.testing.assert_allclose(rep0.coefficients, table.degrees, atol=1e-12)
    rep1 = fourier_coefficient_check(table, 1.0)
    expect = sorted([1.0, 3 * math.exp(-4), 2 * math.exp(-6)], reverse=True)
    np.testing.assert_allclose(sorted(rep1.coefficients, reverse=True), expect, atol=1e-12)
    assert rep1.max_deviation <= 1e-9


def test_fourier_coefficients_q5():
    ctx = field_context(5)
    table = radial_eigenbasis(build_graph(ctx, 1))
    assert fourier_coefficient_check(table, 0.5).max_deviation <= 1e-9


def test_semigroup_property():
    for q in (3, 5):
        ctx = field_context(q)
        lap = laplacian(build_graph(ctx, 1))
        w, v = np.linalg.eigh(lap)
        expm = lambda s: v @ (np.exp(-w * s)[:, None] * v.T)
        np.testing.assert_allclose(expm(1.0), expm(0.3) @ expm(0.7), atol=1e-10)


def test_left_invariance_q3(q3):
    ctx, graph, _ = q3
    w, v = np.linalg.eigh(laplacian(graph))
    kernel = graph.n * (v @ (np.exp(-w * 1.0)[:, None] * v.T))
    for p in graph.points:  # the affine group acting on itself from the left
        perm = np.array([graph.index[act(ctx, p, z)] for z in graph.points])
        np.testing.assert_allclose(kernel[np.ix_(perm, perm)], kernel, atol=1e-10)


# -- the lift to the full matrix group ---------------------------------------


def test_group_graph_counts_q3():
    ctx = field_context(3, delta=2)
    gg = build_group_graph(ctx, 1)
    assert gg.n == 48
    assert len(gg.k_members) == 8
    assert int(gg.adjacency[0].sum()) == 32  # (q+1) * (q^2-1)
    # every coset has exactly |K| members
    counts = np.bincount(gg.coset_of, minlength=6)
    assert np.all(counts == 8)


def test_mobius_action_stabilizer():
    ctx = field_context(5)
    base = base_point()
    for a in range(5):
        for b in range(5):
            if (a, b) == (0, 0):
                continue
            k = (a, ctx.delta * b % 5, b, a)
            assert mobius_action(ctx, k, base) == base


def test_mobius_action_preserves_distance():
    # the fractional-linear action is an isometry of the pseudo-distance,
    # which is what makes the lifted generating set inversion-closed
    from fuhp.uhp import distance, enumerate_points

    ctx = field_context(5)
    pts = enumerate_points(ctx)
    rng = np.random.default_rng(3)
    mats = []
    while len(mats) < 8:
        a, b, c, d = rng.integers(0, 5, size=4)
        if (a * d - b * c) % 5:
            mats.append((int(a), int(b), int(c), int(d)))
    for m in mats:
        for z in pts[::3]:
            for w in pts[::4]:
                assert distance(ctx, z, w) == distance(
                    ctx, mobius_action(ctx, m, z), mobius_action(ctx, m, w)
                )


def test_oracle_with_nondefault_base():
    # vertex-transitivity: the kernel around any base is the translate of
    # the kernel around sqrt(delta), radius profile included
    from fuhp.uhp import Point

    ctx = field_context(5)
    graph = build_graph(ctx, 1)
    default = heat_kernel_oracle(graph, 0.7)
    other = heat_kernel_oracle(graph, 0.7, base=Point(3, 2))
    for r in default.by_radius:
        assert other.by_radius[r] == pytest.approx(default.by_radius[r], abs=1e-10)
    assert other.by_vertex.mean() == pytest.approx(1.0, abs=1e-12)


def test_method_of_images_q3():
    ctx = field_context(3, delta=2)
    report = method_of_images_check(ctx, 1, [0.0, 0.1, 1.0, 5.0])
    assert report.group_order == 48
    assert report.stabilizer_order == 8
    assert report.generating_set_size == 32
    assert report.intertwining_exact
    assert report.measured_scaling == pytest.approx(8.0)
    assert report.max_deviation <= 1e-8


def test_method_of_images_t0_is_delta_on_the_identity_coset():
    # at t=0 the K-average equals q(q-1) on the identity coset and 0 elsewhere,
    # which is exactly the quotient oracle at t=0; covered by max_deviation at 0.0
    ctx = field_context(3, delta=2)
    report = method_of_images_check(ctx, 1, [0.0])
    assert report.deviation_by_t[0.0] <= 1e-8
