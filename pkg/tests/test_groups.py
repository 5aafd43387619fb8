import math

import numpy as np
import pytest

from hypbergman.errors import ConfigurationError, PreconditionError, ResourceLimitError
from hypbergman.groups import (
    BOLZA_INJECTIVITY_RADIUS,
    MODULAR_INJECTIVITY_RADIUS,
    MODULAR_SAMPLE_POINTS,
    build_surface_model,
    congruence_cover,
    counting_function,
    counting_inequality_margin,
    enumerate_ball,
    estimate_injectivity_radius,
)
from hypbergman.halfplane import HalfPlanePoint, MoebiusElement, hyp_distance, mobius_apply, mobius_compose

I = HalfPlanePoint(0.0, 1.0)
TWO_I = HalfPlanePoint(0.0, 2.0)


def modular_brute_ball(z, w, radius, max_len=14, keep_cusp=False):
    """Independent oracle: plain-integer word enumeration without pruning."""
    gens = ((1, 1, 0, 1), (1, -1, 0, 1), (0, -1, 1, 0))

    def mul(g, h):
        a = g[0] * h[0] + g[1] * h[2]
        b = g[0] * h[1] + g[1] * h[3]
        c = g[2] * h[0] + g[3] * h[2]
        d = g[2] * h[1] + g[3] * h[3]
        if c < 0 or (c == 0 and a < 0):
            a, b, c, d = -a, -b, -c, -d
        return (a, b, c, d)

    seen = {(1, 0, 0, 1)}
    frontier = {(1, 0, 0, 1)}
    for _ in range(max_len):
        nxt = set()
        for g in frontier:
            for h in gens:
                p = mul(g, h)
                if p not in seen:
                    seen.add(p)
                    nxt.add(p)
        frontier = nxt
    out = set()
    for g in seen:
        if g[2] == 0 and not keep_cusp:
            continue
        gz = mobius_apply(MoebiusElement(*(float(v) for v in g)), z)
        if hyp_distance(gz, w) <= radius:
            out.add(g)
    return out


# ---------------------------------------------------------------------------
# model construction
# ---------------------------------------------------------------------------


def test_unknown_model_rejected():
    with pytest.raises(ConfigurationError):
        build_surface_model("octagonish")


def test_trivial_model(trivial):
    assert trivial.generators == []
    assert math.isinf(trivial.injectivity_radius)


def test_modular_generators(modular):
    entries = {tuple(g.entries()) for g in modular.generators}
    assert (1.0, 1.0, 0.0, 1.0) in entries
    assert (0.0, -1.0, 1.0, 0.0) in entries
    assert modular.cusp_width == 1.0
    assert modular.injectivity_radius == pytest.approx(math.log(4.0), rel=1e-15)


def test_bolza_generators(bolza):
    assert len(bolza.generators) == 8
    center = I
    for g in bolza.generators:
        d = hyp_distance(mobius_apply(g, center), center)
        assert d == pytest.approx(BOLZA_INJECTIVITY_RADIUS, rel=1e-12)
    # generator set closed under inverses
    entries = {tuple(round(v, 9) for v in g.entries()) for g in bolza.generators}
    for g in bolza.generators:
        inv = g.inverse()
        assert tuple(round(v, 9) for v in inv.entries()) in entries
    assert bolza.injectivity_radius == pytest.approx(2.0 * math.acosh(1.0 + math.sqrt(2.0)), rel=1e-15)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def test_trivial_ball(trivial):
    ball = enumerate_ball(trivial, I, I, 10.0)
    assert len(ball) == 1
    assert ball.exhaustive
    assert ball.displacements[0] == 0.0


def test_parabolic_ball_rejected(parabolic):
    with pytest.raises(PreconditionError):
        enumerate_ball(parabolic, I, I, 1.0)


def test_modular_ball_far_from_elliptic(modular):
    # 2i is deep in the fundamental domain; no group translate (the cusp
    # stabilizer is excluded) comes within 0.1
    ball = enumerate_ball(modular, TWO_I, TWO_I, 0.1)
    assert len(ball) == 0
    assert ball.exhaustive


def test_modular_ball_at_elliptic_point(modular):
    # the inversion fixes i, so it sits at displacement 0 there
    ball = enumerate_ball(modular, I, I, 0.01)
    assert len(ball) == 1
    elem, disp = ball.elements[0]
    assert tuple(elem.entries()) == (0.0, -1.0, 1.0, 0.0)
    assert disp <= 1e-12


def test_exhaustiveness_against_brute_force(modular):
    for z, w in ((TWO_I, TWO_I), (TWO_I, HalfPlanePoint(0.25, 1.3))):
        ball = enumerate_ball(modular, z, w, 4.0)
        bfs = {tuple(int(round(v)) for v in e.entries()) for e, _ in ball.elements}
        brute = modular_brute_ball(z, w, 4.0)
        assert bfs == brute


def test_prune_margin_stability(modular, bolza):
    # doubling the pruning margin must not change the stored set
    cases = [
        (modular, TWO_I, HalfPlanePoint(0.3, 1.1), 5.0),
        (bolza, I, HalfPlanePoint(0.12, 0.93), 5.5),
        (modular, HalfPlanePoint(0.0, 9.5), HalfPlanePoint(0.0, 9.5), 5.0),
    ]
    for model, z, w, radius in cases:
        a = enumerate_ball(model, z, w, radius)
        b = enumerate_ball(model, z, w, radius, prune_margin=8.0)
        assert len(a) == len(b)
        assert np.array_equal(a.entries, b.entries)


def test_ball_sorted_and_within_radius(bolza):
    ball = enumerate_ball(bolza, I, HalfPlanePoint(0.1, 1.05), 5.5)
    disp = ball.displacements
    assert np.all(np.diff(disp) >= 0)
    assert np.all(disp <= 5.5 + 1e-9)
    assert ball.exhaustive


def test_ball_deduplication(bolza):
    ball = enumerate_ball(bolza, I, I, 6.2)
    keys = {tuple(np.round(row, 9)) for row in ball.entries}
    assert len(keys) == len(ball)


def test_group_closure(bolza):
    ball = enumerate_ball(bolza, I, I, 6.2)
    elems = [e for e, _ in ball.elements]
    entries = ball.entries
    rng = np.random.default_rng(3)
    idx = rng.integers(0, len(elems), size=(40, 2))
    for i, j in idx:
        prod = mobius_compose(elems[i], elems[j])
        d = hyp_distance(mobius_apply(prod, I), I)
        if d <= 6.2:
            gap = np.abs(entries - np.array(prod.entries())).max(axis=1).min()
            assert gap < 1e-6


def test_element_cap(modular):
    with pytest.raises(ResourceLimitError):
        enumerate_ball(modular, TWO_I, TWO_I, 12.0, cap=1000)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def test_counting_examples(trivial, modular):
    assert counting_function(trivial, I, I, 1.0) == 1
    assert counting_function(modular, TWO_I, TWO_I, 0.0) == 0
    # brute-force confirmation at radius 2
    ball = enumerate_ball(modular, TWO_I, TWO_I, 2.0)
    brute = modular_brute_ball(TWO_I, TWO_I, 2.0, max_len=12)
    assert counting_function(modular, TWO_I, TWO_I, 2.0, ball=ball) == len(brute)


def test_counting_monotone_and_bounded(modular, bolza):
    r = modular.injectivity_radius
    ball = enumerate_ball(modular, TWO_I, TWO_I, 4.0)
    values = [ball.count_within(rho) for rho in np.linspace(0, 4, 40)]
    assert values == sorted(values)
    # right continuity at stored jumps: count at rho includes the element
    for d in ball.displacements[:5]:
        assert ball.count_within(d) > ball.count_within(d - 1e-12)
    # cardinality bound within the bound regime [0, r]
    for rho in np.linspace(0, r, 10):
        assert ball.count_within(rho) <= math.sinh(rho + r) / math.sinh(r)
    # compact model: bound holds at every stored displacement
    rb = bolza.injectivity_radius
    ball_b = enumerate_ball(bolza, I, I, 6.2)
    for d in ball_b.displacements:
        assert ball_b.count_within(d) <= math.sinh(d + rb) / math.sinh(rb) + 1e-9


def test_at_most_one_element_within_half_radius(bolza):
    rng = np.random.default_rng(5)
    r = bolza.injectivity_radius
    for _ in range(5):
        z = HalfPlanePoint(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.3))
        w = HalfPlanePoint(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.3))
        ball = enumerate_ball(bolza, z, w, 4.0)
        assert ball.count_within(r / 2.0 * 0.999) <= 1


# ---------------------------------------------------------------------------
# injectivity radius estimation
# ---------------------------------------------------------------------------


def test_estimate_trivial_and_parabolic(trivial, parabolic):
    assert math.isinf(estimate_injectivity_radius(trivial, [I]))
    assert math.isinf(estimate_injectivity_radius(parabolic, [I]))


def test_estimate_modular_pinned(modular):
    est = estimate_injectivity_radius(modular, list(MODULAR_SAMPLE_POINTS))
    assert est == pytest.approx(MODULAR_INJECTIVITY_RADIUS, rel=1e-12)


def test_estimate_bolza_pinned(bolza):
    est = estimate_injectivity_radius(bolza, [I])
    assert est == pytest.approx(BOLZA_INJECTIVITY_RADIUS, rel=1e-9)


# ---------------------------------------------------------------------------
# congruence cover
# ---------------------------------------------------------------------------


def test_congruence_cover_membership(modular, gamma2):
    ball = enumerate_ball(gamma2, TWO_I, TWO_I, 4.0)
    ints = {tuple(int(round(v)) for v in e.entries()) for e, _ in ball.elements}
    assert (1, 1, 0, 1) not in ints
    for a, b, c, d in ints:
        assert (a % 2, b % 2, c % 2, d % 2) == (1, 0, 0, 1)


def test_congruence_cover_inclusion(modular, gamma2):
    big = enumerate_ball(modular, TWO_I, TWO_I, 4.0)
    small = enumerate_ball(gamma2, TWO_I, TWO_I, 4.0)
    big_keys = {tuple(int(round(v)) for v in e.entries()) for e, _ in big.elements}
    small_keys = {tuple(int(round(v)) for v in e.entries()) for e, _ in small.elements}
    assert small_keys <= big_keys


def test_congruence_cover_radius(modular, gamma2):
    assert gamma2.injectivity_radius >= modular.injectivity_radius
    assert gamma2.injectivity_radius == pytest.approx(math.acosh(9.0), rel=1e-12)
    assert gamma2.cusp_width == 2.0


def test_congruence_cover_rejects(modular, bolza):
    with pytest.raises(ConfigurationError):
        congruence_cover(bolza, 2)
    with pytest.raises(ConfigurationError):
        congruence_cover(modular, 3)


# ---------------------------------------------------------------------------
# counting-inequality margin
# ---------------------------------------------------------------------------


def test_margin_trivial_any_weight(trivial):
    rep = counting_inequality_margin(trivial, I, TWO_I, 0.8, k=3, r_x=1.0)
    # single-element sum: the ball contributes exactly f(d(z, w)) = (8/9)^3
    assert rep.element_count == 1
    assert rep.lhs - rep.tail_allowance == pytest.approx((8.0 / 9.0) ** 3, rel=1e-12)
    assert rep.slack >= 0.0
    # any other admissible decreasing weight keeps nonnegative slack
    rep2 = counting_inequality_margin(
        trivial, I, TWO_I, 0.8, f=lambda rho: math.exp(-2.5 * rho), r_x=1.0
    )
    assert rep2.slack >= 0.0


def test_margin_requires_regime(trivial):
    with pytest.raises(PreconditionError):
        counting_inequality_margin(trivial, I, I, 0.3, k=3, r_x=1.0)
    with pytest.raises(PreconditionError):
        counting_inequality_margin(trivial, I, I, 0.3, k=3)  # infinite radius


def test_margin_modular_and_bolza(modular, bolza):
    rep = counting_inequality_margin(modular, TWO_I, TWO_I, modular.injectivity_radius, k=3)
    assert rep.slack >= -rep.tail_allowance
    rep2 = counting_inequality_margin(
        bolza, I, I, 0.9 * bolza.injectivity_radius, k=4, radius=6.0
    )
    assert rep2.slack >= -rep2.tail_allowance


def test_margin_custom_weight(modular):
    rep = counting_inequality_margin(
        modular, TWO_I, TWO_I, 1.4, f=lambda rho: math.exp(-3.0 * rho), radius=5.0
    )
    assert rep.slack >= -rep.tail_allowance


# ---------------------------------------------------------------------------
# cache round trip
# ---------------------------------------------------------------------------


def test_cache_roundtrip(tmp_path, modular):
    z, w = TWO_I, HalfPlanePoint(0.3, 1.4)
    fresh = enumerate_ball(modular, z, w, 4.5, cache_dir=str(tmp_path))
    files = list(tmp_path.glob("*.ball"))
    assert len(files) == 1
    header = files[0].read_text().splitlines()[0]
    assert header.startswith("# model=modular")
    cached = enumerate_ball(modular, z, w, 4.5, cache_dir=str(tmp_path))
    assert np.array_equal(fresh.entries, cached.entries)
    assert np.array_equal(fresh.displacements, cached.displacements)
    # a different radius is a different key
    other = enumerate_ball(modular, z, w, 4.0, cache_dir=str(tmp_path))
    assert len(list(tmp_path.glob("*.ball"))) == 2
    assert len(other) <= len(fresh)
