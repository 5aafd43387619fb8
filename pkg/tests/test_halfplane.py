import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypbergman.halfplane import (
    HalfPlanePoint,
    MoebiusElement,
    cocycle_j,
    cosh2_half_distance,
    hyp_distance,
    mobius_apply,
    mobius_compose,
)

I = HalfPlanePoint(0.0, 1.0)
TWO_I = HalfPlanePoint(0.0, 2.0)
T = MoebiusElement(1.0, 1.0, 0.0, 1.0)
S = MoebiusElement(0.0, -1.0, 1.0, 0.0)
ID = MoebiusElement.identity()


def random_element(rng):
    """Random entries in [-3, 3], resampled until det > 0, then rescaled."""
    while True:
        a, b, c, d = rng.uniform(-3.0, 3.0, size=4)
        det = a * d - b * c
        if det > 1e-3:
            s = 1.0 / math.sqrt(det)
            return MoebiusElement(a * s, b * s, c * s, d * s)


def random_point(rng):
    return HalfPlanePoint(rng.uniform(-3.0, 3.0), rng.uniform(0.05, 3.0))


def test_point_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        HalfPlanePoint(0.0, 0.0)
    with pytest.raises(ValueError):
        HalfPlanePoint(1.0, -2.0)


def test_sign_normalization():
    m = MoebiusElement(-1.0, -1.0, 0.0, -1.0)
    assert (m.a, m.b, m.c, m.d) == (1.0, 1.0, 0.0, 1.0)
    m2 = MoebiusElement(0.0, 1.0, -1.0, 0.0)
    assert m2.c > 0


def test_compose_identity_and_inverse():
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = random_element(rng)
        assert mobius_compose(ID, g) == g
        prod = mobius_compose(g, g.inverse())
        assert prod.is_identity(1e-12)


def test_compose_translations():
    assert mobius_compose(T, T) == MoebiusElement(1.0, 2.0, 0.0, 1.0)


def test_apply_examples():
    assert mobius_apply(ID, I) == I
    assert mobius_apply(T, I) == HalfPlanePoint(1.0, 1.0)
    assert mobius_apply(S, TWO_I) == HalfPlanePoint(0.0, 0.5)


def test_cocycle_examples():
    z = HalfPlanePoint(3.0, 2.0)
    assert cocycle_j(ID, z) == 1.0 + 0.0j
    assert cocycle_j(S, I) == 1.0j
    assert cocycle_j(T, z) == 1.0 + 0.0j


def test_cosh2_examples():
    assert cosh2_half_distance(I, I) == 1.0
    assert cosh2_half_distance(I, TWO_I) == pytest.approx(9.0 / 8.0, rel=1e-15)
    z = HalfPlanePoint(1.0, 1.0)
    w = HalfPlanePoint(2.0, 1.0)
    assert cosh2_half_distance(z, w) == pytest.approx(5.0 / 4.0, rel=1e-15)


def _geodesic_arc_length(z, w):
    """Independent oracle: quadrature of the hyperbolic line element along
    the circular geodesic through z and w."""
    if z.x == w.x:
        return abs(math.log(w.y / z.y))
    c = (z.x * z.x + z.y * z.y - w.x * w.x - w.y * w.y) / (2.0 * (z.x - w.x))
    t_z = math.atan2(z.y, z.x - c)
    t_w = math.atan2(w.y, w.x - c)
    lo, hi = sorted((t_z, t_w))
    value, _ = quad(lambda t: 1.0 / math.sin(t), lo, hi, epsabs=1e-13, epsrel=1e-13)
    return value


def test_distance_examples_with_quadrature_oracle():
    assert hyp_distance(I, I) == 0.0
    assert hyp_distance(I, TWO_I) == pytest.approx(math.log(2.0), rel=1e-14)
    z, w = HalfPlanePoint(0.0, 1.0), HalfPlanePoint(1.0, 1.0)
    assert hyp_distance(z, w) == pytest.approx(2.0 * math.asinh(0.5), rel=1e-14)
    # arc-length quadrature agrees on both displayed examples
    assert hyp_distance(z, w) == pytest.approx(_geodesic_arc_length(z, w), rel=1e-10)
    z2, w2 = HalfPlanePoint(1.0, 1.0), HalfPlanePoint(2.0, 1.0)
    d = 2.0 * math.acosh(math.sqrt(5.0 / 4.0))
    assert hyp_distance(z2, w2) == pytest.approx(d, rel=1e-14)
    assert hyp_distance(z2, w2) == pytest.approx(_geodesic_arc_length(z2, w2), rel=1e-10)
    # the arccosh(1 + |z-w|^2/(2yv)) form is a second independent expression
    for za, wa in ((z, w), (z2, w2), (I, TWO_I)):
        coshd = 1.0 + ((za.x - wa.x) ** 2 + (za.y - wa.y) ** 2) / (2.0 * za.y * wa.y)
        assert hyp_distance(za, wa) == pytest.approx(math.acosh(coshd), rel=1e-12)


def test_mobius_invariance_of_distance():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        g = random_element(rng)
        z, w = random_point(rng), random_point(rng)
        d1 = hyp_distance(z, w)
        d2 = hyp_distance(mobius_apply(g, z), mobius_apply(g, w))
        assert abs(d1 - d2) <= 1e-10


def test_cocycle_chain_rule():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        g, h = random_element(rng), random_element(rng)
        z = random_point(rng)
        lhs = cocycle_j(mobius_compose(g, h), z)
        rhs = cocycle_j(g, mobius_apply(h, z)) * cocycle_j(h, z)
        err = min(abs(lhs - rhs), abs(lhs + rhs))
        assert err <= 1e-12 * abs(rhs)


def test_im_identity():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        g = random_element(rng)
        z = random_point(rng)
        val = mobius_apply(g, z).y * abs(cocycle_j(g, z)) ** 2
        assert abs(val - z.y) <= 1e-13 * z.y


def test_metric_axioms():
    rng = np.random.default_rng(10)
    for _ in range(1000):
        z, w, u = random_point(rng), random_point(rng), random_point(rng)
        assert hyp_distance(z, w) == hyp_distance(w, z)  # exact by construction
        assert hyp_distance(z, w) <= hyp_distance(z, u) + hyp_distance(u, w) + 1e-12
        assert hyp_distance(z, z) == 0.0


def test_cosh2_expression_identity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        z, w = random_point(rng), random_point(rng)
        lhs = cosh2_half_distance(z, w) * (4.0 * z.y * w.y)
        rhs = (z.x - w.x) ** 2 + (z.y + w.y) ** 2
        # same floating-point expression, division round trip only
        assert lhs == pytest.approx(rhs, rel=1e-15)


def test_determinant_renormalization():
    # feed drifted entries; constructor must renormalize to det 1
    m = MoebiusElement(1.0 + 3e-12, 1.0, 0.0, 1.0)
    assert abs(m.a * m.d - m.b * m.c - 1.0) <= 1e-12
