"""Upper half-plane geometry: Moebius algebra, the automorphy cocycle, and
hyperbolic distance.

Conventions used throughout the package:

* a group element is a real 2x2 matrix (a, b, c, d) with a*d - b*c = 1,
  taken up to overall sign (the action z -> (a*z + b)/(c*z + d) does not see
  the sign).  The stored representative has c > 0, or a > 0 when c = 0.
* distances are measured through cosh^2(d/2) = ((x-u)^2 + (y+v)^2) / (4yv)
  and sinh^2(d/2) = ((x-u)^2 + (y-v)^2) / (4yv).  The second form is
  cancellation-free near coincident points, so distances are computed as
  2*asinh(sqrt(sinh^2(d/2))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "HalfPlanePoint",
    "MoebiusElement",
    "mobius_compose",
    "mobius_inverse",
    "mobius_apply",
    "cocycle_j",
    "cosh2_half_distance",
    "sinh2_half_distance",
    "hyp_distance",
]

# Determinant drift above this triggers a multiplicative renormalization.
_DET_DRIFT = 1e-13
# |c| at or below this is treated as an exact zero by the sign rule; the
# documented groups never produce a genuinely tiny nonzero c.
_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point x + iy with y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"half-plane point needs y > 0, got y = {self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        return cls(float(z.real), float(z.imag))

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


def _normalize(a: float, b: float, c: float, d: float):
    """Renormalize the determinant when it drifts and fix the sign."""
    det = a * d - b * c
    if abs(det - 1.0) > _DET_DRIFT:
        if det <= 0.0:
            raise ValueError(f"matrix is not orientation-preserving: det = {det}")
        s = 1.0 / math.sqrt(det)
        a, b, c, d = a * s, b * s, c * s, d * s
    if c > _SIGN_TOL:
        return a, b, c, d
    if c < -_SIGN_TOL:
        return -a, -b, -c, -d
    # c is (numerically) zero; the diagonal is then nonzero since ad = 1.
    if a < 0.0:
        return -a, -b, -c, -d
    return a, b, c, d


@dataclass(frozen=True)
class MoebiusElement:
    """A unit-determinant real 2x2 matrix up to sign.

    The constructor sign-normalizes and repairs determinant drift, so two
    representatives of the same group element compare equal field by field
    (up to float error accumulated before construction).
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = _normalize(self.a, self.b, self.c, self.d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    def is_identity(self, tol: float = 1e-9) -> bool:
        return (
            abs(self.a - 1.0) <= tol
            and abs(self.b) <= tol
            and abs(self.c) <= tol
            and abs(self.d - 1.0) <= tol
        )

    def inverse(self) -> "MoebiusElement":
        return MoebiusElement(self.d, -self.b, -self.c, self.a)

    def entries(self):
        return (self.a, self.b, self.c, self.d)


def mobius_compose(g: MoebiusElement, h: MoebiusElement) -> MoebiusElement:
    """Product g*h, renormalized and sign-normalized."""
    return MoebiusElement(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def mobius_inverse(g: MoebiusElement) -> MoebiusElement:
    return g.inverse()


def mobius_apply(g: MoebiusElement, z: HalfPlanePoint) -> HalfPlanePoint:
    """The action z -> (az + b)/(cz + d).

    The imaginary part is computed as y / |cz + d|^2, the same expression the
    identity Im(gz) * |j(g, z)|^2 = y is checked against.
    """
    cx_d = g.c * z.x + g.d
    cy = g.c * z.y
    denom = cx_d * cx_d + cy * cy
    new_x = ((g.a * z.x + g.b) * cx_d + g.a * g.c * z.y * z.y) / denom
    new_y = z.y / denom
    return HalfPlanePoint(new_x, new_y)


def cocycle_j(g: MoebiusElement, z: HalfPlanePoint) -> complex:
    """The automorphy cocycle c*z + d for the stored representative."""
    return complex(g.c * z.x + g.d, g.c * z.y)


def sinh2_half_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> float:
    """sinh^2 of half the hyperbolic distance; exactly 0 iff z = w."""
    dx = z.x - w.x
    dy = z.y - w.y
    return (dx * dx + dy * dy) / (4.0 * z.y * w.y)


def cosh2_half_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> float:
    """cosh^2 of half the hyperbolic distance; always >= 1, = 1 iff z = w."""
    dx = z.x - w.x
    sy = z.y + w.y
    return (dx * dx + sy * sy) / (4.0 * z.y * w.y)


def hyp_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> float:
    """Hyperbolic distance, as 2*asinh(sinh(d/2)).

    Equal to 2*arccosh(sqrt(cosh2_half_distance(z, w))) but stable near
    coincident points; symmetric by construction.
    """
    return 2.0 * math.asinh(math.sqrt(sinh2_half_distance(z, w)))
