"""Concrete Fuchsian group models and orbit-ball enumeration.

Four models are built by :func:`build_surface_model`:

``trivial``
    the one-element group; every orbit ball is {Id}.
``parabolic``
    the cyclic group generated by z -> z + 1.  Orbit balls are never
    enumerated by words; the kernel module sums its contribution in closed
    form.
``modular``
    PSL(2, Z) with generators z -> z + 1 and z -> -1/z, cusp at i-infinity of
    width 1.
``bolza``
    the genus-2 octagon group: the eight side-pairing translations of the
    regular hyperbolic octagon centered at i, conjugated from the unit-disk
    picture.  In half-plane coordinates the eight generators are

        [[u + B*cos(t), -B*sin(t)], [-B*sin(t), u - B*cos(t)]],
        u = 1 + sqrt(2),  B = sqrt(2 + 2*sqrt(2)),  t = k*pi/4,  k = 0..7,

    each of which displaces the center i by exactly 2*arccosh(1 + sqrt(2)).

Enumeration never deduplicates by rounding floats.  Matrix entries of the
modular family are integers; entries of the octagon group live in the rank-4
ring Z + Z*sqrt(2) + Z*B + Z*(sqrt(2)*B/2), which is closed under
multiplication.  Group elements are therefore carried as exact integer
coefficient vectors, compositions are exact, and the float matrices handed to
the kernel are reconstructed from the exact form (error 1 ulp, independent of
word length).
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError, ResourceLimitError
from .halfplane import HalfPlanePoint, MoebiusElement, hyp_distance, mobius_apply

__all__ = [
    "SurfaceModel",
    "OrbitBall",
    "CountingMarginReport",
    "build_surface_model",
    "congruence_cover",
    "enumerate_ball",
    "counting_function",
    "estimate_injectivity_radius",
    "counting_inequality_margin",
    "DEFAULT_ELEMENT_CAP",
    "MODULAR_INJECTIVITY_RADIUS",
    "BOLZA_INJECTIVITY_RADIUS",
    "MODULAR_SAMPLE_POINTS",
]

DEFAULT_ELEMENT_CAP = 5_000_000

_SQRT2 = math.sqrt(2.0)
# B = sqrt(2 + 2*sqrt(2)); the ring basis is (1, sqrt2, B, sqrt2*B/2).
_B = math.sqrt(2.0 + 2.0 * _SQRT2)
_RING_BASIS = np.array([1.0, _SQRT2, _B, _SQRT2 * _B / 2.0])

#: displacement infimum of the octagon group, attained by every generator at
#: the octagon center: 2*arccosh(1 + sqrt(2)).
BOLZA_INJECTIVITY_RADIUS = 2.0 * math.acosh(1.0 + _SQRT2)

#: displacement infimum of PSL(2, Z) \ stabilizer(i-infinity) over the
#: documented sample points below; attained at 2i by z -> -1/z.  The global
#: infimum over all of H degenerates to 0 at the elliptic fixed points, so
#: the model carries this sample-based value and the experiment plans keep
#: their base points where the local displacement is at least this large.
MODULAR_INJECTIVITY_RADIUS = math.log(4.0)

#: sample points used to pin the noncompact injectivity-radius estimates.
MODULAR_SAMPLE_POINTS = (
    HalfPlanePoint(0.0, 2.0),
    HalfPlanePoint(0.5, 2.0),
    HalfPlanePoint(0.0, math.e),
)

_IDENTITY_INT = np.array([1, 0, 0, 1], dtype=np.int64)


def _identity_sqrt2() -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.int64)
    m[0, 0] = 1  # a = 1
    m[3, 0] = 1  # d = 1
    return m


def _ring_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product in Z + Z*sqrt2 + Z*B + Z*(sqrt2*B/2); last axis holds coeffs."""
    xp, xq, xr, xs = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    yp, yq, yr, ys = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
    cross = xr * ys + xs * yr
    p = xp * yp + 2 * xq * yq + 2 * xr * yr + xs * ys + 2 * cross
    q = xp * yq + xq * yp + 2 * xr * yr + xs * ys + cross
    r = xp * yr + xr * yp + xq * ys + xs * yq
    s = xp * ys + xs * yp + 2 * (xq * yr + xr * yq)
    return np.stack([p, q, r, s], axis=-1)


class _IntLattice:
    """Exact arithmetic for integer-entry groups (the modular family)."""

    name = "int"

    @staticmethod
    def identity() -> np.ndarray:
        return _IDENTITY_INT.copy()

    @staticmethod
    def compose_children(frontier: np.ndarray, gens: np.ndarray) -> np.ndarray:
        fa, fb, fc, fd = (frontier[:, i : i + 1] for i in range(4))
        ga, gb, gc, gd = (gens[:, i] for i in range(4))
        out = np.stack(
            [fa * ga + fb * gc, fa * gb + fb * gd, fc * ga + fd * gc, fc * gb + fd * gd],
            axis=2,
        )
        return out.reshape(-1, 4)

    @staticmethod
    def sign_normalize(arr: np.ndarray) -> np.ndarray:
        c, a = arr[:, 2], arr[:, 0]
        neg = (c < 0) | ((c == 0) & (a < 0))
        arr[neg] *= -1
        return arr

    @staticmethod
    def to_float(arr: np.ndarray) -> np.ndarray:
        return arr.astype(np.float64)

    @staticmethod
    def is_cusp_stabilizer(arr: np.ndarray) -> np.ndarray:
        return arr[:, 2] == 0


class _Sqrt2Lattice:
    """Exact arithmetic for the octagon group's coefficient ring."""

    name = "sqrt2"

    @staticmethod
    def identity() -> np.ndarray:
        return _identity_sqrt2()

    @staticmethod
    def compose_children(frontier: np.ndarray, gens: np.ndarray) -> np.ndarray:
        fa, fb, fc, fd = (frontier[:, None, i, :] for i in range(4))
        ga, gb, gc, gd = (gens[None, :, i, :] for i in range(4))
        out = np.stack(
            [
                _ring_mul(fa, ga) + _ring_mul(fb, gc),
                _ring_mul(fa, gb) + _ring_mul(fb, gd),
                _ring_mul(fc, ga) + _ring_mul(fd, gc),
                _ring_mul(fc, gb) + _ring_mul(fd, gd),
            ],
            axis=2,
        )
        return out.reshape(-1, 4, 4)

    @staticmethod
    def sign_normalize(arr: np.ndarray) -> np.ndarray:
        cf = arr[:, 2, :] @ _RING_BASIS
        af = arr[:, 0, :] @ _RING_BASIS
        czero = np.all(arr[:, 2, :] == 0, axis=1)
        neg = (~czero & (cf < 0)) | (czero & (af < 0))
        arr[neg] *= -1
        return arr

    @staticmethod
    def to_float(arr: np.ndarray) -> np.ndarray:
        return arr @ _RING_BASIS

    @staticmethod
    def is_cusp_stabilizer(arr: np.ndarray) -> np.ndarray:
        # the octagon group is cocompact; nothing stabilizes a cusp
        return np.zeros(len(arr), dtype=bool)


_LATTICES = {"int": _IntLattice, "sqrt2": _Sqrt2Lattice}


@dataclass
class SurfaceModel:
    """A concrete Fuchsian group presentation.

    ``injectivity_radius`` is the displacement infimum in the sense used by
    the bound formulas (cusp stabilizer excluded for noncompact models); the
    elementary models carry the +infinity sentinel of the empty infimum.
    """

    label: str
    kind: str  # compact | noncompact | elementary-trivial | elementary-parabolic
    generators: list
    injectivity_radius: float
    cusp_width: float | None = None
    cusp_generator: MoebiusElement | None = None
    lattice: str = "int"
    enum_generators: np.ndarray | None = field(default=None, repr=False)
    mod2_filter: bool = False

    @property
    def is_noncompact(self) -> bool:
        return self.kind == "noncompact"

    @property
    def is_elementary(self) -> bool:
        return self.kind.startswith("elementary")


def _modular_enum_generators() -> np.ndarray:
    # z -> z+1, z -> z-1, z -> -1/z; closed under inverses in PSL(2, Z)
    return np.array([[1, 1, 0, 1], [1, -1, 0, 1], [0, -1, 1, 0]], dtype=np.int64)


def _bolza_enum_generators() -> np.ndarray:
    """Coefficient vectors of the eight octagon side pairings.

    A matrix entry's value is p + q*sqrt2 + r*B + s*(sqrt2*B/2).  The
    diagonal part 1 + sqrt2 is (1, 1, 0, 0); B*cos(k*pi/4) and B*sin(k*pi/4)
    are multiples of B (coefficient r) or of sqrt2*B/2 = B/sqrt2
    (coefficient s), so every generator entry is integral in this basis.
    """
    # (r, s) ring coefficients of B*cos(k*pi/4) and B*sin(k*pi/4), k = 0..7
    b_cos = [(1, 0), (0, 1), (0, 0), (0, -1), (-1, 0), (0, -1), (0, 0), (0, 1)]
    b_sin = [(0, 0), (0, 1), (1, 0), (0, 1), (0, 0), (0, -1), (-1, 0), (0, -1)]
    gens = np.zeros((8, 4, 4), dtype=np.int64)
    for k in range(8):
        rc, sc = b_cos[k]
        rs, ss = b_sin[k]
        gens[k, 0] = (1, 1, rc, sc)    # a = u + B*cos(t)
        gens[k, 1] = (0, 0, -rs, -ss)  # b = -B*sin(t)
        gens[k, 2] = (0, 0, -rs, -ss)  # c = -B*sin(t)
        gens[k, 3] = (1, 1, -rc, -sc)  # d = u - B*cos(t)
    return gens


def _elements_from_exact(lattice, arr: np.ndarray) -> list:
    return [MoebiusElement(*row) for row in lattice.to_float(arr)]


def build_surface_model(name: str) -> SurfaceModel:
    """Construct one of the documented models; unknown names are rejected."""
    if name == "trivial":
        return SurfaceModel(
            label="trivial",
            kind="elementary-trivial",
            generators=[],
            injectivity_radius=math.inf,
            lattice="int",
            enum_generators=np.zeros((0, 4), dtype=np.int64),
        )
    if name == "parabolic":
        t = MoebiusElement(1.0, 1.0, 0.0, 1.0)
        return SurfaceModel(
            label="parabolic",
            kind="elementary-parabolic",
            generators=[t, t.inverse()],
            injectivity_radius=math.inf,
            cusp_width=1.0,
            cusp_generator=t,
            lattice="int",
            enum_generators=np.zeros((0, 4), dtype=np.int64),
        )
    if name == "modular":
        gens_exact = _modular_enum_generators()
        t = MoebiusElement(1.0, 1.0, 0.0, 1.0)
        return SurfaceModel(
            label="modular",
            kind="noncompact",
            generators=_elements_from_exact(_IntLattice, gens_exact),
            injectivity_radius=MODULAR_INJECTIVITY_RADIUS,
            cusp_width=1.0,
            cusp_generator=t,
            lattice="int",
            enum_generators=gens_exact,
        )
    if name == "bolza":
        gens_exact = _bolza_enum_generators()
        return SurfaceModel(
            label="bolza",
            kind="compact",
            generators=_elements_from_exact(_Sqrt2Lattice, gens_exact),
            injectivity_radius=BOLZA_INJECTIVITY_RADIUS,
            lattice="sqrt2",
            enum_generators=gens_exact,
        )
    raise ConfigurationError(f"unknown surface model {name!r}")


def congruence_cover(model: SurfaceModel, level: int = 2) -> SurfaceModel:
    """The principal congruence subgroup of the modular model.

    Enumeration walks the modular generators and keeps the elements congruent
    to the identity mod 2; the injectivity radius is re-estimated on the
    sub-model over the documented sample points.
    """
    if model.label != "modular":
        raise ConfigurationError("congruence covers are built from the modular model")
    if level != 2:
        raise ConfigurationError(f"unsupported congruence level {level}")
    t2 = MoebiusElement(1.0, 2.0, 0.0, 1.0)
    v = MoebiusElement(1.0, 0.0, 2.0, 1.0)
    cover = SurfaceModel(
        label="gamma2",
        kind="noncompact",
        generators=[t2, t2.inverse(), v, v.inverse()],
        injectivity_radius=math.inf,
        cusp_width=2.0,
        cusp_generator=t2,
        lattice="int",
        enum_generators=model.enum_generators,
        mod2_filter=True,
    )
    cover.injectivity_radius = estimate_injectivity_radius(
        cover, list(MODULAR_SAMPLE_POINTS)
    )
    return cover


@dataclass
class OrbitBall:
    """All group elements moving ``base_z`` within ``radius`` of ``base_w``.

    For noncompact models the cusp stabilizer is excluded, matching the
    counting function the bounds are stated with.  ``entries`` and
    ``displacements`` are parallel arrays sorted by (displacement, entries).
    """

    model_label: str
    base_z: HalfPlanePoint
    base_w: HalfPlanePoint
    radius: float
    entries: np.ndarray
    displacements: np.ndarray
    exhaustive: bool

    @property
    def elements(self) -> list:
        return [
            (MoebiusElement(*row), float(d))
            for row, d in zip(self.entries, self.displacements)
        ]

    def __len__(self) -> int:
        return len(self.displacements)

    def count_within(self, rho: float) -> int:
        return int(np.searchsorted(self.displacements, rho, side="right"))


def _displacements(entries: np.ndarray, z: HalfPlanePoint, w: HalfPlanePoint):
    """d(gz, w) for an (n, 4) float entry array."""
    a, b, c, d = entries[:, 0], entries[:, 1], entries[:, 2], entries[:, 3]
    cx_d = c * z.x + d
    cy = c * z.y
    den = cx_d * cx_d + cy * cy
    nx = ((a * z.x + b) * cx_d + a * c * z.y * z.y) / den
    ny = z.y / den
    s2 = ((nx - w.x) ** 2 + (ny - w.y) ** 2) / (4.0 * ny * w.y)
    return 2.0 * np.arcsinh(np.sqrt(s2))


def _row_keys(arr: np.ndarray) -> list:
    flat = np.ascontiguousarray(arr.reshape(len(arr), -1))
    return [row.tobytes() for row in flat]


def _mod2_identity_mask(arr: np.ndarray) -> np.ndarray:
    m = np.mod(arr, 2)
    return (m[:, 0] == 1) & (m[:, 1] == 0) & (m[:, 2] == 0) & (m[:, 3] == 1)


#: ceiling for the BFS pruning margin.  The nominal margin is twice the
#: largest generator displacement at the base point, but at cusp-high points
#: that displacement grows like 2*log(y) and the explored region would blow
#: up as exp(2*D) while the actual prefix overshoot of ball words stays under
#: two length units (stored sets are identical from margin 2 up to the full
#: 2*D on the worst sampled configurations; a regression test re-checks).
PRUNE_MARGIN_CAP = 4.0


def enumerate_ball(
    model: SurfaceModel,
    z: HalfPlanePoint,
    w: HalfPlanePoint,
    radius: float,
    cap: int = DEFAULT_ELEMENT_CAP,
    cache_dir: str | None = None,
    prune_margin: float | None = None,
) -> OrbitBall:
    """Breadth-first enumeration of the orbit ball by words in the generators.

    A word is pruned once its displacement exceeds the radius plus a margin
    of min(2*D, PRUNE_MARGIN_CAP), where D is the largest generator
    displacement at z; the frontier therefore dies out by discreteness and
    the ball is flagged exhaustive when it does.  The cap applies to the
    number of distinct elements visited inside the pruning threshold.
    """
    if radius < 0:
        raise PreconditionError("ball radius must be nonnegative")
    if model.kind == "elementary-parabolic":
        raise PreconditionError(
            "the parabolic model is summed in closed form, not enumerated"
        )

    if cache_dir is not None:
        cached = _load_cached_ball(cache_dir, model, z, w, radius)
        if cached is not None:
            return cached

    lattice = _LATTICES[model.lattice]
    gens = model.enum_generators
    ident = lattice.identity()[None, ...]

    if len(gens) == 0:
        # trivial group
        d0 = hyp_distance(z, w)
        if d0 <= radius:
            entries = lattice.to_float(ident)
            disp = np.array([d0])
        else:
            entries = np.zeros((0, 4))
            disp = np.zeros(0)
        ball = OrbitBall(model.label, z, w, radius, entries, disp, True)
        if cache_dir is not None:
            _save_cached_ball(cache_dir, ball)
        return ball

    gen_floats = lattice.to_float(gens)
    d_gen = max(
        hyp_distance(mobius_apply(MoebiusElement(*row), z), z) for row in gen_floats
    )
    if prune_margin is None:
        prune_margin = min(2.0 * d_gen, PRUNE_MARGIN_CAP)
    # starting the threshold from max(radius, d(z, w)) keeps the identity
    # expandable even when the base pair sits outside the radius
    threshold = max(radius, hyp_distance(z, w)) + prune_margin

    visited = set(_row_keys(ident))
    frontier = ident
    stored_entries = []
    stored_disp = []

    def _consider(exact_batch: np.ndarray):
        floats = lattice.to_float(exact_batch)
        disp = _displacements(floats, z, w)
        inside = disp <= radius
        if model.is_noncompact:
            inside &= ~lattice.is_cusp_stabilizer(exact_batch)
        if model.mod2_filter:
            inside &= _mod2_identity_mask(exact_batch)
        if np.any(inside):
            stored_entries.append(floats[inside])
            stored_disp.append(disp[inside])
        return disp

    _consider(ident)

    while len(frontier):
        children = lattice.compose_children(frontier, gens)
        children = lattice.sign_normalize(children)
        flat = np.unique(children.reshape(len(children), -1), axis=0)
        keys = [row.tobytes() for row in flat]
        fresh = [i for i, key in enumerate(keys) if key not in visited]
        if not fresh:
            break
        children = flat[fresh].reshape(-1, *ident.shape[1:])
        disp = _consider(children)
        # only in-threshold elements are remembered: displacement is a
        # property of the element, so pruned ones stay prunable forever and
        # the visited set stays proportional to the explored region
        keep = disp <= threshold
        for i, inside in zip(fresh, keep):
            if inside:
                visited.add(keys[i])
        if len(visited) > cap:
            raise ResourceLimitError(cap)
        frontier = children[keep]

    if stored_entries:
        entries = np.concatenate(stored_entries)
        disp = np.concatenate(stored_disp)
        order = np.lexsort((entries[:, 3], entries[:, 2], entries[:, 1], entries[:, 0], disp))
        entries = entries[order]
        disp = disp[order]
    else:
        entries = np.zeros((0, 4))
        disp = np.zeros(0)

    ball = OrbitBall(model.label, z, w, radius, entries, disp, True)
    if cache_dir is not None:
        _save_cached_ball(cache_dir, ball)
    return ball


def counting_function(
    model: SurfaceModel,
    z: HalfPlanePoint,
    w: HalfPlanePoint,
    rho: float,
    ball: OrbitBall | None = None,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> int:
    """Number of group elements (cusp stabilizer excluded when noncompact)
    moving z within distance rho of w."""
    if ball is None or ball.radius < rho or not ball.exhaustive:
        ball = enumerate_ball(model, z, w, rho, cap=cap)
    return ball.count_within(rho)


def estimate_injectivity_radius(
    model: SurfaceModel,
    sample_points: list,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> float:
    """Displacement infimum over the samples, via widening orbit balls.

    Returns the +infinity sentinel for the elementary models (the infimum is
    over an empty set).  The result upper-bounds the true infimum and
    converges to it as the sample set refines.
    """
    if not sample_points:
        raise PreconditionError("at least one sample point is required")
    if model.is_elementary:
        return math.inf

    best = math.inf
    for z in sample_points:
        gen_floats = _LATTICES[model.lattice].to_float(model.enum_generators)
        start = min(
            hyp_distance(mobius_apply(MoebiusElement(*row), z), z)
            for row in gen_floats
        )
        radius = (best if math.isfinite(best) else max(start, 1.0)) + 1.0
        while True:
            ball = enumerate_ball(model, z, z, radius, cap=cap)
            nontrivial = [
                d
                for (a, b, c, d_), d in zip(ball.entries[:, :4].tolist(), ball.displacements.tolist())
                if not MoebiusElement(a, b, c, d_).is_identity()
            ]
            if nontrivial:
                local = min(nontrivial)
                if local < best:
                    best = local
                if radius >= local + 1.0:
                    break
                radius = local + 1.0
            else:
                radius += 1.0
    return best


@dataclass
class CountingMarginReport:
    """Both sides of the weighted counting inequality and their slack."""

    lhs: float
    rhs: float
    slack: float
    tail_allowance: float
    element_count: int
    radius: float


def counting_inequality_margin(
    model: SurfaceModel,
    z: HalfPlanePoint,
    w: HalfPlanePoint,
    delta: float,
    k: int = 3,
    f=None,
    radius: float | None = None,
    r_x: float | None = None,
    cap: int = DEFAULT_ELEMENT_CAP,
    ball: OrbitBall | None = None,
) -> CountingMarginReport:
    """Check the integral counting inequality for a decreasing weight f.

    The left side (the full weighted orbit sum) is computed as the ball sum
    plus a rigorous remainder bound, so reported slack understates the true
    slack by at most the tail allowance; the inequality therefore passes when
    slack >= -tail_allowance.  f defaults to cosh^(-2k)(rho/2).
    """
    from . import kernel as _kernel
    from scipy.integrate import quad

    r = model.injectivity_radius if r_x is None else r_x
    if not math.isfinite(r) or r <= 0:
        raise PreconditionError(
            "a finite positive injectivity radius is required (pass r_x for "
            "elementary models)"
        )
    if not delta > r / 2.0:
        raise PreconditionError(f"delta = {delta} must exceed r_X/2 = {r / 2.0}")

    if f is None:
        weight = lambda rho: math.exp(-2.0 * k * _kernel.log_cosh(rho / 2.0))
        default_f = True
    else:
        weight = f
        default_f = False

    def weighted_sinh(rho: float) -> float:
        # f(rho)*sinh(rho + r/2) without overflowing the sinh factor; an
        # admissible f decays fast enough that the product is moderate
        value = weight(rho)
        if value <= 0.0:
            return 0.0
        return math.exp(math.log(value) + _kernel.log_sinh(rho + r / 2.0))

    if radius is None:
        radius = max(delta + 5.0, 6.0)
    if ball is None or ball.radius < radius or not ball.exhaustive:
        ball = enumerate_ball(model, z, w, radius, cap=cap)

    values = [weight(d) for d in ball.displacements.tolist()]
    ball_sum = math.fsum(values)
    inside_sum = math.fsum(v for v, d in zip(values, ball.displacements.tolist()) if d <= delta)

    if default_f:
        tail_allowance = _kernel.tail_bound(radius, r, k)
    else:
        edge = weight(radius) * 2.0 * math.cosh(r / 4.0) * math.sinh(radius) / math.sinh(r / 4.0)
        integral, _ = quad(weighted_sinh, radius, math.inf)
        tail_allowance = edge + integral / (2.0 * math.sinh(r / 4.0) ** 2)

    lhs = ball_sum + tail_allowance

    edge_term = weight(delta) * 2.0 * math.cosh(r / 4.0) * math.sinh(delta) / math.sinh(r / 4.0)
    integral, _ = quad(weighted_sinh, delta, math.inf)
    rhs = inside_sum + edge_term + integral / (2.0 * math.sinh(r / 4.0) ** 2)

    return CountingMarginReport(
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        tail_allowance=tail_allowance,
        element_count=len(ball),
        radius=radius,
    )


# ---------------------------------------------------------------------------
# Orbit-ball cache files: one element per line "a b c d displacement" at 17
# significant digits, after a header carrying the request parameters.  The
# cache is advisory; a header mismatch falls back to enumeration.
# ---------------------------------------------------------------------------


def _ball_header(model_label, z, w, radius, exhaustive) -> str:
    return (
        f"# model={model_label} zx={z.x:.17g} zy={z.y:.17g} "
        f"wx={w.x:.17g} wy={w.y:.17g} radius={radius:.17g} "
        f"exhaustive={int(exhaustive)}"
    )


def _ball_cache_path(cache_dir, model_label, z, w, radius) -> str:
    key = f"{model_label}|{z.x:.17g}|{z.y:.17g}|{w.x:.17g}|{w.y:.17g}|{radius:.17g}"
    digest = hashlib.sha1(key.encode()).hexdigest()[:20]
    return os.path.join(cache_dir, f"{model_label}-{digest}.ball")


def _save_cached_ball(cache_dir: str, ball: OrbitBall) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = _ball_cache_path(cache_dir, ball.model_label, ball.base_z, ball.base_w, ball.radius)
    lines = [_ball_header(ball.model_label, ball.base_z, ball.base_w, ball.radius, ball.exhaustive)]
    for row, d in zip(ball.entries, ball.displacements):
        lines.append(f"{row[0]:.17g} {row[1]:.17g} {row[2]:.17g} {row[3]:.17g} {d:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_cached_ball(cache_dir, model, z, w, radius) -> OrbitBall | None:
    path = _ball_cache_path(cache_dir, model.label, z, w, radius)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _ball_header(model.label, z, w, radius, True):
        return None
    rows = [line.split() for line in lines[1:] if line.strip()]
    if rows:
        data = np.array(rows, dtype=np.float64)
        entries, disp = data[:, :4], data[:, 4]
    else:
        entries, disp = np.zeros((0, 4)), np.zeros(0)
    return OrbitBall(model.label, z, w, radius, entries, disp, True)
