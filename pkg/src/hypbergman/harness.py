"""Configuration-driven experiment runner: bound sweeps, counting studies,
diagonal growth studies, and CSV verification.

The sweep CSV schema is fixed:

    model,k,zx,zy,wx,wy,delta,regime,measured,tail,parabolic,bound,margin,elements,error

with floats at 17 significant digits and the seed recorded in a leading
comment line, so reruns with the same config are byte-identical.  The
counting study and diagonal study write their own schemas (see COUNT_COLUMNS
and DIAG_COLUMNS).  verify_csv is a pure function of CSV text.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundInput, classify_regime, envelope, theorem_bound
from .errors import ConfigurationError, PreconditionError, ResourceLimitError
from .groups import (
    DEFAULT_ELEMENT_CAP,
    OrbitBall,
    SurfaceModel,
    build_surface_model,
    congruence_cover,
    counting_inequality_margin,
    enumerate_ball,
)
from .halfplane import HalfPlanePoint, hyp_distance
from .kernel import KernelParams, diagonal_strip_profile, kernel_norm

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "VerificationReport",
    "MODEL_NAMES",
    "SWEEP_COLUMNS",
    "COUNT_COLUMNS",
    "DIAG_COLUMNS",
    "ELEMENTARY_BOUND_RADIUS",
    "default_base_points",
    "default_v_cap",
    "load_config",
    "parse_config_text",
    "build_model",
    "sample_pairs",
    "run_sweep",
    "run_count_study",
    "run_diag_study",
    "verify_csv",
]

MODEL_NAMES = ("trivial", "parabolic", "modular", "bolza", "gamma2")

SWEEP_COLUMNS = (
    "model,k,zx,zy,wx,wy,delta,regime,measured,tail,parabolic,bound,margin,elements,error"
)
COUNT_COLUMNS = "kind,model,k,zx,zy,wx,wy,delta,lhs,rhs,slack,allowance"
DIAG_COLUMNS = "model,kind,k,sup,envelope,ratio"

_E = math.e

#: effective injectivity radius used on the bound side for the trivial
#: model, whose true displacement infimum is the +infinity sentinel; any
#: finite positive value is admissible there, so the constants are computed
#: at this documented one.
ELEMENTARY_BOUND_RADIUS = 1.0


def default_base_points(model: str) -> list:
    """Documented sample bases; chosen so every local displacement at the
    base is at least the model's injectivity-radius value."""
    if model in ("modular", "gamma2"):
        return [HalfPlanePoint(0.0, 2.0), HalfPlanePoint(0.5, 2.0), HalfPlanePoint(0.0, _E)]
    if model == "bolza":
        return [
            HalfPlanePoint(0.0, 1.0),
            HalfPlanePoint(0.12, 0.93),
            HalfPlanePoint(-0.2, 1.18),
            HalfPlanePoint(0.05, 1.04),
            HalfPlanePoint(-0.07, 0.9),
        ]
    return [HalfPlanePoint(0.0, 1.0)]


def default_v_cap(model: str) -> float:
    # the cover's regimes reach twice as far, so its circles need more room
    if model == "modular":
        return 10.0
    if model == "gamma2":
        return 40.0
    return math.inf


@dataclass
class SweepConfig:
    """One experiment description: model, weights, pair plan, truncation."""

    model: str = "bolza"
    k_values: list = field(default_factory=lambda: [3, 4, 6, 8, 12])
    base_points: list | None = None
    deltas: list = field(default_factory=lambda: [0.0])
    count: int = 5
    radius: float = 6.5
    tail_tolerance: float = 1e-12
    seed: int = 0
    cap: int = DEFAULT_ELEMENT_CAP
    cache: bool = True
    cache_dir: str | None = None
    out: str | None = None
    v_cap: float | None = None
    n_samples: int = 16  # diagonal strip study only

    def resolved_bases(self) -> list:
        if self.base_points is not None:
            return list(self.base_points)
        return default_base_points(self.model)

    def resolved_v_cap(self) -> float:
        return self.v_cap if self.v_cap is not None else default_v_cap(self.model)

    def resolved_cache_dir(self) -> str | None:
        if not self.cache:
            return None
        return self.cache_dir if self.cache_dir is not None else ".hypbergman-cache"


def build_model(name: str) -> SurfaceModel:
    if name == "gamma2":
        return congruence_cover(build_surface_model("modular"), 2)
    return build_surface_model(name)


# ---------------------------------------------------------------------------
# config file: flat "key = value" lines, '#' comments; CLI flags override
# ---------------------------------------------------------------------------


def _parse_points(text: str) -> list:
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        z = complex(chunk.replace(" ", ""))
        points.append(HalfPlanePoint(z.real, z.imag))
    return points


def parse_config_text(text: str) -> SweepConfig:
    cfg = SweepConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key == "model":
                if value not in MODEL_NAMES:
                    raise ConfigurationError(f"unknown model {value!r}")
                cfg.model = value
            elif key == "k":
                cfg.k_values = [int(v) for v in value.split(",") if v.strip()]
            elif key == "base_points":
                cfg.base_points = _parse_points(value)
            elif key == "deltas":
                cfg.deltas = [float(v) for v in value.split(",") if v.strip()]
            elif key == "count":
                cfg.count = int(value)
            elif key == "radius":
                cfg.radius = float(value)
            elif key == "tail_tolerance":
                cfg.tail_tolerance = float(value)
            elif key == "seed":
                cfg.seed = int(value)
            elif key == "cap":
                cfg.cap = int(value)
            elif key == "cache":
                cfg.cache = value.lower() in ("on", "true", "1", "yes")
            elif key == "cache_dir":
                cfg.cache_dir = value
            elif key == "out":
                cfg.out = value
            elif key == "v_cap":
                cfg.v_cap = float(value)
            elif key == "n_samples":
                cfg.n_samples = int(value)
            else:
                raise ConfigurationError(f"unknown config key {key!r}")
        except ValueError as exc:
            raise ConfigurationError(f"config line {lineno}: {exc}") from exc
    return cfg


def load_config(path: str) -> SweepConfig:
    try:
        with open(path) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# pair sampling
# ---------------------------------------------------------------------------


def _circle_point(z: HalfPlanePoint, delta: float, theta: float) -> HalfPlanePoint:
    """Point at hyperbolic distance delta from z, at angle theta on the
    circle (image of the circle around i under the isometry moving i to z)."""
    wy = math.cosh(delta) + math.sinh(delta) * math.sin(theta)
    wx = math.sinh(delta) * math.cos(theta)
    return HalfPlanePoint(z.y * wx + z.x, z.y * wy)


def _pair_admissible(model: SurfaceModel, z: HalfPlanePoint, w: HalfPlanePoint, v_cap: float) -> bool:
    """Model-specific admission rules for sampled partners.

    Noncompact models keep w inside the fundamental region and horizontally
    within half a cusp width of z (so the nearest cusp translate of z is z
    itself), and away from the deep parts of the non-infinity cusps, where
    the counting inequality's packing argument has no room.
    """
    if w.y > v_cap:
        return False
    if model.label == "modular":
        return (
            abs(w.x) <= 0.5
            and w.x * w.x + w.y * w.y >= 1.0
            and abs(w.x - z.x) <= 0.5
        )
    if model.label == "gamma2":
        if abs(w.x - z.x) > 1.0:
            return False
        for cusp in (0.0, 1.0, -1.0):
            if w.y / ((w.x - cusp) ** 2 + w.y * w.y) > 0.5:
                return False
        return True
    return True


def sample_pairs(model: SurfaceModel, plan: SweepConfig, seed: int | None = None):
    """Deterministic (z, w, delta, regime) list for the plan.

    Each delta target gets plan.count pairs, cycling through the base
    points; w sits on the hyperbolic circle of radius delta about z at a
    seeded random angle, redrawn until the model's admission rules hold.
    delta is then recomputed from the points, never taken from the target.
    """
    r_x = model.injectivity_radius
    if not math.isfinite(r_x):
        r_x = ELEMENTARY_BOUND_RADIUS
    for target in plan.deltas:
        if not 0.0 <= target < r_x:
            raise ConfigurationError(
                f"delta target {target} outside [0, r_X) with r_X = {r_x}"
            )
    rng = np.random.default_rng(plan.seed if seed is None else seed)
    bases = plan.resolved_bases()
    v_cap = plan.resolved_v_cap()
    pairs = []
    for target in plan.deltas:
        for i in range(plan.count):
            z = bases[i % len(bases)]
            if target == 0.0:
                w = z
            else:
                for _ in range(1000):
                    theta = rng.uniform(0.0, 2.0 * math.pi)
                    w = _circle_point(z, target, theta)
                    if _pair_admissible(model, z, w, v_cap):
                        break
                else:
                    raise ConfigurationError(
                        f"no admissible partner for base ({z.x}, {z.y}) at "
                        f"delta {target}; loosen v_cap or the delta targets"
                    )
            delta = hyp_distance(z, w)
            pairs.append((z, w, delta, classify_regime(delta, r_x)))
    return pairs


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


@dataclass
class SweepRow:
    model: str
    k: int
    zx: float
    zy: float
    wx: float
    wy: float
    delta: float
    regime: str
    measured: float | None = None
    tail: float | None = None
    parabolic: float | None = None
    bound: float | None = None
    margin: float | None = None
    elements: int | None = None
    error: str = ""

    def to_csv(self) -> str:
        def g(x):
            return "" if x is None else f"{x:.17g}"

        fields = [
            self.model,
            str(self.k),
            f"{self.zx:.17g}",
            f"{self.zy:.17g}",
            f"{self.wx:.17g}",
            f"{self.wy:.17g}",
            f"{self.delta:.17g}",
            self.regime,
            g(self.measured),
            g(self.tail),
            g(self.parabolic),
            g(self.bound),
            g(self.margin),
            "" if self.elements is None else str(self.elements),
            _sanitize(self.error),
        ]
        return ",".join(fields)


def _sanitize(message: str) -> str:
    return message.replace(",", ";").replace("\n", " ").strip()


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list
    csv: str

    @property
    def min_margin(self) -> float | None:
        margins = [r.margin for r in self.rows if r.margin is not None]
        return min(margins) if margins else None


class _BallSource:
    """Per-run ball store: in-memory always, disk-backed when caching."""

    def __init__(self, model: SurfaceModel, config: SweepConfig):
        self.model = model
        self.cap = config.cap
        self.cache_dir = config.resolved_cache_dir()
        self._memo: dict = {}

    def get(self, z: HalfPlanePoint, w: HalfPlanePoint, radius: float) -> OrbitBall:
        key = (z.x, z.y, w.x, w.y, radius)
        if key not in self._memo:
            self._memo[key] = enumerate_ball(
                self.model, z, w, radius, cap=self.cap, cache_dir=self.cache_dir
            )
        return self._memo[key]


def _config_header(config: SweepConfig, kind: str) -> str:
    return (
        f"# hypbergman {kind} model={config.model} seed={config.seed} "
        f"radius={config.radius:.17g} cap={config.cap} "
        f"tail_tolerance={config.tail_tolerance:.17g}"
    )


def run_sweep(config: SweepConfig, model: SurfaceModel | None = None) -> SweepResult:
    """Evaluate kernel vs bound for every (pair, k); one CSV row each.

    Per-row precondition and resource failures land in the row's error
    column; the sweep itself always completes.
    """
    if model is None:
        model = build_model(config.model)
    if model.is_elementary and config.model == "parabolic":
        raise ConfigurationError("the parabolic model is not swept against bounds")
    if not config.k_values or any(k < 3 for k in config.k_values):
        raise ConfigurationError("all weights k must be >= 3")
    pairs = sample_pairs(model, config)
    source = _BallSource(model, config)
    rows = []
    for z, w, delta, regime in pairs:
        ball = None
        ball_error = None
        try:
            ball = source.get(z, w, config.radius)
        except ResourceLimitError as exc:
            ball_error = f"resource cap: {exc}"
        except (PreconditionError, ConfigurationError) as exc:
            ball_error = str(exc)
        for k in config.k_values:
            row = SweepRow(
                model=config.model,
                k=k,
                zx=z.x,
                zy=z.y,
                wx=w.x,
                wy=w.y,
                delta=delta,
                regime=regime,
            )
            if ball_error is not None:
                row.error = ball_error
                rows.append(row)
                continue
            try:
                params = KernelParams(
                    k=k,
                    truncation_radius=config.radius,
                    tail_tolerance=config.tail_tolerance,
                )
                ev = kernel_norm(model, ball, z, w, params)
                r_bound = model.injectivity_radius
                if not math.isfinite(r_bound):
                    r_bound = ELEMENTARY_BOUND_RADIUS
                if model.is_noncompact:
                    inp = BoundInput(
                        k=k, r_x=r_bound, delta=delta,
                        kind="noncompact", regime=regime, y=z.y, v=w.y,
                    )
                else:
                    inp = BoundInput(
                        k=k, r_x=r_bound, delta=delta,
                        kind="compact", regime=regime,
                    )
                bound = theorem_bound(inp)
                measured = ev.norm_value + ev.tail_bound
                row.measured = measured
                row.tail = ev.tail_bound
                row.parabolic = ev.parabolic_part
                row.bound = bound
                row.margin = bound - measured
                row.elements = ev.element_count
            except ResourceLimitError as exc:
                row.error = f"resource cap: {exc}"
            except (PreconditionError, ConfigurationError) as exc:
                row.error = str(exc)
            rows.append(row)

    buf = io.StringIO()
    buf.write(_config_header(config, "sweep") + "\n")
    buf.write(SWEEP_COLUMNS + "\n")
    for row in rows:
        buf.write(row.to_csv() + "\n")
    csv_text = buf.getvalue()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(csv_text)
    result = SweepResult(config=config, rows=rows, csv=csv_text)
    return result


# ---------------------------------------------------------------------------
# counting study
# ---------------------------------------------------------------------------


def run_count_study(config: SweepConfig, model: SurfaceModel | None = None):
    """Both counting inequalities on the config's pair grid.

    Emits two row kinds.  The weighted integral inequality is checked with
    the split point 0.9 * r_X (recorded in the delta column), which sits in
    its admissible range for every model; the plain cardinality bound is
    checked at the pair's distance, matching its use in the bound proofs.
    Elementary models use the compact convention with an effective radius of
    1 (any finite value is admissible for the one-element group).
    """
    if model is None:
        model = build_model(config.model)
    r_x = model.injectivity_radius
    r_eff = r_x if math.isfinite(r_x) else ELEMENTARY_BOUND_RADIUS
    split = 0.9 * r_eff
    pairs = sample_pairs(model, config)
    source = _BallSource(model, config)
    lines = [_config_header(config, "count"), COUNT_COLUMNS]
    min_slack = math.inf
    for z, w, delta, _ in pairs:
        ball = source.get(z, w, config.radius)
        for k in config.k_values:
            rep = counting_inequality_margin(
                model, z, w, split, k=k,
                radius=config.radius, r_x=r_eff, cap=config.cap, ball=ball,
            )
            lines.append(
                f"jlineq1,{config.model},{k},{z.x:.17g},{z.y:.17g},{w.x:.17g},"
                f"{w.y:.17g},{split:.17g},{rep.lhs:.17g},{rep.rhs:.17g},"
                f"{rep.slack:.17g},{rep.tail_allowance:.17g}"
            )
            min_slack = min(min_slack, rep.slack + rep.tail_allowance)
        n = ball.count_within(delta)
        bound = math.sinh(delta + r_eff) / math.sinh(r_eff)
        lines.append(
            f"jlineq2,{config.model},0,{z.x:.17g},{z.y:.17g},{w.x:.17g},"
            f"{w.y:.17g},{delta:.17g},{n:.17g},{bound:.17g},"
            f"{bound - n:.17g},0"
        )
        min_slack = min(min_slack, bound - n)
    csv_text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(csv_text)
    return csv_text, min_slack


# ---------------------------------------------------------------------------
# diagonal growth study
# ---------------------------------------------------------------------------


def run_diag_study(config: SweepConfig, model: SurfaceModel | None = None):
    """Diagonal growth rows: strip-boundary sup for the modular model,
    on-diagonal maxima over the base points for compact models."""
    if model is None:
        model = build_model(config.model)
    lines = [_config_header(config, "diag"), DIAG_COLUMNS]
    source = _BallSource(model, config)
    for k in config.k_values:
        params = KernelParams(
            k=k, truncation_radius=config.radius, tail_tolerance=config.tail_tolerance
        )
        if model.label == "modular":
            profile = diagonal_strip_profile(
                model, k, config.n_samples, params, cap=config.cap,
                cache_dir=config.resolved_cache_dir(),
            )
            sup = max(ev.norm_value for _, ev in profile)
            env = envelope(k, 0.0, model.injectivity_radius, "diag-noncompact")
            kind = "strip"
        elif model.kind == "compact":
            values = []
            for z in config.resolved_bases():
                ball = source.get(z, z, config.radius)
                values.append(kernel_norm(model, ball, z, z, params).norm_value)
            sup = max(values)
            env = envelope(k, 0.0, model.injectivity_radius, "diag-compact")
            kind = "diagonal"
        else:
            raise ConfigurationError(
                f"diagonal study supports modular or compact models, not {config.model}"
            )
        lines.append(f"{config.model},{kind},{k},{sup:.17g},{env:.17g},{sup / env:.17g}")
    csv_text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(csv_text)
    return csv_text


# ---------------------------------------------------------------------------
# verification (pure function of CSV content)
# ---------------------------------------------------------------------------


def _split_csv(text: str, expected_header: str, kind: str):
    rows = []
    header_seen = False
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if not header_seen:
            if line.strip() != expected_header:
                raise ConfigurationError(
                    f"{kind} CSV header mismatch: expected '{expected_header}', "
                    f"got '{line.strip()}'"
                )
            header_seen = True
            continue
        rows.append(line.split(","))
    if not header_seen:
        raise ConfigurationError(f"{kind} CSV has no header row")
    return rows


@dataclass
class VerificationReport:
    regimes: dict
    counting_min_slack: float | None
    diag_ratios: dict
    violations: list
    resource_rows: int
    total_rows: int

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def exit_code(self) -> int:
        if self.violations:
            return 1
        if self.resource_rows:
            return 3
        return 0

    def lines(self) -> list:
        out = [f"rows checked: {self.total_rows}"]
        for regime in sorted(self.regimes):
            count, min_margin = self.regimes[regime]
            out.append(
                f"regime {regime}: {count} rows, min margin {min_margin:.6g}"
            )
        if self.counting_min_slack is not None:
            out.append(f"counting: min slack+allowance {self.counting_min_slack:.6g}")
        for (model, kind), ratios in sorted(self.diag_ratios.items()):
            ks = sorted(ratios)
            spread = max(ratios.values()) / min(ratios.values())
            out.append(
                f"diag {model}/{kind}: ratio at k={ks[0]} is {ratios[ks[0]]:.6g}, "
                f"at k={ks[-1]} is {ratios[ks[-1]]:.6g} (spread {spread:.3f})"
            )
        if self.resource_rows:
            out.append(f"resource-cap rows: {self.resource_rows}")
        for v in self.violations:
            out.append(f"VIOLATION: {v}")
        out.append("verdict: " + ("PASS" if self.passed else "FAIL"))
        return out


def verify_csv(
    sweep_csv: str,
    count_csv: str | None = None,
    diag_csv: str | None = None,
) -> VerificationReport:
    """Aggregate pass/fail from harness CSV text.

    A certified bound fails when a sweep margin is negative (the tail is
    already folded into the measured column) or a counting slack drops below
    its tail allowance; diagonal ratios are reported, not gated.
    """
    regimes: dict = {}
    violations: list = []
    resource_rows = 0
    total = 0
    for parts in _split_csv(sweep_csv, SWEEP_COLUMNS, "sweep"):
        if len(parts) != 15:
            raise ConfigurationError(
                f"sweep row has {len(parts)} columns, expected 15"
            )
        total += 1
        error = parts[14]
        if error:
            if "cap" in error:
                resource_rows += 1
            else:
                violations.append(f"row error: {error}")
            continue
        regime = parts[7]
        margin = float(parts[12])
        count, min_margin = regimes.get(regime, (0, math.inf))
        regimes[regime] = (count + 1, min(min_margin, margin))
        if margin < 0.0:
            violations.append(
                f"bound violated: model={parts[0]} k={parts[1]} delta={parts[6]} "
                f"margin={margin:.6g}"
            )

    counting_min = None
    if count_csv is not None:
        counting_min = math.inf
        for parts in _split_csv(count_csv, COUNT_COLUMNS, "count"):
            total += 1
            slack = float(parts[10])
            allowance = float(parts[11])
            counting_min = min(counting_min, slack + allowance)
            if slack + allowance < 0.0:
                violations.append(
                    f"counting violated: {parts[0]} model={parts[1]} "
                    f"delta={parts[7]} slack={slack:.6g}"
                )

    diag_ratios: dict = {}
    if diag_csv is not None:
        for parts in _split_csv(diag_csv, DIAG_COLUMNS, "diag"):
            total += 1
            key = (parts[0], parts[1])
            diag_ratios.setdefault(key, {})[int(parts[2])] = float(parts[5])

    return VerificationReport(
        regimes=regimes,
        counting_min_slack=counting_min,
        diag_ratios=diag_ratios,
        violations=violations,
        resource_rows=resource_rows,
        total_rows=total,
    )
