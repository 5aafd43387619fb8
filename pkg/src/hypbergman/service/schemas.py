"""Request/response models for the kernel-bounds service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

ModelName = Literal["trivial", "parabolic", "modular", "bolza", "gamma2"]


class PlanRequest(BaseModel):
    """Shared experiment plan; mirrors the harness SweepConfig."""

    model: ModelName = "bolza"
    k: list[int] = Field(default=[3, 4, 6, 8, 12], min_length=1)
    base_points: Optional[list[tuple[float, float]]] = None
    deltas: list[float] = Field(default=[0.0], min_length=1)
    count: int = Field(default=5, ge=1)
    radius: float = Field(default=6.5, gt=0)
    tail_tolerance: float = Field(default=1e-12, gt=0)
    seed: int = 0
    cap: int = Field(default=5_000_000, ge=1)
    cache: bool = True
    cache_dir: Optional[str] = None
    v_cap: Optional[float] = None
    n_samples: int = Field(default=16, ge=8)

    @field_validator("k")
    @classmethod
    def _weights_at_least_three(cls, values):
        if any(k < 3 for k in values):
            raise ValueError("all weights k must be >= 3")
        return values

    @field_validator("base_points")
    @classmethod
    def _points_in_half_plane(cls, points):
        if points is not None:
            for x, y in points:
                if not y > 0:
                    raise ValueError(f"base point ({x}, {y}) is not in the half-plane")
        return points


class RegimeSummary(BaseModel):
    rows: int
    min_margin: float


class SweepResponse(BaseModel):
    csv: str
    row_count: int
    error_rows: int
    resource_rows: int
    min_margin: Optional[float]
    regimes: dict[str, RegimeSummary]


class CountResponse(BaseModel):
    csv: str
    min_slack: float


class DiagResponse(BaseModel):
    csv: str


class VerifyRequest(BaseModel):
    sweep_csv: str
    count_csv: Optional[str] = None
    diag_csv: Optional[str] = None


class VerifyResponse(BaseModel):
    passed: bool
    exit_code: int
    report: list[str]
    min_margins: dict[str, float]
    counting_min_slack: Optional[float]


class ModelInfo(BaseModel):
    label: str
    kind: str
    injectivity_radius: float
    cusp_width: Optional[float]


class HealthResponse(BaseModel):
    status: str
    version: str
