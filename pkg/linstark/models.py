"""
Pydantic models for the linear-potential Stark toolkit.
"""

import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field, model_validator

Parity = Literal["even", "odd"]
ZeroKind = Literal["ai", "ai_prime"]
SystemName = Literal["bouncer", "symmetric"]
SumFamily = Literal["bouncer", "symlin_even", "symlin_odd"]


class AiryPair(BaseModel):
    """Ai, Ai', Bi, Bi' at a single real argument."""
    x: float
    ai: float
    aip: float
    bi: float
    bip: float

    @property
    def aipp(self) -> float:
        """Ai''(x), reconstructed from the Airy equation."""
        return self.x * self.ai

    @property
    def wronskian(self) -> float:
        """Ai·Bi' − Ai'·Bi, equal to 1/π."""
        return self.ai * self.bip - self.aip * self.bi


class ZeroTable(BaseModel):
    """
    Magnitudes of the first zeros of Ai (zeta) and Ai' (chi).

    Lists are stored 0-based; use zeta_n/chi_n for the 1-indexed labels.
    """
    zeta: List[float]
    chi: List[float]
    residual_tol: float = Field(1e-12, gt=0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_ordering(self) -> "ZeroTable":
        if len(self.zeta) != len(self.chi):
            raise ValueError("zeta and chi tables must have the same length")
        for values, name in ((self.zeta, "zeta"), (self.chi, "chi")):
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{name} is not strictly increasing")
        for n, (z, c) in enumerate(zip(self.zeta, self.chi), start=1):
            if not c < z:
                raise ValueError(f"interleaving violated: chi_{n} >= zeta_{n}")
            if n < len(self.chi) and not z < self.chi[n]:
                raise ValueError(f"interleaving violated: zeta_{n} >= chi_{n + 1}")
        return self

    @property
    def count(self) -> int:
        return len(self.zeta)

    def zeta_n(self, n: int) -> float:
        return self.zeta[n - 1]

    def chi_n(self, n: int) -> float:
        return self.chi[n - 1]


class PhysicalScales(BaseModel):
    """
    Mass, slope and Planck constant of a linear potential V = F z.

    The derived length rho = (hbar^2 / 2 m F)^(1/3) and energy e0 = F rho
    convert the dimensionless Airy results to physical units.
    """
    mass: float = Field(0.5, gt=0)
    slope: float = Field(1.0, gt=0)
    hbar: float = Field(1.0, gt=0)

    model_config = {"frozen": True}

    @computed_field
    @property
    def rho(self) -> float:
        return (self.hbar ** 2 / (2.0 * self.mass * self.slope)) ** (1.0 / 3.0)

    @computed_field
    @property
    def e0(self) -> float:
        return self.slope * self.rho

    @classmethod
    def dimensionless(cls) -> "PhysicalScales":
        """Scales with rho = e0 = 1."""
        return cls(mass=0.5, slope=1.0, hbar=1.0)

    @property
    def is_dimensionless(self) -> bool:
        return math.isclose(self.rho, 1.0) and math.isclose(self.e0, 1.0)


class StarkInput(BaseModel):
    """An added uniform force fbar, with delta = fbar / F."""
    fbar: float
    delta: float

    model_config = {"frozen": True}

    @classmethod
    def from_delta(cls, delta: float, scales: PhysicalScales) -> "StarkInput":
        return cls(fbar=delta * scales.slope, delta=delta)

    @classmethod
    def from_force(cls, fbar: float, scales: PhysicalScales) -> "StarkInput":
        return cls(fbar=fbar, delta=fbar / scales.slope)


class BouncerLevel(BaseModel):
    """A quantum-bouncer eigenstate."""
    n: int = Field(..., ge=1)
    zeta_n: float
    energy: float


class SymLevel(BaseModel):
    """A parity-labelled eigenstate of V = F|z|."""
    parity: Parity
    n: int = Field(..., ge=1)
    dimensionless_energy: float
    energy: float


class Expectations(BaseModel):
    """Closed-form expectation values of a stationary state."""
    mean_V: float
    mean_T: float
    mean_z: float
    mean_abs_z: Optional[float] = None


class PerturbedState(BaseModel):
    """A root of the perturbed symmetric-well eigenvalue condition."""
    parity: Parity
    n: int = Field(..., ge=1)
    energy: float
    delta: float
    f_r: float
    f_l: float
    rho_r: float
    rho_l: float
    alpha_ratio: float
    residual: float


class SumRuleResult(BaseModel):
    """Truncated perturbation sum with its integral tail correction."""
    system: SumFamily
    n: int
    partial_sum: float
    k_max: int
    tail_estimate: float
    target: float
    relative_error: float
    tail_stable: bool = True


class ThirdOrderResult(BaseModel):
    """Third-order double sum, in units of delta^3 e0."""
    system: SystemName
    parity: Optional[Parity] = None
    n: int
    estimate: float
    k_max: int
    tail_bound: float
    target: float


class GridSpec(BaseModel):
    """Uniform grid with Dirichlet ends, in length units."""
    z_min: float
    z_max: float
    points: int = Field(..., ge=3)
    boundary: Literal["dirichlet"] = "dirichlet"

    @model_validator(mode="after")
    def _check_interval(self) -> "GridSpec":
        if not self.z_min < self.z_max:
            raise ValueError("z_min must be smaller than z_max")
        return self

    @property
    def spacing(self) -> float:
        return (self.z_max - self.z_min) / (self.points - 1)


class RichardsonResult(BaseModel):
    """Finite-difference energies on three nested grids and their extrapolation."""
    system: SystemName
    delta: float
    points: List[int]
    raw: List[List[float]]
    energies: List[float]
    observed_order: List[float]


class ReportRow(BaseModel):
    """One analytic-versus-comparison line of a report."""
    system: str
    parity: Optional[str] = None
    n: Optional[int] = None
    delta: Optional[float] = None
    quantity: str
    analytic_value: float
    comparison_value: Optional[float] = None
    method: str
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None
    units: Literal["dimensionless", "physical"] = "dimensionless"

    @model_validator(mode="after")
    def _fill_errors(self) -> "ReportRow":
        if self.comparison_value is not None:
            diff = abs(self.analytic_value - self.comparison_value)
            self.abs_error = diff
            self.rel_error = diff / abs(self.analytic_value) if self.analytic_value else diff
        return self


class StarkReport(BaseModel):
    """Per-level comparison of the Stark shift obtained by every route."""
    system: SystemName
    parity: Optional[Parity] = None
    n: int
    delta: float
    unperturbed: float
    exact: float
    expansion_coefficients: Dict[str, str]
    expansion_estimate: float
    pt_second_order: float
    wkb: float
    oracle: Optional[float] = None
    rows: List[ReportRow]


class CheckResult(BaseModel):
    """Outcome of one acceptance check."""
    name: str
    passed: bool
    detail: str
    value: Optional[float] = None


class ErrorDetail(BaseModel):
    """Error detail information."""
    type: str
    message: str


class ErrorResponse(BaseModel):
    """Error response body."""
    error: ErrorDetail
