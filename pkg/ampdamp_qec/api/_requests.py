"""Request models: validated run configurations for sweeps and CLI commands."""
from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import Field, model_validator

from ._base import RequestModel
from ._enums import GammaSpacing, OutputFormat


class GammaRange(RequestModel):
    """A grid of damping probabilities."""
    gamma_min: float = Field(0.0, ge=0, le=1, description="First grid point")
    gamma_max: float = Field(0.3, ge=0, le=1, description="Last grid point")
    steps: int = Field(31, ge=1, description="Number of grid points")
    spacing: GammaSpacing = Field(GammaSpacing.LINEAR, description="Linear or log spacing")

    @model_validator(mode="after")
    def _check_bounds(self) -> "GammaRange":
        if self.gamma_max < self.gamma_min:
            raise ValueError("gamma_max must not be below gamma_min")
        if self.spacing == GammaSpacing.LOG and self.gamma_min <= 0:
            raise ValueError("log spacing needs gamma_min > 0")
        return self

    def grid(self) -> List[float]:
        """Grid points in ascending order."""
        if self.steps == 1:
            return [self.gamma_min]
        if self.spacing == GammaSpacing.LOG:
            values = np.geomspace(self.gamma_min, self.gamma_max, self.steps)
        else:
            values = np.linspace(self.gamma_min, self.gamma_max, self.steps)
        return [min(max(float(v), 0.0), 1.0) for v in values]


class RunConfig(RequestModel):
    """Everything needed to reproduce one fidelity run."""
    command: str = Field(..., description="CLI subcommand")
    codes: List[str] = Field(..., min_length=1, description="Code selectors")
    recovery_mode: Optional[str] = Field(None, description="Recovery mode, default per code")
    gamma_range: GammaRange = Field(default_factory=GammaRange)
    truncation: Optional[int] = Field(
        None, ge=0, description="Damping order kept; None selects the per-size default"
    )
    exact: bool = Field(False, description="Force the untruncated channel")
    normalize: bool = Field(False, description="Report fidelity^(1/k) where relevant")
    out: Optional[Path] = Field(None, description="Output path, stdout when omitted")
    output_format: OutputFormat = Field(OutputFormat.CSV)


__all__ = ["GammaRange", "RunConfig"]
