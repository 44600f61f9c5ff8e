"""Toolkit configuration, validated from config.toml."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from gaq_toolkit.models.spec_file import ExprText


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    jet_order: int = Field(default=6, ge=1)
    max_polarization_dim: Optional[int] = Field(default=None, ge=1)
    anomaly_max_quotient_dim: int = Field(default=4, ge=2)


class RepresentationConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    cutoff: int = Field(default=12, ge=4)
    su2_lambda: int = Field(default=1, ge=0)


class VirasoroConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    modes: int = Field(default=4, ge=2)
    level: int = Field(default=4, ge=1)
    dimension: int = Field(default=1, ge=1)
    oscillator_scale: ExprText = "1"
    zero_mode: ExprText = "0"
    variant: Literal["virasoro", "string"] = "virasoro"


class ReportConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    directory: str = "reports"
    schema_version: str = "1"
    indent: int = Field(default=2, ge=0)


class LoggingConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"


class ToolkitConfig(BaseModel):
    model_config = ConfigDict(extra="ignore", populate_by_name=True)

    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    representation: RepresentationConfig = Field(default_factory=RepresentationConfig)
    virasoro: VirasoroConfig = Field(default_factory=VirasoroConfig)
    report: ReportConfig = Field(default_factory=ReportConfig)
    log: LoggingConfig = Field(default_factory=LoggingConfig, alias="logging")
