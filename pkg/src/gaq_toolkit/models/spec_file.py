"""Group definition files: the TOML fixtures under content/groups and user-supplied ones.

Expressions stay text here; ``engine.spec_builder`` parses them against the
declared symbol table.
"""
from __future__ import annotations

from typing import Annotated, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator


def _as_text(value: object) -> object:
    # TOML integers are accepted wherever an exact expression is expected
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    return value


ExprText = Annotated[str, BeforeValidator(_as_text)]


class ParameterSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    positive: bool = False
    nonzero: bool = False


class AuxiliarySpec(BaseModel):
    """A square-root symbol: ``name^2 = square``, composed as ``composition``."""

    model_config = ConfigDict(extra="forbid")

    name: str
    square: ExprText
    composition: ExprText
    identity: ExprText = "1"
    inverse: Optional[ExprText] = None


class ExtensionSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cocycle: Optional[ExprText] = None
    generating_function: Optional[ExprText] = None
    phase: str = "phi"
    scale: ExprText = "1"


class SubgroupSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    fixed: dict[str, ExprText]
    description: str = ""


class PolarizationSpec(BaseModel):
    """Basis elements are linear combinations of generator names, ``Xi`` included."""

    model_config = ConfigDict(extra="forbid")

    label: str
    basis: list[ExprText] = Field(min_length=1)
    subgroup: Optional[str] = None


class PowerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: ExprText
    power: ExprText


class ChartSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    polarization: str
    prefactor: ExprText
    reduced: dict[str, ExprText] = Field(min_length=1)
    section: dict[str, ExprText] = Field(default_factory=dict)
    powers: list[PowerSpec] = Field(default_factory=list)
    subgroup: Optional[str] = None


class HigherOrderSpec(BaseModel):
    """A higher-order polarization and the first-order chart of its basic operators."""

    model_config = ConfigDict(extra="forbid")

    label: str
    elements: list[ExprText] = Field(min_length=1)
    first_order: list[ExprText] = Field(default_factory=list)
    basic_chart: Optional[str] = None
    order: list[str] = Field(default_factory=list)


class SL2Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    H: ExprText
    E: ExprText
    F: ExprText


class RepresentationSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["polarized", "su2", "metaplectic"] = "polarized"
    chart: Optional[str] = None
    parameter: Optional[str] = None
    transition: dict[str, ExprText] = Field(default_factory=dict)
    higher_order: Optional[str] = None
    sl2: Optional[SL2Spec] = None
    compact: Optional[ExprText] = None
    fock_scale: Optional[ExprText] = None
    extra: list[str] = Field(default_factory=list)
    limit: Optional[dict[str, str]] = None
    breakdown_chart: Optional[str] = None


class BracketSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: str
    right: str
    value: ExprText


class AlgebraSpec(BaseModel):
    """A Lie algebra given directly by its commutator table."""

    model_config = ConfigDict(extra="forbid")

    generators: list[str] = Field(min_length=1)
    brackets: list[BracketSpec] = Field(default_factory=list)
    theta: dict[str, ExprText] = Field(default_factory=dict)


class VirasoroSpecFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modes: int = Field(default=4, ge=2)
    c: ExprText = "c"
    c_prime: ExprText = "cp"
    r: Optional[int] = Field(default=None, ge=1)
    variant: Literal["virasoro", "string"] = "virasoro"


class AnalysisSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seeds: list[ExprText] = Field(default_factory=list)
    diagonal: Optional[ExprText] = None
    max_dim: Optional[int] = Field(default=None, ge=1)
    anomaly: bool = False
    noether_relations: list[ExprText] = Field(default_factory=list)
    adjoint_point: dict[str, ExprText] = Field(default_factory=dict)


class GroupSpecFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    name: str
    description: str = ""
    coordinates: list[str] = Field(default_factory=list)
    parameters: list[ParameterSpec] = Field(default_factory=list)
    auxiliaries: list[AuxiliarySpec] = Field(default_factory=list)
    composition: dict[str, ExprText] = Field(default_factory=dict)
    identity: dict[str, ExprText] = Field(default_factory=dict)
    inverse: Optional[dict[str, ExprText]] = None
    extension: Optional[ExtensionSpec] = None
    subgroups: list[SubgroupSpec] = Field(default_factory=list)
    polarizations: list[PolarizationSpec] = Field(default_factory=list)
    charts: list[ChartSpec] = Field(default_factory=list)
    higher_order: list[HigherOrderSpec] = Field(default_factory=list)
    representation: Optional[RepresentationSpec] = None
    algebra: Optional[AlgebraSpec] = None
    virasoro: Optional[VirasoroSpecFile] = None
    analysis: AnalysisSpec = Field(default_factory=AnalysisSpec)

    @property
    def kind(self) -> str:
        if self.virasoro is not None:
            return "virasoro"
        if self.algebra is not None:
            return "algebra"
        return "group"

    @model_validator(mode="after")
    def _consistent(self) -> GroupSpecFile:
        sources = [self.coordinates and "group", self.algebra and "algebra", self.virasoro and "virasoro"]
        given = [s for s in sources if s]
        if len(given) != 1:
            raise ValueError("exactly one of coordinates, [algebra] or [virasoro] must be given")
        if self.coordinates:
            coords = set(self.coordinates)
            if set(self.composition) != coords:
                raise ValueError(f"composition must define exactly the coordinates {self.coordinates}")
            if set(self.identity) != coords:
                raise ValueError(f"identity must define exactly the coordinates {self.coordinates}")
            if self.inverse is not None and set(self.inverse) != coords:
                raise ValueError(f"inverse must define exactly the coordinates {self.coordinates}")
        labels = {p.label for p in self.polarizations}
        subgroups = {s.label for s in self.subgroups}
        for chart in self.charts:
            if chart.polarization not in labels:
                raise ValueError(f"chart {chart.label!r} names unknown polarization {chart.polarization!r}")
            if chart.subgroup is not None and chart.subgroup not in subgroups:
                raise ValueError(f"chart {chart.label!r} names unknown subgroup {chart.subgroup!r}")
        for pol in self.polarizations:
            if pol.subgroup is not None and pol.subgroup not in subgroups:
                raise ValueError(f"polarization {pol.label!r} names unknown subgroup {pol.subgroup!r}")
        return self
