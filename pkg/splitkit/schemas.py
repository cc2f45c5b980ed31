"""
File formats and per-run configuration.

Words are strings of space-separated symbols ("x y' x"); "1" or "" is the
identity. Every model rejects unknown keys.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCHEMA_VERSION = 1


class FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TableModel(FileModel):
    elements: list[str]
    identity: int = 0
    product: list[list[int]]
    generators: dict[str, int]


class GroupFile(FileModel):
    """A group with one of the four word-problem strategies."""

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str = "G"
    generators: list[str] = Field(default_factory=list)
    strategy: Literal["free", "finite-table", "rewriting", "splitting"] = "free"
    table: Optional[TableModel] = None
    relators: list[str] = Field(default_factory=list)
    rules: Optional[list[tuple[str, str]]] = None
    splitting: Optional["SplittingFile"] = None
    subgroups: dict[str, list[str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_strategy(self) -> "GroupFile":
        if self.strategy == "finite-table" and self.table is None:
            raise ValueError("finite-table groups need a table")
        if self.strategy == "splitting" and self.splitting is None:
            raise ValueError("splitting groups need a splitting")
        if self.strategy == "rewriting" and not self.relators and self.rules is None:
            raise ValueError("rewriting groups need relators or rules")
        return self


class SplittingFile(FileModel):
    """A one-edge graph of groups, optionally tied to an ambient group."""

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str = "s"
    kind: Literal["amalgam", "hnn"]
    vertices: dict[Literal["A", "B"], GroupFile]
    edge_generators: list[str] = Field(default_factory=list)
    images: dict[Literal["A", "B", "alpha1", "alpha2"], list[str]]
    stable_letter: Optional[str] = None
    transversals: dict[Literal["A", "B", "T1", "T2"], list[str]] = Field(default_factory=dict)
    ambient: Optional[GroupFile] = None
    pullback: dict[str, str] = Field(default_factory=dict)
    pushforward: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_shape(self) -> "SplittingFile":
        expected = {"A", "B"} if self.kind == "amalgam" else {"alpha1", "alpha2"}
        if set(self.images) != expected:
            raise ValueError(f"{self.kind} splittings need images for {sorted(expected)}")
        if self.ambient is not None and not (self.pullback and self.pushforward):
            raise ValueError("an ambient group needs both pullback and pushforward maps")
        return self


class SlopeRef(FileModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    slope: str

    @field_validator("slope")
    @classmethod
    def check_slope(cls, value: str) -> str:
        if value.count("/") != 1:
            raise ValueError("slope must look like p/q")
        return value


class BuiltinRef(FileModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    builtin: str


class PosetFile(FileModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    elements: list[str]
    involution: dict[str, str]
    order: list[tuple[str, str]] = Field(default_factory=list)


GroupFile.model_rebuild()


class RunConfig(FileModel):
    """One CLI invocation: command, inputs, radii, windows and outputs."""

    command: str
    inputs: dict[str, list[str]] = Field(default_factory=dict)
    radius: int = Field(default=6, ge=0)
    depth: int = Field(default=3, ge=0)
    probe_radius: Optional[int] = Field(default=None, ge=0)
    translate_radius: Optional[int] = Field(default=None, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    budget_mb: Optional[int] = Field(default=None, ge=1)
    growth_window: Optional[int] = Field(default=None, ge=2)
    stable_window: Optional[int] = Field(default=None, ge=2)
    json_path: Optional[str] = None
    dot_path: Optional[str] = None
    options: dict[str, str] = Field(default_factory=dict)
