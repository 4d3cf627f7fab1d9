# laurentnet/schemas/config.py
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from laurentnet.core import config
from laurentnet.core.algebra import get_context, is_prime
from laurentnet.core.construction import dimension_for
from laurentnet.core.errors import ConfigError, InvalidModulus, LaurentNetError
from laurentnet.core.lattice import ShrinkFactor


class PipelineConfig(BaseModel):
    b: int
    n: Optional[int] = Field(default=None, ge=1)
    d: Optional[int] = Field(default=None, ge=1, description="target dimension; selects n and projects")
    lattice_file: Optional[str] = None
    shrink: str = Field(description='Shrinking factor, e.g. "x^3,x^3"; one polynomial is broadcast')
    depth: Optional[int] = Field(default=None, ge=0)
    precision: Optional[int] = Field(default=None, ge=1)
    output_dir: str = Field(default_factory=lambda: config.OUTPUT_DIR)
    project_to: Optional[int] = Field(default=None, ge=1)
    verify: bool = True
    discrepancy: bool = True
    integrand: Optional[str] = None
    scan_degree: Optional[int] = Field(default=None, ge=0)
    method: str = Field(default="basis", pattern="^(basis|enumerate)$")

    model_config = ConfigDict(extra="forbid")

    @field_validator("b")
    @classmethod
    def check_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"b must be a prime, got {v}")
        return v

    @field_validator("shrink")
    @classmethod
    def check_shrink_text(cls, v: str) -> str:
        if not v or not v.strip():
            raise ValueError("shrink must not be empty")
        return v.strip()

    @model_validator(mode="after")
    def check_source(self) -> "PipelineConfig":
        if self.d is not None:
            if self.lattice_file is not None:
                raise ValueError("d selects the construction level and cannot be combined with lattice_file")
            level = dimension_for(self.b, self.d)
            if self.n is not None and self.n != level:
                raise ValueError(f"d={self.d} needs n={level}, got n={self.n}")
            self.n = level
            if self.d < self.b**level:
                if self.project_to not in (None, self.d):
                    raise ValueError(f"project_to={self.project_to} conflicts with d={self.d}")
                self.project_to = self.d
        if (self.n is None) == (self.lattice_file is None):
            raise ValueError("give exactly one of n or lattice_file")
        try:
            ShrinkFactor.parse(get_context(self.b), self.shrink)
        except LaurentNetError as e:
            raise ValueError(f"invalid shrink factor: {e.message}")
        if self.n is not None and self.project_to is not None and self.project_to > self.b**self.n:
            raise ValueError(f"project_to={self.project_to} exceeds d={self.b ** self.n}")
        return self

    def shrink_factor(self, d: int) -> ShrinkFactor:
        return ShrinkFactor.parse(get_context(self.b), self.shrink, d)


def load_pipeline_config(data: Dict[str, Any]) -> PipelineConfig:
    """Validate a config mapping, raising InvalidModulus / ConfigError instead of pydantic errors"""
    try:
        return PipelineConfig(**data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        if any(err["loc"] and err["loc"][0] == "b" and err["type"] != "missing" for err in e.errors()):
            raise InvalidModulus(f"Invalid pipeline config: {problems}", {"b": data.get("b")})
        raise ConfigError(f"Invalid pipeline config: {problems}")
