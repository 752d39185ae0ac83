"""
Session configuration.

Caps, seed and random-instance parameters for a checking session, read from
the environment (prefix ``LINFREP_``) or a local ``.env`` file.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings


class SessionConfig(BaseSettings):
    """Session settings."""

    # Truncation caps
    arity_cap: int = Field(default=4, description="Highest arity at which families are computed")
    word_cap: int = Field(default=6, description="CE word-length cap W")
    weight_cap: int = Field(default=3, description="Highest Poisson weight checked")

    # Reproducibility
    seed: int = Field(default=42, description="Random seed recorded in every report")

    # Random instance generator
    max_dim: int = Field(default=3, description="Largest dimension of generated spaces")
    degree_min: int = Field(default=-2, description="Lowest degree of generated basis elements")
    degree_max: int = Field(default=2, description="Highest degree of generated basis elements")
    sparsity: float = Field(default=0.5, description="Probability that a generated entry is zero")

    # Execution
    jobs: int = Field(default=1, description="Worker threads for independent sub-checks")
    report_format: Literal["text", "structured"] = Field(default="text", description="Report rendering")

    @field_validator("arity_cap", "word_cap", "weight_cap", "max_dim", "jobs")
    @classmethod
    def _at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("sparsity")
    @classmethod
    def _probability(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError("sparsity must lie in [0, 1]")
        return v

    @model_validator(mode="after")
    def _degree_range(self) -> "SessionConfig":
        if self.degree_min > self.degree_max:
            raise ValueError(f"degree_min {self.degree_min} exceeds degree_max {self.degree_max}")
        return self

    class Config:
        env_file = ".env"
        env_prefix = "LINFREP_"


@lru_cache()
def get_settings() -> SessionConfig:
    """Get session settings (cached)."""
    return SessionConfig()
