"""Single settings object: defaults for bounds, sampling and output; overridable from env."""
from __future__ import annotations

import os
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class Settings(BaseModel):
    """
    Defaults shared by the CLI and the verification harnesses.
    Build with Settings(**Settings.load_from_env()) to pick up DPOHILL_* variables.
    """

    model_config = ConfigDict(frozen=True)

    depth: int = Field(12, ge=0)
    samples: int = Field(200, ge=0)
    seed: int = 0
    max_nodes: int = Field(6, ge=1)
    max_edges: int = Field(6, ge=0)
    output_format: Literal["text", "structured"] = "text"
    log_level: str = "WARNING"

    @classmethod
    def load_from_env(cls, prefix: str = "DPOHILL_", **defaults: Any) -> dict[str, Any]:
        """Load from os.environ with prefix and defaults. Returns dict for Settings(**Settings.load_from_env())."""
        result = dict(defaults)
        for key, value in os.environ.items():
            if key.startswith(prefix):
                name = key[len(prefix):].lower()
                if name in cls.model_fields:
                    result[name] = value
        return result

    @classmethod
    def from_env(cls, prefix: str = "DPOHILL_", **defaults: Any) -> Settings:
        return cls(**cls.load_from_env(prefix, **defaults))
