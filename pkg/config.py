"""
Validated configuration objects.

TaggerConfig travels with every trained model (it is written to the model
file's [meta] section); BootstrapConfig drives the self-training loop;
CliConfig is assembled by cli.py from the parsed arguments before any I/O.
"""
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from errors import ConfigError


class TaggerConfig(BaseModel):
    model_config = {"frozen": True, "extra": "forbid"}

    beam_width: int = Field(20, ge=0, description="states kept per position; 0 = exact search")
    max_suffix_len: int = Field(10, ge=0, description="longest suffix used by the unknown-word model")
    rare_threshold: int = Field(10, ge=0, description="words seen at most this often feed the suffix model")
    workers: int = Field(1, ge=1, description="threads used when tagging a whole corpus")


class BootstrapConfig(BaseModel):
    model_config = {"frozen": True, "extra": "forbid"}

    max_iterations: int = Field(5, ge=1)
    confidence_threshold: float = Field(0.9, gt=0.0, le=1.0)
    promote_cap: int = Field(1000, ge=1, description="max sentences promoted per iteration")
    stop_delta: float = Field(0.0, ge=0.0, description="minimum held-out accuracy gain to continue")


class CliConfig(BaseModel):
    model_config = {"extra": "forbid"}

    command: str
    paths: Dict[str, str] = Field(default_factory=dict)
    tagger: TaggerConfig = Field(default_factory=TaggerConfig)
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    output_format: str = Field("text", pattern="^(text|tsv)$")
    dump_dir: Optional[str] = None

    @model_validator(mode="after")
    def _required_paths(self):
        required = {
            "validate": ("corpus",),
            "train": ("train", "model"),
            "tag": ("model", "input", "output"),
            "eval": ("gold", "predicted"),
            "baseline": ("train", "gold"),
            "bootstrap": ("seed", "unlabeled", "heldout", "model"),
        }.get(self.command, ())
        missing = [p for p in required if not self.paths.get(p)]
        if missing:
            raise ValueError(f"{self.command}: missing required path(s): {', '.join(missing)}")
        return self


def build(cls, **values: Any):
    """Instantiate a config class, turning pydantic errors into ConfigError."""
    try:
        return cls(**values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first.get("loc", ())) or cls.__name__
        raise ConfigError(f"invalid configuration ({where}): {first.get('msg')}")
