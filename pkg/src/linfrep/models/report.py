"""
Pydantic models for check reports.

Reports are deterministic given inputs, configuration and seed; only
``wall_time`` varies between runs.
"""

import json
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .. import __version__
from ..core.linfty import Witness


def _key_text(key) -> str:
    if isinstance(key, tuple):
        parts = [_key_text(k) for k in key]
        return "(" + ", ".join(parts) + ")"
    return str(key)


class ResidualWitness(BaseModel):
    """First offending component: arity, canonical key and rational residual."""

    arity: int = Field(description="Arity of the offending component")
    key: str = Field(description="Canonical input key")
    residual: Dict[str, str] = Field(description="Output key -> rational residual")

    @classmethod
    def from_witness(cls, witness: Witness) -> "ResidualWitness":
        residual = {"⊗".join(k) or "1": str(v) for k, v in sorted(witness.residual.items())}
        return cls(arity=witness.arity, key=_key_text(witness.key), residual=residual)


class CheckVerdict(BaseModel):
    name: str = Field(description="Identity checked")
    passed: bool = Field(description="Whether it holds up to the cap")
    cap: Optional[int] = Field(default=None, description="Arity or word length compared up to")
    witness: Optional[ResidualWitness] = Field(default=None, description="Residual witness on failure")
    detail: Optional[str] = Field(default=None, description="Free-text witness or note")

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}"
        if self.cap is not None:
            text += f" (up to {self.cap})"
        if self.witness is not None:
            terms = ", ".join(f"{k}: {v}" for k, v in self.witness.residual.items())
            text += f"\n    witness: arity {self.witness.arity} at {self.witness.key}: {{{terms}}}"
        if self.detail:
            text += f"\n    {self.detail}"
        return text


class Report(BaseModel):
    """Outcome of one CLI command."""

    tool_version: str = Field(default=__version__, description="linfrep version")
    command: str = Field(description="Command that produced the report")
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input path -> sha256 digest")
    caps: Dict[str, int] = Field(default_factory=dict, description="Caps in force")
    seed: int = Field(description="Random seed")
    verdicts: List[CheckVerdict] = Field(default_factory=list, description="Per-check verdicts")
    incidents: List[str] = Field(default_factory=list, description="Cross-route disagreements")
    wall_time: float = Field(default=0.0, description="Seconds spent")

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts) and not self.incidents

    def render_text(self) -> str:
        lines = [f"linfrep {self.tool_version} - {self.command}"]
        for path, digest in sorted(self.inputs.items()):
            lines.append(f"  input {path} sha256={digest[:16]}")
        caps = ", ".join(f"{k}={v}" for k, v in sorted(self.caps.items()))
        lines.append(f"  caps: {caps}; seed: {self.seed}")
        lines.extend(v.render() for v in self.verdicts)
        lines.extend(f"[INCIDENT] {text}" for text in self.incidents)
        passed = sum(v.passed for v in self.verdicts)
        lines.append(f"{passed}/{len(self.verdicts)} checks passed in {self.wall_time:.2f}s")
        return "\n".join(lines)

    def render_structured(self) -> str:
        data = self.model_dump(mode="json")
        data["passed"] = self.passed
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)

    def render(self, fmt: str) -> str:
        return self.render_structured() if fmt == "structured" else self.render_text()
