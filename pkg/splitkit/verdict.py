"""Three-valued certified answers and double-coset count reports."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class VerdictState(str, Enum):
    CERTIFIED_TRUE = "CertifiedTrue"
    CERTIFIED_FALSE = "CertifiedFalse"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class Verdict:
    """A finite-radius answer.

    Certified states are final; an Unresolved verdict may go either way at a
    larger radius.
    """

    state: VerdictState
    radius: int
    witness: Optional[str] = None
    reason: str = ""

    @classmethod
    def true(cls, radius: int, witness: Optional[str] = None, reason: str = "") -> "Verdict":
        return cls(VerdictState.CERTIFIED_TRUE, radius, witness, reason)

    @classmethod
    def false(cls, radius: int, witness: Optional[str] = None, reason: str = "") -> "Verdict":
        return cls(VerdictState.CERTIFIED_FALSE, radius, witness, reason)

    @classmethod
    def unresolved(cls, radius: int, reason: str = "") -> "Verdict":
        return cls(VerdictState.UNRESOLVED, radius, None, reason)

    @property
    def is_true(self) -> bool:
        return self.state is VerdictState.CERTIFIED_TRUE

    @property
    def is_false(self) -> bool:
        return self.state is VerdictState.CERTIFIED_FALSE

    @property
    def certified(self) -> bool:
        return self.state is not VerdictState.UNRESOLVED

    def negate(self) -> "Verdict":
        """Swap the certified states, keeping radius and witness."""
        if self.is_true:
            return Verdict(VerdictState.CERTIFIED_FALSE, self.radius, self.witness, self.reason)
        if self.is_false:
            return Verdict(VerdictState.CERTIFIED_TRUE, self.radius, self.witness, self.reason)
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "state": self.state.value,
            "radius": self.radius,
            "witness": self.witness,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class CosetVerdict:
    rep: str
    verdict: Verdict

    def to_dict(self) -> dict[str, Any]:
        return {"rep": self.rep, "verdict": self.verdict.to_dict()}


@dataclass(frozen=True)
class CountReport:
    """Count of double cosets KgH whose translate satisfies a crossing test.

    `exact` is set only when every scanned coset is certified and the set of
    crossing cosets did not change over the saturation window.
    """

    count: int
    per_coset: tuple[CosetVerdict, ...]
    radius: int
    exact: bool
    windows: dict[str, int] = field(default_factory=dict)

    @property
    def resolved(self) -> bool:
        return all(item.verdict.certified for item in self.per_coset)

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "exact": self.exact,
            "radius": self.radius,
            "windows": dict(self.windows),
            "per_coset": [item.to_dict() for item in self.per_coset],
        }
