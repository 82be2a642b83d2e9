"""
Output row schemas shared by the CLI, the sweep service and the report script.

Every row renders to string cells; CSV writes the cells under `columns()`,
JSON lines writes the same cells plus a `row` tag naming the schema.
"""

from __future__ import annotations

from fractions import Fraction
from typing import ClassVar, Dict, Iterable, List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel

from ..models.base import (
    AppearanceProfile,
    ConstructionResult,
    FamilyResult,
    GammaRecord,
    GrowthEvidence,
)

RowT = TypeVar("RowT", bound="OutputRow")


def format_positions(positions: Optional[Iterable[int]]) -> Optional[str]:
    if positions is None:
        return None
    return ",".join(str(p) for p in positions)


def format_rational(value: Optional[Fraction]) -> str:
    """p/q, or "inf" for an infinite constant."""
    if value is None:
        return "inf"
    return f"{value.numerator}/{value.denominator}"


class OutputRow(BaseModel):
    """Base class for every emitted row."""

    schema_name: ClassVar[str] = "row"

    @classmethod
    def columns(cls) -> Tuple[str, ...]:
        return tuple(cls.model_fields)

    def cells(self) -> Dict[str, str]:
        out: Dict[str, str] = {}
        for name in self.columns():
            value = getattr(self, name)
            if value is None:
                out[name] = ""
            elif isinstance(value, bool):
                out[name] = "true" if value else "false"
            else:
                out[name] = str(value)
        return out

    @classmethod
    def from_cells(cls: Type[RowT], cells: Dict[str, str]) -> RowT:
        values = {key: (None if value == "" else value) for key, value in cells.items() if key in cls.model_fields}
        return cls.model_validate(values)


class GammaRow(OutputRow):
    """Fixed gamma-sweep schema; unrequested columns stay empty."""

    schema_name: ClassVar[str] = "gamma"

    n: int
    gamma: int
    proven: bool
    witness: str
    minspan: Optional[int] = None
    maxspan: Optional[int] = None
    delta_num: Optional[int] = None
    delta_den: Optional[int] = None
    greedy_size: Optional[int] = None

    @classmethod
    def from_record(cls, record: GammaRecord) -> "GammaRow":
        return cls(
            n=record.n,
            gamma=record.gamma,
            proven=record.proven,
            witness=format_positions(record.witness),
            minspan=record.minspan,
            maxspan=record.maxspan,
            delta_num=record.delta_num,
            delta_den=record.delta_den,
            greedy_size=record.greedy_size,
        )


class VerdictRow(OutputRow):
    schema_name: ClassVar[str] = "verdict"

    seq: str
    n: int
    positions: str
    ok: bool
    failing_start: Optional[int] = None
    failing_length: Optional[int] = None


class FamilyRow(OutputRow):
    schema_name: ClassVar[str] = "family"

    n: int
    family: str
    positions: Optional[str] = None
    size: int = 0
    applicable: bool
    verified: Optional[bool] = None
    failing_start: Optional[int] = None
    failing_length: Optional[int] = None

    @classmethod
    def from_result(cls, result: FamilyResult) -> "FamilyRow":
        return cls(
            n=result.n,
            family=result.family,
            positions=format_positions(result.positions) or None,
            size=result.claimed_size,
            applicable=result.applicable,
            verified=result.verified,
            failing_start=result.failing.start if result.failing else None,
            failing_length=result.failing.length if result.failing else None,
        )


class GreedyRow(OutputRow):
    schema_name: ClassVar[str] = "greedy"

    seq: str
    n: int
    size: int
    positions: str
    verified: bool


class SpanRow(OutputRow):
    schema_name: ClassVar[str] = "span"

    seq: str
    n: int
    gamma: int
    proven: bool
    minspan: Optional[int] = None
    maxspan: Optional[int] = None
    minspan_witness: Optional[str] = None
    maxspan_witness: Optional[str] = None
    minspan_closed: Optional[int] = None
    maxspan_closed: Optional[int] = None


class ProfileRow(OutputRow):
    """One length of an appearance or recurrence profile; `value` is "inf" when unbounded."""

    schema_name: ClassVar[str] = "profile"

    seq: str
    kind: str
    window: int
    length: int
    value: str
    estimate: str
    stable: bool

    @classmethod
    def from_profile(cls, seq: str, profile: AppearanceProfile) -> List["ProfileRow"]:
        estimate = format_rational(profile.estimate)
        return [
            cls(
                seq=seq,
                kind=profile.kind,
                window=profile.window,
                length=length,
                value="inf" if value is None else str(value),
                estimate=estimate,
                stable=profile.stable,
            )
            for length, value in enumerate(profile.values, start=1)
        ]


class ConstructionRow(OutputRow):
    schema_name: ClassVar[str] = "construction"

    seq: str
    construction: str
    n: int
    size: int
    positions: str
    verified: bool
    appearance: str
    recurrence: Optional[str] = None
    kept_levels: Optional[int] = None
    c0: Optional[int] = None
    bound_achieved: Optional[bool] = None

    @classmethod
    def from_construction(
        cls, seq: str, result: ConstructionResult, appearance: Fraction, recurrence: Optional[Fraction]
    ) -> "ConstructionRow":
        return cls(
            seq=seq,
            construction="recurrent",
            n=result.n,
            size=result.size,
            positions=format_positions(result.positions),
            verified=result.verified,
            appearance=format_rational(appearance),
            recurrence=format_rational(recurrence),
            kept_levels=result.kept_levels,
            c0=result.c0,
            bound_achieved=result.bound_achieved,
        )


class ClassifyRow(OutputRow):
    schema_name: ClassVar[str] = "classify"

    seq: str
    classification: str
    n_points: str
    sizes: str
    size_sources: str
    constant_residual: float
    log_residual: float
    window: int
    nonrecurrent: int
    disjoint_witnesses: int

    @classmethod
    def from_evidence(cls, seq: str, evidence: GrowthEvidence) -> "ClassifyRow":
        return cls(
            seq=seq,
            classification=evidence.classification.value,
            n_points=format_positions(evidence.n_points),
            sizes=format_positions(evidence.sizes),
            size_sources=",".join(evidence.size_sources),
            constant_residual=round(evidence.constant_residual, 6),
            log_residual=round(evidence.log_residual, 6),
            window=evidence.window,
            nonrecurrent=len(evidence.nonrecurrent),
            disjoint_witnesses=evidence.disjoint_witnesses,
        )
