# Domain types shared by every attractor module

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MAX_ALPHABET_SIZE = 256


class NumerationKind(str, Enum):
    BASE = "base"
    FIBONACCI = "fibonacci"
    TRIBONACCI = "tribonacci"


class GrowthClass(str, Enum):
    CONSTANT = "constant"
    LOGARITHMIC = "logarithmic"
    INCONCLUSIVE = "inconclusive"


class Word(BaseModel):
    """Finite word over the integer alphabet [0..alphabet_size-1], indexed from 0."""

    model_config = ConfigDict(frozen=True)

    symbols: Tuple[int, ...] = ()
    alphabet_size: int = Field(2, ge=1, le=MAX_ALPHABET_SIZE)

    @model_validator(mode="after")
    def validate_symbols(self):
        for symbol in self.symbols:
            if symbol < 0 or symbol >= self.alphabet_size:
                raise ValueError(f"symbol {symbol} outside alphabet of size {self.alphabet_size}")
        return self

    @classmethod
    def from_digits(cls, digits: str, alphabet_size: Optional[int] = None) -> "Word":
        """Build from a string of decimal digits, e.g. "0110"."""
        symbols = tuple(int(ch) for ch in digits)
        if alphabet_size is None:
            alphabet_size = max(symbols, default=0) + 1
        return cls(symbols=symbols, alphabet_size=max(alphabet_size, 1))

    @classmethod
    def from_string(cls, text: str) -> "Word":
        """Build from arbitrary letters; symbols are ranks among the sorted distinct letters."""
        letters = sorted(set(text))
        rank = {letter: index for index, letter in enumerate(letters)}
        return cls(symbols=tuple(rank[ch] for ch in text), alphabet_size=max(len(letters), 1))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        if self.alphabet_size <= 10:
            return "".join(str(symbol) for symbol in self.symbols)
        return ",".join(str(symbol) for symbol in self.symbols)

    def as_bytes(self) -> bytes:
        return bytes(self.symbols)

    def prefix(self, n: int) -> "Word":
        return Word(symbols=self.symbols[:n], alphabet_size=self.alphabet_size)

    def distinct_symbols(self) -> int:
        return len(set(self.symbols))


class Morphism(BaseModel):
    """Prolongable substitution with an optional coding applied after iteration."""

    model_config = ConfigDict(frozen=True)

    alphabet_size: int = Field(..., ge=1, le=MAX_ALPHABET_SIZE)
    images: Tuple[Tuple[int, ...], ...]
    seed: int = 0
    coding: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def validate_morphism(self):
        if len(self.images) != self.alphabet_size:
            raise ValueError("one image per symbol is required")
        for symbol, image in enumerate(self.images):
            if not image:
                raise ValueError(f"image of {symbol} is empty")
            for target in image:
                if target < 0 or target >= self.alphabet_size:
                    raise ValueError(f"image of {symbol} uses symbol {target} outside the alphabet")
        if not 0 <= self.seed < self.alphabet_size:
            raise ValueError(f"seed {self.seed} outside the alphabet")
        seed_image = self.images[self.seed]
        if seed_image[0] != self.seed or len(seed_image) < 2:
            raise ValueError(f"morphism is not prolongable on seed {self.seed}")
        if self.coding is not None:
            if len(self.coding) != self.alphabet_size:
                raise ValueError("coding must map every symbol")
            if any(out < 0 or out >= MAX_ALPHABET_SIZE for out in self.coding):
                raise ValueError("coding output outside the supported alphabet")
        return self

    @property
    def output_alphabet_size(self) -> int:
        if self.coding is None:
            return self.alphabet_size
        return max(self.coding) + 1


class NumerationSystem(BaseModel):
    """Base-k, Zeckendorf (Fibonacci) or Tribonacci greedy numeration."""

    model_config = ConfigDict(frozen=True)

    kind: NumerationKind = NumerationKind.BASE
    base: int = Field(2, ge=2)

    @model_validator(mode="after")
    def validate_base(self):
        if self.kind != NumerationKind.BASE and self.base != 2:
            raise ValueError(f"{self.kind.value} numeration uses the digit alphabet {{0,1}}")
        return self

    @property
    def digit_count(self) -> int:
        return self.base


class Dfao(BaseModel):
    """Deterministic finite automaton with output, read most-significant digit first."""

    model_config = ConfigDict(frozen=True)

    state_count: int = Field(..., ge=1)
    initial: int = 0
    transitions: Tuple[Tuple[int, ...], ...]
    outputs: Tuple[int, ...]
    base: int = Field(2, ge=2)

    @model_validator(mode="after")
    def validate_tables(self):
        if not 0 <= self.initial < self.state_count:
            raise ValueError(f"initial state {self.initial} out of range")
        if len(self.transitions) != self.state_count or len(self.outputs) != self.state_count:
            raise ValueError("transition and output tables need one row per state")
        for state, row in enumerate(self.transitions):
            if len(row) != self.base:
                raise ValueError(f"state {state} must define a transition for every digit 0..{self.base - 1}")
            if any(target < 0 or target >= self.state_count for target in row):
                raise ValueError(f"state {state} has a transition to an unknown state")
        if any(out < 0 or out >= MAX_ALPHABET_SIZE for out in self.outputs):
            raise ValueError("output symbol outside the supported alphabet")
        return self

    @property
    def alphabet_size(self) -> int:
        return max(self.outputs) + 1


class SequenceSpec(BaseModel):
    """An infinite word: a builtin, a morphic fixed point or a DFAO over a numeration system."""

    model_config = ConfigDict(frozen=True)

    name: str
    morphism: Optional[Morphism] = None
    dfao: Optional[Dfao] = None
    numeration: Optional[NumerationSystem] = None

    @model_validator(mode="after")
    def validate_source(self):
        has_morphism = self.morphism is not None
        has_dfao = self.dfao is not None
        if has_morphism == has_dfao:
            raise ValueError("exactly one of morphism or dfao must be given")
        if has_dfao:
            if self.numeration is None:
                raise ValueError("a DFAO sequence needs a numeration system")
            if self.numeration.digit_count != self.dfao.base:
                raise ValueError("DFAO base does not match the numeration digit alphabet")
        return self

    @property
    def alphabet_size(self) -> int:
        if self.morphism is not None:
            return self.morphism.output_alphabet_size
        return self.dfao.alphabet_size


class FactorOccurrence(BaseModel):
    """One occurrence [start..start+length-1] of a factor."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(..., ge=0)
    length: int = Field(..., ge=1)

    @property
    def end(self) -> int:
        return self.start + self.length - 1


class AttractorSet(BaseModel):
    """Strictly increasing positions inside a prefix of length n."""

    model_config = ConfigDict(frozen=True)

    positions: Tuple[int, ...]
    n: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_positions(self):
        if self.n >= 1 and not self.positions:
            raise ValueError("an attractor of a nonempty prefix cannot be empty")
        previous = -1
        for position in self.positions:
            if position <= previous:
                raise ValueError("positions must be strictly increasing")
            if position >= self.n:
                raise ValueError(f"position {position} outside [0..{self.n - 1}]")
            previous = position
        return self

    @classmethod
    def of(cls, positions: Iterable[int], n: int) -> "AttractorSet":
        return cls(positions=tuple(sorted(set(positions))), n=n)

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def span(self) -> int:
        return self.positions[-1] - self.positions[0] if self.positions else 0

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.positions)


class LengthRange(BaseModel):
    """Set of positive lengths as a normalised union of closed intervals."""

    model_config = ConfigDict(frozen=True)

    intervals: Tuple[Tuple[int, int], ...] = ()

    @field_validator("intervals", mode="before")
    @classmethod
    def normalise(cls, value):
        spans = sorted((int(lo), int(hi)) for lo, hi in value)
        merged: List[Tuple[int, int]] = []
        for lo, hi in spans:
            if lo < 1:
                raise ValueError(f"lengths must be positive, got interval [{lo}..{hi}]")
            if hi < lo:
                raise ValueError(f"empty interval [{lo}..{hi}]")
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return tuple(merged)

    @classmethod
    def between(cls, low: int, high: int) -> "LengthRange":
        if high < low:
            return cls()
        return cls(intervals=((low, high),))

    @classmethod
    def full(cls, n: int) -> "LengthRange":
        return cls.between(1, n)

    @classmethod
    def of(cls, lengths: Iterable[int]) -> "LengthRange":
        return cls(intervals=tuple((length, length) for length in lengths))

    def is_empty(self) -> bool:
        return not self.intervals

    def first_at_least(self, length: int) -> Optional[int]:
        for lo, hi in self.intervals:
            if hi >= length:
                return max(lo, length)
        return None

    def clip(self, max_length: int) -> "LengthRange":
        return LengthRange(intervals=tuple((lo, min(hi, max_length)) for lo, hi in self.intervals if lo <= max_length))

    def lengths(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def __str__(self) -> str:
        return ",".join(f"{lo}..{hi}" if lo != hi else str(lo) for lo, hi in self.intervals)


class AttractorVerdict(BaseModel):
    """Result of a verification: ok, or the shortest-then-leftmost uncovered factor."""

    model_config = ConfigDict(frozen=True)

    ok: bool
    failing: Optional[FactorOccurrence] = None


class FactorConstraint(BaseModel):
    """Positions touched by some occurrence of one distinct factor, as a bitmask over [0..n-1]."""

    model_config = ConfigDict(frozen=True)

    representative: FactorOccurrence
    covered: int = Field(..., gt=0)

    @property
    def positions(self) -> Tuple[int, ...]:
        mask = self.covered
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    @property
    def size(self) -> int:
        return self.covered.bit_count()


class GammaRecord(BaseModel):
    """Per-prefix result row of the exact solver."""

    n: int = Field(..., ge=1)
    gamma: int = Field(..., ge=1)
    proven: bool = True
    witness: Tuple[int, ...]
    minspan: Optional[int] = None
    maxspan: Optional[int] = None
    minspan_witness: Optional[Tuple[int, ...]] = None
    maxspan_witness: Optional[Tuple[int, ...]] = None
    delta_num: Optional[int] = None
    delta_den: Optional[int] = None
    greedy_size: Optional[int] = None

    @model_validator(mode="after")
    def validate_spans(self):
        if self.minspan is not None and self.maxspan is not None and self.minspan > self.maxspan:
            raise ValueError("minspan cannot exceed maxspan")
        return self

    @property
    def delta(self) -> Optional[Fraction]:
        if self.delta_num is None or self.delta_den is None:
            return None
        return Fraction(self.delta_num, self.delta_den)


class FamilyResult(BaseModel):
    """A closed-form attractor for one prefix length, with its verification verdict."""

    n: int
    family: str
    positions: Tuple[int, ...] = ()
    claimed_size: int = 0
    applicable: bool = False
    verified: Optional[bool] = None
    failing: Optional[FactorOccurrence] = None

    @model_validator(mode="after")
    def validate_applicable(self):
        if self.applicable:
            if any(p < 0 or p >= self.n for p in self.positions):
                raise ValueError("family positions must lie inside the prefix")
            if self.claimed_size != len(self.positions):
                raise ValueError("claimed size must equal the number of positions")
        return self


class GreedyStep(BaseModel):
    """Index added by the greedy construction and the factor that forced it."""

    model_config = ConfigDict(frozen=True)

    index: int
    previous: Optional[int] = None
    violating: FactorOccurrence


class GreedyState(BaseModel):
    """Single-owner, sequentially mutated state of a greedy run."""

    positions: List[int] = Field(default_factory=list)
    frontier: int = 0
    history: List[GreedyStep] = Field(default_factory=list)

    def as_set(self, n: int) -> AttractorSet:
        return AttractorSet(positions=tuple(p for p in self.positions if p < n), n=n)


class WindowedSequence(BaseModel):
    """A finite window w[0..W-1] standing in for an infinite word."""

    model_config = ConfigDict(frozen=True)

    spec: SequenceSpec
    window: Word

    @property
    def W(self) -> int:
        return len(self.window)


class AppearanceProfile(BaseModel):
    """Per-length appearance (or recurrence) values and the constant estimated from them."""

    kind: str = "appearance"
    window: int
    max_length: int
    values: Tuple[Optional[int], ...]
    estimate_num: Optional[int] = None
    estimate_den: Optional[int] = None
    stable: bool = False

    @property
    def estimate(self) -> Optional[Fraction]:
        """None stands for an infinite constant."""
        if self.estimate_num is None or self.estimate_den is None:
            return None
        return Fraction(self.estimate_num, self.estimate_den)

    @property
    def finite(self) -> bool:
        return self.estimate_num is not None


class NonrecurrentWitness(BaseModel):
    """A factor starting at `start` with no second occurrence in the window."""

    model_config = ConfigDict(frozen=True)

    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length - 1


class ConstructionResult(BaseModel):
    """Output of a constructive attractor builder."""

    positions: Tuple[int, ...]
    n: int
    verified: bool
    failing: Optional[FactorOccurrence] = None
    levels: int = 0
    kept_levels: int = 0
    c0: Optional[int] = None
    bound_achieved: bool = True

    @property
    def size(self) -> int:
        return len(self.positions)


class GrowthEvidence(BaseModel):
    """What classify_growth looked at and what it concluded."""

    classification: GrowthClass
    n_points: Tuple[int, ...]
    sizes: Tuple[int, ...]
    size_sources: Tuple[str, ...]
    constant_residual: float
    log_residual: float
    window: int
    nonrecurrent: Tuple[NonrecurrentWitness, ...] = ()
    disjoint_witnesses: int = 0


class LowerBounds(BaseModel):
    """The three lower bounds the exact solver starts from."""

    model_config = ConfigDict(frozen=True)

    delta_num: int
    delta_den: int
    distinct_symbols: int
    packing: int

    @property
    def delta(self) -> Fraction:
        return Fraction(self.delta_num, self.delta_den)

    @property
    def delta_ceil(self) -> int:
        return -(-self.delta_num // self.delta_den)

    @property
    def value(self) -> int:
        return max(self.delta_ceil, self.distinct_symbols, self.packing, 1)


class GammaSolution(BaseModel):
    """Minimum attractor found by the exact solver; unproven when the deadline hit first."""

    size: int
    witness: AttractorSet
    proven: bool = True
    lower_bound: int
    upper_bound: int
    nodes: int = 0


class SpanExtremes(BaseModel):
    """Smallest and largest span over the minimum-cardinality attractors."""

    gamma: int
    proven: bool = True
    minspan: Optional[int] = None
    maxspan: Optional[int] = None
    minspan_witness: Optional[AttractorSet] = None
    maxspan_witness: Optional[AttractorSet] = None


class PdReadingRow(BaseModel):
    """Which reading of the period-doubling family verifies at one n."""

    n: int
    literal_family: Optional[str] = None
    literal_verified: Optional[bool] = None
    default_family: str
    default_verified: bool


class SpanReportRow(BaseModel):
    """Exact spans of a period-doubling prefix next to the closed forms."""

    n: int
    minspan: int
    maxspan: int
    minspan_closed: Optional[int] = None
    maxspan_closed: Optional[int] = None

    @property
    def minspan_matches(self) -> Optional[bool]:
        return None if self.minspan_closed is None else self.minspan_closed == self.minspan

    @property
    def maxspan_matches(self) -> Optional[bool]:
        return None if self.maxspan_closed is None else self.maxspan_closed == self.maxspan
