"""
Prefix generation for morphic fixed points and automatic sequences.

Sequence specs come from three places: builtin names (`tm`, `pd`, `vtm`,
`trib`, `pow2`, `fib`), morphism strings such as
`morphism:0->01,1->10;seed=0;coding=0:0,1:1`, and DFAO files referenced as
`dfao:<path>`.
"""

from __future__ import annotations

import logging
from pathlib import Path
from threading import Lock
from typing import Dict, List, Tuple

from pydantic import ValidationError

from ..models.base import Dfao, Morphism, NumerationKind, NumerationSystem, SequenceSpec, Word
from .config import settings
from .errors import AttractorError, DigitOutOfRangeError, PrefixTooLongError, SequenceSpecError
from .numeration import BINARY, FIBONACCI, TRIBONACCI, representation

logger = logging.getLogger(__name__)

BUILTIN_NAMES: Tuple[str, ...] = ("tm", "pd", "vtm", "trib", "pow2", "fib")

_BUILTIN_MORPHISMS: Dict[str, Morphism] = {
    "tm": Morphism(alphabet_size=2, images=((0, 1), (1, 0)), seed=0),
    "pd": Morphism(alphabet_size=2, images=((1, 1), (1, 0)), seed=1),
    "vtm": Morphism(alphabet_size=3, images=((1,), (2, 0), (2, 1, 0)), seed=2),
    "trib": Morphism(alphabet_size=3, images=((0, 1), (0, 2), (0,)), seed=0),
    "fib": Morphism(alphabet_size=2, images=((0, 1), (0,)), seed=0),
}

# States of the builtin automata, msd-first. The pow2 automaton is the only
# builtin definition of that word.
_BUILTIN_DFAOS: Dict[str, Tuple[Dfao, NumerationSystem]] = {
    # popcount parity
    "tm": (Dfao(state_count=2, transitions=((0, 1), (1, 0)), outputs=(0, 1)), BINARY),
    # parity of the trailing run of ones: even -> 1
    "pd": (Dfao(state_count=2, transitions=((0, 1), (0, 0)), outputs=(1, 0)), BINARY),
    # state 2*popcount_parity + trailing_run_parity
    "vtm": (
        Dfao(state_count=4, transitions=((0, 3), (0, 2), (2, 1), (2, 0)), outputs=(2, 1, 0, 1)),
        BINARY,
    ),
    # number of trailing ones of the Tribonacci representation
    "trib": (Dfao(state_count=3, transitions=((0, 1), (0, 2), (0, 2)), outputs=(0, 1, 2)), TRIBONACCI),
    "pow2": (Dfao(state_count=3, transitions=((0, 1), (2, 1), (2, 2)), outputs=(1, 1, 0)), BINARY),
    # last Zeckendorf digit
    "fib": (Dfao(state_count=2, transitions=((0, 1), (0, 1)), outputs=(0, 1)), FIBONACCI),
}

_stream_lock = Lock()
_streams: Dict[Morphism, List[int]] = {}
# number of leading stream symbols whose image has been appended
_expanded: Dict[Morphism, int] = {}


def builtin_spec(name: str) -> SequenceSpec:
    if name not in BUILTIN_NAMES:
        raise SequenceSpecError(f"unknown sequence {name!r}; builtins are {', '.join(BUILTIN_NAMES)}")
    morphism = _BUILTIN_MORPHISMS.get(name)
    if morphism is not None:
        return SequenceSpec(name=name, morphism=morphism)
    dfao, ns = _BUILTIN_DFAOS[name]
    return SequenceSpec(name=name, dfao=dfao, numeration=ns)


def builtin_dfao(name: str) -> Tuple[Dfao, NumerationSystem]:
    """Automaton definition of a builtin word, independent of its morphism."""
    try:
        return _BUILTIN_DFAOS[name]
    except KeyError:
        raise SequenceSpecError(f"no automaton is defined for {name!r}") from None


def dfao_eval_digits(d: Dfao, digits) -> int:
    state = d.initial
    for digit in digits:
        if digit < 0 or digit >= d.base:
            raise DigitOutOfRangeError(digit, d.base)
        state = d.transitions[state][digit]
    return d.outputs[state]


def dfao_eval(d: Dfao, ns: NumerationSystem, n: int) -> int:
    return dfao_eval_digits(d, representation(ns, n))


def _fixed_point(morphism: Morphism, n: int) -> List[int]:
    with _stream_lock:
        stream = _streams.get(morphism)
        if stream is None:
            stream = list(morphism.images[morphism.seed])
            _streams[morphism] = stream
        idx = _expanded.get(morphism, 1)
        images = morphism.images
        while len(stream) < n:
            stream.extend(images[stream[idx]])
            idx += 1
        _expanded[morphism] = idx
        return stream[:n]


def prefix(spec: SequenceSpec, n: int) -> Word:
    """The first n symbols of the infinite word described by spec."""
    if n < 0:
        raise AttractorError(f"prefix length must be non-negative, got {n}")
    if n > settings.MAX_PREFIX_LENGTH:
        raise PrefixTooLongError(n, settings.MAX_PREFIX_LENGTH)
    if spec.morphism is not None:
        symbols = _fixed_point(spec.morphism, n)
        if spec.morphism.coding is not None:
            coding = spec.morphism.coding
            symbols = [coding[s] for s in symbols]
    else:
        symbols = [dfao_eval(spec.dfao, spec.numeration, i) for i in range(n)]
    return Word(symbols=tuple(symbols), alphabet_size=spec.alphabet_size)


def _parse_symbols(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        raise SequenceSpecError("empty image in morphism")
    parts = text.split(".") if "." in text else list(text)
    try:
        return tuple(int(part) for part in parts)
    except ValueError:
        raise SequenceSpecError(f"image {text!r} is not a list of decimal symbols") from None


def parse_morphism(text: str) -> Morphism:
    """Parse `0->01,1->10;seed=0[;coding=0:0,1:1]`; images may use dots for symbols above 9."""
    sections = [part.strip() for part in text.split(";") if part.strip()]
    if not sections:
        raise SequenceSpecError("empty morphism")
    rules: Dict[int, Tuple[int, ...]] = {}
    for rule in sections[0].split(","):
        if "->" not in rule:
            raise SequenceSpecError(f"malformed morphism rule {rule!r}")
        left, right = rule.split("->", 1)
        try:
            symbol = int(left.strip())
        except ValueError:
            raise SequenceSpecError(f"malformed morphism rule {rule!r}") from None
        if symbol in rules:
            raise SequenceSpecError(f"symbol {symbol} has two images")
        rules[symbol] = _parse_symbols(right)

    seed = 0
    coding = None
    for section in sections[1:]:
        key, _, raw = section.partition("=")
        key = key.strip()
        if key == "seed":
            try:
                seed = int(raw)
            except ValueError:
                raise SequenceSpecError(f"malformed seed {raw!r}") from None
        elif key == "coding":
            mapping: Dict[int, int] = {}
            for pair in raw.split(","):
                source, sep, target = pair.partition(":")
                if not sep:
                    raise SequenceSpecError(f"malformed coding entry {pair!r}")
                try:
                    mapping[int(source)] = int(target)
                except ValueError:
                    raise SequenceSpecError(f"malformed coding entry {pair!r}") from None
            coding = mapping
        else:
            raise SequenceSpecError(f"unknown morphism option {key!r}")

    alphabet_size = max(rules) + 1
    if sorted(rules) != list(range(alphabet_size)):
        raise SequenceSpecError("every symbol 0..k-1 needs an image")
    try:
        return Morphism(
            alphabet_size=alphabet_size,
            images=tuple(rules[s] for s in range(alphabet_size)),
            seed=seed,
            coding=None if coding is None else tuple(coding.get(s, -1) for s in range(alphabet_size)),
        )
    except ValidationError as exc:
        raise SequenceSpecError(f"invalid morphism: {exc.errors()[0]['msg']}") from None


def parse_dfao_text(text: str) -> Tuple[Dfao, NumerationSystem]:
    """
    Parse the DFAO text format:

        base <k>|fibonacci|tribonacci
        initial <q>
        <q> <output> : <d0>-><q0> <d1>-><q1> ...
    """
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if len(lines) < 3:
        raise SequenceSpecError("DFAO needs a base line, an initial line and at least one state")

    head, _, base_value = lines[0].partition(" ")
    if head != "base":
        raise SequenceSpecError("first DFAO line must be `base <k>`")
    base_value = base_value.strip()
    if base_value == NumerationKind.FIBONACCI.value:
        ns = FIBONACCI
    elif base_value == NumerationKind.TRIBONACCI.value:
        ns = TRIBONACCI
    else:
        try:
            ns = NumerationSystem(kind=NumerationKind.BASE, base=int(base_value))
        except (ValueError, ValidationError):
            raise SequenceSpecError(f"invalid base {base_value!r}") from None

    head, _, initial_value = lines[1].partition(" ")
    if head != "initial":
        raise SequenceSpecError("second DFAO line must be `initial <q>`")
    try:
        initial = int(initial_value)
    except ValueError:
        raise SequenceSpecError(f"invalid initial state {initial_value!r}") from None

    outputs: Dict[int, int] = {}
    transitions: Dict[int, Dict[int, int]] = {}
    for line in lines[2:]:
        left, sep, right = line.partition(":")
        if not sep:
            raise SequenceSpecError(f"malformed state line {line!r}")
        try:
            state, output = (int(part) for part in left.split())
        except ValueError:
            raise SequenceSpecError(f"malformed state line {line!r}") from None
        if state in outputs:
            raise SequenceSpecError(f"state {state} defined twice")
        outputs[state] = output
        row: Dict[int, int] = {}
        for arrow in right.split():
            digit, sep, target = arrow.partition("->")
            if not sep:
                raise SequenceSpecError(f"malformed transition {arrow!r}")
            try:
                row[int(digit)] = int(target)
            except ValueError:
                raise SequenceSpecError(f"malformed transition {arrow!r}") from None
        transitions[state] = row

    state_count = len(outputs)
    if sorted(outputs) != list(range(state_count)):
        raise SequenceSpecError("states must be numbered 0..m-1")
    base = ns.digit_count
    for state, row in transitions.items():
        if sorted(row) != list(range(base)):
            raise SequenceSpecError(f"state {state} must define a transition for every digit 0..{base - 1}")
    try:
        dfao = Dfao(
            state_count=state_count,
            initial=initial,
            transitions=tuple(tuple(transitions[q][d] for d in range(base)) for q in range(state_count)),
            outputs=tuple(outputs[q] for q in range(state_count)),
            base=base,
        )
    except ValidationError as exc:
        raise SequenceSpecError(f"invalid DFAO: {exc.errors()[0]['msg']}") from None
    return dfao, ns


def parse_sequence_spec(text: str) -> SequenceSpec:
    """Resolve a CLI `--seq` value to a SequenceSpec."""
    text = text.strip()
    if text.startswith("morphism:"):
        return SequenceSpec(name=text, morphism=parse_morphism(text[len("morphism:"):]))
    if text.startswith("dfao:"):
        path = Path(text[len("dfao:"):])
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SequenceSpecError(f"cannot read DFAO file {path}: {exc}") from None
        dfao, ns = parse_dfao_text(content)
        logger.debug("[seqgen] loaded DFAO with %s states from %s", dfao.state_count, path)
        return SequenceSpec(name=text, dfao=dfao, numeration=ns)
    return builtin_spec(text)
