"""Parser, validator, and renderer for the 5G management command DSL.

Commands look like ``list users --active 20240801 20240901``: a base
command (verb plus optional object) followed by flags, each flag taking
arguments that must match one of the allowed kind sequences declared in
the class catalog. The grammar is entirely data-driven: a new command
class needs only catalog entries, no parser changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import ParseError

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import CommandClass

# Argument kinds a flag slot can require.
ARG_DATE = "date"
ARG_NOW = "now"
ARG_IMSI = "imsi"
ARG_LITERAL = "literal"
ARG_KINDS = (ARG_DATE, ARG_NOW, ARG_IMSI, ARG_LITERAL)

# LLM output frequently reproduces typographic dashes; canonicalize the
# en dash and em dash variants to the ASCII "--" flag marker.
_DASH_VARIANTS = ("–", "—")

_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def canonicalize_dashes(text: str) -> str:
    """Replace en/em dash flag markers with the ASCII ``--`` form."""
    for dash in _DASH_VARIANTS:
        text = text.replace(dash, "--")
    return text


def normalize_spacing(text: str) -> str:
    """Trim and collapse internal whitespace runs to single spaces."""
    return " ".join(text.split())


def is_leap_year(year: int) -> bool:
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


def check_date(token: str) -> str | None:
    """Return None if ``token`` is a valid YYYYMMDD calendar date, else a reason.

    Deliberately implemented without the ``datetime`` module; the test
    suite cross-checks it against ``datetime.date`` as an independent
    oracle. Years 1-9999 are valid (matching ``datetime``'s range).
    """
    if not re.fullmatch(r"\d{8}", token):
        return "expected 8 digits YYYYMMDD"
    year, month, day = int(token[:4]), int(token[4:6]), int(token[6:8])
    if year == 0:
        return "year 0000 out of range"
    if not 1 <= month <= 12:
        return f"month {month:02d} out of range"
    days = _DAYS_IN_MONTH[month - 1]
    if month == 2 and is_leap_year(year):
        days = 29
    if not 1 <= day <= days:
        return f"day {day:02d} out of range for {year:04d}-{month:02d}"
    return None


def is_valid_date(token: str) -> bool:
    return check_date(token) is None


@dataclass(frozen=True)
class FlagSpec:
    """Allowed argument shapes for one flag of one command class."""

    name: str
    arg_patterns: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.name.startswith("--"):
            raise ValueError(f"flag name must start with '--': {self.name!r}")
        if not self.arg_patterns:
            raise ValueError(f"flag {self.name}: at least one arg pattern required")
        if len(set(self.arg_patterns)) != len(self.arg_patterns):
            raise ValueError(f"flag {self.name}: duplicate arg patterns")
        for pattern in self.arg_patterns:
            for kind in pattern:
                if kind not in ARG_KINDS:
                    raise ValueError(f"flag {self.name}: unknown arg kind {kind!r}")


@dataclass(frozen=True)
class FlagArg:
    kind: str
    raw: str


@dataclass(frozen=True)
class Flag:
    name: str
    args: tuple[FlagArg, ...] = ()


@dataclass(frozen=True)
class CommandAst:
    verb: str
    object: str | None = None
    flags: tuple[Flag, ...] = ()


@dataclass(frozen=True)
class Violation:
    position: int
    message: str


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[Violation, ...] = ()
    # Warnings never fail validation: a reversed date range may still be
    # intended, and "now" endpoints make ordering undecidable at parse time.
    warnings: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _split_base_command(base: str) -> tuple[str, ...]:
    return tuple(base.split())


def base_verbs(command_class: "CommandClass") -> tuple[str, ...]:
    """First tokens of the class's base commands, deduplicated in order."""
    seen: list[str] = []
    for base in command_class.base_commands:
        verb = _split_base_command(base)[0]
        if verb not in seen:
            seen.append(verb)
    return tuple(seen)


def _token_offsets(tokens: list[str]) -> list[int]:
    """Character offset of each token inside ' '.join(tokens)."""
    offsets, pos = [], 0
    for tok in tokens:
        offsets.append(pos)
        pos += len(tok) + 1
    return offsets


def _kind_accepts(kind: str, token: str) -> bool:
    if kind == ARG_NOW:
        return token == "now"
    if kind == ARG_DATE:
        return is_valid_date(token)
    if kind == ARG_IMSI:
        return token.isdigit() and len(token) in (14, 15)
    return not token.startswith("--")  # literal


def _match_flag_args(
    spec: FlagSpec, args: list[str], offsets: list[int], flag_offset: int
) -> tuple[FlagArg, ...]:
    """Match collected arg tokens against the spec's allowed patterns.

    Raises ParseError with the most specific diagnosis available when
    nothing matches: a near-miss date or IMSI beats a bare arity report.
    """
    lengths = sorted({len(p) for p in spec.arg_patterns})
    at = offsets[0] if offsets else flag_offset
    near_miss: ParseError | None = None
    for pattern in spec.arg_patterns:
        if len(pattern) != len(args):
            continue
        matched: list[FlagArg] = []
        for kind, token, offset in zip(pattern, args, offsets):
            if _kind_accepts(kind, token):
                matched.append(FlagArg(kind=kind, raw=token))
                continue
            if kind == ARG_DATE and re.fullmatch(r"\d{8}", token):
                reason = check_date(token)
                near_miss = ParseError(
                    f"flag {spec.name}: invalid date {token!r} ({reason})", offset
                )
            elif kind == ARG_IMSI and token.isdigit():
                near_miss = ParseError(
                    f"flag {spec.name}: invalid IMSI {token!r}"
                    f" ({len(token)} digits, expected 14 or 15)",
                    offset,
                )
            break
        else:
            return tuple(matched)
    if near_miss is not None:
        raise near_miss
    if len(args) not in lengths:
        if not args and min(lengths) > 0:
            raise ParseError(f"flag {spec.name} requires arguments", flag_offset)
        allowed = " or ".join(str(n) for n in lengths)
        raise ParseError(
            f"flag {spec.name}: wrong number of arguments"
            f" (got {len(args)}, allowed {allowed})",
            at,
        )
    raise ParseError(
        f"flag {spec.name}: arguments {' '.join(args)!r} match no allowed form", at
    )


def parse(command_text: str, command_class: "CommandClass") -> CommandAst:
    """Parse ``command_text`` under ``command_class``'s grammar.

    Whitespace runs collapse; en/em dashes canonicalize to ``--``.
    Raises ParseError on any violation.
    """
    normalized = normalize_spacing(canonicalize_dashes(command_text))
    if not normalized:
        raise ParseError("empty command")
    tokens = normalized.split(" ")
    offsets = _token_offsets(tokens)

    base_candidates = [_split_base_command(b) for b in command_class.base_commands]
    verbs = {c[0] for c in base_candidates}
    if tokens[0] not in verbs:
        raise ParseError(
            f"unknown verb {tokens[0]!r} for class {command_class.name!r}", offsets[0]
        )
    matched_base: tuple[str, ...] | None = None
    for cand in sorted(base_candidates, key=len, reverse=True):
        if tuple(tokens[: len(cand)]) == cand:
            matched_base = cand
            break
    if matched_base is None:
        got = tokens[1] if len(tokens) > 1 else ""
        raise ParseError(
            f"unknown object {got!r} after verb {tokens[0]!r}"
            f" for class {command_class.name!r}",
            offsets[1] if len(offsets) > 1 else offsets[0],
        )

    verb = matched_base[0]
    obj = matched_base[1] if len(matched_base) > 1 else None
    specs = {s.name: s for s in command_class.flags}

    flags: list[Flag] = []
    seen: set[str] = set()
    i = len(matched_base)
    while i < len(tokens):
        name = tokens[i]
        if not name.startswith("--"):
            raise ParseError(f"unexpected token {name!r} (expected a flag)", offsets[i])
        spec = specs.get(name)
        if spec is None:
            raise ParseError(
                f"unknown flag {name!r} for class {command_class.name!r}", offsets[i]
            )
        if name in seen:
            raise ParseError(f"duplicate flag {name!r}", offsets[i])
        seen.add(name)
        j = i + 1
        while j < len(tokens) and not tokens[j].startswith("--"):
            j += 1
        args = _match_flag_args(spec, tokens[i + 1 : j], offsets[i + 1 : j], offsets[i])
        flags.append(Flag(name=name, args=args))
        i = j

    return CommandAst(verb=verb, object=obj, flags=tuple(flags))


def render(ast: CommandAst) -> str:
    """Canonical text for a valid AST: single spaces, flags in AST order."""
    tokens = [ast.verb]
    if ast.object is not None:
        tokens.append(ast.object)
    for flag in ast.flags:
        tokens.append(flag.name)
        tokens.extend(arg.raw for arg in flag.args)
    return " ".join(tokens)


def date_order_warnings(ast: CommandAst) -> tuple[str, ...]:
    """Warn when a flag's two-date range runs backwards (start after end)."""
    warnings = []
    for flag in ast.flags:
        dates = [a.raw for a in flag.args if a.kind == ARG_DATE]
        if len(dates) == 2 and dates[0] > dates[1]:
            warnings.append(
                f"flag {flag.name}: start date {dates[0]} is after end date {dates[1]}"
            )
    return tuple(warnings)


def validate(command_text: str, command_class: "CommandClass") -> Verdict:
    """Non-throwing wrapper over parse: ok, or the violations found."""
    try:
        ast = parse(command_text, command_class)
    except ParseError as exc:
        return Verdict(ok=False, violations=(Violation(exc.position, str(exc)),))
    return Verdict(ok=True, warnings=date_order_warnings(ast))
