"""Matching of syntactic contexts against catalog entries.

The flow analyzer describes every call, member read and identifier read it
meets as one of the context types below; matching looks at nothing else, so
the same context always matches the same entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from hiddenflows.catalog.catalog import (
    CALLBACK_ANY,
    Catalog,
    CatalogEntry,
    MatchPattern,
    SinkCategory,
    SourceKind,
)


@dataclass(frozen=True)
class Chain:
    """A flattened callee or member path and the roles of its root."""

    segments: tuple[str, ...]
    root_roles: frozenset[str] = frozenset()


@dataclass(frozen=True)
class CallContext:
    callee: Chain
    literal_args: tuple[Optional[str], ...] = ()
    # parameter names of function-valued arguments, None for other arguments
    function_params: tuple[Optional[tuple[str, ...]], ...] = ()


@dataclass(frozen=True)
class ReadContext:
    """A member read such as node.credentials."""

    chain: Chain


@dataclass(frozen=True)
class NameContext:
    """An identifier read."""

    name: str


@dataclass(frozen=True)
class CatchContext:
    param: str


SyntacticContext = Union[CallContext, ReadContext, NameContext, CatchContext]


@dataclass(frozen=True)
class SourceMatch:
    entry_id: str
    # (argument index, parameter index) pairs for callback sources; empty otherwise
    seeded_params: tuple[tuple[int, int], ...] = ()
    seeds_result: bool = False


@dataclass(frozen=True)
class SinkMatch:
    entry_id: str
    taint_positions: Union[frozenset[int], str]
    sink_category: SinkCategory


def _segments_match(pattern: Sequence[str], segments: Sequence[str]) -> bool:
    return len(pattern) == len(segments) and all(
        p == "*" or p == s for p, s in zip(pattern, segments)
    )


def chain_matches(pattern: MatchPattern, chain: Chain) -> bool:
    """Whether a flattened chain satisfies the callee path and receiver role."""
    path = pattern.callee_path
    if pattern.receiver_role is not None:
        if pattern.receiver_role not in chain.root_roles:
            return False
        return _segments_match(path[1:], chain.segments[1:])
    if path[0] == "**":
        rest = path[1:]
        if len(rest) > len(chain.segments):
            return False
        return _segments_match(rest, chain.segments[len(chain.segments) - len(rest) :])
    return _segments_match(path, chain.segments)


def _literals_match(pattern: MatchPattern, literal_args: Sequence[Optional[str]]) -> bool:
    for index, value in pattern.literal_arg_constraints:
        if index >= len(literal_args) or literal_args[index] != value:
            return False
    return True


def _seeded_params(entry: CatalogEntry, ctx: CallContext) -> tuple[tuple[int, int], ...]:
    if entry.callback_index == CALLBACK_ANY:
        candidates = range(len(ctx.function_params))
    else:
        candidates = [entry.callback_index]
    seeds = []
    for arg_index in candidates:
        if arg_index >= len(ctx.function_params) or ctx.function_params[arg_index] is None:
            continue
        params = ctx.function_params[arg_index]
        for param_index in entry.param_indices:
            if param_index >= len(params):
                continue
            if entry.param_pattern is not None and not entry.param_pattern.fullmatch(
                params[param_index]
            ):
                continue
            seeds.append((arg_index, param_index))
    return tuple(seeds)


def _source_match(entry: CatalogEntry, ctx: SyntacticContext) -> Optional[SourceMatch]:
    kind = entry.source_kind
    if isinstance(ctx, CallContext):
        if kind not in (SourceKind.CALLBACK_PARAMETER, SourceKind.RETURN_VALUE):
            return None
        if not chain_matches(entry.match, ctx.callee) or not _literals_match(
            entry.match, ctx.literal_args
        ):
            return None
        if kind is SourceKind.RETURN_VALUE:
            return SourceMatch(entry.id, seeds_result=True)
        seeds = _seeded_params(entry, ctx)
        return SourceMatch(entry.id, seeded_params=seeds) if seeds else None
    if isinstance(ctx, ReadContext):
        if kind is SourceKind.PROPERTY_READ and chain_matches(entry.match, ctx.chain):
            return SourceMatch(entry.id)
        if kind is SourceKind.NAME_PATTERN and ctx.chain.segments:
            if entry.name_regex.search(ctx.chain.segments[-1]):
                return SourceMatch(entry.id)
        return None
    if isinstance(ctx, NameContext):
        if kind is SourceKind.NAME_PATTERN and entry.name_regex.search(ctx.name):
            return SourceMatch(entry.id)
        return None
    if isinstance(ctx, CatchContext) and kind is SourceKind.CATCH_PARAMETER:
        return SourceMatch(entry.id)
    return None


def match_sources(ctx: SyntacticContext, catalog: Catalog) -> list[SourceMatch]:
    """Every source entry matching the context, in catalog order."""
    matches = []
    for entry in catalog.sources:
        found = _source_match(entry, ctx)
        if found is not None:
            matches.append(found)
    return matches


def match_source(ctx: SyntacticContext, catalog: Catalog) -> Optional[SourceMatch]:
    """The first source entry matching the context, or None."""
    for entry in catalog.sources:
        found = _source_match(entry, ctx)
        if found is not None:
            return found
    return None


def match_sink(ctx: CallContext, catalog: Catalog) -> Optional[SinkMatch]:
    """The first sink entry whose pattern the call satisfies, or None

    Args:
        ctx (CallContext): The call being checked
        catalog (Catalog): The catalog in use

    Returns:
        SinkMatch: Entry id, the argument positions whose taint completes a flow
            and the sink category
    """
    if not isinstance(ctx, CallContext):
        return None
    for entry in catalog.sinks:
        if chain_matches(entry.match, ctx.callee) and _literals_match(
            entry.match, ctx.literal_args
        ):
            return SinkMatch(entry.id, entry.taint_positions, entry.sink_category)
    return None
