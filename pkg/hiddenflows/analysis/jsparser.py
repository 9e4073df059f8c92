"""Error-tolerant JavaScript front end on top of esprima."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterator

import esprima
from esprima.error_handler import Error as EsprimaError

from hiddenflows.analysis.lexer import mask_code, statement_span, top_level_lines
from hiddenflows.logs import logger

MAX_PARSE_ATTEMPTS = 32
PARSE_OPTIONS = {"loc": True, "range": True}
MODULE_SYNTAX = re.compile(r"^\s*(import\s*[\w{*'\"]|export\s)", re.MULTILINE)
ERROR_PREFIX = re.compile(r"^Line \d+: ")


@dataclass(frozen=True)
class ParseError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class SyntaxTree:
    """Top-level statements of one file, plus the errors skipped to get them."""

    file: str
    body: list = field(default_factory=list)
    parse_errors: list[ParseError] = field(default_factory=list)
    source: str = ""

    def walk(self) -> Iterator[Any]:
        """Depth-first pre-order iteration over every node of the tree."""
        stack = list(reversed(self.body))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(children(node))))

    def text(self, node: Any) -> str:
        start, end = node.range
        return self.source[start:end]


def is_node(value: Any) -> bool:
    # esprima objects answer None for unknown attributes
    return value is not None and isinstance(getattr(value, "type", None), str)


def children(node: Any) -> Iterator[Any]:
    """Child nodes of an esprima node."""
    for key, value in vars(node).items():
        if key in ("loc", "range", "type"):
            continue
        if isinstance(value, list):
            yield from (item for item in value if is_node(item))
        elif is_node(value):
            yield value


def _blank_outside(lines: list[str], lo: int, hi: int) -> str:
    """The text with lines outside [lo, hi] blanked, keeping every offset."""
    return "\n".join(
        line if lo <= number <= hi else " " * len(line)
        for number, line in enumerate(lines, start=1)
    )


def _blank_span(text: str, start: int, end: int) -> str:
    return text[:start] + re.sub(r"[^\r\n]", " ", text[start:end]) + text[end:]


def _parse(text: str, module: bool) -> Any:
    if module:
        return esprima.parseModule(text, PARSE_OPTIONS)
    return esprima.parseScript(text, PARSE_OPTIONS)


def _error_of(e: EsprimaError, fallback_line: int) -> ParseError:
    message = getattr(e, "message", None) or str(e)
    return ParseError(e.lineNumber or fallback_line, ERROR_PREFIX.sub("", message))


def _parse_by_top_level(tree: SyntaxTree, text: str, module: bool) -> None:
    """Parse top-level statements in runs, dropping each one that holds an error."""
    lines = text.split("\n")
    boundaries = top_level_lines(mask_code(text))
    pending = [(1, len(lines))]
    attempts = 0
    while pending:
        lo, hi = pending.pop(0)
        attempts += 1
        if attempts > MAX_PARSE_ATTEMPTS:
            tree.parse_errors.append(ParseError(lo, "too many syntax errors, rest of file skipped"))
            break
        try:
            program = _parse(_blank_outside(lines, lo, hi), module)
        except EsprimaError as e:
            error = _error_of(e, lo)
            error_line = min(max(error.line, lo), hi)
            tree.parse_errors.append(ParseError(error_line, error.message))
            starts = [b for b in boundaries if lo < b <= error_line]
            if starts:
                pending.insert(0, (lo, max(starts) - 1))
            resume = [b for b in boundaries if error_line < b <= hi]
            if resume:
                pending.append((resume[0], hi))
            continue
        except RecursionError:
            tree.parse_errors.append(ParseError(lo, "nesting too deep"))
            continue
        tree.body.extend(program.body)


def parse_js(source_text: str, file: str = "") -> SyntaxTree:
    """Parse JavaScript text, skipping the statements that fail to parse

    When esprima rejects the text, the error is recorded and the innermost
    statement holding it is blanked before parsing again, so a bad line inside
    a function body costs only that statement. When no statement can be
    isolated, whole top-level statements are dropped instead. Offsets and line
    numbers always refer to the original text.

    Args:
        source_text (str): The script
        file (str): Relative path recorded in the tree

    Returns:
        SyntaxTree: Always a tree, possibly empty
    """
    if source_text.startswith("#!"):
        newline = source_text.find("\n")
        newline = len(source_text) if newline == -1 else newline
        source_text = " " * newline + source_text[newline:]

    module = bool(MODULE_SYNTAX.search(mask_code(source_text)))
    tree = SyntaxTree(file=file, source=source_text)

    text = source_text
    blanked: set[int] = set()
    parsed = False
    for _ in range(MAX_PARSE_ATTEMPTS):
        try:
            program = _parse(text, module)
        except EsprimaError as e:
            tree.parse_errors.append(_error_of(e, 1))
            index = getattr(e, "index", None)
            span = statement_span(mask_code(text), index) if index is not None else None
            if span is None or index in blanked:
                break
            blanked.add(index)
            text = _blank_span(text, *span)
            continue
        except RecursionError:
            break
        tree.body = list(program.body)
        parsed = True
        break
    if not parsed:
        _parse_by_top_level(tree, text, module)

    tree.body.sort(key=lambda node: node.range[0])
    tree.parse_errors = sorted(set(tree.parse_errors), key=lambda error: (error.line, error.message))
    if tree.parse_errors:
        logger.debug(
            f"{file}: {len(tree.parse_errors)} syntax error(s), first {tree.parse_errors[0]}",
            "PARSE",
        )
    return tree
