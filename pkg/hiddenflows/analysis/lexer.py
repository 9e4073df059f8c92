"""Lightweight lexical helpers for JavaScript text.

The helpers never build a syntax tree. They blank out string, template, regex
and comment contents so that bracket structure can be inspected with plain
index arithmetic, which is all the registration scanner and the parser's error
recovery need.
"""
from __future__ import annotations

OPENERS = {"(": ")", "[": "]", "{": "}"}
CLOSERS = {")": "(", "]": "[", "}": "{"}

# After these characters a slash starts a regex literal, not a division
_REGEX_PRECEDERS = set("(,=:[!&|?{};+-*%<>~^")
_REGEX_KEYWORDS = ("return", "typeof", "case", "do", "else", "in", "of", "void", "yield")


def _blank(chars: list[str], start: int, end: int) -> None:
    for i in range(start, end):
        if chars[i] != "\n":
            chars[i] = " "


def _regex_allowed(chars: list[str], index: int) -> bool:
    j = index - 1
    while j >= 0 and chars[j] in " \t\r\n":
        j -= 1
    if j < 0:
        return True
    if chars[j] in _REGEX_PRECEDERS:
        return True
    word_end = j + 1
    while j >= 0 and (chars[j].isalnum() or chars[j] in "_$"):
        j -= 1
    return "".join(chars[j + 1 : word_end]) in _REGEX_KEYWORDS


def mask_code(text: str) -> str:
    """Return text with literal and comment contents replaced by spaces.

    Delimiters of strings, templates and regexes are kept, comments vanish
    entirely, and newlines are preserved everywhere so offsets and line numbers
    in the masked text equal those in the original. An unterminated literal is
    masked to the end of its line (strings) or of the text (others).
    """
    chars = list(text)
    n = len(chars)
    i = 0
    while i < n:
        c = chars[i]
        nxt = chars[i + 1] if i + 1 < n else ""
        if c == "/" and nxt == "/":
            end = text.find("\n", i)
            end = n if end == -1 else end
            _blank(chars, i, end)
            i = end
        elif c == "/" and nxt == "*":
            end = text.find("*/", i + 2)
            end = n if end == -1 else end + 2
            _blank(chars, i, end)
            i = end
        elif c in "'\"":
            j = i + 1
            while j < n and chars[j] != c and chars[j] != "\n":
                j += 2 if chars[j] == "\\" else 1
            end = min(j, n)
            _blank(chars, i + 1, end)
            i = end + 1
        elif c == "`":
            j = i + 1
            while j < n and chars[j] != "`":
                j += 2 if chars[j] == "\\" else 1
            end = min(j, n)
            _blank(chars, i + 1, end)
            i = end + 1
        elif c == "/" and _regex_allowed(chars, i):
            j = i + 1
            in_class = False
            while j < n and chars[j] != "\n":
                if chars[j] == "\\":
                    j += 2
                    continue
                if chars[j] == "[":
                    in_class = True
                elif chars[j] == "]":
                    in_class = False
                elif chars[j] == "/" and not in_class:
                    break
                j += 1
            if j < n and chars[j] == "/":
                _blank(chars, i + 1, j)
                i = j + 1
            else:
                i += 1
        else:
            i += 1
    return "".join(chars)


def find_matching(masked: str, open_index: int) -> int | None:
    """Index of the bracket closing the one at open_index, or None if unbalanced."""
    opener = masked[open_index]
    if opener not in OPENERS:
        raise ValueError(f"'{opener}' at {open_index} is not an opening bracket")
    stack = []
    for i in range(open_index, len(masked)):
        c = masked[i]
        if c in OPENERS:
            stack.append(c)
        elif c in CLOSERS:
            if not stack or stack[-1] != CLOSERS[c]:
                return None
            stack.pop()
            if not stack:
                return i
    return None


def line_of(text: str, offset: int) -> int:
    """1-based line number of a character offset."""
    return text.count("\n", 0, offset) + 1


def top_level_lines(masked: str) -> list[int]:
    """Lines (1-based) that start at bracket depth zero and carry code."""
    lines = []
    depth = 0
    for number, line in enumerate(masked.split("\n"), start=1):
        if depth == 0 and line.strip():
            lines.append(number)
        for c in line:
            if c in OPENERS:
                depth += 1
            elif c in CLOSERS and depth > 0:
                depth -= 1
    return lines


# A line break between these and the next code does not end a statement
_CONTINUES_BEFORE = set("=+-*/%&|^<>,.?:!~([")
_CONTINUES_AFTER = set(".?:+-*/%&|^=,<>)]([;")
_BLOCK_FOLLOWERS = ("else", "catch", "finally")


def _code_before(masked: str, index: int) -> str:
    j = index - 1
    while j >= 0 and masked[j].isspace():
        j -= 1
    return masked[j] if j >= 0 else ""


def _code_after(masked: str, index: int) -> tuple[str, str]:
    """First code character after index and the word starting there."""
    j = index + 1
    while j < len(masked) and masked[j].isspace():
        j += 1
    if j >= len(masked):
        return "", ""
    k = j
    while k < len(masked) and (masked[k].isalnum() or masked[k] in "_$"):
        k += 1
    return masked[j], masked[j:k]


def _break_ends_statement(masked: str, newline: int) -> bool:
    before = _code_before(masked, newline)
    after, _ = _code_after(masked, newline)
    return before not in _CONTINUES_BEFORE and after not in _CONTINUES_AFTER


def _block_ends_statement(masked: str, close: int) -> bool:
    after, word = _code_after(masked, close)
    return after not in _CONTINUES_AFTER and word not in _BLOCK_FOLLOWERS


def _statement_start(masked: str, index: int) -> int:
    depth = 0
    i = index - 1
    while i >= 0:
        c = masked[i]
        if c == "}" and depth == 0:
            after, _ = _code_after(masked, i)
            if after not in ",)].(":
                return i + 1
            depth += 1
        elif c in CLOSERS:
            depth += 1
        elif c in OPENERS:
            if depth:
                depth -= 1
            elif c == "{":
                return i + 1
        elif depth == 0 and c == ";":
            return i + 1
        elif depth == 0 and c == "\n" and _break_ends_statement(masked, i):
            return i + 1
        i -= 1
    return 0


def _statement_end(masked: str, index: int) -> int:
    depth = 0
    for i in range(index, len(masked)):
        c = masked[i]
        if c in OPENERS:
            depth += 1
        elif c in CLOSERS:
            if depth:
                depth -= 1
                if depth == 0 and c == "}" and _block_ends_statement(masked, i):
                    return i + 1
            elif c == "}":
                return i
        elif depth == 0 and c == ";":
            return i + 1
        elif depth == 0 and c == "\n" and i > index and _break_ends_statement(masked, i):
            return i
    return len(masked)


def statement_span(masked: str, index: int) -> tuple[int, int] | None:
    """Offsets [start, end) of the innermost statement holding index.

    Braces delimit blocks, semicolons and line breaks that cannot continue an
    expression delimit statements. None when no code at index can be isolated.
    """
    if index < 0 or index >= len(masked):
        return None
    start, end = _statement_start(masked, index), _statement_end(masked, index)
    if not start <= index < end or not masked[start:end].strip():
        return None
    return start, end
