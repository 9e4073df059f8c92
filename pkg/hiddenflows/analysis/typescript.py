"""Lexical removal of TypeScript syntax so the JavaScript front end can parse it.

Every removed character becomes a space, so offsets and line numbers of the
result are those of the TypeScript source. The pass is heuristic: it covers
the constructs node authors write (annotations, interfaces, type aliases,
enums, generics, visibility keywords, assertions, `export =`), and whatever it
misses surfaces as parse errors of the file.
"""
from __future__ import annotations

import re

from hiddenflows.analysis.lexer import find_matching, mask_code

IDENT = re.compile(r"[A-Za-z_$][\w$]*")
INTERFACE = re.compile(r"^[ \t]*(?:export\s+)?(?:declare\s+)?interface\s+[\w$]+", re.MULTILINE)
TYPE_ALIAS = re.compile(
    r"^[ \t]*(?:export\s+)?(?:declare\s+)?type\s+[\w$]+\s*(?:<[^=;]*>)?\s*=", re.MULTILINE
)
DECLARE = re.compile(r"^[ \t]*(?:export\s+)?declare\s+", re.MULTILINE)
ENUM = re.compile(r"^[ \t]*(?:export\s+)?(?:declare\s+)?(?:const\s+)?enum\s+[\w$]+\s*\{", re.MULTILINE)
TYPE_IMPORT = re.compile(r"^[ \t]*(?:import|export)\s+type\s+[\w${*]", re.MULTILINE)
ABSTRACT_CLASS = re.compile(r"\babstract(\s+)class\b")
EXPORT_ASSIGN = re.compile(r"^([ \t]*)export(\s*)=(\s)", re.MULTILINE)
IMPORT_REQUIRE = re.compile(r"^([ \t]*)import(\s+[\w$]+\s*=\s*require\s*\()", re.MULTILINE)
CLASS_HEAD = re.compile(r"\bclass\b(\s+[\w$]+)?[^{;]*\{")
IMPLEMENTS = re.compile(r"\bimplements\b")
TS_MODIFIERS = ("public", "private", "protected", "readonly", "abstract", "override", "declare")
JS_MODIFIERS = ("static", "async", "get", "set")
PARAMETER_PROPERTY = re.compile(
    r"(?<![\w$.])(?:public|private|protected|readonly|override)\s+(?=[\w$\[{])"
)
VAR_ANNOTATION = re.compile(r"\b(?:const|let|var)\s+([\w$]+)\s*(!?)\s*:")
AS_CAST = re.compile(r"\s+as\s+(?:const\b|[A-Za-z_$][\w$.]*(?:\s*<[^;()\n]*>)?(?:\[\])*)")
NON_NULL = re.compile(r"(?<=[\w$)\]])!(?=[.\[),;])")
IMPORT_EXPORT_LINE = re.compile(r"^\s*(?:import\b|export\s*[{*])")
NOT_PARAM_LISTS = ("if", "for", "while", "switch", "with", "return", "typeof", "await", "new")


class _Source:
    """The text being stripped and its masked twin, edited in step."""

    def __init__(self, text: str):
        self.text = list(text)
        self.masked = list(mask_code(text))

    @property
    def code(self) -> str:
        return "".join(self.masked)

    def blank(self, start: int, end: int) -> None:
        for i in range(max(start, 0), min(end, len(self.text))):
            if self.text[i] != "\n":
                self.text[i] = " "
                self.masked[i] = " "

    def replace(self, start: int, replacement: str) -> None:
        for offset, c in enumerate(replacement):
            self.text[start + offset] = c
            self.masked[start + offset] = c


def _statement_end(code: str, i: int) -> int:
    """End (exclusive) of the statement running from i."""
    depth = 0
    n = len(code)
    while i < n:
        c = code[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            if depth == 0:
                return i
            depth -= 1
        elif depth == 0 and c == ";":
            return i + 1
        elif depth == 0 and c == "\n":
            rest = code[i + 1 :].lstrip()
            if not rest or rest[0] not in "|&=<>.,?:":
                return i
        i += 1
    return n


def _type_end(code: str, i: int, stops: str, arrow_stops: bool = False) -> int:
    """End (exclusive) of a type expression starting at i."""
    depth = 0
    seen = False
    n = len(code)
    while i < n:
        c = code[i]
        if c == "=" and i + 1 < n and code[i + 1] == ">":
            if depth == 0 and arrow_stops:
                return i
            i += 2
            seen = True
            continue
        if depth == 0:
            if c in stops and (c != "{" or seen):
                return i
            if c == "\n" and seen and "\n" in stops:
                return i
        if c in "([{<":
            depth += 1
        elif c in ")]}>":
            if depth == 0:
                return i
            depth -= 1
        if not c.isspace():
            seen = True
        i += 1
    return n


def _previous(code: str, i: int) -> int:
    """Index of the last non-space character before i, or -1."""
    i -= 1
    while i >= 0 and code[i].isspace():
        i -= 1
    return i


def _next(code: str, i: int) -> int:
    n = len(code)
    while i < n and code[i].isspace():
        i += 1
    return i


def _word_before(code: str, i: int) -> tuple[str, int]:
    """The identifier ending at i (inclusive) and its start index."""
    end = i + 1
    while i >= 0 and (code[i].isalnum() or code[i] in "_$"):
        i -= 1
    return code[i + 1 : end], i + 1


def _strip_declarations(src: _Source) -> None:
    code = src.code
    for match in EXPORT_ASSIGN.finditer(code):
        start = match.start() + len(match.group(1))
        length = match.end() - start
        src.replace(start, "exports=".ljust(length))
    for match in IMPORT_REQUIRE.finditer(code):
        src.replace(match.start() + len(match.group(1)), "const ")

    code = src.code
    for pattern in (INTERFACE, ENUM):
        for match in pattern.finditer(code):
            brace = code.find("{", match.end() - 1)
            close = find_matching(code, brace) if brace != -1 else None
            src.blank(match.start(), (close if close is not None else len(code) - 1) + 1)
        code = src.code
    for pattern in (TYPE_ALIAS, TYPE_IMPORT):
        for match in pattern.finditer(code):
            src.blank(match.start(), _statement_end(code, match.start()))
        code = src.code
    for match in DECLARE.finditer(code):
        end = _statement_end(code, match.start())
        brace = code.find("{", match.end(), end)
        if brace != -1:
            close = find_matching(code, brace)
            end = close + 1 if close is not None else end
        src.blank(match.start(), end)
    code = src.code
    for match in ABSTRACT_CLASS.finditer(code):
        src.blank(match.start(), match.start() + len("abstract"))


def _strip_member(src: _Source, code: str, start: int, body_end: int) -> int:
    """Strip one class member starting at start; returns the index after it."""
    i = start
    words = []
    while True:
        word = IDENT.match(code, i)
        if not word or word.group(0) not in TS_MODIFIERS + JS_MODIFIERS:
            break
        after = _next(code, word.end())
        if after >= body_end or code[after] in "(=:;?!<":
            # a member named like a modifier
            break
        words.append(word)
        i = after
    for word in words:
        if word.group(0) in TS_MODIFIERS:
            src.blank(word.start(), word.end())

    if i < body_end and code[i] == "[":
        close = find_matching(code, i)
        name_end = close + 1 if close is not None else i + 1
    else:
        name = IDENT.match(code, i) or re.compile(r"'[^']*'|\"[^\"]*\"|\d+").match(code, i)
        name_end = name.end() if name else i + 1
    j = _next(code, name_end)
    if j < body_end and code[j] in "?!":
        j = _next(code, j + 1)

    if j < body_end and code[j] in "(<":
        paren = code.find("(", j, body_end)
        close = find_matching(code, paren) if paren != -1 else None
        if close is None:
            return body_end
        k = _next(code, close + 1)
        if k < body_end and code[k] == ":":
            k = _type_end(code, k + 1, "{;")
        if k < body_end and code[k] == "{":
            end = find_matching(code, k)
            return end + 1 if end is not None else body_end
        # signature without a body
        src.blank(start, min(k + 1, body_end))
        return k + 1

    # property declaration
    end = min(_statement_end(code, j), body_end)
    src.blank(start, end)
    return end


def _strip_classes(src: _Source) -> None:
    code = src.code
    for head in CLASS_HEAD.finditer(code):
        brace = head.end() - 1
        implements = IMPLEMENTS.search(code, head.start(), brace)
        if implements:
            src.blank(implements.start(), brace)
        body_end = find_matching(code, brace)
        if body_end is None:
            continue
        code = src.code
        i = brace + 1
        while True:
            i = _next(code, i)
            while i < body_end and code[i] == ";":
                i = _next(code, i + 1)
            if i >= body_end:
                break
            if code[i] == "}":
                break
            i = _strip_member(src, code, i, body_end)
        code = src.code
        for modifier in PARAMETER_PROPERTY.finditer(code, brace, body_end):
            src.blank(modifier.start(), modifier.end())
        code = src.code


def _strip_generics(src: _Source) -> None:
    code = src.code
    i = code.find("<")
    while i != -1:
        before = code[i - 1] if i > 0 else ""
        if (before.isalnum() or before in "_$") and i + 1 < len(code) and not code[i + 1].isspace():
            depth = 0
            j = i
            while j < len(code):
                c = code[j]
                if c == "<":
                    depth += 1
                elif c == ">":
                    depth -= 1
                    if depth == 0:
                        break
                elif not (c.isalnum() or c in "_$ \t\n,.[]|&'\"?=:{};"):
                    break
                j += 1
            inner = code[i : j + 1]
            if j < len(code) and code[j] == ">" and "||" not in inner and "&&" not in inner:
                k = _next(code, j + 1)
                _, word_start = _word_before(code, i - 1)
                keyword, _ = _word_before(code, _previous(code, word_start))
                if (k < len(code) and code[k] == "(") or keyword in (
                    "class",
                    "extends",
                    "implements",
                    "function",
                    "new",
                ):
                    src.blank(i, j + 1)
                    code = src.code
        i = code.find("<", i + 1)


def _strip_parameters(src: _Source, code: str, open_: int, close: int) -> None:
    depth = 0
    in_default = False
    last = -1
    i = open_ + 1
    first = _next(code, i)
    this_param = re.compile(r"this\s*:").match(code, first)
    if this_param:
        end = _type_end(code, this_param.end(), ",)")
        if end < close and code[end] == ",":
            end += 1
        src.blank(first, end)
        i = end
    while i < close:
        c = code[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif depth == 0:
            if c == ",":
                in_default = False
            elif c == "=" and code[i + 1 : i + 2] != ">":
                in_default = True
            elif c == "?" and not in_default and code[_next(code, i + 1)] in ":,)":
                src.blank(i, i + 1)
            elif c == ":" and not in_default:
                end = _type_end(code, i + 1, ",)=")
                start = last if last >= 0 and code[last] == "?" else i
                src.blank(start, end)
                i = end
                continue
            elif not in_default:
                word = IDENT.match(code, i)
                if word and word.group(0) in TS_MODIFIERS:
                    after = _next(code, word.end())
                    if after < close and (code[after].isalpha() or code[after] in "_$[{"):
                        src.blank(word.start(), after)
                        i = after
                        continue
        if not c.isspace():
            last = i
        i += 1


def _is_parameter_list(code: str, open_: int, close: int) -> tuple[bool, bool]:
    """(is a parameter list, may carry a return type) for the parens at open_."""
    k = _next(code, close + 1)
    following = code[k : k + 2]
    prev = _previous(code, open_)
    word, word_start = _word_before(code, prev) if prev >= 0 else ("", 0)
    if word in NOT_PARAM_LISTS:
        return False, False
    if word == "catch":
        return True, False
    if following == "=>":
        return True, True
    if following[:1] == ":":
        end = _type_end(code, k + 1, ";{", arrow_stops=True)
        if code[end : end + 2] == "=>":
            return True, True
    before_word = _previous(code, word_start) if word else prev
    keyword, _ = _word_before(code, before_word) if before_word >= 0 else ("", 0)
    if word == "function" or keyword == "function" or (prev >= 0 and code[prev] == "*"):
        return True, True
    if word and (before_word < 0 or code[before_word] in "{};,)" or keyword in JS_MODIFIERS):
        if following[:1] in ("{", ":"):
            return True, True
    return False, False


def _strip_signatures(src: _Source) -> None:
    code = src.code
    opens = [i for i, c in enumerate(code) if c == "("]
    for open_ in opens:
        close = find_matching(code, open_)
        if close is None:
            continue
        is_params, has_return = _is_parameter_list(code, open_, close)
        if not is_params:
            continue
        _strip_parameters(src, code, open_, close)
        code = src.code
        k = _next(code, close + 1)
        if has_return and k < len(code) and code[k] == ":":
            end = _type_end(code, k + 1, ";{", arrow_stops=True)
            src.blank(k, end)
            code = src.code


def _strip_variables(src: _Source) -> None:
    code = src.code
    for match in VAR_ANNOTATION.finditer(code):
        colon = match.end() - 1
        start = match.start(2) if match.group(2) else colon
        src.blank(start, _type_end(code, colon + 1, ",;=\n"))
        code = src.code


def _strip_assertions(src: _Source) -> None:
    code = src.code
    lines = code.split("\n")
    for match in AS_CAST.finditer(code):
        line_index = code.count("\n", 0, match.start())
        if IMPORT_EXPORT_LINE.match(lines[line_index]):
            continue
        prev = _previous(code, match.start() + 1)
        if prev >= 0 and (code[prev].isalnum() or code[prev] in "_$)]}'\""):
            src.blank(match.start(), match.end())
    code = src.code
    for match in NON_NULL.finditer(code):
        src.blank(match.start(), match.end())


def strip_types(text: str) -> str:
    """Remove TypeScript-only syntax, keeping every offset and line

    Args:
        text (str): TypeScript source

    Returns:
        str: JavaScript text of the same length
    """
    src = _Source(text)
    _strip_declarations(src)
    _strip_classes(src)
    _strip_generics(src)
    _strip_signatures(src)
    _strip_variables(src)
    _strip_assertions(src)
    return "".join(src.text)
