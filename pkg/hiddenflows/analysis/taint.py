"""Taint propagation from catalog sources to catalog sinks within one file.

The analysis is flow-insensitive and field-insensitive. Every binding (a name
in a function-level scope) collects the sources that may reach it, each with the
first witness trace found; whole-file passes repeat until no binding, parameter
or return value gains a source. Calls to functions defined in the file bind
arguments to parameters and return values to call results without
distinguishing call sites. Anything else passes the taint of its receiver and
arguments through to its result.

Receiver roles (the node object, the framework object, required modules) are
resolved syntactically before propagation starts, so matching a call against
the catalog never depends on taint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import count
from typing import Any, Iterator, Optional

from hiddenflows.analysis.jsparser import SyntaxTree, children
from hiddenflows.catalog import (
    TAINT_ANY,
    CallContext,
    Catalog,
    CatchContext,
    Chain,
    DataClass,
    EndpointKind,
    NameContext,
    ReadContext,
    SinkCategory,
    match_sink,
    match_source,
    match_sources,
)
from hiddenflows.config import Config
from hiddenflows.logs import logger

CFG = Config()

FUNCTION_TYPES = ("FunctionDeclaration", "FunctionExpression", "ArrowFunctionExpression")
NODE_OBJECT = "node-object"
FRAMEWORK_OBJECT = "framework-object"
MODULE_ROLE = "required-module:"
ROLE_ROUNDS = 8

Key = tuple[int, str]
NODE_THIS: Key = (-1, "this")


class Rule(str, Enum):
    SOURCE = "source"
    ASSIGNMENT = "assignment"
    EXPRESSION = "expression"
    MEMBER = "member"
    CONTAINER = "container"
    CALL_ARGUMENT = "call-argument"
    CALL_RETURN = "call-return"
    PASS_THROUGH = "pass-through"
    CALLBACK = "callback"
    SINK = "sink"


@dataclass(frozen=True, order=True)
class Location:
    file: str
    line: int
    symbol: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line} {self.symbol}"


@dataclass(frozen=True)
class Endpoint:
    kind: EndpointKind
    entry_id: str
    location: Location

    @property
    def symbol(self) -> str:
        return self.location.symbol

    def sort_key(self) -> tuple:
        return (self.location, self.kind.value, self.entry_id)


@dataclass(frozen=True)
class Step:
    file: str
    line: int
    description: str
    rule: Rule


@dataclass(frozen=True)
class TaintFlow:
    source: Endpoint
    sink: Endpoint
    steps: tuple[Step, ...]
    # None when the source entry declares no data class
    data_class: Optional[DataClass]
    sink_category: SinkCategory

    def sort_key(self) -> tuple:
        return (self.source.sort_key(), self.sink.sort_key())


@dataclass
class FileAnalysis:
    file: str
    endpoints: list[Endpoint] = field(default_factory=list)
    flows: list[TaintFlow] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


Trace = tuple[Step, ...]
Taint = dict[Endpoint, Trace]


@dataclass
class Scope:
    id: int
    parent: Optional["Scope"] = None
    names: set[str] = field(default_factory=set)

    def resolve(self, name: str) -> "Scope":
        """The scope declaring name, or the outermost scope if none does."""
        scope = self
        while True:
            if name in scope.names or scope.parent is None:
                return scope
            scope = scope.parent


def pattern_names(pattern: Any) -> list[str]:
    """Names bound by a declaration target, parameter or destructuring pattern."""
    if pattern is None:
        return []
    kind = pattern.type
    if kind == "Identifier":
        return [pattern.name]
    if kind == "ObjectPattern":
        names = []
        for prop in pattern.properties:
            names += pattern_names(prop.argument if prop.type == "RestElement" else prop.value)
        return names
    if kind == "ArrayPattern":
        return [name for element in pattern.elements for name in pattern_names(element)]
    if kind == "AssignmentPattern":
        return pattern_names(pattern.left)
    if kind == "RestElement":
        return pattern_names(pattern.argument)
    return []


def _module_name(call: Any) -> Optional[str]:
    """The module of a require("m") call, or None for any other node."""
    if (
        call is not None
        and call.type == "CallExpression"
        and call.callee.type == "Identifier"
        and call.callee.name == "require"
        and call.arguments
        and call.arguments[0].type == "Literal"
        and isinstance(call.arguments[0].value, str)
    ):
        return call.arguments[0].value.removeprefix("node:")
    return None


def _cooked(element: Any) -> Optional[str]:
    value = element.value
    if isinstance(value, dict):
        return value.get("cooked")
    return getattr(value, "cooked", None)


def _line(node: Any) -> int:
    return node.loc.start.line


def _call_depth(trace: Trace) -> int:
    depth = 0
    for step in trace:
        if step.rule is Rule.CALL_ARGUMENT:
            depth += 1
        elif step.rule is Rule.CALL_RETURN and depth > 0:
            depth -= 1
    return depth


class FileAnalyzer:
    """Runs the analysis of one syntax tree against one catalog."""

    def __init__(self, tree: SyntaxTree, catalog: Catalog):
        self.tree = tree
        self.catalog = catalog
        self.file = tree.file
        self._ids = count()
        self.global_scope = Scope(next(self._ids))
        self.scopes: dict[int, Scope] = {}
        self.functions: dict[Key, list] = {}
        self.classes: dict[Key, Any] = {}
        self.fn_names: dict[int, str] = {}
        self.constructors: set[int] = set()
        self.roles: dict[Key, set[str]] = {}
        self.aliases: dict[Key, tuple[str, ...]] = {}
        self.member_roles: dict[tuple[Key, str], tuple[frozenset, Optional[tuple]]] = {}

        self.env: dict[Key, Taint] = {}
        self.returns: dict[int, Taint] = {}
        self.endpoints: dict[tuple[EndpointKind, Location], Endpoint] = {}
        self.flows: dict[tuple[Endpoint, Endpoint], TaintFlow] = {}
        self.diagnostics: list[str] = []
        self._warned: set[str] = set()
        self._changed = False
        self._this_stack: list[Key] = []
        self._fn_stack: list[Any] = []

    # ------------------------------------------------------------ reporting

    def _warn(self, line: int, message: str, once: Optional[str] = None) -> None:
        if once is not None:
            if once in self._warned:
                return
            self._warned.add(once)
        self.diagnostics.append(f"{self.file}:{line}: {message}")
        logger.debug(f"{self.file}:{line}: {message}", "ANALYSIS")

    def _text(self, node: Any) -> str:
        start, end = node.range
        return " ".join(self.tree.source[start:end].split())

    # ------------------------------------------------------- scope pre-pass

    def _declare(self, node: Any, scope: Scope) -> None:
        kind = node.type
        if kind == "FunctionDeclaration":
            if node.id is not None:
                scope.names.add(node.id.name)
            self._function_scope(node, scope)
            return
        if kind in FUNCTION_TYPES:
            self._function_scope(node, scope)
            return
        if kind == "VariableDeclaration":
            for declarator in node.declarations:
                scope.names.update(pattern_names(declarator.id))
                self._declare(declarator.id, scope)
                if declarator.init is not None:
                    self._declare(declarator.init, scope)
            return
        if kind == "ClassDeclaration" and node.id is not None:
            scope.names.add(node.id.name)
        elif kind == "CatchClause" and node.param is not None:
            scope.names.update(pattern_names(node.param))
        elif kind == "ImportDeclaration":
            for specifier in node.specifiers:
                scope.names.add(specifier.local.name)
            return
        for child in children(node):
            self._declare(child, scope)

    def _function_scope(self, fn: Any, parent: Scope) -> None:
        scope = Scope(next(self._ids), parent)
        self.scopes[id(fn)] = scope
        if fn.type == "FunctionExpression" and fn.id is not None:
            scope.names.add(fn.id.name)
        for param in fn.params:
            scope.names.update(pattern_names(param))
            self._declare(param, scope)
        self._declare(fn.body, scope)

    def _scoped_walk(self) -> Iterator[tuple[Any, Scope, Any]]:
        """Every node with its scope and nearest enclosing non-arrow function."""
        stack = [(node, self.global_scope, None) for node in reversed(self.tree.body)]
        while stack:
            node, scope, fn = stack.pop()
            yield node, scope, fn
            if node.type in FUNCTION_TYPES:
                inner_scope = self.scopes[id(node)]
                inner_fn = fn if node.type == "ArrowFunctionExpression" else node
            else:
                inner_scope, inner_fn = scope, fn
            stack.extend((child, inner_scope, inner_fn) for child in reversed(list(children(node))))

    def _key(self, name: str, scope: Scope) -> Key:
        return (scope.resolve(name).id, name)

    def _this_key(self, fn: Any) -> Key:
        if fn is None:
            return (self.global_scope.id, "this")
        if id(fn) in self.constructors:
            return NODE_THIS
        return (self.scopes[id(fn)].id, "this")

    # -------------------------------------------------------- roles pre-pass

    def _roles_of(self, key: Key, name: str) -> set[str]:
        roles = set(self.roles.get(key, ()))
        if name == "node":
            roles.add(NODE_OBJECT)
        elif name == "RED":
            roles.add(FRAMEWORK_OBJECT)
        return roles

    def _chain(self, node: Any, scope: Scope, this_key: Key) -> Chain:
        """Flatten a callee or member expression into segments and root roles."""
        segments: list[str] = []
        current = node
        while True:
            if current.type == "MemberExpression":
                segments.append("[]" if current.computed else current.property.name)
                current = current.object
            elif current.type in ("CallExpression", "NewExpression") and _module_name(current) is None:
                current = current.callee
            else:
                break
        segments.reverse()

        key: Optional[Key] = None
        if current.type == "Identifier":
            key = self._key(current.name, scope)
            roles = self._roles_of(key, current.name)
            root = self.aliases.get(key, (current.name,))
        elif current.type == "ThisExpression":
            key = this_key
            roles = {NODE_OBJECT} if this_key == NODE_THIS else set()
            root = ("this",)
        elif _module_name(current) is not None:
            roles = {MODULE_ROLE + _module_name(current)}
            root = ("require",)
        else:
            roles = set()
            root = ("?",)

        if key is not None and segments and (key, segments[0]) in self.member_roles:
            member_roles, alias = self.member_roles[(key, segments[0])]
            return Chain(tuple(alias or (segments[0],)) + tuple(segments[1:]), frozenset(member_roles))
        return Chain(tuple(root) + tuple(segments), frozenset(roles))

    def _value_info(self, value: Any, scope: Scope, this_key: Key) -> tuple[frozenset, Optional[tuple]]:
        """Roles a value carries and the member path it stands for."""
        kind = value.type
        if kind == "AwaitExpression":
            return self._value_info(value.argument, scope, this_key)
        if kind == "Identifier":
            key = self._key(value.name, scope)
            return frozenset(self._roles_of(key, value.name)), self.aliases.get(key, (value.name,))
        if kind in ("ThisExpression", "MemberExpression"):
            chain = self._chain(value, scope, this_key)
            return chain.root_roles, chain.segments
        if kind in ("CallExpression", "NewExpression"):
            module = _module_name(value)
            if module is not None:
                return frozenset({MODULE_ROLE + module}), ("require",)
            chain = self._chain(value.callee, scope, this_key)
            modules = frozenset(r for r in chain.root_roles if r.startswith(MODULE_ROLE))
            if modules:
                # an instance or product of the module
                return modules, None
            return chain.root_roles, chain.segments
        return frozenset(), None

    def _grant(self, key: Key, roles: frozenset, path: Optional[tuple]) -> bool:
        changed = False
        if roles - self.roles.get(key, set()):
            self.roles.setdefault(key, set()).update(roles)
            changed = True
        if path is not None and len(path) > 1 and key not in self.aliases and roles:
            self.aliases[key] = tuple(path)
            changed = True
        return changed

    def _grant_pattern(self, pattern: Any, scope: Scope, roles: frozenset, path: Optional[tuple]) -> bool:
        if pattern.type == "Identifier":
            return self._grant(self._key(pattern.name, scope), roles, path)
        if pattern.type == "ObjectPattern":
            modules = frozenset(r for r in roles if r.startswith(MODULE_ROLE))
            changed = False
            for prop in pattern.properties:
                if prop.type != "Property" or prop.computed:
                    continue
                member = prop.key.name if prop.key.type == "Identifier" else str(prop.key.value)
                target = prop.value.left if prop.value.type == "AssignmentPattern" else prop.value
                member_path = tuple(path) + (member,) if path else None
                changed |= self._grant_pattern(target, scope, modules, member_path)
            return changed
        return False

    def _collect(self) -> None:
        """Local functions, classes, exported entry points and imports."""
        for node, scope, fn in self._scoped_walk():
            kind = node.type
            if kind == "FunctionDeclaration" and node.id is not None:
                self.functions.setdefault(self._key(node.id.name, scope), []).append(node)
                self.fn_names[id(node)] = node.id.name
            elif kind == "VariableDeclarator" and node.id.type == "Identifier" and node.init is not None:
                if node.init.type in FUNCTION_TYPES:
                    self.functions.setdefault(self._key(node.id.name, scope), []).append(node.init)
                    self.fn_names[id(node.init)] = node.id.name
                elif node.init.type == "ClassExpression":
                    self.classes[self._key(node.id.name, scope)] = node.init
            elif kind == "AssignmentExpression" and node.right.type in FUNCTION_TYPES:
                target = self._text(node.left)
                self.fn_names.setdefault(id(node.right), target)
                if node.left.type == "Identifier":
                    self.functions.setdefault(self._key(node.left.name, scope), []).append(node.right)
                if target in ("module.exports", "exports") and node.right.params:
                    self._grant_pattern(
                        node.right.params[0], self.scopes[id(node.right)], frozenset({FRAMEWORK_OBJECT}), None
                    )
            elif kind == "ClassDeclaration" and node.id is not None:
                self.classes[self._key(node.id.name, scope)] = node
            elif kind == "ExportDefaultDeclaration":
                declaration = node.declaration
                if declaration.type in FUNCTION_TYPES and declaration.params:
                    self._grant_pattern(
                        declaration.params[0],
                        self.scopes[id(declaration)],
                        frozenset({FRAMEWORK_OBJECT}),
                        None,
                    )
            elif kind == "ImportDeclaration":
                role = frozenset({MODULE_ROLE + str(node.source.value).removeprefix("node:")})
                for specifier in node.specifiers:
                    key = self._key(specifier.local.name, scope)
                    path = None
                    if specifier.type == "ImportSpecifier":
                        path = ("require", specifier.imported.name)
                    self._grant(key, role, path)

    def _class_methods(self, cls: Any) -> list:
        return [m.value for m in cls.body.body if m.type == "MethodDefinition" and m.value is not None]

    def _constructor_targets(self, arg: Any, scope: Scope) -> list:
        if arg.type in FUNCTION_TYPES:
            return [arg]
        if arg.type == "ClassExpression":
            return self._class_methods(arg)
        if arg.type == "Identifier":
            key = self._key(arg.name, scope)
            targets = list(self.functions.get(key, []))
            if key in self.classes:
                targets += self._class_methods(self.classes[key])
            return targets
        return []

    def _find_constructors(self) -> None:
        """Functions whose `this` is a node: registered constructors and their methods."""
        for node, scope, fn in self._scoped_walk():
            if node.type != "CallExpression":
                continue
            chain = self._chain(node.callee, scope, (0, "this"))
            if FRAMEWORK_OBJECT not in chain.root_roles:
                continue
            if chain.segments[-2:] == ("nodes", "registerType") and len(node.arguments) >= 2:
                for target in self._constructor_targets(node.arguments[1], scope):
                    self.constructors.add(id(target))
            elif (
                chain.segments[-2:] == ("nodes", "createNode")
                and node.arguments
                and node.arguments[0].type == "ThisExpression"
                and fn is not None
            ):
                self.constructors.add(id(fn))

    def _resolve_roles(self) -> None:
        for _ in range(ROLE_ROUNDS):
            changed = False
            for node, scope, fn in self._scoped_walk():
                this_key = self._this_key(fn)
                if node.type == "VariableDeclarator" and node.init is not None:
                    roles, path = self._value_info(node.init, scope, this_key)
                    if roles:
                        changed |= self._grant_pattern(node.id, scope, roles, path)
                elif node.type == "AssignmentExpression" and node.operator == "=":
                    roles, path = self._value_info(node.right, scope, this_key)
                    if not roles:
                        continue
                    left = node.left
                    if left.type == "Identifier":
                        changed |= self._grant(self._key(left.name, scope), roles, path)
                    elif (
                        left.type == "MemberExpression"
                        and not left.computed
                        and left.object.type in ("Identifier", "ThisExpression")
                    ):
                        root = (
                            self._key(left.object.name, scope)
                            if left.object.type == "Identifier"
                            else this_key
                        )
                        slot = (root, left.property.name)
                        if slot not in self.member_roles:
                            alias = tuple(path) if path and len(path) > 1 else None
                            self.member_roles[slot] = (roles, alias)
                            changed = True
            if not changed:
                return

    def _find_listeners(self) -> None:
        """Handlers registered on the node run with the node as `this`."""
        for node, scope, fn in self._scoped_walk():
            if node.type != "CallExpression" or node.callee.type != "MemberExpression":
                continue
            chain = self._chain(node.callee, scope, self._this_key(fn))
            if NODE_OBJECT in chain.root_roles and len(chain.segments) == 2:
                for arg in node.arguments:
                    if arg.type == "FunctionExpression":
                        self.constructors.add(id(arg))

    # ------------------------------------------------------------ taint store

    def _union(self, *taints: Taint) -> Taint:
        merged: Taint = {}
        for taint in taints:
            for source, trace in taint.items():
                merged.setdefault(source, trace)
        return merged

    def _tag(self, taint: Taint, node: Any, description: str, rule: Rule) -> Taint:
        if not taint:
            return taint
        step = Step(self.file, _line(node), description, rule)
        tagged = {}
        for source, trace in taint.items():
            last = trace[-1]
            tagged[source] = trace if (last.line, last.rule) == (step.line, step.rule) else trace + (step,)
        return tagged

    def _add(self, store: dict, key: Any, taint: Taint) -> None:
        if not taint:
            return
        current = store.setdefault(key, {})
        for source, trace in taint.items():
            if source not in current:
                current[source] = trace
                self._changed = True

    def _endpoint(self, kind: EndpointKind, entry_id: str, line: int, symbol: str) -> Endpoint:
        location = Location(self.file, line, symbol)
        return self.endpoints.setdefault((kind, location), Endpoint(kind, entry_id, location))

    def _source(self, entry_id: str, node: Any, symbol: str) -> Taint:
        endpoint = self._endpoint(EndpointKind.SOURCE, entry_id, _line(node), symbol)
        step = Step(self.file, _line(node), f"source {entry_id}: {symbol}", Rule.SOURCE)
        return {endpoint: (step,)}

    # --------------------------------------------------------------- binding

    def _bind(self, pattern: Any, taint: Taint, scope: Scope, annotate: bool = True) -> None:
        kind = pattern.type
        if kind == "Identifier":
            if annotate:
                taint = self._tag(taint, pattern, f"assigned to {pattern.name}", Rule.ASSIGNMENT)
            self._add(self.env, self._key(pattern.name, scope), taint)
        elif kind == "ObjectPattern":
            for prop in pattern.properties:
                if prop.type == "RestElement":
                    self._bind(prop.argument, taint, scope, annotate)
                else:
                    if prop.computed:
                        self._visit(prop.key, scope)
                    self._bind(prop.value, taint, scope, annotate)
        elif kind == "ArrayPattern":
            for element in pattern.elements:
                if element is not None:
                    self._bind(element, taint, scope, annotate)
        elif kind == "AssignmentPattern":
            default = self._visit(pattern.right, scope)
            self._bind(pattern.left, self._union(taint, default), scope, annotate)
        elif kind == "RestElement":
            self._bind(pattern.argument, taint, scope, annotate)
        elif kind == "MemberExpression":
            self._store(pattern, taint, scope)

    def _store(self, member: Any, taint: Taint, scope: Scope) -> None:
        """Write into a property: the whole root container becomes tainted."""
        current = member
        while current.type == "MemberExpression":
            if current.computed:
                self._visit(current.property, scope)
            current = current.object
        if current.type == "Identifier":
            key, root = self._key(current.name, scope), current.name
        elif current.type == "ThisExpression":
            key, root = self._this_stack[-1], "this"
        else:
            self._visit(current, scope)
            return
        self._add(self.env, key, self._tag(taint, member, f"stored into {root}", Rule.CONTAINER))

    # ------------------------------------------------------------------ walk

    def _visit(self, node: Any, scope: Scope) -> Taint:
        if node is None:
            return {}
        handler = getattr(self, f"_visit_{node.type}", None)
        if handler is None:
            return self._union(*(self._visit(child, scope) for child in children(node)))
        return handler(node, scope)

    def _visit_Literal(self, node: Any, scope: Scope) -> Taint:
        return {}

    _visit_Super = _visit_Literal
    _visit_MetaProperty = _visit_Literal
    _visit_BreakStatement = _visit_Literal
    _visit_ContinueStatement = _visit_Literal
    _visit_ImportDeclaration = _visit_Literal
    _visit_ExportAllDeclaration = _visit_Literal

    def _visit_LabeledStatement(self, node: Any, scope: Scope) -> Taint:
        self._visit(node.body, scope)
        return {}

    def _visit_ExportNamedDeclaration(self, node: Any, scope: Scope) -> Taint:
        self._visit(node.declaration, scope)
        return {}

    def _visit_ExportDefaultDeclaration(self, node: Any, scope: Scope) -> Taint:
        self._visit(node.declaration, scope)
        return {}

    def _visit_Identifier(self, node: Any, scope: Scope) -> Taint:
        taint, _ = self._read(node, scope)
        return taint

    def _visit_ThisExpression(self, node: Any, scope: Scope) -> Taint:
        return dict(self.env.get(self._this_stack[-1], {}))

    def _visit_MemberExpression(self, node: Any, scope: Scope) -> Taint:
        taint, _ = self._read(node, scope)
        return taint

    def _read(self, node: Any, scope: Scope) -> tuple[Taint, bool]:
        """Taint of a read and whether a source matched inside its chain.

        Only the innermost matching part of a member chain becomes a source,
        so node.credentials.password is a single endpoint.
        """
        if node.type == "Identifier":
            key = self._key(node.name, scope)
            taint = dict(self.env.get(key, {}))
            if key in self.functions:
                return taint, False
            match = match_source(NameContext(node.name), self.catalog)
            if match is None:
                return taint, False
            return self._union(taint, self._source(match.entry_id, node, node.name)), True
        if node.type == "MemberExpression":
            taint, matched = self._read(node.object, scope)
            if node.computed:
                self._visit(node.property, scope)
            name = "[]" if node.computed else node.property.name
            taint = self._tag(taint, node, f"read of .{name}", Rule.MEMBER)
            if not matched:
                chain = self._chain(node, scope, self._this_stack[-1])
                match = match_source(ReadContext(chain), self.catalog)
                if match is not None:
                    taint = self._union(taint, self._source(match.entry_id, node, self._text(node)))
                    matched = True
            return taint, matched
        return self._visit(node, scope), False

    def _visit_VariableDeclaration(self, node: Any, scope: Scope) -> Taint:
        for declarator in node.declarations:
            if declarator.init is None:
                continue
            self._bind(declarator.id, self._visit(declarator.init, scope), scope)
        return {}

    def _visit_AssignmentExpression(self, node: Any, scope: Scope) -> Taint:
        value = self._visit(node.right, scope)
        if node.operator != "=":
            value = self._union(self._visit(node.left, scope), value)
        self._bind(node.left, value, scope)
        return value

    def _visit_BinaryExpression(self, node: Any, scope: Scope) -> Taint:
        taint = self._union(self._visit(node.left, scope), self._visit(node.right, scope))
        return self._tag(taint, node, f"{node.operator} expression", Rule.EXPRESSION)

    _visit_LogicalExpression = _visit_BinaryExpression

    def _visit_ConditionalExpression(self, node: Any, scope: Scope) -> Taint:
        taint = self._union(
            self._visit(node.test, scope),
            self._visit(node.consequent, scope),
            self._visit(node.alternate, scope),
        )
        return self._tag(taint, node, "conditional expression", Rule.EXPRESSION)

    def _visit_TemplateLiteral(self, node: Any, scope: Scope) -> Taint:
        taint = self._union(*(self._visit(e, scope) for e in node.expressions))
        return self._tag(taint, node, "template literal", Rule.EXPRESSION)

    def _visit_ObjectExpression(self, node: Any, scope: Scope) -> Taint:
        parts = []
        for prop in node.properties:
            if prop.type == "Property":
                if prop.computed:
                    self._visit(prop.key, scope)
                parts.append(self._visit(prop.value, scope))
            else:
                parts.append(self._visit(prop, scope))
        return self._tag(self._union(*parts), node, "object literal", Rule.CONTAINER)

    def _visit_ArrayExpression(self, node: Any, scope: Scope) -> Taint:
        parts = [self._visit(e, scope) for e in node.elements if e is not None]
        return self._tag(self._union(*parts), node, "array literal", Rule.CONTAINER)

    def _visit_ClassDeclaration(self, node: Any, scope: Scope) -> Taint:
        self._visit(node.superClass, scope)
        for member in node.body.body:
            if member.computed:
                self._visit(member.key, scope)
            self._visit(member.value, scope)
        return {}

    _visit_ClassExpression = _visit_ClassDeclaration

    def _visit_TryStatement(self, node: Any, scope: Scope) -> Taint:
        self._visit(node.block, scope)
        handler = node.handler
        if handler is not None:
            param = handler.param
            if param is not None:
                symbol = param.name if param.type == "Identifier" else self._text(param)
                match = match_source(CatchContext(symbol), self.catalog)
                if match is not None:
                    self._bind(param, self._source(match.entry_id, param, symbol), scope, annotate=False)
            self._visit(handler.body, scope)
        self._visit(node.finalizer, scope)
        return {}

    def _visit_ForOfStatement(self, node: Any, scope: Scope) -> Taint:
        taint = self._visit(node.right, scope)
        left = node.left
        if left.type == "VariableDeclaration":
            left = left.declarations[0].id
        self._bind(left, taint, scope)
        self._visit(node.body, scope)
        return {}

    _visit_ForInStatement = _visit_ForOfStatement

    def _visit_ReturnStatement(self, node: Any, scope: Scope) -> Taint:
        taint = self._visit(node.argument, scope)
        if self._fn_stack:
            self._add(self.returns, id(self._fn_stack[-1]), taint)
        return {}

    def _visit_function(self, node: Any, scope: Scope) -> Taint:
        if node.generator:
            self._warn(_line(node), "generator function not analyzed", once=f"gen:{id(node)}")
            return {}
        fn_scope = self.scopes[id(node)]
        if node.type == "ArrowFunctionExpression":
            this_key = self._this_stack[-1]
        else:
            this_key = NODE_THIS if id(node) in self.constructors else (fn_scope.id, "this")
        self._this_stack.append(this_key)
        self._fn_stack.append(node)
        try:
            for param in node.params:
                if param.type == "AssignmentPattern":
                    self._bind(param.left, self._visit(param.right, fn_scope), fn_scope)
            if node.body.type == "BlockStatement":
                for statement in node.body.body:
                    self._visit(statement, fn_scope)
            else:
                self._add(self.returns, id(node), self._visit(node.body, fn_scope))
        finally:
            self._this_stack.pop()
            self._fn_stack.pop()
        return {}

    _visit_FunctionDeclaration = _visit_function
    _visit_FunctionExpression = _visit_function
    _visit_ArrowFunctionExpression = _visit_function

    # ----------------------------------------------------------------- calls

    def _function_targets(self, node: Any, scope: Scope) -> list:
        if node.type in FUNCTION_TYPES:
            return [node]
        if node.type == "Identifier":
            return self.functions.get(self._key(node.name, scope), [])
        return []

    def _param_names(self, fn: Any) -> tuple[str, ...]:
        names = []
        for param in fn.params:
            target = param.left if param.type == "AssignmentPattern" else param
            names.append(target.name if target.type == "Identifier" else "")
        return tuple(names)

    def _call_context(self, node: Any, scope: Scope) -> CallContext:
        literals = []
        params = []
        for arg in node.arguments:
            if arg.type == "Literal" and isinstance(arg.value, str):
                literals.append(arg.value)
            elif arg.type == "TemplateLiteral" and not arg.expressions:
                literals.append(_cooked(arg.quasis[0]))
            else:
                literals.append(None)
            targets = self._function_targets(arg, scope)
            params.append(self._param_names(targets[0]) if targets else None)
        chain = self._chain(node.callee, scope, self._this_stack[-1])
        return CallContext(chain, tuple(literals), tuple(params))

    def _seed_callbacks(self, node: Any, ctx: CallContext, scope: Scope) -> None:
        seeded: dict[tuple[int, int], str] = {}
        for match in match_sources(ctx, self.catalog):
            for slot in match.seeded_params:
                seeded.setdefault(slot, match.entry_id)
        for (arg_index, param_index), entry_id in sorted(seeded.items()):
            for fn in self._function_targets(node.arguments[arg_index], scope):
                if param_index >= len(fn.params):
                    continue
                param = fn.params[param_index]
                target = param.left if param.type == "AssignmentPattern" else param
                symbol = target.name if target.type == "Identifier" else self._text(target)
                taint = self._source(entry_id, target, symbol)
                self._bind(target, taint, self.scopes[id(fn)], annotate=False)

    def _check_sink(self, node: Any, ctx: CallContext, args: list[Taint], callee_text: str) -> None:
        match = match_sink(ctx, self.catalog)
        if match is None:
            return
        line = _line(node)
        sink = self._endpoint(EndpointKind.SINK, match.entry_id, line, callee_text)
        if match.taint_positions == TAINT_ANY:
            positions = range(len(args))
        else:
            positions = sorted(p for p in match.taint_positions if p < len(args))
        step = Step(self.file, line, f"sink {match.entry_id}: {callee_text}", Rule.SINK)
        for position in positions:
            for source, trace in args[position].items():
                if (source, sink) in self.flows:
                    continue
                self.flows[(source, sink)] = TaintFlow(
                    source=source,
                    sink=sink,
                    steps=trace + (step,),
                    data_class=self.catalog.get(source.entry_id).data_class_hint,
                    sink_category=match.sink_category,
                )

    def _limit_depth(self, taint: Taint, node: Any) -> Taint:
        kept = {}
        for source, trace in taint.items():
            if _call_depth(trace) > CFG.max_call_depth:
                self._warn(
                    _line(node),
                    f"call depth limit {CFG.max_call_depth} reached, flow from {source.location} dropped",
                    once=f"depth:{source.location}",
                )
                continue
            kept[source] = trace
        return kept

    def _call_local(self, fn: Any, args: list[Taint], node: Any) -> Taint:
        fn_scope = self.scopes[id(fn)]
        name = self.fn_names.get(id(fn), "function")
        for index, param in enumerate(fn.params):
            if param.type == "RestElement":
                taint, target = self._union(*args[index:]), param.argument
            else:
                taint, target = (args[index] if index < len(args) else {}), param
            if not taint:
                continue
            taint = self._tag(taint, node, f"argument {index} of {name}", Rule.CALL_ARGUMENT)
            self._bind(target, self._limit_depth(taint, node), fn_scope, annotate=False)
        return self._tag(self.returns.get(id(fn), {}), node, f"returned from {name}", Rule.CALL_RETURN)

    def _visit_CallExpression(self, node: Any, scope: Scope) -> Taint:
        callee = node.callee
        if _module_name(node) is not None:
            return {}
        if callee.type == "Identifier" and callee.name == "eval":
            self._warn(_line(node), "dynamic evaluation not analyzed", once=f"eval:{_line(node)}")

        receiver: Taint = {}
        if callee.type == "MemberExpression":
            receiver, _ = self._read(callee.object, scope)
            if callee.computed:
                self._visit(callee.property, scope)
        elif callee.type not in ("Identifier", "Super"):
            receiver = self._visit(callee, scope)
        args = [self._visit(arg, scope) for arg in node.arguments]

        ctx = self._call_context(node, scope)
        callee_text = self._text(callee)
        self._seed_callbacks(node, ctx, scope)
        self._check_sink(node, ctx, args, callee_text)

        result: Taint = {}
        for match in match_sources(ctx, self.catalog):
            if match.seeds_result:
                result = self._source(match.entry_id, node, callee_text)
                break

        targets = self._function_targets(callee, scope)
        if targets:
            returned = [self._call_local(fn, args, node) for fn in targets]
            return self._union(result, *returned)

        modules = [r for r in ctx.callee.root_roles if r.startswith(MODULE_ROLE + ".")]
        if modules:
            self._warn(
                _line(node),
                f"cross-file call {callee_text} into {modules[0][len(MODULE_ROLE):]} not followed",
                once="cross-file",
            )

        passed = self._union(receiver, *args)
        if passed:
            result = self._union(
                result, self._tag(passed, node, f"result of {callee_text}", Rule.PASS_THROUGH)
            )
            handed = self._tag(passed, node, f"callback of {callee_text}", Rule.CALLBACK)
            for arg in node.arguments:
                for fn in self._function_targets(arg, scope):
                    fn_scope = self.scopes[id(fn)]
                    for param in fn.params:
                        self._bind(param, handed, fn_scope, annotate=False)
        return result

    _visit_NewExpression = _visit_CallExpression

    # ------------------------------------------------------------------- run

    def run(self) -> FileAnalysis:
        for statement in self.tree.body:
            self._declare(statement, self.global_scope)
        self._collect()
        self._find_constructors()
        self._resolve_roles()
        self._find_listeners()

        global_this = (self.global_scope.id, "this")
        for iteration in range(CFG.max_iterations):
            self._changed = False
            for statement in self.tree.body:
                self._this_stack = [global_this]
                self._fn_stack = []
                try:
                    self._visit(statement, self.global_scope)
                except RecursionError:
                    self._warn(
                        _line(statement),
                        "statement nested too deeply, skipped",
                        once=f"deep:{id(statement)}",
                    )
            if not self._changed:
                break
        else:
            self._warn(
                0,
                f"iteration limit {CFG.max_iterations} reached, flows may be incomplete",
                once="iterations",
            )

        result = FileAnalysis(self.file)
        result.diagnostics = [
            f"{self.file}:{error.line}: syntax error: {error.message}" for error in self.tree.parse_errors
        ] + self.diagnostics
        result.endpoints = sorted(self.endpoints.values(), key=Endpoint.sort_key)
        result.flows = sorted(self.flows.values(), key=TaintFlow.sort_key)
        return result


def analyze_file(tree: SyntaxTree, catalog: Catalog) -> FileAnalysis:
    """Find the endpoints of one file and the flows between them

    Args:
        tree (SyntaxTree): A tree from parse_js
        catalog (Catalog): Sources and sinks to match

    Returns:
        FileAnalysis: Every matched endpoint, every intra-file flow with a
            witness trace, and diagnostics (syntax errors, truncation, scope limits)
    """
    return FileAnalyzer(tree, catalog).run()
