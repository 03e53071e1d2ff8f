"""Line-oriented parser for the PlantUML class-diagram subset.

Supported constructs: ``class`` / ``abstract class`` / ``interface`` / ``enum``
declarations (with or without bodies), ``package "…" { }`` blocks, member
lines with visibility markers and ``//UCxx`` / ``//action:`` annotations, and
relationship arrows (``-->``, ``--``, ``..>``, ``<|--``, ``<|..``, ``*--``,
``o--`` plus their mirrored forms) with optional quoted multiplicities and
``: label`` suffixes.

Presentation directives (``skinparam``, ``hide``, ``title`` …) are skipped;
anything else unrecognized at the top level is recorded as a warning rather
than aborting the parse.
"""

from __future__ import annotations

import re

from .model import (
    AttributeDecl,
    Diagram,
    EnumDecl,
    Issue,
    IssueSeverity,
    MethodRecord,
    PackageDecl,
    Parameter,
    Relationship,
    RelationshipKind,
    UmlClass,
    Visibility,
)

# Error kinds
MISSING_START = "MissingStart"
UNBALANCED_BLOCK = "UnbalancedBlock"
MALFORMED_MEMBER = "MalformedMember"
UNKNOWN_ENDPOINT = "UnknownEndpoint"
UNKNOWN_DIRECTIVE = "UnknownDirective"
DUPLICATE_MEMBER = "DuplicateMember"


class ParseError(Exception):
    """Fatal parse failure with source position and an expected-token hint."""

    def __init__(self, kind: str, message: str, line: int, column: int = 1,
                 expected: str | None = None):
        self.kind = kind
        self.line = line
        self.column = column
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{kind} at line {line}, column {column}: {message}{hint}")


class MalformedMemberError(ParseError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(
            MALFORMED_MEMBER, message, line, column,
            expected="'name(params) : Type' or 'name : Type'",
        )


_NAME = r'[A-Za-z_][\w.]*'
_COLOR = r'#[\w;:.|/\\-]+'

_CLASS_RE = re.compile(
    rf'^(?P<abstract>abstract\s+)?(?P<kw>class|interface)\s+'
    rf'(?P<name>{_NAME}|"[^"]+")(?:\s+as\s+(?P<alias>{_NAME}))?'
    rf'\s*(?:<<(?P<stereo>[^>]*)>>)?'
    rf'(?:\s+extends\s+(?P<extends>{_NAME}(?:\s*,\s*{_NAME})*))?'
    rf'(?:\s+implements\s+(?P<implements>{_NAME}(?:\s*,\s*{_NAME})*))?'
    rf'\s*(?:{_COLOR})?\s*'
    rf'(?P<brace>\{{)?\s*(?P<close>\}})?\s*$'
)
_ENUM_RE = re.compile(
    rf'^enum\s+(?P<name>{_NAME}|"[^"]+")(?:\s+as\s+(?P<alias>{_NAME}))?'
    rf'\s*(?:{_COLOR})?\s*(?P<brace>\{{)?\s*(?P<close>\}})?\s*$'
)
_PACKAGE_RE = re.compile(
    rf'^package\s+(?P<name>"[^"]+"|{_NAME})\s*(?:<<[^>]*>>)?\s*'
    rf'(?:{_COLOR})?\s*\{{\s*$'
)
_BARE_ABSTRACT_RE = re.compile(r'^abstract\s+(?!class\b|interface\b)')

_LHEAD = r'<\||<|\*|o'
_RHEAD = r'\|>|>|\*|o'
# shaft: dashes/dots with optional [style] groups and direction hints inside
_SHAFT = (r'(?=[^\s<>|*o]*[-.])'
          r'(?:[-.]+|\[[^\]]*\]|(?:up|down|left|right|u|d|l|r)(?=[-.]))+')
_REL_RE = re.compile(
    rf'^(?P<a>{_NAME})\s*(?:"(?P<ma>[^"]*)"\s*)?'
    rf'(?P<lhead>{_LHEAD})?(?P<shaft>{_SHAFT})(?P<rhead>{_RHEAD})?'
    rf'\s*(?:"(?P<mb>[^"]*)"\s*)?(?P<b>{_NAME})\s*(?::\s*(?P<label>.+?)\s*)?$'
)
_SEPARATOR_RE = re.compile(r'^([-.=_])\1(?:.*\1\1)?$')

_VISIBILITY_RE = re.compile(r'^([+\-#~])\s*')
_MODIFIER_RE = re.compile(r'\{(?:static|abstract|field|method|classifier)\}\s*', re.IGNORECASE)
_METHOD_RE = re.compile(r'^(?P<name>[A-Za-z_]\w*)\s*\((?P<params>.*)\)\s*(?::\s*(?P<ret>.+?))?\s*$')
_ATTR_RE = re.compile(r'^(?P<name>[A-Za-z_]\w*)\s*(?::\s*(?P<type>.+?))?\s*$')
_ENUM_VALUE_RE = re.compile(r'^[A-Za-z_]\w*$')

_ACTION_RE = re.compile(r'//\s*action\s*:', re.IGNORECASE)
_UC_RE = re.compile(r'[Uu][Cc](\d+)')

# Presentation/layout lines that are skipped without a warning.
_IGNORED_PREFIXES = (
    "skinparam", "hide", "show", "title", "caption", "header", "footer",
    "scale", "!", "left to right direction", "top to bottom direction",
    "autonumber", "allowmixing", "remove", "'",
)


def _split_annotations(line: str) -> tuple[str, list[str], str | None]:
    """Split a member line into (code, uc_ids, action_text).

    The comment region starts at the first ``//``.  Everything after the first
    ``//action:`` marker is the action text; UC ids are collected only from
    the part of the comment region before that marker.
    """
    comment_start = line.find("//")
    if comment_start < 0:
        return line.strip(), [], None
    code = line[:comment_start].strip()
    comment = line[comment_start:]
    action_match = _ACTION_RE.search(comment)
    if action_match:
        uc_region = comment[: action_match.start()]
        action_text: str | None = comment[action_match.end():].strip()
    else:
        uc_region = comment
        action_text = None
    uc_ids = [f"UC{digits}" for digits in _UC_RE.findall(uc_region)]
    return code, uc_ids, action_text


def _split_params(params: str) -> list[Parameter]:
    """Split a parameter list on top-level commas, honoring <> and () nesting."""
    params = params.strip()
    if not params:
        return []
    parts: list[str] = []
    depth = 0
    current = []
    for ch in params:
        if ch in "<([":
            depth += 1
        elif ch in ">)]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    result = []
    for part in parts:
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            pname, ptype = part.split(":", 1)
            result.append(Parameter(name=pname.strip(), type=ptype.strip() or None))
        else:
            result.append(Parameter(name=part, type=None))
    return result


def parse_member_line(line: str, owning_class: str = "",
                      line_no: int = 1) -> MethodRecord | AttributeDecl:
    """Parse one member line inside a class body.

    A line with a trailing parentheses group parses as a method; otherwise a
    ``name : Type`` (or bare ``name``) line parses as an attribute.  Raises
    MalformedMemberError when neither grammar matches.
    """
    code, uc_ids, action_text = _split_annotations(line)
    if not code:
        raise MalformedMemberError("empty member line", line_no)
    code = _MODIFIER_RE.sub("", code).strip()  # {static}/{abstract} may precede
    vis = Visibility.NONE
    m = _VISIBILITY_RE.match(code)
    if m:
        vis = Visibility.from_marker(m.group(1))
        code = code[m.end():]
    code = _MODIFIER_RE.sub("", code).strip()
    if "(" in code:
        open_idx = code.find("(")
        close_idx = code.rfind(")")
        if close_idx < open_idx:
            raise MalformedMemberError(f"unclosed parameter list: {code!r}", line_no)
        method_match = _METHOD_RE.match(code)
        if not method_match:
            # Re-split manually so nested parentheses inside parameter types work.
            name_part = code[:open_idx].strip()
            tail = code[close_idx + 1:].strip()
            ret = tail[1:].strip() if tail.startswith(":") else None
            if not re.fullmatch(r"[A-Za-z_]\w*", name_part) or (tail and ret is None):
                raise MalformedMemberError(f"not a method declaration: {code!r}", line_no)
            params_src = code[open_idx + 1: close_idx]
        else:
            name_part = method_match.group("name")
            params_src = method_match.group("params")
            ret = method_match.group("ret")
        return MethodRecord(
            name=name_part,
            visibility=vis,
            parameters=_split_params(params_src),
            return_type=ret.strip() if ret else None,
            uc_ids=uc_ids,
            action_text=action_text,
            owning_class=owning_class,
        )
    attr_match = _ATTR_RE.match(code)
    if not attr_match:
        raise MalformedMemberError(f"not an attribute declaration: {code!r}", line_no)
    atype = attr_match.group("type")
    return AttributeDecl(
        name=attr_match.group("name"),
        visibility=vis,
        type=atype.strip() if atype else None,
    )


def _resolve_relationship(match: re.Match) -> Relationship | None:
    lhead = match.group("lhead")
    rhead = match.group("rhead")
    shaft = re.sub(r"\[[^\]]*\]", "", match.group("shaft"))  # drop [style] noise
    dotted = "." in shaft and "-" not in shaft
    a, b = match.group("a"), match.group("b")
    ma, mb = match.group("ma"), match.group("mb")
    label = match.group("label")

    if lhead and rhead:
        return None  # double-headed arrows are outside the grammar
    head = lhead or rhead
    # Orientation: the endpoint carrying the head (arrow tip or diamond) is
    # the parent / dependency target / whole, respectively.
    head_at_left = lhead is not None

    if head in ("<|", "|>"):
        kind = RelationshipKind.REALIZATION if dotted else RelationshipKind.INHERITANCE
        # source = child, target = parent; head marks the parent side
        src, tgt = (b, a) if head_at_left else (a, b)
        sm, tm = (mb, ma) if head_at_left else (ma, mb)
    elif head == "*":
        kind = RelationshipKind.COMPOSITION
        # diamond marks the whole
        src, tgt = (a, b) if head_at_left else (b, a)
        sm, tm = (ma, mb) if head_at_left else (mb, ma)
    elif head == "o":
        kind = RelationshipKind.AGGREGATION
        src, tgt = (a, b) if head_at_left else (b, a)
        sm, tm = (ma, mb) if head_at_left else (mb, ma)
    elif head in ("<", ">"):
        kind = RelationshipKind.DEPENDENCY if dotted else RelationshipKind.ASSOCIATION
        src, tgt = (b, a) if head_at_left else (a, b)
        sm, tm = (mb, ma) if head_at_left else (ma, mb)
    elif head is None and not dotted:
        kind = RelationshipKind.ASSOCIATION
        src, tgt, sm, tm = a, b, ma, mb
    else:
        return None  # bare dotted line: not in the supported grammar

    return Relationship(
        kind=kind, source=src, target=tgt,
        source_multiplicity=sm or None, target_multiplicity=tm or None,
        label=label.strip() if label else None,
    )


class _Parser:
    """Single-pass parser over source lines; collects non-fatal warnings."""

    def __init__(self, text: str):
        self.lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
        self.warnings: list[Issue] = []
        self.diagram = Diagram()
        self._package_stack: list[PackageDecl] = []
        self._current_class: UmlClass | None = None
        self._current_enum: EnumDecl | None = None
        self._open_braces: list[tuple[str, int]] = []  # (block kind, line)
        self._rel_lines: list[int] = []

    def _warn(self, line_no: int, kind: str, message: str) -> None:
        self.warnings.append(Issue(line_no, kind, message, IssueSeverity.WARNING))

    def parse(self) -> Diagram:
        idx = 0
        n = len(self.lines)
        started = False
        start_line = 0
        while idx < n:
            stripped = self.lines[idx].strip()
            if stripped.startswith("@startuml"):
                started = True
                start_line = idx
                name = stripped[len("@startuml"):].strip()
                self.diagram.name = name or None
                break
            idx += 1
        if not started:
            raise ParseError(MISSING_START, "no @startuml directive found", 1,
                             expected="@startuml")

        in_note = False
        ended = False
        for offset, raw in enumerate(self.lines[start_line + 1:]):
            line_no = start_line + 2 + offset
            line = raw.strip()
            if not line:
                continue
            if in_note:
                if line.lower().startswith(("end note", "endnote", "end legend", "endlegend")):
                    in_note = False
                continue
            if line.startswith("@enduml"):
                ended = True
                if self._open_braces:
                    kind, opened_at = self._open_braces[-1]
                    raise ParseError(
                        UNBALANCED_BLOCK,
                        f"{kind} block opened at line {opened_at} never closed",
                        line_no, expected="}",
                    )
                break
            if self._current_class is None and self._current_enum is None \
                    and self._is_block_note(line):
                in_note = True
                continue
            self._parse_line(line, line_no)

        if not ended:
            if self._open_braces:
                kind, opened_at = self._open_braces[-1]
                raise ParseError(
                    UNBALANCED_BLOCK,
                    f"{kind} block opened at line {opened_at} never closed",
                    len(self.lines), expected="}",
                )
            raise ParseError(UNBALANCED_BLOCK, "missing @enduml", len(self.lines),
                             expected="@enduml")
        self._check_endpoints()
        return self.diagram

    @staticmethod
    def _is_block_note(line: str) -> bool:
        low = line.lower()
        if not (low.startswith("note") or low.startswith("legend")):
            return False
        return ":" not in line  # single-line notes carry their text after a colon

    def _parse_line(self, line: str, line_no: int) -> None:
        if line.startswith("'"):
            return  # PlantUML line comment
        if line == "}":
            self._close_block(line_no)
            return
        if self._current_class is not None:
            self._parse_class_member(line, line_no)
            return
        if self._current_enum is not None:
            self._parse_enum_value(line, line_no)
            return

        if _BARE_ABSTRACT_RE.match(line):
            line = "abstract class " + line[len("abstract"):].lstrip()
        class_match = _CLASS_RE.match(line)
        if class_match:
            self._open_class(class_match, line_no)
            return
        enum_match = _ENUM_RE.match(line)
        if enum_match:
            self._open_enum(enum_match, line_no)
            return
        package_match = _PACKAGE_RE.match(line)
        if package_match:
            self._open_package(package_match, line_no)
            return
        rel_match = _REL_RE.match(line)
        if rel_match:
            rel = _resolve_relationship(rel_match)
            if rel is None:
                self._warn(line_no, UNKNOWN_DIRECTIVE, f"unsupported arrow form: {line!r}")
            else:
                self.diagram.relationships.append(rel)
                self._rel_lines.append(line_no)
            return
        if line.rstrip().endswith("{"):
            # unknown block construct (together, map, ...): keep brace balance,
            # parse the contents as ordinary top-level lines
            if not line.lower().startswith("together"):
                self._warn(line_no, UNKNOWN_DIRECTIVE,
                           f"unrecognized block treated as grouping: {line!r}")
            self._open_braces.append(("group", line_no))
            return
        if line.lower().startswith(_IGNORED_PREFIXES):
            return
        self._warn(line_no, UNKNOWN_DIRECTIVE, f"skipped unrecognized line: {line!r}")

    @staticmethod
    def _dequote(name: str) -> str:
        return name[1:-1] if name.startswith('"') and name.endswith('"') else name

    def _current_path(self) -> list[str]:
        return [p.name for p in self._package_stack]

    def _open_class(self, match: re.Match, line_no: int) -> None:
        # an alias is the referable identifier; the quoted display name is cosmetic
        name = match.group("alias") or self._dequote(match.group("name"))
        existing = self.diagram.find_class(name)
        if existing is None:
            cls = UmlClass(
                name=name,
                package_path=self._current_path(),
                stereotype=(match.group("stereo") or "").strip() or None,
                is_abstract=bool(match.group("abstract")),
                is_interface=match.group("kw") == "interface",
            )
            self.diagram.classes.append(cls)
        else:
            cls = existing  # PlantUML allows reopening a class body
        for parents, kind in ((match.group("extends"), RelationshipKind.INHERITANCE),
                              (match.group("implements"), RelationshipKind.REALIZATION)):
            if parents:
                for parent in (p.strip() for p in parents.split(",")):
                    self.diagram.relationships.append(
                        Relationship(kind=kind, source=name, target=parent))
                    self._rel_lines.append(line_no)
        if match.group("brace") and not match.group("close"):
            self._current_class = cls
            self._open_braces.append(("class", line_no))

    def _open_enum(self, match: re.Match, line_no: int) -> None:
        name = match.group("alias") or self._dequote(match.group("name"))
        enum = EnumDecl(name=name, package_path=self._current_path())
        self.diagram.enums.append(enum)
        if match.group("brace") and not match.group("close"):
            self._current_enum = enum
            self._open_braces.append(("enum", line_no))

    def _open_package(self, match: re.Match, line_no: int) -> None:
        name = self._dequote(match.group("name"))
        parent = self._current_path()
        pkg = next(
            (p for p in self.diagram.packages
             if p.name == name and p.parent_path == parent),
            None,
        )
        if pkg is None:  # reopened packages merge, as in PlantUML
            pkg = PackageDecl(name=name, parent_path=parent)
            self.diagram.packages.append(pkg)
        self._package_stack.append(pkg)
        self._open_braces.append(("package", line_no))

    def _close_block(self, line_no: int) -> None:
        if not self._open_braces:
            raise ParseError(UNBALANCED_BLOCK, "unmatched '}'", line_no, expected="declaration")
        kind, _ = self._open_braces.pop()
        if kind == "class":
            self._current_class = None
        elif kind == "enum":
            self._current_enum = None
        elif kind == "package":
            self._package_stack.pop()
        # "group" blocks carry no state

    def _parse_class_member(self, line: str, line_no: int) -> None:
        code, _, _ = _split_annotations(line)
        if not code or _SEPARATOR_RE.match(code):
            return  # comment or section separator (--, == title ==, ...)
        assert self._current_class is not None
        member = parse_member_line(line, self._current_class.name, line_no)
        if isinstance(member, MethodRecord):
            self._current_class.methods.append(member)
        else:
            if any(a.name == member.name for a in self._current_class.attributes):
                self._warn(line_no, DUPLICATE_MEMBER,
                           f"duplicate attribute {member.name!r} in class "
                           f"{self._current_class.name!r} ignored")
            else:
                self._current_class.attributes.append(member)

    def _parse_enum_value(self, line: str, line_no: int) -> None:
        code, _, _ = _split_annotations(line)
        if not code or _SEPARATOR_RE.match(code):
            return
        assert self._current_enum is not None
        if not _ENUM_VALUE_RE.match(code):
            raise MalformedMemberError(f"not an enum value: {code!r}", line_no)
        if code in self._current_enum.values:
            self._warn(line_no, DUPLICATE_MEMBER,
                       f"duplicate enum value {code!r} in {self._current_enum.name!r} ignored")
        else:
            self._current_enum.values.append(code)

    def _check_endpoints(self) -> None:
        declared = self.diagram.declared_names()
        for rel, line_no in zip(self.diagram.relationships, self._rel_lines):
            for endpoint in (rel.source, rel.target):
                if endpoint not in declared:
                    self._warn(line_no, UNKNOWN_ENDPOINT,
                               f"relationship endpoint {endpoint!r} is not a declared "
                               f"class or enum")


def parse_diagram(text: str) -> Diagram:
    """Parse full PlantUML source into a Diagram.

    Raises ParseError (MissingStart, UnbalancedBlock or MalformedMember) on
    fatal problems; non-fatal issues are dropped here; use
    :func:`parse_with_warnings` or ``validator.validate`` to see them.
    """
    return _Parser(text).parse()


def parse_with_warnings(text: str) -> tuple[Diagram, list[Issue]]:
    """Like :func:`parse_diagram` but also returns non-fatal warnings."""
    parser = _Parser(text)
    diagram = parser.parse()
    return diagram, parser.warnings
