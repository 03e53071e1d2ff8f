"""Canonical PlantUML emission.

The canonical form is deterministic: one member per line, a single space
after the visibility marker, annotations appended in UC-then-action order,
LF line endings.  ``parse_diagram(serialize(d))`` reproduces ``d`` under
structural equality.
"""

from __future__ import annotations

from .model import (
    AttributeDecl,
    Diagram,
    EnumDecl,
    MethodRecord,
    Relationship,
    RelationshipKind,
    UmlClass,
)

_INDENT = "  "


def _format_name(name: str) -> str:
    return f'"{name}"' if any(ch.isspace() for ch in name) else name


def _member_prefix(visibility) -> str:
    marker = visibility.value
    return f"{marker} " if marker else ""


def format_method(method: MethodRecord) -> str:
    params = ", ".join(
        f"{p.name}: {p.type}" if p.type else p.name for p in method.parameters
    )
    line = f"{_member_prefix(method.visibility)}{method.name}({params})"
    if method.return_type:
        line += f": {method.return_type}"
    for uc in method.uc_ids:
        line += f" //{uc}"
    if method.action_text is not None:
        line += f" //action: {method.action_text}"
    return line


def format_attribute(attr: AttributeDecl) -> str:
    line = f"{_member_prefix(attr.visibility)}{attr.name}"
    if attr.type:
        line += f": {attr.type}"
    return line


def _emit_class(cls: UmlClass, depth: int, out: list[str]) -> None:
    pad = _INDENT * depth
    keyword = "interface" if cls.is_interface else "class"
    if cls.is_abstract and not cls.is_interface:
        keyword = "abstract class"
    head = f"{pad}{keyword} {_format_name(cls.name)}"
    if cls.stereotype:
        head += f" <<{cls.stereotype}>>"
    out.append(head + " {")
    for attr in cls.attributes:
        out.append(f"{pad}{_INDENT}{format_attribute(attr)}")
    for method in cls.methods:
        out.append(f"{pad}{_INDENT}{format_method(method)}")
    out.append(f"{pad}}}")


def _emit_enum(enum: EnumDecl, depth: int, out: list[str]) -> None:
    pad = _INDENT * depth
    out.append(f"{pad}enum {_format_name(enum.name)} {{")
    for value in enum.values:
        out.append(f"{pad}{_INDENT}{value}")
    out.append(f"{pad}}}")


def format_relationship(rel: Relationship) -> str:
    def side(name: str, mult: str | None) -> tuple[str, str]:
        return _format_name(name), f'"{mult}" ' if mult else ""

    if rel.kind in (RelationshipKind.INHERITANCE, RelationshipKind.REALIZATION):
        arrow = "<|--" if rel.kind is RelationshipKind.INHERITANCE else "<|.."
        left, lmult = side(rel.target, rel.target_multiplicity)
        right, rmult = side(rel.source, rel.source_multiplicity)
    else:
        arrow = {
            RelationshipKind.ASSOCIATION: "-->",
            RelationshipKind.DEPENDENCY: "..>",
            RelationshipKind.AGGREGATION: "o--",
            RelationshipKind.COMPOSITION: "*--",
        }[rel.kind]
        left, lmult = side(rel.source, rel.source_multiplicity)
        right, rmult = side(rel.target, rel.target_multiplicity)
    line = f"{left} {lmult}{arrow} {rmult}{right}"
    if rel.label:
        line += f" : {rel.label}"
    return line


def serialize(diagram: Diagram) -> str:
    """Render a Diagram to canonical PlantUML text (LF endings, trailing newline).

    Declaration order follows the diagram's class list, then its enum list;
    package blocks are opened and closed (reopening when necessary) so that
    every element sits inside its recorded package path.  Reparsing merges
    reopened packages, so parse(serialize(parse(t))) == parse(t).
    """
    out: list[str] = []
    header = "@startuml"
    if diagram.name:
        header += f" {diagram.name}"
    out.append(header)

    open_path: list[str] = []
    touched_paths: set[tuple[str, ...]] = set()

    def move_to(path: list[str]) -> None:
        nonlocal open_path
        common = 0
        while (common < len(open_path) and common < len(path)
               and open_path[common] == path[common]):
            common += 1
        while len(open_path) > common:
            open_path.pop()
            out.append(f"{_INDENT * len(open_path)}}}")
        for name in path[common:]:
            out.append(f"{_INDENT * len(open_path)}package {_format_name(name)} {{")
            open_path.append(name)
            touched_paths.add(tuple(open_path))

    for cls in diagram.classes:
        move_to(cls.package_path)
        _emit_class(cls, len(open_path), out)
    for enum in diagram.enums:
        move_to(enum.package_path)
        _emit_enum(enum, len(open_path), out)
    move_to([])

    # Declared-but-empty packages still need a block so they survive reparsing.
    for pkg in diagram.packages:
        if tuple(pkg.path) not in touched_paths:
            move_to(pkg.path)
    move_to([])

    for rel in diagram.relationships:
        out.append(format_relationship(rel))
    out.append("@enduml")
    return "\n".join(out) + "\n"
