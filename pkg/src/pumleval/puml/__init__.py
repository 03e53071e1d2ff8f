"""PlantUML class-diagram parsing, validation and canonical serialization."""

from .model import (
    AttributeDecl,
    Diagram,
    EnumDecl,
    Issue,
    IssueSeverity,
    MethodRecord,
    PackageDecl,
    Parameter,
    Provenance,
    Relationship,
    RelationshipKind,
    UmlClass,
    ValidationReport,
    Visibility,
)
from .parser import (
    MalformedMemberError,
    ParseError,
    parse_diagram,
    parse_member_line,
    parse_with_warnings,
)
from .serializer import serialize
from .validator import parse_and_validate, validate

__all__ = [
    "AttributeDecl",
    "Diagram",
    "EnumDecl",
    "Issue",
    "IssueSeverity",
    "MalformedMemberError",
    "MethodRecord",
    "PackageDecl",
    "Parameter",
    "ParseError",
    "Provenance",
    "Relationship",
    "RelationshipKind",
    "UmlClass",
    "ValidationReport",
    "Visibility",
    "parse_and_validate",
    "parse_diagram",
    "parse_member_line",
    "parse_with_warnings",
    "serialize",
    "validate",
]
