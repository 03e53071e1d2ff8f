"""Object model for the PlantUML class-diagram subset handled by this toolkit."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Visibility(str, Enum):
    """UML member visibility marker. NONE means the member line had no marker."""

    PUBLIC = "+"
    PRIVATE = "-"
    PROTECTED = "#"
    PACKAGE = "~"
    NONE = ""

    @classmethod
    def from_marker(cls, marker: str) -> "Visibility":
        return cls(marker) if marker in ("+", "-", "#", "~") else cls.NONE


class RelationshipKind(str, Enum):
    ASSOCIATION = "association"
    AGGREGATION = "aggregation"
    COMPOSITION = "composition"
    INHERITANCE = "inheritance"
    DEPENDENCY = "dependency"
    REALIZATION = "realization"


@dataclass(frozen=True)
class Parameter:
    name: str
    type: str | None = None


@dataclass
class MethodRecord:
    """One method declaration plus its inline traceability annotations.

    ``uc_ids`` holds tokens of the form ``UC<digits>``; ``action_text`` is the
    trimmed text after the first ``//action:`` marker.  ``return_type`` is the
    literal source text ("void" is kept verbatim; None means untyped).
    """

    name: str
    visibility: Visibility = Visibility.NONE
    parameters: list[Parameter] = field(default_factory=list)
    return_type: str | None = None
    uc_ids: list[str] = field(default_factory=list)
    action_text: str | None = None
    owning_class: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("method name must be nonempty")

    @property
    def has_uc(self) -> bool:
        return bool(self.uc_ids)

    @property
    def has_action(self) -> bool:
        return self.action_text is not None


@dataclass
class AttributeDecl:
    name: str
    visibility: Visibility = Visibility.NONE
    type: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("attribute name must be nonempty")


@dataclass
class UmlClass:
    """A class (or interface / abstract class) declaration.

    Method order is preserved from source text.
    """

    name: str
    package_path: list[str] = field(default_factory=list)
    attributes: list[AttributeDecl] = field(default_factory=list)
    methods: list[MethodRecord] = field(default_factory=list)
    stereotype: str | None = None
    is_abstract: bool = False
    is_interface: bool = False


@dataclass
class EnumDecl:
    name: str
    values: list[str] = field(default_factory=list)
    package_path: list[str] = field(default_factory=list)


@dataclass
class PackageDecl:
    name: str
    parent_path: list[str] = field(default_factory=list)

    @property
    def path(self) -> list[str]:
        return self.parent_path + [self.name]


@dataclass
class Relationship:
    """A relationship between two declared elements.

    ``source``/``target`` follow a normalized orientation regardless of the
    arrow direction written in source text:

    * association / dependency: source --> target (arrowhead at target)
    * inheritance / realization: source is the child, target is the parent
    * aggregation / composition: source is the whole, target is the part
    """

    kind: RelationshipKind
    source: str
    target: str
    source_multiplicity: str | None = None
    target_multiplicity: str | None = None
    label: str | None = None

    def __post_init__(self) -> None:
        if not self.source or not self.target:
            raise ValueError("relationship endpoints must be nonempty")


@dataclass
class Provenance:
    model_name: str
    run_index: int


@dataclass
class Diagram:
    name: str | None = None
    packages: list[PackageDecl] = field(default_factory=list)
    classes: list[UmlClass] = field(default_factory=list)
    enums: list[EnumDecl] = field(default_factory=list)
    relationships: list[Relationship] = field(default_factory=list)
    provenance: Provenance | None = None

    def class_names(self) -> set[str]:
        return {c.name for c in self.classes}

    def declared_names(self) -> set[str]:
        return {c.name for c in self.classes} | {e.name for e in self.enums}

    def all_methods(self) -> list[MethodRecord]:
        return [m for c in self.classes for m in c.methods]

    def find_class(self, name: str) -> UmlClass | None:
        for c in self.classes:
            if c.name == name:
                return c
        return None


class IssueSeverity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Issue:
    line: int
    kind: str
    message: str
    severity: IssueSeverity = IssueSeverity.ERROR


@dataclass
class ValidationReport:
    """Outcome of validating one source text. is_valid holds iff no error issue."""

    is_valid: bool
    issues: list[Issue] = field(default_factory=list)

    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity is IssueSeverity.ERROR]

    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity is IssueSeverity.WARNING]

    def to_dict(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "issues": [
                {
                    "line": i.line,
                    "kind": i.kind,
                    "message": i.message,
                    "severity": i.severity.value,
                }
                for i in self.issues
            ],
        }
