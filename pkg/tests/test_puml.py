"""Parser, serializer and validator behavior."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumleval.puml import (
    AttributeDecl,
    Diagram,
    MalformedMemberError,
    MethodRecord,
    ParseError,
    RelationshipKind,
    UmlClass,
    Visibility,
    parse_and_validate,
    parse_diagram,
    parse_member_line,
    serialize,
    validate,
)

from .fuzz import fuzz_diagram


class TestParseDiagram:
    def test_minimal_class(self):
        d = parse_diagram("@startuml\nclass A {}\n@enduml")
        assert [c.name for c in d.classes] == ["A"]
        assert d.classes[0].methods == []
        assert d.classes[0].attributes == []

    def test_association_and_method(self):
        d = parse_diagram("@startuml\nclass A {\n+go()\n}\nclass B\nA --> B\n@enduml")
        assert len(d.relationships) == 1
        rel = d.relationships[0]
        assert rel.kind is RelationshipKind.ASSOCIATION
        assert (rel.source, rel.target) == ("A", "B")
        method = d.classes[0].methods[0]
        assert method.name == "go"
        assert method.visibility is Visibility.PUBLIC

    def test_missing_start(self):
        with pytest.raises(ParseError) as excinfo:
            parse_diagram("class A {}\n")
        assert excinfo.value.kind == "MissingStart"

    def test_unbalanced_block(self):
        with pytest.raises(ParseError) as excinfo:
            parse_diagram("@startuml\nclass A {")
        assert excinfo.value.kind == "UnbalancedBlock"

    def test_missing_enduml(self):
        with pytest.raises(ParseError) as excinfo:
            parse_diagram("@startuml\nclass A {\n}\n")
        assert excinfo.value.kind == "UnbalancedBlock"

    def test_stray_closing_brace(self):
        with pytest.raises(ParseError) as excinfo:
            parse_diagram("@startuml\n}\n@enduml")
        assert excinfo.value.kind == "UnbalancedBlock"

    def test_malformed_member_is_fatal(self):
        with pytest.raises(MalformedMemberError):
            parse_diagram("@startuml\nclass A {\n123 nonsense ->\n}\n@enduml")

    def test_parse_error_carries_position_and_hint(self):
        with pytest.raises(ParseError) as excinfo:
            parse_diagram("@startuml\nclass A {")
        err = excinfo.value
        assert err.line >= 1
        assert err.column >= 1
        assert err.expected

    def test_packages_nest(self):
        d = parse_diagram(
            "@startuml\npackage Outer {\npackage Inner {\nclass A\n}\n}\n@enduml"
        )
        assert [p.name for p in d.packages] == ["Outer", "Inner"]
        assert d.packages[1].parent_path == ["Outer"]
        assert d.classes[0].package_path == ["Outer", "Inner"]

    def test_reopened_package_merges(self):
        d = parse_diagram(
            "@startuml\npackage P {\nclass A\n}\npackage P {\nclass B\n}\n@enduml"
        )
        assert len(d.packages) == 1
        assert {c.name for c in d.classes} == {"A", "B"}

    def test_enum_values(self):
        d = parse_diagram("@startuml\nenum E {\nOPEN\nDONE\n}\n@enduml")
        assert d.enums[0].values == ["OPEN", "DONE"]

    def test_abstract_interface_stereotype(self):
        d = parse_diagram(
            "@startuml\nabstract class A\ninterface B\nclass C <<entity>>\n@enduml"
        )
        assert d.classes[0].is_abstract
        assert d.classes[1].is_interface
        assert d.classes[2].stereotype == "entity"

    def test_crlf_and_comments_tolerated(self):
        d = parse_diagram(
            "@startuml\r\n' comment\r\nskinparam x y\r\nclass A {\r\n}\r\n@enduml\r\n"
        )
        assert d.classes[0].name == "A"

    @pytest.mark.parametrize("line,kind,src,tgt", [
        ("A --> B", RelationshipKind.ASSOCIATION, "A", "B"),
        ("A -- B", RelationshipKind.ASSOCIATION, "A", "B"),
        ("A <-- B", RelationshipKind.ASSOCIATION, "B", "A"),
        ("A ..> B", RelationshipKind.DEPENDENCY, "A", "B"),
        ("A <.. B", RelationshipKind.DEPENDENCY, "B", "A"),
        ("A <|-- B", RelationshipKind.INHERITANCE, "B", "A"),
        ("A --|> B", RelationshipKind.INHERITANCE, "A", "B"),
        ("A <|.. B", RelationshipKind.REALIZATION, "B", "A"),
        ("A ..|> B", RelationshipKind.REALIZATION, "A", "B"),
        ("A *-- B", RelationshipKind.COMPOSITION, "A", "B"),
        ("A --* B", RelationshipKind.COMPOSITION, "B", "A"),
        ("A o-- B", RelationshipKind.AGGREGATION, "A", "B"),
        ("A --o B", RelationshipKind.AGGREGATION, "B", "A"),
    ])
    def test_arrow_orientations(self, line, kind, src, tgt):
        d = parse_diagram(f"@startuml\nclass A\nclass B\n{line}\n@enduml")
        rel = d.relationships[0]
        assert rel.kind is kind
        assert (rel.source, rel.target) == (src, tgt)

    def test_multiplicities_and_label(self):
        d = parse_diagram(
            '@startuml\nclass A\nclass B\nA "1" --> "0..*" B : holds\n@enduml'
        )
        rel = d.relationships[0]
        assert rel.source_multiplicity == "1"
        assert rel.target_multiplicity == "0..*"
        assert rel.label == "holds"

    def test_multiplicities_swap_with_mirrored_arrow(self):
        d = parse_diagram('@startuml\nclass A\nclass B\nA "1" <-- "2" B\n@enduml')
        rel = d.relationships[0]
        assert (rel.source, rel.target) == ("B", "A")
        assert rel.source_multiplicity == "2"
        assert rel.target_multiplicity == "1"

    def test_section_separators_skipped(self):
        d = parse_diagram(
            "@startuml\nclass A {\n- x: Int\n--\n+go()\n== actions ==\n"
            "+stop()\n}\n@enduml")
        assert [m.name for m in d.classes[0].methods] == ["go", "stop"]
        assert [a.name for a in d.classes[0].attributes] == ["x"]

    def test_modifier_before_visibility(self):
        d = parse_diagram("@startuml\nclass A {\n{abstract} +go()\n}\n@enduml")
        method = d.classes[0].methods[0]
        assert method.name == "go"
        assert method.visibility is Visibility.PUBLIC

    def test_bare_abstract_declaration(self):
        d = parse_diagram("@startuml\nabstract A\n@enduml")
        assert d.classes[0].name == "A"
        assert d.classes[0].is_abstract

    def test_alias_becomes_referable_name(self):
        d = parse_diagram(
            '@startuml\nclass "User Account" as UA {\n+go()\n}\n'
            "UA --> UA\n@enduml")
        assert d.classes[0].name == "UA"
        assert d.relationships[0].source == "UA"

    def test_color_suffix_ignored(self):
        d = parse_diagram("@startuml\nclass A #lightblue {\n+go()\n}\n@enduml")
        assert d.classes[0].methods[0].name == "go"

    def test_styled_arrow(self):
        d = parse_diagram("@startuml\nclass A\nclass B\nA -[#red]-> B\n@enduml")
        rel = d.relationships[0]
        assert rel.kind is RelationshipKind.ASSOCIATION
        assert (rel.source, rel.target) == ("A", "B")

    def test_extends_and_implements_clauses(self):
        d = parse_diagram(
            "@startuml\nclass B\ninterface I\ninterface J\n"
            "class A extends B implements I, J\n@enduml")
        kinds = [(r.kind, r.source, r.target) for r in d.relationships]
        assert (RelationshipKind.INHERITANCE, "A", "B") in kinds
        assert (RelationshipKind.REALIZATION, "A", "I") in kinds
        assert (RelationshipKind.REALIZATION, "A", "J") in kinds

    def test_together_block_is_transparent(self):
        d = parse_diagram(
            "@startuml\ntogether {\nclass A {\n+go()\n}\nclass B\n}\n"
            "A --> B\n@enduml")
        assert {c.name for c in d.classes} == {"A", "B"}
        assert len(d.relationships) == 1

    def test_unknown_block_keeps_brace_balance(self):
        d = parse_diagram(
            "@startuml\nmap Config {\nwhatever\n}\nclass A\n@enduml")
        assert d.classes[0].name == "A"


class TestParseMemberLine:
    def test_annotated_method(self):
        m = parse_member_line("+ activateAccount() //UC02 //action: activate the account")
        assert isinstance(m, MethodRecord)
        assert m.visibility is Visibility.PUBLIC
        assert m.name == "activateAccount"
        assert m.parameters == []
        assert m.return_type is None
        assert m.uc_ids == ["UC02"]
        assert m.action_text == "activate the account"

    def test_typed_attribute(self):
        a = parse_member_line("- email : String")
        assert isinstance(a, AttributeDecl)
        assert a.visibility is Visibility.PRIVATE
        assert a.name == "email"
        assert a.type == "String"

    def test_two_typed_params_and_return(self):
        m = parse_member_line(
            "+ validateCredentials(login: String, pwd: String) : Boolean //UC01"
        )
        assert isinstance(m, MethodRecord)
        assert [(p.name, p.type) for p in m.parameters] == [
            ("login", "String"), ("pwd", "String")]
        assert m.return_type == "Boolean"
        assert m.uc_ids == ["UC01"]
        assert m.action_text is None

    def test_multiple_uc_ids(self):
        m = parse_member_line("+go() //UC01 //UC12 //action: do it")
        assert m.uc_ids == ["UC01", "UC12"]

    def test_lowercase_uc_marker_normalized(self):
        m = parse_member_line("+go() //uc03")
        assert m.uc_ids == ["UC03"]

    def test_action_text_keeps_everything_after_marker(self):
        m = parse_member_line("+go() //action: split at 'and' clauses // yes")
        assert m.action_text == "split at 'and' clauses // yes"

    def test_generic_types(self):
        m = parse_member_line("+ list(filters: Map<String, Integer>) : List<Item>")
        assert m.parameters[0].type == "Map<String, Integer>"
        assert m.return_type == "List<Item>"

    def test_visibility_none(self):
        m = parse_member_line("go()")
        assert m.visibility is Visibility.NONE

    def test_static_modifier_stripped(self):
        m = parse_member_line("+ {static} of() : Factory")
        assert m.name == "of"

    def test_malformed(self):
        with pytest.raises(MalformedMemberError):
            parse_member_line("+ %%%")

    def test_unclosed_params(self):
        with pytest.raises(MalformedMemberError):
            parse_member_line("+ go(x: Int")


class TestSerialize:
    def test_minimal_canonical_form(self):
        d = Diagram(classes=[UmlClass(name="A")])
        assert serialize(d) == "@startuml\nclass A {\n}\n@enduml\n"

    def test_annotation_order(self):
        src = "@startuml\nclass A {\n+go() //UC02 //action: do the thing\n}\n@enduml"
        out = serialize(parse_diagram(src))
        assert "+ go() //UC02 //action: do the thing" in out

    def test_round_trip_fixture(self, synthetic_corpus):
        for path in sorted(synthetic_corpus.corpus_dir.glob("*.puml")):
            text = path.read_text()
            try:
                first = parse_diagram(text)
            except ParseError:
                continue
            assert parse_diagram(serialize(first)) == first

    def test_fuzzed_round_trip_small(self):
        rng = random.Random(20240817)
        for _ in range(25):
            fuzzed = fuzz_diagram(rng)
            first = parse_diagram(fuzzed.text)
            again = parse_diagram(serialize(first))
            assert again == first

    def test_serialization_reparses_equal(self):
        src = ('@startuml\npackage "My Zone" {\nclass A {\n- x : Integer\n'
               '+go(a: String) : void //UC01\n}\n}\nenum E {\nOPEN\n}\n'
               'class B\nB "1" o-- "2" A : parts\n@enduml')
        d = parse_diagram(src)
        assert parse_diagram(serialize(d)) == d


class TestValidate:
    def test_valid_fixture(self):
        report = validate("@startuml\nclass A {\n+go()\n}\nclass B\nA --> B\n@enduml")
        assert report.is_valid
        assert report.issues == []

    def test_missing_enduml_invalid(self):
        report = validate("@startuml\nclass A {\n}\n")
        assert not report.is_valid
        assert [i.kind for i in report.issues] == ["UnbalancedBlock"]

    def test_unknown_endpoint_flips_validity(self):
        report = validate("@startuml\nclass A\nA --> Ghost\n@enduml")
        assert not report.is_valid
        assert any(i.kind == "UnknownEndpoint" for i in report.errors())

    def test_skipped_lines_warn_but_stay_valid(self):
        report = validate("@startuml\nclass A\nwobble wobble\n@enduml")
        assert report.is_valid
        assert any(i.kind == "UnknownDirective" for i in report.warnings())

    def test_validation_monotone_under_appended_class(self):
        base = "@startuml\nclass A {\n+go()\n}\n@enduml"
        assert validate(base).is_valid
        extended = base.replace("@enduml", "class B {\n+stop()\n}\n@enduml")
        assert validate(extended).is_valid

    def test_parse_and_validate_returns_diagram_on_warning(self):
        diagram, report = parse_and_validate(
            "@startuml\nclass A\nA --> Ghost\n@enduml")
        assert diagram is not None
        assert not report.is_valid

    def test_report_round_trips_to_json(self):
        report = validate("@startuml\nclass A\nA --> Ghost\n@enduml")
        doc = report.to_dict()
        assert doc["is_valid"] is False
        assert doc["issues"][0]["kind"] == "UnknownEndpoint"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(
    ["+ a()", "- b(x: Int)", "# c() : void //UC01", "d() //action: run"]),
    min_size=0, max_size=6))
def test_method_order_stable(member_lines):
    body = "\n".join(member_lines)
    src = f"@startuml\nclass A {{\n{body}\n}}\n@enduml"
    d = parse_diagram(src)
    names = [m.name for m in d.classes[0].methods]
    expected = [line.split("(")[0].lstrip("+-# ").strip() for line in member_lines]
    assert names == expected
