"""Metric family operations with frozen expected values."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumleval import metrics as mt
from pumleval.corpus import scan_corpus
from pumleval.puml import (
    Diagram,
    MethodRecord,
    Parameter,
    UmlClass,
    Visibility,
    parse_diagram,
)

from .oracles import oracle_levenshtein, oracle_lexdiv


def _method(name="go", params=0, ret=None, uc=None, action=None, vis="+"):
    return MethodRecord(
        name=name,
        visibility=Visibility.from_marker(vis),
        parameters=[Parameter(f"p{i}") for i in range(params)],
        return_type=ret,
        uc_ids=uc or [],
        action_text=action,
    )


class TestMethodQuantity:
    def test_methodless_baseline(self, synthetic_corpus):
        baseline = parse_diagram(synthetic_corpus.baseline_path.read_text())
        assert mt.method_quantity(baseline) == 0

    def test_additivity(self):
        d = Diagram(classes=[
            UmlClass(name="A", methods=[_method(f"a{i}") for i in range(3)]),
            UmlClass(name="B", methods=[_method(f"b{i}") for i in range(4)]),
        ])
        assert mt.method_quantity(d) == 7
        assert sum(mt.methods_per_class(d).values()) == 7


class TestNameRedundancy:
    def test_all_unique(self):
        assert mt.name_redundancy(["a", "b", "c"]) == 1.0

    def test_duplicates(self):
        assert mt.name_redundancy(["a", "a", "b", "b"]) == 2.0

    def test_singleton(self):
        assert mt.name_redundancy(["x"]) == 1.0

    def test_empty(self):
        with pytest.raises(mt.EmptyInputError):
            mt.name_redundancy([])

    def test_case_sensitive(self):
        assert mt.name_redundancy(["go", "Go"]) == 1.0


class TestReturnTypeCompleteness:
    def test_all_typed(self):
        methods = [_method(ret="Boolean") for _ in range(3)]
        assert mt.return_type_completeness(methods) == 100.0

    def test_all_absent(self):
        assert mt.return_type_completeness([_method() for _ in range(3)]) == 0.0

    def test_void_not_counted(self):
        methods = [_method(ret="void"), _method(ret="VOID"), _method(ret="Int")]
        assert mt.return_type_completeness(methods) == pytest.approx(100 / 3)

    def test_empty(self):
        with pytest.raises(mt.EmptyInputError):
            mt.return_type_completeness([])


class TestLevenshteinDiversity:
    def test_disjoint_equal_length(self):
        assert mt.levenshtein_diversity({"ab", "cd"}) == 1.0

    def test_cat_cats(self):
        assert mt.levenshtein_diversity({"cat", "cats"}) == 0.25

    def test_three_names(self):
        assert mt.levenshtein_diversity({"abc", "abd", "xyz"}) == pytest.approx(7 / 9)

    def test_too_few(self):
        with pytest.raises(mt.TooFewNamesError):
            mt.levenshtein_diversity({"solo"})

    @settings(max_examples=100, deadline=None)
    @given(st.text(min_size=0, max_size=8), st.text(min_size=0, max_size=8))
    def test_levenshtein_matches_oracle(self, a, b):
        assert mt.levenshtein(a, b) == oracle_levenshtein(a, b)

    @settings(max_examples=40, deadline=None)
    @given(st.sets(st.text(alphabet="abcdxy", min_size=1, max_size=6),
                   min_size=2, max_size=6))
    def test_lexdiv_matches_oracle(self, names):
        assert mt.levenshtein_diversity(names) == pytest.approx(
            oracle_lexdiv(names), abs=1e-12)


class TestParamStats:
    def test_constant_zero(self):
        mean, iqr = mt.param_stats([_method() for _ in range(4)])
        assert (mean, iqr) == (0.0, 0.0)

    def test_linear_interpolation_quartiles(self):
        methods = [_method(params=i) for i in range(4)]
        mean, iqr = mt.param_stats(methods)
        assert mean == 1.5
        assert iqr == 1.5  # type-7: Q1=0.75, Q3=2.25

    def test_empty(self):
        with pytest.raises(mt.EmptyInputError):
            mt.param_stats([])


class TestAnnotationCompleteness:
    def test_classification(self):
        row = mt.annotation_completeness([
            _method(uc=["UC02"], action="activate"),
            _method(uc=["UC02"]),
            _method(action="only action"),
            _method(),
        ])
        assert (row.full, row.uc_only, row.action_only, row.none) == (1, 1, 1, 1)
        assert row.total == 4

    def test_partition_on_corpus(self, synthetic_corpus):
        index = scan_corpus(synthetic_corpus.corpus_dir,
                            synthetic_corpus.baseline_path)
        for entry in index.valid_entries():
            row = mt.annotation_completeness(entry.diagram.all_methods())
            assert row.total == mt.method_quantity(entry.diagram)


class TestStructuralFidelity:
    def test_methods_only_addition_scores_100(self, synthetic_corpus):
        baseline = parse_diagram(synthetic_corpus.baseline_path.read_text())
        augmented = parse_diagram(synthetic_corpus.baseline_path.read_text())
        augmented.classes[0].methods.append(_method())
        row = mt.structural_fidelity(augmented, baseline)
        assert all(v == 100.0 for v in row.per_category.values())
        assert row.global_pct == 100.0

    def test_dropped_and_added_class(self):
        base = parse_diagram("@startuml\nclass A\nclass B\nclass C\n@enduml")
        aug = parse_diagram("@startuml\nclass A\nclass B\nclass D\n@enduml")
        row = mt.structural_fidelity(aug, base)
        assert row.per_category["class"] == 50.0

    def test_reflexive(self, synthetic_corpus):
        baseline = parse_diagram(synthetic_corpus.baseline_path.read_text())
        row = mt.structural_fidelity(baseline, baseline)
        assert all(v == 100.0 for v in row.per_category.values())

    def test_symmetry(self):
        a = parse_diagram("@startuml\nclass A\nenum E {\nX\n}\n@enduml")
        b = parse_diagram("@startuml\nclass A\nclass B\n@enduml")
        ab = mt.structural_fidelity(a, b)
        ba = mt.structural_fidelity(b, a)
        assert ab.per_category == ba.per_category

    def test_empty_category_counts_as_preserved(self):
        a = parse_diagram("@startuml\nclass A\n@enduml")
        b = parse_diagram("@startuml\nclass A\n@enduml")
        row = mt.structural_fidelity(a, b)
        assert row.per_category["package"] == 100.0
        assert row.per_category["enum"] == 100.0

    def test_relationship_key_ignores_association_direction(self):
        base = parse_diagram("@startuml\nclass A\nclass B\nA --> B\n@enduml")
        flipped = parse_diagram("@startuml\nclass A\nclass B\nB <-- A\n@enduml")
        row = mt.structural_fidelity(flipped, base)
        assert row.per_category["relationship"] == 100.0

    def test_attribute_key_ignores_type_changes(self):
        base = parse_diagram("@startuml\nclass A {\n- x : Integer\n}\n@enduml")
        aug = parse_diagram("@startuml\nclass A {\n- x : Long\n}\n@enduml")
        row = mt.structural_fidelity(aug, base)
        assert row.per_category["attribute"] == 100.0


class TestSyntacticCorrectness:
    def test_per_model_counts(self, synthetic_corpus):
        index = scan_corpus(synthetic_corpus.corpus_dir,
                            synthetic_corpus.baseline_path)
        counts = mt.syntactic_correctness(index)
        assert counts["ModelB"] == (9, 1)
        assert counts["ModelG"] == (9, 1)
        assert counts["ModelA"] == (10, 0)
        total_errors = sum(e for _, e in counts.values())
        assert total_errors == len(synthetic_corpus.invalid_files)


class TestNamingConvention:
    def test_camel(self):
        assert mt.naming_convention_rate(["activateAccount"]) == 100.0

    def test_underscore_rejected(self):
        assert mt.naming_convention_rate(["Activate_account"]) == 0.0

    def test_single_word_lowercase_accepted(self):
        assert mt.naming_convention_rate(["cancel"]) == 100.0

    def test_leading_capital_rejected(self):
        assert mt.naming_convention_rate(["Cancel"]) == 0.0


class TestFrame:
    def test_frame_rows_shape(self, synthetic_corpus):
        index = scan_corpus(synthetic_corpus.corpus_dir,
                            synthetic_corpus.baseline_path)
        frame = mt.compute_frame(index)
        assert len(frame) == len(index.valid_entries())
        rows = mt.frame_rows(frame)
        assert all(len(r) == len(mt.FRAME_COLUMNS) for r in rows)

    def test_visibility_percentages_sum_to_100(self, synthetic_corpus):
        index = scan_corpus(synthetic_corpus.corpus_dir,
                            synthetic_corpus.baseline_path)
        for row in mt.compute_frame(index):
            if row.sr is not None:
                assert sum(row.sr.visibility_pct.values()) == pytest.approx(
                    100.0, abs=0.01)

    def test_redundancy_at_least_one(self, synthetic_corpus):
        index = scan_corpus(synthetic_corpus.corpus_dir,
                            synthetic_corpus.baseline_path)
        for row in mt.compute_frame(index):
            if row.sr is not None:
                assert row.sr.redundancy >= 1.0
                if row.sr.lexdiv is not None:
                    assert 0.0 <= row.sr.lexdiv <= 1.0
