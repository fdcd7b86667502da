import random

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from edumine.decision_tree import (
    Example,
    ID3Classifier,
    Leaf,
    Split,
    entropy,
    export_dot,
    gain_table,
    id3_train,
    information_gain,
    predict,
    tree_from_doc,
    tree_to_doc,
)
from edumine.exceptions import (
    EmptySetError,
    EmptyTrainingSetError,
    InconsistentSchemaError,
    MissingAttributeError,
    UnknownAttributeError,
)

from conftest import MICRO_ROWS
from oracles import entropy_reference, gain_reference


def random_consistent_dataset(rng, n_attributes=None, n_examples=None):
    """Labels are a random function of the full attribute tuple, so the
    dataset is consistent and separable by construction."""
    n_attributes = n_attributes or rng.randint(1, 6)
    n_examples = n_examples or rng.randint(1, 200)
    names = [f"a{k}" for k in range(n_attributes)]
    domains = {name: [f"v{j}" for j in range(rng.randint(2, 4))] for name in names}
    labels = ["L1", "L2", "L3"]
    mapping = {}
    examples = []
    for _ in range(n_examples):
        attrs = {name: rng.choice(domains[name]) for name in names}
        key = tuple(attrs[name] for name in names)
        if key not in mapping:
            mapping[key] = rng.choice(labels)
        examples.append(Example(attrs, mapping[key]))
    return examples, names


def walk_paths(tree, seen=()):
    if isinstance(tree, Leaf):
        yield seen
    else:
        assert tree.attribute not in seen
        for child in tree.branches.values():
            yield from walk_paths(child, seen + (tree.attribute,))


class TestEntropy:
    def test_pure_set_is_zero(self):
        assert entropy({"GOOD": 10}) == 0.0

    def test_uniform_binary_is_one(self):
        assert entropy({"+": 7, "-": 7}) == 1.0

    def test_nine_five_split(self):
        # frozen from the direct evaluation: 0.9402859586706311
        value = entropy({"+": 9, "-": 5})
        assert value == pytest.approx(0.940286, abs=1e-5)
        assert value == pytest.approx(entropy_reference([9, 5]), abs=1e-12)

    def test_empty_set_rejected(self):
        with pytest.raises(EmptySetError):
            entropy({})
        with pytest.raises(EmptySetError):
            entropy({"GOOD": 0})

    def test_bounds_and_maximum(self):
        rng = random.Random(3)
        import math

        for _ in range(100):
            k = rng.randint(1, 6)
            counts = {f"c{j}": rng.randint(1, 30) for j in range(k)}
            value = entropy(counts)
            assert 0.0 <= value <= math.log2(k) + 1e-12
            uniform = entropy({f"c{j}": 5 for j in range(k)})
            assert uniform == pytest.approx(math.log2(k), abs=1e-12)
            assert value <= uniform + 1e-12

    def test_zero_only_for_single_class(self):
        assert entropy({"a": 3, "b": 1}) > 0.0
        assert entropy({"a": 3, "b": 0}) == 0.0


class TestInformationGain:
    def micro(self):
        return [Example(dict(attrs), label) for attrs, label in MICRO_ROWS]

    def test_constant_attribute_gains_nothing(self):
        examples = [Example({"a": "x", "b": str(i % 2)}, f"L{i % 2}") for i in range(6)]
        assert information_gain(examples, "a") == 0.0

    def test_perfect_separator_gains_parent_entropy(self):
        examples = [Example({"a": f"v{i % 3}"}, f"L{i % 3}") for i in range(9)]
        from collections import Counter

        parent = entropy(Counter(e.label for e in examples))
        assert information_gain(examples, "a") == pytest.approx(parent, abs=1e-12)

    def test_micro_attendance_gain(self):
        # frozen from the brute-force evaluation: 0.31127812445913294
        value = information_gain(self.micro(), "attendance")
        assert value == pytest.approx(0.311278, abs=1e-5)
        assert value == pytest.approx(gain_reference(MICRO_ROWS, "attendance"), abs=1e-12)

    def test_micro_dept_gain(self):
        assert information_gain(self.micro(), "dept") == pytest.approx(1.0, abs=1e-12)

    def test_unknown_attribute(self):
        with pytest.raises(UnknownAttributeError):
            information_gain(self.micro(), "semester")

    def test_never_negative_and_duplicate_attribute_equal(self):
        rng = random.Random(17)
        for _ in range(30):
            examples, names = random_consistent_dataset(rng, n_examples=rng.randint(2, 60))
            doubled = [
                Example({**e.attributes, "dup": e.attributes[names[0]]}, e.label)
                for e in examples
            ]
            for name in names:
                assert information_gain(examples, name) >= 0.0
            assert information_gain(doubled, "dup") == pytest.approx(
                information_gain(doubled, names[0]), abs=1e-12
            )

    def test_gain_table_consistent_with_gains(self):
        from collections import Counter

        examples = self.micro()
        table = gain_table(examples, ["dept", "attendance"])
        parent = entropy(Counter(e.label for e in examples))
        assert set(table) == {"dept", "attendance"}
        for name, entry in table.items():
            assert entry.gain == information_gain(examples, name)
            assert entry.gain == pytest.approx(parent - entry.weighted_entropy, abs=1e-12)
            assert entry.gain >= 0.0


class TestId3Train:
    def test_pure_labels_leaf(self):
        examples = [Example({"a": str(i)}, "GOOD") for i in range(4)]
        assert id3_train(examples, ["a"]) == Leaf("GOOD")

    def test_exhausted_attributes_majority(self):
        examples = [
            Example({}, "GOOD"), Example({}, "GOOD"), Example({}, "POOR"),
        ]
        assert id3_train(examples, []) == Leaf("GOOD")

    def test_majority_tie_breaks_lexicographically(self):
        examples = [Example({}, "POOR"), Example({}, "AVERAGE")]
        assert id3_train(examples, []) == Leaf("AVERAGE")

    def test_micro_dataset_tree(self, micro_examples):
        tree = id3_train(micro_examples, ["dept", "attendance"])
        # dept has gain 1.0 vs attendance 0.3113, so the root must split on
        # dept; under IT only attendance remains and separates GOOD/POOR.
        assert isinstance(tree, Split) and tree.attribute == "dept"
        assert tree.branches["COMP"] == Leaf("GOOD")
        assert tree.branches["ETC"] == Leaf("AVERAGE")
        it_branch = tree.branches["IT"]
        assert isinstance(it_branch, Split) and it_branch.attribute == "attendance"
        assert it_branch.branches == {"N": Leaf("GOOD"), "Y": Leaf("POOR")}
        for example in micro_examples:
            assert predict(tree, example.attributes) == example.label
        assert predict(tree, {"dept": "IT", "attendance": "N"}) == "GOOD"

    def test_zero_training_error_on_consistent_data(self):
        rng = random.Random(99)
        for _ in range(30):
            examples, names = random_consistent_dataset(rng)
            tree = id3_train(examples, names)
            for example in examples:
                assert predict(tree, example.attributes) == example.label

    def test_no_attribute_repeats_on_any_path(self):
        rng = random.Random(5)
        for _ in range(20):
            examples, names = random_consistent_dataset(rng)
            tree = id3_train(examples, names)
            list(walk_paths(tree))

    def test_permutation_invariance(self):
        rng = random.Random(31)
        for _ in range(20):
            examples, names = random_consistent_dataset(rng, n_examples=rng.randint(2, 80))
            tree = id3_train(examples, names)
            shuffled = examples[:]
            rng.shuffle(shuffled)
            assert id3_train(shuffled, names) == tree

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSetError):
            id3_train([], ["a"])

    def test_inconsistent_schema(self):
        examples = [Example({"a": "1"}, "x"), Example({"b": "1"}, "x")]
        with pytest.raises(InconsistentSchemaError):
            id3_train(examples, ["a"])

    def test_unknown_requested_attribute(self):
        examples = [Example({"a": "1"}, "x"), Example({"a": "2"}, "y")]
        with pytest.raises(UnknownAttributeError):
            id3_train(examples, ["a", "zz"])


class TestPredict:
    def test_leaf_always_answers(self):
        assert predict(Leaf("POOR"), {}) == "POOR"
        assert predict(Leaf("POOR"), {"anything": "v"}) == "POOR"

    def test_unseen_value_falls_back_to_default(self):
        tree = Split(
            attribute="dept",
            branches={"IT": Leaf("GOOD"), "ETC": Leaf("POOR")},
            default_label="AVERAGE",
        )
        assert predict(tree, {"dept": "COMP"}) == "AVERAGE"

    def test_missing_attribute_errors(self):
        tree = Split(attribute="dept", branches={"IT": Leaf("GOOD")}, default_label="GOOD")
        with pytest.raises(MissingAttributeError):
            predict(tree, {"attendance": "Y"})


class TestExportDot:
    def test_single_leaf(self):
        text = export_dot(Leaf("GOOD"))
        assert text.startswith("digraph decision_tree {")
        assert 'label="GOOD"' in text
        assert "->" not in text

    def test_one_split_two_leaves(self):
        tree = Split(
            attribute="attendance",
            branches={"N": Leaf("GOOD"), "Y": Leaf("POOR")},
            default_label="GOOD",
        )
        text = export_dot(tree)
        assert text.count("shape=box") == 1
        assert text.count("shape=ellipse") == 2
        assert text.count("->") == 2
        assert '[label="N"]' in text and '[label="Y"]' in text

    def test_deterministic(self, micro_examples):
        tree = id3_train(micro_examples, ["dept", "attendance"])
        assert export_dot(tree) == export_dot(tree)

    def test_escaping(self):
        text = export_dot(Leaf('say "hi"'))
        assert 'label="say \\"hi\\""' in text


class TestTreeDocs:
    def test_round_trip(self, micro_examples):
        tree = id3_train(micro_examples, ["dept", "attendance"])
        doc = tree_to_doc(tree, ["dept", "attendance"])
        assert doc["format"] == "edumine.id3-tree"
        restored, attributes = tree_from_doc(doc)
        assert restored == tree
        assert attributes == ["attendance", "dept"]

    def test_rejects_other_documents(self):
        with pytest.raises(ValueError):
            tree_from_doc({"format": "something-else", "version": 1})
        with pytest.raises(ValueError):
            tree_from_doc({"format": "edumine.id3-tree", "version": 99})


class TestID3Classifier:
    def fit_micro(self):
        X = [dict(attrs) for attrs, _ in MICRO_ROWS]
        y = [label for _, label in MICRO_ROWS]
        return ID3Classifier().fit(X, y), X, y

    def test_fit_predict_on_dicts(self):
        clf, X, y = self.fit_micro()
        assert list(clf.predict(X)) == y
        assert clf.score(X, y) == 1.0

    def test_fit_on_dataframe(self):
        pd = pytest.importorskip("pandas")
        frame = pd.DataFrame([dict(attrs) for attrs, _ in MICRO_ROWS])
        y = [label for _, label in MICRO_ROWS]
        clf = ID3Classifier(attributes=["dept", "attendance"]).fit(frame, y)
        assert list(clf.predict(frame)) == y

    def test_classes_sorted(self):
        clf, _, _ = self.fit_micro()
        assert list(clf.classes_) == ["AVERAGE", "GOOD", "POOR"]

    def test_get_params_and_clone(self):
        clf = ID3Classifier(attributes=["dept"])
        assert clf.get_params() == {"attributes": ["dept"]}
        cloned = clone(clf)
        assert cloned.get_params() == clf.get_params()

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            ID3Classifier().predict([{"dept": "IT"}])

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            ID3Classifier().fit([{"a": "1"}], ["x", "y"])
