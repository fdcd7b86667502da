"""ID3 decision-tree learning over categorical attributes.

Split quality is information gain: Gain(S, A) = E(S) - sum_v (|Sv|/|S|) E(Sv)
with entropy E(S) = -sum_j p_j log2 p_j. Growth follows the classic
top-down greedy recursion, generalized to any number of class labels:
pure nodes become leaves, exhausted attribute sets fall back to the
majority label, and the chosen attribute is removed before recursing so
no attribute repeats on a root-to-leaf path.

All ties (attribute choice, majority label) break lexicographically and
per-class sums run in sorted-label order, so the learned tree never
depends on the order of the training examples.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Union

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .exceptions import (
    EmptySetError,
    EmptyTrainingSetError,
    InconsistentSchemaError,
    MissingAttributeError,
    UnknownAttributeError,
)
from .validation import as_records

TREE_FORMAT = "edumine.id3-tree"
TREE_VERSION = 1


@dataclass(frozen=True)
class Example:
    attributes: dict[str, str]
    label: str


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Split:
    attribute: str
    branches: dict[str, "DecisionNode"]
    default_label: str


DecisionNode = Union[Leaf, Split]


def entropy(counts) -> float:
    """Entropy in bits of a class-count mapping; 0 * log2(0) counts as 0."""
    total = sum(counts.values())
    if total <= 0:
        raise EmptySetError("entropy of an empty collection is undefined")
    if any(c < 0 for c in counts.values()):
        raise ValueError("class counts must be non-negative")
    result = 0.0
    for label in sorted(counts):  # sorted: summation order independent of input order
        c = counts[label]
        if c > 0:
            p = c / total
            result -= p * math.log2(p)
    return result


def _majority_label(examples) -> str:
    counts = Counter(e.label for e in examples)
    best = max(counts.values())
    return min(label for label, c in counts.items() if c == best)


@dataclass(frozen=True)
class GainEntry:
    """Split diagnostics for one attribute: the weighted child entropy
    sum_v (|Sv|/|S|) E(Sv) and the resulting gain."""

    weighted_entropy: float
    gain: float


def _gain_entry(examples, attribute: str) -> GainEntry:
    partitions: dict[str, Counter] = {}
    for example in examples:
        if attribute not in example.attributes:
            raise UnknownAttributeError(f"attribute {attribute!r} missing from an example")
        value = example.attributes[attribute]
        partitions.setdefault(value, Counter())[example.label] += 1

    parent = entropy(Counter(e.label for e in examples))
    n = len(examples)
    weighted = 0.0
    for value in sorted(partitions):
        counts = partitions[value]
        weighted += (sum(counts.values()) / n) * entropy(counts)
    gain = parent - weighted
    return GainEntry(weighted_entropy=weighted, gain=gain if gain > 0.0 else 0.0)


def information_gain(examples, attribute: str) -> float:
    """Entropy reduction from partitioning the examples by one attribute.

    Negative rounding residue is clamped to 0; a genuine gain is never
    negative.
    """
    examples = list(examples)
    if not examples:
        raise EmptySetError("information gain over an empty example set is undefined")
    return _gain_entry(examples, attribute).gain


def gain_table(examples, attributes) -> dict[str, GainEntry]:
    """Per-attribute split diagnostics over one example set."""
    examples = list(examples)
    if not examples:
        raise EmptySetError("gain table over an empty example set is undefined")
    return {a: _gain_entry(examples, a) for a in sorted(set(attributes))}


def id3_train(examples, attributes) -> DecisionNode:
    """Grow a decision tree from labeled categorical examples.

    ``attributes`` names the attributes the tree may split on; every
    example must carry the same attribute-name set, covering all of
    them.
    """
    examples = list(examples)
    if not examples:
        raise EmptyTrainingSetError("cannot train on an empty example set")
    schema = frozenset(examples[0].attributes)
    for example in examples[1:]:
        if frozenset(example.attributes) != schema:
            raise InconsistentSchemaError(
                f"example attribute sets differ: {sorted(schema)} vs "
                f"{sorted(example.attributes)}"
            )
    attributes = sorted(set(attributes))
    unknown = [a for a in attributes if a not in schema]
    if unknown:
        raise UnknownAttributeError(f"attributes not in the example schema: {unknown}")
    return _grow(examples, attributes)


def _grow(examples, attributes) -> DecisionNode:
    labels = {e.label for e in examples}
    if len(labels) == 1:
        return Leaf(labels.pop())
    majority = _majority_label(examples)
    if not attributes:
        return Leaf(majority)

    # max gain, ties to the lexicographically smallest attribute name
    best = min(attributes, key=lambda a: (-information_gain(examples, a), a))

    partitions: dict[str, list[Example]] = {}
    for example in examples:
        partitions.setdefault(example.attributes[best], []).append(example)
    remaining = [a for a in attributes if a != best]
    branches = {
        value: _grow(partitions[value], remaining) for value in sorted(partitions)
    }
    return Split(attribute=best, branches=branches, default_label=majority)


def predict(tree: DecisionNode, attributes) -> str:
    """Walk the tree; unseen values at a split return its default label."""
    node = tree
    while isinstance(node, Split):
        if node.attribute not in attributes:
            raise MissingAttributeError(f"input lacks split attribute {node.attribute!r}")
        value = attributes[node.attribute]
        child = node.branches.get(value)
        if child is None:
            return node.default_label
        node = child
    return node.label


def tree_depth(tree: DecisionNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(child) for child in tree.branches.values())


# --- DOT export ------------------------------------------------------------

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(tree: DecisionNode) -> str:
    """Render the tree as a DOT digraph with deterministic preorder ids."""
    lines = [
        "digraph decision_tree {",
        '    node [fontname="Helvetica"];',
    ]
    counter = iter(range(10**9))

    def emit(node) -> str:
        node_id = f"n{next(counter)}"
        if isinstance(node, Leaf):
            lines.append(f'    {node_id} [shape=ellipse, label="{_dot_escape(node.label)}"];')
        else:
            lines.append(f'    {node_id} [shape=box, label="{_dot_escape(node.attribute)}"];')
            for value in sorted(node.branches):
                child_id = emit(node.branches[value])
                lines.append(f'    {node_id} -> {child_id} [label="{_dot_escape(value)}"];')
        return node_id

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- JSON serialization ----------------------------------------------------

def _node_to_doc(node: DecisionNode) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "label": node.label}
    return {
        "kind": "split",
        "attribute": node.attribute,
        "default_label": node.default_label,
        "branches": {value: _node_to_doc(child) for value, child in sorted(node.branches.items())},
    }


def _node_from_doc(doc) -> DecisionNode:
    kind = doc.get("kind")
    if kind == "leaf":
        return Leaf(str(doc["label"]))
    if kind == "split":
        return Split(
            attribute=str(doc["attribute"]),
            branches={
                str(value): _node_from_doc(child)
                for value, child in sorted(doc["branches"].items())
            },
            default_label=str(doc["default_label"]),
        )
    raise ValueError(f"unknown tree node kind {kind!r}")


def tree_to_doc(tree: DecisionNode, attributes) -> dict:
    """Versioned, diffable JSON document for a trained tree."""
    return {
        "format": TREE_FORMAT,
        "version": TREE_VERSION,
        "attributes": sorted(attributes),
        "root": _node_to_doc(tree),
    }


def tree_from_doc(doc) -> tuple[DecisionNode, list[str]]:
    if doc.get("format") != TREE_FORMAT:
        raise ValueError(f"not a {TREE_FORMAT} document")
    if doc.get("version") != TREE_VERSION:
        raise ValueError(f"unsupported tree version {doc.get('version')!r}")
    return _node_from_doc(doc["root"]), [str(a) for a in doc.get("attributes", [])]


# --- estimator wrapper -----------------------------------------------------

class ID3Classifier(BaseEstimator, ClassifierMixin):
    """Decision-tree classifier over categorical attributes.

    Parameters
    ----------
    attributes : sequence of str or None, default=None
        Attribute names the tree may split on. None means every
        attribute present in the training rows.

    Attributes
    ----------
    tree_ : DecisionNode
        The learned tree.
    attribute_names_ : tuple of str
        Attributes the tree was allowed to split on.
    classes_ : ndarray of str
        Class labels seen during fit, sorted.

    ``X`` may be a pandas DataFrame, a sequence of mappings, or a 2-D
    array-like (columns then named x0, x1, ...). Values and labels are
    treated as categorical strings.
    """

    def __init__(self, attributes=None):
        self.attributes = attributes

    def _to_examples(self, X, y):
        records = as_records(X)
        labels = [str(label) for label in y]
        if len(records) != len(labels):
            raise ValueError(f"X has {len(records)} rows but y has {len(labels)} labels")
        return [
            Example(attributes={str(k): str(v) for k, v in rec.items()}, label=label)
            for rec, label in zip(records, labels)
        ]

    def fit(self, X, y):
        examples = self._to_examples(X, y)
        if not examples:
            raise EmptyTrainingSetError("cannot fit on an empty training set")
        if self.attributes is None:
            chosen = sorted(examples[0].attributes)
        else:
            chosen = sorted({str(a) for a in self.attributes})
        self.attribute_names_ = tuple(chosen)
        self.tree_ = id3_train(examples, chosen)
        self.classes_ = np.array(sorted({e.label for e in examples}), dtype=object)
        return self

    def predict(self, X):
        if not hasattr(self, "tree_"):
            raise NotFittedError("this ID3Classifier instance is not fitted yet")
        records = as_records(X)
        rows = [{str(k): str(v) for k, v in rec.items()} for rec in records]
        return np.array([predict(self.tree_, row) for row in rows], dtype=object)

    def export_dot(self) -> str:
        if not hasattr(self, "tree_"):
            raise NotFittedError("this ID3Classifier instance is not fitted yet")
        return export_dot(self.tree_)
