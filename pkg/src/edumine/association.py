"""Apriori frequent-itemset mining and association-rule generation.

Transactions are per-student sets of passed subjects. A rule X -> Y has

    support    = |{t : X u Y subset t}| / |D|
    confidence = |{t : X u Y subset t}| / |{t : X subset t}|

The related-subjects pipeline ignores support and keeps every rule whose
confidence reaches the cohort's average pass rate, which serves as the
minimum confidence.
"""

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .cohort import PassTable
from .exceptions import (
    EmptyCatalogError,
    EmptyDatabaseError,
    MissingSubsetSupportError,
)
from .validation import check_unit_interval


@dataclass(frozen=True)
class Transaction:
    owner_id: str
    items: frozenset[str]


@dataclass(frozen=True)
class ItemsetSupport:
    items: frozenset[str]
    count: int
    support: float


@dataclass(frozen=True)
class Rule:
    antecedent: frozenset[str]
    consequent: frozenset[str]
    support: float
    confidence: float


def _items_key(items):
    return tuple(sorted(items))


def build_transactions(pass_table: PassTable) -> list[Transaction]:
    """One transaction per enrolled student: the subjects they passed.

    Students who passed nothing get an empty item set; output is sorted
    by owner id.
    """
    by_owner = {student: set() for student in pass_table.students}
    for student, subject in pass_table.passed:
        by_owner[student].add(subject)
    return [
        Transaction(owner_id=student, items=frozenset(by_owner[student]))
        for student in sorted(by_owner)
    ]


def apriori(transactions, minsup=None, max_itemset_size=2) -> list[ItemsetSupport]:
    """Level-wise frequent-itemset mining.

    Candidates of size k are joined from frequent (k-1)-itemsets and
    pruned with the downward-closure property (every subset of a
    frequent itemset is frequent). With ``minsup=None`` the support
    threshold is dropped and every itemset occurring in at least one
    transaction is reported, up to ``max_itemset_size``. Only itemsets
    that actually occur are ever reported, whatever the threshold.

    Output is sorted by (itemset size, lexicographic items).
    """
    transactions = list(transactions)
    if not transactions:
        raise EmptyDatabaseError("no transactions to mine")
    if max_itemset_size < 2:
        raise ValueError(f"max_itemset_size must be >= 2, got {max_itemset_size}")
    if minsup is not None:
        check_unit_interval("minsup", minsup)

    n = len(transactions)

    def is_frequent(count):
        if count < 1:
            return False
        return minsup is None or count / n >= minsup

    singles = Counter()
    for t in transactions:
        for item in t.items:
            singles[frozenset({item})] += 1

    level = sorted((s for s in singles if is_frequent(singles[s])), key=_items_key)
    out = [ItemsetSupport(s, singles[s], singles[s] / n) for s in level]

    k = 2
    while level and k <= max_itemset_size:
        candidates = _join_and_prune(level, k)
        if not candidates:
            break
        counts = dict.fromkeys(candidates, 0)
        for t in transactions:
            for cand in candidates:
                if cand <= t.items:
                    counts[cand] += 1
        level = sorted((c for c in candidates if is_frequent(counts[c])), key=_items_key)
        out.extend(ItemsetSupport(c, counts[c], counts[c] / n) for c in level)
        k += 1
    return out


def _join_and_prune(level, k):
    """Join frequent (k-1)-itemsets sharing a (k-2)-prefix, prune by closure."""
    prev = set(level)
    tuples = sorted(_items_key(s) for s in level)
    candidates = []
    for i, a in enumerate(tuples):
        for b in tuples[i + 1:]:
            if a[: k - 2] != b[: k - 2]:
                break  # sorted order: no later b shares this prefix
            cand = frozenset(a) | frozenset(b)
            if all(cand - {x} in prev for x in cand):
                candidates.append(cand)
    return sorted(set(candidates), key=_items_key)


def generate_rules(itemsets, n_transactions: int, minconf: float) -> list[Rule]:
    """Emit every rule X -> Y over the given itemsets with confidence >= minconf.

    Both sides are non-empty and disjoint, and X u Y must be one of the
    given itemsets; the support of each antecedent must be present too
    (Apriori guarantees this by downward closure).

    Output is sorted by confidence desc, support desc, then
    lexicographic antecedent and consequent.
    """
    check_unit_interval("minconf", minconf)
    if n_transactions <= 0:
        raise EmptyDatabaseError("n_transactions must be > 0")
    counts = {it.items: it.count for it in itemsets}
    rules = []
    for it in sorted(itemsets, key=lambda i: (len(i.items), _items_key(i.items))):
        size = len(it.items)
        if size < 2:
            continue
        members = _items_key(it.items)
        for r in range(1, size):
            for antecedent in combinations(members, r):
                x = frozenset(antecedent)
                x_count = counts.get(x)
                if x_count is None:
                    raise MissingSubsetSupportError(
                        f"support of {sorted(x)} missing while scoring {sorted(it.items)}"
                    )
                confidence = it.count / x_count
                if confidence >= minconf:
                    rules.append(
                        Rule(
                            antecedent=x,
                            consequent=it.items - x,
                            support=it.count / n_transactions,
                            confidence=confidence,
                        )
                    )
    rules.sort(
        key=lambda rule: (
            -rule.confidence,
            -rule.support,
            _items_key(rule.antecedent),
            _items_key(rule.consequent),
        )
    )
    return rules


def average_pass_rate_minconf(pass_table: PassTable, catalog=None) -> float:
    """Unweighted mean over subjects of (students passing) / (students enrolled)."""
    subjects = sorted(catalog) if catalog is not None else list(pass_table.subjects)
    if not subjects:
        raise EmptyCatalogError("no subjects to average over")
    if not pass_table.students:
        raise EmptyDatabaseError("no students in the pass table")
    n_students = len(pass_table.students)
    pass_counts = Counter(subject for _, subject in pass_table.passed)
    rates = [pass_counts.get(subject, 0) / n_students for subject in subjects]
    return math.fsum(rates) / len(subjects)


def candidate_pairs(transactions, pass_table: PassTable, catalog=None, minconf=None):
    """Unordered subject pairs where at least one direction clears minconf.

    ``minconf=None`` uses the average pass rate. Support is ignored:
    mining runs without a support threshold and only 2-item rules are
    considered. Returns sorted (i, j) tuples with i < j.
    """
    transactions = list(transactions)
    if minconf is None:
        minconf = average_pass_rate_minconf(pass_table, catalog)
    itemsets = apriori(transactions, minsup=None, max_itemset_size=2)
    rules = generate_rules(itemsets, len(transactions), minconf)
    pairs = {
        tuple(sorted((*rule.antecedent, *rule.consequent)))
        for rule in rules
        if len(rule.antecedent) == 1 and len(rule.consequent) == 1
    }
    return sorted(pairs)


def rules_to_csv(rules) -> str:
    """Render rules as CSV: antecedent,consequent,support,confidence.

    Multi-item sides are joined with '+'; reals use 6 decimal places.
    """
    lines = ["antecedent,consequent,support,confidence"]
    for rule in rules:
        lines.append(
            "{},{},{:.6f},{:.6f}".format(
                "+".join(sorted(rule.antecedent)),
                "+".join(sorted(rule.consequent)),
                rule.support,
                rule.confidence,
            )
        )
    return "\n".join(lines) + "\n"
