import pytest

from edumine.association import Transaction
from edumine.decision_tree import Example


@pytest.fixture
def sales_transactions():
    """The four-transaction sales database used in the worked examples."""
    return [
        Transaction("111", frozenset({"pen", "ink", "milk"})),
        Transaction("112", frozenset({"pen", "ink"})),
        Transaction("113", frozenset({"pen", "ink", "juice"})),
        Transaction("114", frozenset({"pen", "milk"})),
    ]


MICRO_ROWS = [
    ({"dept": "ETC", "attendance": "Y"}, "AVERAGE"),
    ({"dept": "IT", "attendance": "N"}, "GOOD"),
    ({"dept": "COMP", "attendance": "Y"}, "GOOD"),
    ({"dept": "IT", "attendance": "Y"}, "POOR"),
]


@pytest.fixture
def micro_examples():
    """Four-student classification micro-dataset (dept, attendance -> label)."""
    return [Example(dict(attrs), label) for attrs, label in MICRO_ROWS]


@pytest.fixture
def micro_classification_csv(tmp_path):
    path = tmp_path / "classification.csv"
    path.write_text(
        "stud_id,dept,attendance,marks\n"
        "1,ETC,Y,310\n"
        "2,IT,N,450\n"
        "3,COMP,Y,500\n"
        "4,IT,Y,230\n"
    )
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call":
                continue
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                rows.append((nodeid.split("::")[-1], status == "passed"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok in sorted(rows):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
