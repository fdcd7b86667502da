"""Command-line driver: ingestion -> mining -> deterministic report files.

Subcommands: related, classify train, classify predict, cluster, synth.
Every option can also come from a JSON config file (--config); explicit
flags override config values, which override the built-in defaults.
Numeric settings in effect are echoed on stdout so reports are
self-describing. Outputs are written atomically (temp file + rename),
so a failing run never leaves partial files behind.

Exit codes: 0 success, 1 internal error, 2 input or configuration error.
"""

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .association import (
    apriori,
    average_pass_rate_minconf,
    build_transactions,
    generate_rules,
    rules_to_csv,
)
from .clustering import (
    Point,
    assignments_to_csv,
    cluster_summary,
    dbscan,
    normalize_minmax,
)
from .cohort import (
    DiscretizationPolicy,
    classification_attribute_value,
    derive_pass_table,
    load_classification,
    load_clustering,
    load_marks,
    load_passes,
    marks_to_csv,
)
from .correlation import reports_to_csv, strongly_related
from .decision_tree import (
    Example,
    export_dot,
    id3_train,
    predict,
    tree_from_doc,
    tree_to_doc,
)
from .exceptions import EduMineError, InconsistentSchemaError
from .synth import SynthSpec, generate_synthetic_cohort, spec_from_dict

DEFAULTS = {
    "pass_mark": 40,
    "gamma": 0.5,
    "min_n": 3,
    "attributes": "dept,attendance",
    "good_min": 400,
    "average_min": 300,
    "eps": 0.1,
    "min_pts": 4,
    "no_normalize": False,
    "seed": 42,
    "out_dir": ".",
}

CONFIG_KEYS = set(DEFAULTS) | {
    "marks", "passes", "minconf", "class_data", "cluster_data", "tree", "spec",
}

VALID_TREE_ATTRIBUTES = ("attendance", "dept", "marks")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {sorted(unknown)}")
    return raw


class Options:
    """Layered option lookup: CLI flag, then config file, then default."""

    def __init__(self, args, config):
        self._args = args
        self._config = config

    def get(self, key, required=False):
        value = getattr(self._args, key, None)
        if value is None:
            value = self._config.get(key)
        if value is None:
            value = DEFAULTS.get(key)
        if value is None and required:
            raise ValueError(f"missing required option --{key.replace('_', '-')}")
        return value


def _parse_attributes(text: str) -> list[str]:
    names = [part.strip() for part in str(text).split(",") if part.strip()]
    if not names:
        raise ValueError("--attributes must name at least one attribute")
    for name in names:
        if name not in VALID_TREE_ATTRIBUTES:
            raise ValueError(
                f"unknown attribute {name!r}; choose from {', '.join(VALID_TREE_ATTRIBUTES)}"
            )
    return sorted(set(names))


# --- subcommands -----------------------------------------------------------

def cmd_related(opts: Options) -> int:
    marks_path = opts.get("marks", required=True)
    pass_mark = int(opts.get("pass_mark"))
    gamma = float(opts.get("gamma"))
    min_n = int(opts.get("min_n"))
    out_dir = Path(opts.get("out_dir"))

    dataset = load_marks(marks_path)
    passes_path = opts.get("passes")
    if passes_path:
        pass_table = load_passes(passes_path)
        catalog = sorted(set(dataset.subjects) | set(pass_table.subjects))
    else:
        pass_table = derive_pass_table(dataset, pass_mark)
        catalog = list(dataset.subjects)

    print(f"pass_mark = {pass_mark}")
    minconf_override = opts.get("minconf")
    if minconf_override is None:
        minconf = average_pass_rate_minconf(pass_table, catalog)
        print(f"minconf = {minconf:.6f} (average pass rate)")
    else:
        minconf = float(minconf_override)
        print(f"minconf = {minconf:.6f} (override)")
    print(f"gamma = {gamma}")
    print(f"min_n = {min_n}")

    transactions = build_transactions(pass_table)
    itemsets = apriori(transactions, minsup=None, max_itemset_size=2)
    rules = generate_rules(itemsets, len(transactions), minconf)
    reports = strongly_related(dataset, pass_table, catalog, gamma, min_n, minconf)

    rules_path = out_dir / "rules.csv"
    related_path = out_dir / "related.csv"
    _write_text(rules_path, rules_to_csv(rules))
    _write_text(related_path, reports_to_csv(reports))
    print(f"wrote {rules_path}")
    print(f"wrote {related_path}")
    return 0


def cmd_classify_train(opts: Options) -> int:
    class_path = opts.get("class_data", required=True)
    policy = DiscretizationPolicy(
        good_min=int(opts.get("good_min")), average_min=int(opts.get("average_min"))
    )
    attributes = _parse_attributes(opts.get("attributes"))
    out_dir = Path(opts.get("out_dir"))

    print(f"good_min = {policy.good_min}")
    print(f"average_min = {policy.average_min}")
    print(f"attributes = {','.join(attributes)}")

    rows = load_classification(class_path, policy)
    examples = [
        Example(
            attributes={a: classification_attribute_value(row, a, policy) for a in attributes},
            label=row.performance,
        )
        for row in rows
    ]
    tree = id3_train(examples, attributes)

    dot_path = out_dir / "tree.dot"
    json_path = out_dir / "tree.json"
    _write_text(dot_path, export_dot(tree))
    _write_text(
        json_path, json.dumps(tree_to_doc(tree, attributes), indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {dot_path}")
    print(f"wrote {json_path}")
    return 0


def cmd_classify_predict(opts: Options) -> int:
    class_path = opts.get("class_data", required=True)
    out_dir = Path(opts.get("out_dir"))
    tree_path = opts.get("tree") or str(out_dir / "tree.json")
    policy = DiscretizationPolicy(
        good_min=int(opts.get("good_min")), average_min=int(opts.get("average_min"))
    )

    with open(tree_path, encoding="utf-8") as fh:
        tree, attributes = tree_from_doc(json.load(fh))
    missing = [a for a in attributes if a not in VALID_TREE_ATTRIBUTES]
    if missing:
        raise InconsistentSchemaError(
            f"{tree_path}: tree splits on attributes not present in the input schema: {missing}"
        )

    rows = load_classification(class_path, policy)
    lines = ["stud_id,predicted_performance"]
    for row in rows:
        values = {a: classification_attribute_value(row, a, policy) for a in attributes}
        lines.append(f"{row.stud_id},{predict(tree, values)}")

    predictions_path = out_dir / "predictions.csv"
    _write_text(predictions_path, "\n".join(lines) + "\n")
    print(f"wrote {predictions_path}")
    return 0


def cmd_cluster(opts: Options) -> int:
    cluster_path = opts.get("cluster_data", required=True)
    eps = float(opts.get("eps"))
    min_pts = int(opts.get("min_pts"))
    normalize = not bool(opts.get("no_normalize"))
    out_dir = Path(opts.get("out_dir"))
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if min_pts < 1:
        raise ValueError(f"min_pts must be >= 1, got {min_pts}")

    print(f"eps = {eps}")
    print(f"min_pts = {min_pts}")
    print(f"normalize = {'on' if normalize else 'off'}")

    rows = load_clustering(cluster_path)
    points = [Point(id=row.stud_id, coords=(row.attendance_pct, row.marks)) for row in rows]
    work = normalize_minmax(points) if normalize else points
    assignments = dbscan(work, eps, min_pts)
    summary = cluster_summary(assignments, points)  # centroids in raw units

    clusters_path = out_dir / "clusters.csv"
    summary_path = out_dir / "summary.json"
    _write_text(clusters_path, assignments_to_csv(assignments))
    _write_text(summary_path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {clusters_path}")
    print(f"wrote {summary_path}")
    return 0


def cmd_synth(opts: Options) -> int:
    seed = int(opts.get("seed"))
    out_dir = Path(opts.get("out_dir"))
    spec_path = opts.get("spec")
    if spec_path:
        with open(spec_path, encoding="utf-8") as fh:
            spec = spec_from_dict(json.load(fh))
    else:
        spec = SynthSpec()
    print(f"seed = {seed}")

    result = generate_synthetic_cohort(spec, seed)

    class_lines = ["stud_id,dept,attendance,marks"]
    for row in result.classification:
        class_lines.append(f"{row.stud_id},{row.dept},{row.attendance_flag},{row.total_marks}")
    cluster_lines = ["stud_id,attendance,marks"]
    for row in result.clustering:
        cluster_lines.append(f"{row.stud_id},{row.attendance_pct:g},{row.marks:g}")

    outputs = {
        out_dir / "marks.csv": marks_to_csv(result.dataset),
        out_dir / "classification.csv": "\n".join(class_lines) + "\n",
        out_dir / "clustering.csv": "\n".join(cluster_lines) + "\n",
        out_dir / "ground_truth.json": json.dumps(result.ground_truth, indent=2, sort_keys=True)
        + "\n",
    }
    for path, text in outputs.items():
        _write_text(path, text)
        print(f"wrote {path}")
    return 0


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edumine",
        description="Mine student cohorts: related subjects, performance trees, "
        "attendance/marks clusters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out-dir", dest="out_dir", help="output directory (default: .)")
        p.add_argument("--config", help="JSON config file; flags override its values")

    related = sub.add_parser("related", help="find strongly related subject pairs")
    related.add_argument("--marks", help="marks.csv input")
    related.add_argument("--passes", help="optional passes.csv overriding pass derivation")
    related.add_argument("--pass-mark", dest="pass_mark", type=int)
    related.add_argument("--minconf", type=float, help="override the average-pass-rate minconf")
    related.add_argument("--gamma", type=float, help="strong-correlation threshold (default 0.5)")
    related.add_argument("--min-n", dest="min_n", type=int)
    add_common(related)
    related.set_defaults(func=cmd_related)

    classify = sub.add_parser("classify", help="train or apply the performance tree")
    csub = classify.add_subparsers(dest="mode", required=True)

    train = csub.add_parser("train", help="train the tree and write tree.dot / tree.json")
    train.add_argument("--class-data", dest="class_data", help="classification.csv input")
    train.add_argument("--attributes", help="comma-separated split attributes")
    train.add_argument("--good-min", dest="good_min", type=int)
    train.add_argument("--average-min", dest="average_min", type=int)
    add_common(train)
    train.set_defaults(func=cmd_classify_train)

    pred = csub.add_parser("predict", help="predict performance with a trained tree")
    pred.add_argument("--class-data", dest="class_data", help="classification.csv input")
    pred.add_argument("--tree", help="trained tree JSON (default: <out-dir>/tree.json)")
    pred.add_argument("--good-min", dest="good_min", type=int)
    pred.add_argument("--average-min", dest="average_min", type=int)
    add_common(pred)
    pred.set_defaults(func=cmd_classify_predict)

    cluster = sub.add_parser("cluster", help="cluster students by attendance and marks")
    cluster.add_argument("--cluster-data", dest="cluster_data", help="clustering.csv input")
    cluster.add_argument("--eps", type=float)
    cluster.add_argument("--min-pts", dest="min_pts", type=int)
    cluster.add_argument(
        "--no-normalize",
        dest="no_normalize",
        action="store_const",
        const=True,
        help="cluster raw coordinates instead of min-max normalized ones",
    )
    add_common(cluster)
    cluster.set_defaults(func=cmd_cluster)

    synth = sub.add_parser("synth", help="generate a synthetic cohort with ground truth")
    synth.add_argument("--spec", help="JSON planted-truth description (default: built-in spec)")
    synth.add_argument("--seed", type=int)
    add_common(synth)
    synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config) if getattr(args, "config", None) else {}
        return args.func(Options(args, config))
    except (EduMineError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
