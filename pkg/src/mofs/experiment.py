"""Experiment driver: multi-run sweeps, persistence, summaries, exports.

Runs are laid out as (dataset x algorithm x run index). Every algorithm
in the same run index shares one seed, hence one train/test split, so
per-run comparisons are paired. Each run is persisted as its own record
file (key=value header, then a CSV payload) with floats in shortest
round-trip decimal form and LF line endings, which makes reruns byte
identical; wall-clock times live only in the manifest.
"""

import csv
import io
import re
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import nsga2, nsga3, random_search
from .data import ConfigurationError, DataError, Dataset, load_dataset, split
from .evolution import Population, VariationParams
from .knn import KnnConfig
from .metrics import HvConfig, build_reference_set, hypervolume_3d, igd, welch_t_test
from .nsga3 import SearchConfig
from .objectives import EvalConfig, FitnessEvaluator

ALGORITHMS = {
    "nsga3": nsga3.evolve,
    "nsga2": nsga2.evolve,
    "random": random_search.evolve,
}

RECORD_SUFFIX = ".record"
FRONT_HEADER = "f1_error,f2_size,f3_missing_pct,mask"


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple = ()             # (name, path) pairs
    algorithms: tuple = ("nsga3", "nsga2")
    runs: int = 30
    nfe: int = 100_000
    pop: int = 100
    theta: float = 0.6
    knn_k: int = 5
    folds: int = 10
    train_fraction: float = 0.7
    divisions: int = 13
    seed: int = 1
    out: str = "results"
    missing_token: str = "?"
    skip_header: bool = False

    def search_config(self, run_seed: int) -> SearchConfig:
        return SearchConfig(
            pop_size=self.pop, budget=self.nfe, divisions=self.divisions,
            variation=VariationParams(),
            eval=EvalConfig(threshold=self.theta,
                            knn=KnnConfig(neighbors=self.knn_k, folds=self.folds)),
            seed=run_seed)


@dataclass(frozen=True)
class FrontPoint:
    mask: str            # one '0'/'1' character per feature
    error: float
    size: int
    missing: float

    def objectives(self) -> tuple:
        return (self.error, float(self.size), self.missing)

    def sort_key(self):
        return (self.error, self.size, self.missing, self.mask)


@dataclass(frozen=True)
class RunRecord:
    dataset: str
    algorithm: str
    run_index: int
    seed: int
    feature_count: int
    evaluations: int
    train_front: tuple
    test_front: tuple
    wall_time: float = 0.0           # informational; never serialized in the record

    def front_array(self, which: str) -> np.ndarray:
        points = self.train_front if which == "train" else self.test_front
        return np.array([p.objectives() for p in points])


@dataclass(frozen=True)
class SummaryRow:
    dataset: str
    split: str           # train | test
    metric: str          # IGD | HV
    algorithm: str
    runs: int
    mean: float
    sd: float | None
    mark: str            # +/-/= against the reference algorithm, "" when n/a


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple
    reference_algorithm: str
    notes: tuple = ()


# --------------------------------------------------------------------------
# configuration files

_BOOL_TOKENS = {"true": True, "yes": True, "1": True,
                "false": False, "no": False, "0": False}

_CONFIG_KEYS = {
    "datasets", "algo", "algorithms", "runs", "nfe", "pop", "theta", "knn_k",
    "folds", "train_fraction", "divisions", "seed", "out", "missing_token",
    "skip_header",
}


def dataset_name_from_path(path) -> str:
    stem = Path(path).name
    if stem.endswith(".data") or stem.endswith(".csv") or stem.endswith(".txt"):
        stem = stem.rsplit(".", 1)[0]
    return re.sub(r"[^A-Za-z0-9.-]+", "_", stem)


def parse_dataset_list(raw: str, base_dir: Path) -> tuple:
    entries = []
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" in chunk:
            name, _, path = chunk.partition("=")
            name = name.strip()
            path = path.strip()
        else:
            path = chunk
            name = dataset_name_from_path(path)
        resolved = Path(path)
        if not resolved.is_absolute():
            resolved = base_dir / resolved
        entries.append((name, str(resolved)))
    return tuple(entries)


def _parse_bool(raw: str, key: str) -> bool:
    try:
        return _BOOL_TOKENS[raw.lower()]
    except KeyError:
        raise ConfigurationError(f"{key}: expected a boolean, got {raw!r}") from None


def _parse_number(raw: str, key: str, kind):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigurationError(
            f"{key}: expected {kind.__name__}, got {raw!r}") from None


def load_config(path) -> ExperimentConfig:
    """Parse a flat key=value config file ('#' starts a comment)."""
    base_dir = Path(path).resolve().parent
    values: dict = {}
    with open(path) as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigurationError(
                    f"{path}: line {line_no}: expected key = value")
            # split on the first '='; dataset entries may contain '=' pairs
            key, _, value = stripped.partition("=")
            values[key.strip()] = value.strip()

    unknown = set(values) - _CONFIG_KEYS
    if unknown:
        raise ConfigurationError(
            f"{path}: unknown config keys: {', '.join(sorted(unknown))}")

    cfg = ExperimentConfig()
    updates: dict = {}
    if "datasets" in values:
        updates["datasets"] = parse_dataset_list(values["datasets"], base_dir)
    algo_value = values.get("algo", values.get("algorithms"))
    if algo_value is not None:
        updates["algorithms"] = tuple(
            a.strip() for a in algo_value.split(",") if a.strip())
    for key in ("runs", "nfe", "pop", "knn_k", "folds", "divisions", "seed"):
        if key in values:
            updates[key] = _parse_number(values[key], key, int)
    for key in ("theta", "train_fraction"):
        if key in values:
            updates[key] = _parse_number(values[key], key, float)
    if "out" in values:
        out_path = Path(values["out"])
        updates["out"] = str(out_path if out_path.is_absolute()
                             else base_dir / out_path)
    if "missing_token" in values:
        updates["missing_token"] = values["missing_token"]
    if "skip_header" in values:
        updates["skip_header"] = _parse_bool(values["skip_header"], "skip_header")
    cfg = replace(cfg, **updates)
    # datasets may still arrive via a CLI override; run_experiment
    # enforces their presence.
    validate_config(cfg, require_datasets=False)
    return cfg


def validate_config(cfg: ExperimentConfig, require_datasets: bool = True):
    if require_datasets and not cfg.datasets:
        raise ConfigurationError("no datasets configured")
    if cfg.runs < 1:
        raise ConfigurationError("runs must be at least 1")
    for algorithm in cfg.algorithms:
        if algorithm not in ALGORITHMS:
            raise ConfigurationError(
                f"unknown algorithm {algorithm!r}; available: "
                f"{', '.join(sorted(ALGORITHMS))}")
    cfg.search_config(cfg.seed)      # delegates the numeric range checks


# --------------------------------------------------------------------------
# running

def _fmt(value: float) -> str:
    """Shortest decimal string that round-trips the float."""
    return repr(float(value))


def _mask_string(mask: np.ndarray) -> str:
    return "".join("1" if bit else "0" for bit in mask)


def extract_fronts(population: Population,
                   evaluator: FitnessEvaluator) -> tuple:
    """Deduplicated, sorted train and test fronts of a finished run."""
    front = population.front_indices()
    seen: dict = {}
    for idx in front:
        key = _mask_string(population.masks[idx])
        if key not in seen:
            seen[key] = population.objectives[idx]
    train_points = []
    test_points = []
    for mask_str, objs in seen.items():
        train_points.append(FrontPoint(mask=mask_str, error=float(objs[0]),
                                       size=int(objs[1]), missing=float(objs[2])))
        mask = np.array([c == "1" for c in mask_str])
        test_obj = evaluator.evaluate_on_test(mask)
        test_points.append(FrontPoint(mask=mask_str, error=test_obj.error_rate,
                                      size=test_obj.size,
                                      missing=test_obj.missing_pct))
    train_points.sort(key=FrontPoint.sort_key)
    test_points.sort(key=FrontPoint.sort_key)
    return tuple(train_points), tuple(test_points)


def run_single(dataset: Dataset, dataset_name: str, algorithm: str,
               run_index: int, cfg: ExperimentConfig) -> RunRecord:
    run_seed = cfg.seed + run_index
    split_spec = split(dataset, run_seed, cfg.train_fraction, cfg.folds)
    search_cfg = cfg.search_config(run_seed)
    started = time.perf_counter()
    population = ALGORITHMS[algorithm](dataset, split_spec, search_cfg)
    elapsed = time.perf_counter() - started
    evaluator = FitnessEvaluator(dataset, split_spec, search_cfg.eval)
    train_front, test_front = extract_fronts(population, evaluator)
    return RunRecord(dataset=dataset_name, algorithm=algorithm,
                     run_index=run_index, seed=run_seed,
                     feature_count=dataset.feature_count,
                     evaluations=population.evaluations,
                     train_front=train_front, test_front=test_front,
                     wall_time=elapsed)


def run_experiment(cfg: ExperimentConfig, log=print) -> list:
    """Execute every (dataset, algorithm, run) cell and persist the records.

    A dataset that fails to load is reported and skipped; completed
    records are written regardless, one file per run, plus a manifest.
    """
    validate_config(cfg)
    records_dir = Path(cfg.out) / "records"
    records_dir.mkdir(parents=True, exist_ok=True)
    records: list = []
    for dataset_name, path in cfg.datasets:
        try:
            dataset = load_dataset(path, cfg.missing_token, cfg.skip_header)
        except (OSError, DataError) as exc:
            log(f"skipping dataset {dataset_name}: {exc}")
            continue
        for run_index in range(cfg.runs):
            for algorithm in cfg.algorithms:
                record = run_single(dataset, dataset_name, algorithm,
                                    run_index, cfg)
                records.append(record)
                target = records_dir / record_filename(record)
                write_record(record, target)
                log(f"{dataset_name} {algorithm} run {run_index}: "
                    f"{len(record.train_front)} front points, "
                    f"{record.evaluations} evaluations, "
                    f"{record.wall_time:.1f}s -> {target.name}")
    write_manifest(records, records_dir / "manifest.csv")
    return records


# --------------------------------------------------------------------------
# record files

def record_filename(record: RunRecord) -> str:
    return (f"{record.dataset}__{record.algorithm}"
            f"__run{record.run_index:03d}{RECORD_SUFFIX}")


def write_record(record: RunRecord, path):
    lines = [
        f"dataset = {record.dataset}",
        f"algorithm = {record.algorithm}",
        f"run = {record.run_index}",
        f"seed = {record.seed}",
        f"features = {record.feature_count}",
        f"evaluations = {record.evaluations}",
        "",
        "split," + FRONT_HEADER,
    ]
    for split_name, points in (("train", record.train_front),
                               ("test", record.test_front)):
        for p in points:
            lines.append(f"{split_name},{_fmt(p.error)},{p.size},"
                         f"{_fmt(p.missing)},{p.mask}")
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_record(path) -> RunRecord:
    header: dict = {}
    fronts = {"train": [], "test": []}
    with open(path) as handle:
        lines = handle.read().splitlines()
    body_start = None
    for i, line in enumerate(lines):
        if not line.strip():
            body_start = i + 1
            break
        key, _, value = line.partition("=")
        header[key.strip()] = value.strip()
    if body_start is None or body_start >= len(lines):
        raise DataError(f"{path}: missing front payload")
    expected = "split," + FRONT_HEADER
    if lines[body_start] != expected:
        raise DataError(f"{path}: unexpected payload header {lines[body_start]!r}")
    for line_no, line in enumerate(lines[body_start + 1:], start=body_start + 2):
        if not line.strip():
            continue
        try:
            split_name, error, size, missing, mask = line.split(",")
            fronts[split_name].append(FrontPoint(
                mask=mask, error=float(error), size=int(size),
                missing=float(missing)))
        except (ValueError, KeyError):
            raise DataError(f"{path}: line {line_no}: malformed front row "
                            f"{line!r}") from None
    try:
        return RunRecord(
            dataset=header["dataset"], algorithm=header["algorithm"],
            run_index=int(header["run"]), seed=int(header["seed"]),
            feature_count=int(header["features"]),
            evaluations=int(header["evaluations"]),
            train_front=tuple(fronts["train"]),
            test_front=tuple(fronts["test"]))
    except KeyError as exc:
        raise DataError(f"{path}: missing header field {exc}") from None


def write_manifest(records: list, path):
    ordered = sorted(records, key=lambda r: (r.dataset, r.algorithm, r.run_index))
    with open(path, "w", newline="\n") as handle:
        handle.write("record,dataset,algorithm,run,seed,evaluations,"
                     "train_front_size,test_front_size,wall_time_s\n")
        for r in ordered:
            handle.write(f"{record_filename(r)},{r.dataset},{r.algorithm},"
                         f"{r.run_index},{r.seed},{r.evaluations},"
                         f"{len(r.train_front)},{len(r.test_front)},"
                         f"{r.wall_time:.3f}\n")


def read_records_dir(path) -> list:
    files = sorted(Path(path).glob(f"*{RECORD_SUFFIX}"))
    if not files:
        raise DataError(f"no run records ({RECORD_SUFFIX} files) in {path}")
    records = [read_record(f) for f in files]
    records.sort(key=lambda r: (r.dataset, r.algorithm, r.run_index))
    return records


# --------------------------------------------------------------------------
# summaries

def _normalized_front(record: RunRecord, which: str) -> np.ndarray:
    raw = record.front_array(which)
    return raw / np.array([1.0, float(record.feature_count), 100.0])


def per_run_metrics(records: list) -> dict:
    """IGD and HV of every run, keyed by (dataset, algorithm, split, metric).

    IGD is measured against the non-dominated union of all fronts of the
    same dataset and split, in normalized objective space (error as-is,
    size over feature count, missing percentage over 100); hypervolume
    uses the same scaling with a 1.1 reference per axis. Values are
    ordered by run index.
    """
    if not records:
        raise DataError("no records to summarize")
    values: dict = {}
    for dataset_name in sorted({r.dataset for r in records}):
        of_dataset = [r for r in records if r.dataset == dataset_name]
        hv_cfg = HvConfig.for_feature_count(of_dataset[0].feature_count)
        for split_name in ("train", "test"):
            reference_set = build_reference_set(
                [_normalized_front(r, split_name) for r in of_dataset],
                provenance=(f"{dataset_name}/{split_name}: union over "
                            f"{len(of_dataset)} runs, normalized"))
            for algorithm in sorted({r.algorithm for r in of_dataset}):
                runs = sorted((r for r in of_dataset if r.algorithm == algorithm),
                              key=lambda r: r.run_index)
                values[dataset_name, algorithm, split_name, "IGD"] = [
                    igd(_normalized_front(r, split_name), reference_set.points)
                    for r in runs]
                values[dataset_name, algorithm, split_name, "HV"] = [
                    hypervolume_3d(r.front_array(split_name), hv_cfg)
                    for r in runs]
    return values


def summarize(records: list, reference_algorithm: str = "nsga3") -> SummaryTable:
    """Per (dataset, algorithm, split, metric) means, deviations and marks.

    Marks compare the reference algorithm against each other algorithm
    with Welch's t-test at the 95% level, oriented so "+" always means
    the reference is significantly better.
    """
    values = per_run_metrics(records)
    rows: list = []
    notes: list = []
    datasets = sorted({key[0] for key in values})
    for dataset_name in datasets:
        algorithms = sorted({key[1] for key in values if key[0] == dataset_name})
        for split_name in ("train", "test"):
            for metric in ("IGD", "HV"):
                for algorithm in algorithms:
                    sample = values[dataset_name, algorithm, split_name, metric]
                    reference = values.get(
                        (dataset_name, reference_algorithm, split_name, metric))
                    mark = ""
                    if (algorithm != reference_algorithm and reference is not None
                            and len(sample) >= 2 and len(reference) >= 2):
                        result = welch_t_test(
                            reference, sample,
                            smaller_is_better=(metric == "IGD"))
                        mark = result.verdict
                    sd = None
                    if len(sample) >= 2:
                        sd = float(np.std(sample, ddof=1))
                    else:
                        notes.append(
                            f"{dataset_name}/{split_name}/{metric}/{algorithm}: "
                            "single run, SD and significance omitted")
                    rows.append(SummaryRow(
                        dataset=dataset_name, split=split_name, metric=metric,
                        algorithm=algorithm, runs=len(sample),
                        mean=float(np.mean(sample)), sd=sd, mark=mark))
    notes.extend(_hv_comparison_notes(rows, reference_algorithm))
    # de-duplicate notes while preserving order
    seen: dict = {}
    for note in notes:
        seen.setdefault(note, None)
    return SummaryTable(rows=tuple(rows), reference_algorithm=reference_algorithm,
                        notes=tuple(seen))


def _hv_comparison_notes(rows: list, reference: str) -> list:
    """Qualitative reference-vs-nsga2 hypervolume tally (reported, not gated)."""
    other = "nsga2"
    if reference == other:
        return []
    notes = []
    for split_name in ("train", "test"):
        wins = total = 0
        for dataset_name in sorted({r.dataset for r in rows}):
            means = {r.algorithm: r.mean for r in rows
                     if r.dataset == dataset_name and r.split == split_name
                     and r.metric == "HV"}
            if reference in means and other in means:
                total += 1
                wins += means[reference] >= means[other]
        if total:
            notes.append(
                f"{split_name}: {reference} mean HV >= {other} on "
                f"{wins} of {total} datasets")
    return notes


def summary_to_text(table: SummaryTable) -> str:
    header = ("dataset", "split", "metric", "algorithm", "runs",
              "mean", "sd", f"vs {table.reference_algorithm}")
    body = []
    for r in table.rows:
        body.append((r.dataset, r.split, r.metric, r.algorithm, str(r.runs),
                     f"{r.mean:.4e}", "" if r.sd is None else f"{r.sd:.4e}",
                     r.mark))
    widths = [max(len(header[i]), *(len(row[i]) for row in body))
              for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    for note in table.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def summary_to_csv(table: SummaryTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["dataset", "split", "metric", "algorithm", "runs",
                     "mean", "sd", "significance_vs_reference", "reference"])
    for r in table.rows:
        writer.writerow([r.dataset, r.split, r.metric, r.algorithm, r.runs,
                         _fmt(r.mean), "" if r.sd is None else _fmt(r.sd),
                         r.mark, table.reference_algorithm])
    return out.getvalue()


# --------------------------------------------------------------------------
# front exports

def export_fronts(records: list, out_dir, make_figures: bool = True) -> list:
    """Write per-cell and combined front CSVs (and scatter figures).

    Per (dataset, algorithm, split) the rows of every run are pooled and
    sorted by error, then size, then missing rate. The combined file per
    dataset adds algorithm and split columns for generic plotting.
    """
    if not records:
        raise DataError("no records to export")
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    written: list = []
    datasets = sorted({r.dataset for r in records})
    for dataset_name in datasets:
        of_dataset = [r for r in records if r.dataset == dataset_name]
        algorithms = sorted({r.algorithm for r in of_dataset})
        combined_rows: list = []
        figure_data: dict = {}
        for algorithm in algorithms:
            runs = [r for r in of_dataset if r.algorithm == algorithm]
            for split_name in ("train", "test"):
                points: list = []
                for record in runs:
                    points.extend(record.train_front if split_name == "train"
                                  else record.test_front)
                points.sort(key=FrontPoint.sort_key)
                target = out_path / f"{dataset_name}__{algorithm}__{split_name}.csv"
                with open(target, "w", newline="\n") as handle:
                    handle.write(FRONT_HEADER + "\n")
                    for p in points:
                        handle.write(f"{_fmt(p.error)},{p.size},"
                                     f"{_fmt(p.missing)},{p.mask}\n")
                written.append(target)
                combined_rows.extend(
                    (algorithm, split_name, p) for p in points)
                if points:
                    figure_data[algorithm, split_name] = np.array(
                        [p.objectives() for p in points])
        combined = out_path / f"{dataset_name}__combined.csv"
        with open(combined, "w", newline="\n") as handle:
            handle.write("algorithm,split," + FRONT_HEADER + "\n")
            for algorithm, split_name, p in combined_rows:
                handle.write(f"{algorithm},{split_name},{_fmt(p.error)},"
                             f"{p.size},{_fmt(p.missing)},{p.mask}\n")
        written.append(combined)
        if make_figures:
            from .plots import render_front_scatter
            for split_name in ("train", "test"):
                per_algorithm = {
                    algorithm: pts
                    for (algorithm, s), pts in figure_data.items()
                    if s == split_name}
                if not per_algorithm:
                    continue
                figure = out_path / f"{dataset_name}__{split_name}.png"
                render_front_scatter(
                    f"{dataset_name} ({split_name})", per_algorithm, figure)
                written.append(figure)
    return written
