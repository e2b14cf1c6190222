"""Experiment driver: coverage tables over replicated draws, CSV and
SVG emission, and JSON config handling.

A config names a procedure (bootstrap / subsample / sgd / permutation /
randomization / conformal), a benchmark setting, budget and level
grids, and a replication count.  Replicates run in a thread pool but
draw from pre-split seed streams and are aggregated in replicate
order, so the output table is bit-identical for any thread count.

Width reporting: scalar confidence intervals report the interval
width; sup-norm (set-valued) intervals report the threshold span
(W_(u) - W_(l)) / tau_m, tagged via ``width_kind``; hypothesis-test
rows carry no width (NA in the CSV).
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BudgetTooSmall, ConfigError, InvalidInput
from .oracle import conformal_grid_example
from .procedures import ci_boot, ci_sgd, ci_subsample, permutation_test, randomization_test
from .resampling import (
    SeedSpec,
    SgdSpec,
    full_symmetric,
    generator,
    setting_sampler,
    setting_truth,
    stream_for,
)

__all__ = [
    "CoverageRow",
    "SkippedRow",
    "CoverageTable",
    "sup_norm",
    "normalize_config",
    "load_config",
    "run_experiment",
    "emit",
    "read_table",
]

CSV_HEADER = ("setting", "method", "B", "alpha", "m", "reps", "coverage", "mean_width", "seed")


def sup_norm(x) -> float:
    """The l-infinity norm, the root used by the vector-mean setting."""
    return float(np.max(np.abs(x)))


@dataclass(frozen=True)
class CoverageRow:
    """One aggregated (setting, method, B, alpha) result."""

    setting: int
    method: str
    B: int
    alpha: float
    m: int
    reps: int
    coverage: float
    mean_width: Optional[float]
    seed: int
    width_kind: str = "interval"

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise InvalidInput("reps must be >= 1")
        if not 0.0 <= self.coverage <= 1.0:
            raise InvalidInput(f"coverage {self.coverage} outside [0, 1]")


@dataclass(frozen=True)
class SkippedRow:
    """A (method, B) cell that could not run, with the reason."""

    setting: int
    method: str
    B: int
    alpha: float
    reason: str


@dataclass
class CoverageTable:
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)


_KNOWN_KEYS = {
    "procedure",
    "setting",
    "methods",
    "B",
    "alpha",
    "reps",
    "seed",
    "threads",
    "m",
    "d",
    "k",
    "n",
    "burn_in",
    "gamma1",
    "tau_exp",
    "paper_scale",
}

_PROCEDURES = ("bootstrap", "subsample", "sgd", "permutation", "randomization", "conformal")
_VARIANTS = ("vanilla", "modified", "randomized")

_DEFAULT_SETTING = {
    "bootstrap": 1,
    "subsample": 3,
    "sgd": 4,
    "permutation": 0,
    "randomization": 0,
    "conformal": 0,
}


def _as_list(v) -> list:
    return list(v) if isinstance(v, (list, tuple)) else [v]


def normalize_config(config: dict) -> dict:
    """Validate a config dict and fill defaults.

    Raises :class:`ConfigError` naming the offending key path.
    """
    if not isinstance(config, dict):
        raise ConfigError("config: expected a JSON object")
    for key in config:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"config.{key}: unknown key")
    cfg = dict(config)
    proc = cfg.setdefault("procedure", "bootstrap")
    if proc not in _PROCEDURES:
        raise ConfigError(f"config.procedure: expected one of {_PROCEDURES}, got {proc!r}")
    setting = cfg.setdefault("setting", _DEFAULT_SETTING[proc])
    allowed = {
        "bootstrap": (1, 2),
        "subsample": (1, 2, 3),
        "sgd": (4,),
        "permutation": (0,),
        "randomization": (0,),
        "conformal": (0,),
    }[proc]
    if setting not in allowed:
        raise ConfigError(f"config.setting: procedure {proc!r} supports {allowed}, got {setting!r}")

    paper = bool(cfg.setdefault("paper_scale", False))
    cfg.setdefault("m", {1: 100, 2: 1000 if paper else 400, 3: 100}.get(setting, 50 if proc == "randomization" else 30 if proc == "permutation" else 100))
    cfg.setdefault("d", 100 if paper else 20)
    cfg.setdefault("n", 10_000 if paper else 5_000)
    cfg.setdefault("burn_in", 2_000 if paper else 1_000)
    cfg.setdefault("gamma1", 1.0)
    cfg.setdefault("tau_exp", 2.0 / 3.0)
    cfg.setdefault("k", None)
    cfg.setdefault("methods", ["modified"])
    cfg.setdefault("B", [99] if proc == "permutation" else [19])
    cfg.setdefault("alpha", [0.1])
    cfg.setdefault("reps", 1000)
    cfg.setdefault("seed", 20260823)
    cfg.setdefault("threads", 1)

    cfg["B"] = [int(b) for b in _as_list(cfg["B"])]
    cfg["alpha"] = [float(a) for a in _as_list(cfg["alpha"])]
    cfg["methods"] = _as_list(cfg["methods"])
    for b in cfg["B"]:
        if b < 1:
            raise ConfigError(f"config.B: budgets must be >= 1, got {b}")
    for a in cfg["alpha"]:
        if not 0.0 < a < 1.0:
            raise ConfigError(f"config.alpha: levels must lie in (0, 1), got {a}")
    if proc in ("bootstrap", "subsample", "sgd"):
        for v in cfg["methods"]:
            if v not in _VARIANTS:
                raise ConfigError(f"config.methods: expected one of {_VARIANTS}, got {v!r}")
    int_keys = ["reps", "seed", "threads", "d", "n", "burn_in"]
    if proc == "conformal":
        cfg["m"] = [int(v) for v in _as_list(cfg["m"])]
        if any(v < 1 for v in cfg["m"]):
            raise ConfigError(f"config.m: sizes must be >= 1, got {cfg['m']!r}")
    else:
        int_keys.append("m")
    for key in int_keys:
        if int(cfg[key]) != cfg[key] or cfg[key] < (0 if key == "seed" else 1):
            raise ConfigError(f"config.{key}: expected a positive integer, got {cfg[key]!r}")
        cfg[key] = int(cfg[key])
    if cfg["k"] is not None:
        if int(cfg["k"]) != cfg["k"] or not 1 <= cfg["k"] <= cfg["m"]:
            raise ConfigError(f"config.k: expected an integer in [1, m], got {cfg['k']!r}")
        cfg["k"] = int(cfg["k"])
    if not cfg["burn_in"] < cfg["n"]:
        raise ConfigError("config.burn_in: must be smaller than config.n")
    return cfg


def load_config(path: str) -> dict:
    """Read a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: invalid JSON ({exc})") from exc
    return raw


def _rate(setting: int, n: int) -> float:
    return float(n) if setting == 3 else math.sqrt(n)


def _sgd_gradient(theta, point):
    x, y = point
    ind = 1.0 if (y - x @ theta) < 0.0 else 0.0
    return -(0.5 - ind) * x


def _sgd_gradient_batch(thetas, point):
    x, y = point
    ind = (y - thetas @ x < 0.0).astype(float)
    return -(0.5 - ind)[:, None] * x[None, :]


def _corr_statistic(data, perm):
    x, y = data
    return abs(float(np.corrcoef(x, y[perm])[0, 1]))


def _mean_statistic(x):
    return float(x.sum() / math.sqrt(x.size))


def _ci_replicate(cfg: dict, B: int, alpha: float, variant: str, r: int):
    proc = cfg["procedure"]
    setting = cfg["setting"]
    master = cfg["seed"]
    data_seed = SeedSpec(master, stream_for(r, 0))
    proc_seed = SeedSpec(master, stream_for(r, 1))
    if proc == "sgd":
        stream = setting_sampler(4, {"n": cfg["n"]}, data_seed)
        spec = SgdSpec(
            dim=3,
            gamma1=cfg["gamma1"],
            tau_exp=cfg["tau_exp"],
            burn_in=cfg["burn_in"],
            n_total=cfg["n"],
            gradient=_sgd_gradient,
            weight_law="exponential",
        )
        ci = ci_sgd(
            stream,
            spec,
            B=B,
            alpha=alpha,
            variant=variant,
            seed=proc_seed,
            gradient_batch=_sgd_gradient_batch,
        )[0]
        return ci.contains(setting_truth(4)[0]), ci.span

    m = cfg["m"]
    params = {"m": m, "d": cfg["d"]} if setting == 2 else {"m": m}
    data = setting_sampler(setting, params, data_seed)
    theta0 = setting_truth(setting, params)
    if setting == 1:
        estimator, root = np.mean, None
    elif setting == 2:
        estimator, root = (lambda a: a.mean(axis=0)), sup_norm
    else:
        estimator, root = np.max, None
    tau_m = _rate(setting, m)
    if proc == "bootstrap":
        ci = ci_boot(
            data, estimator, root=root, tau_m=tau_m, B=B, alpha=alpha, variant=variant, seed=proc_seed
        )
    else:
        k = cfg["k"] or math.ceil(m ** (2.0 / 3.0))
        ci = ci_subsample(
            data,
            estimator,
            root=root,
            tau_m=tau_m,
            tau_k=_rate(setting, k),
            k=k,
            B=B,
            alpha=alpha,
            variant=variant,
            seed=proc_seed,
        )
    return ci.contains(theta0), ci.span


def _test_replicate(cfg: dict, B: int, alpha: float, r: int):
    master = cfg["seed"]
    m = cfg["m"]
    gen = generator(SeedSpec(master, stream_for(r, 0)))
    proc_seed = SeedSpec(master, stream_for(r, 1))
    if cfg["procedure"] == "permutation":
        data = (gen.standard_normal(m), gen.standard_normal(m))
        decision = permutation_test(data, _corr_statistic, full_symmetric(m), B, alpha, seed=proc_seed)
    else:
        decision = randomization_test(
            gen.standard_normal(m), _mean_statistic, "signflip", B, alpha, seed=proc_seed
        )
    return (not decision.reject), None


def run_experiment(config: dict) -> CoverageTable:
    """Run the configured replication study and aggregate coverage.

    Coverage is the fraction of replicates whose confidence set
    contains the true parameter (for CI procedures) or that retain the
    null (for tests); the conformal procedure tabulates the exact grid
    coverage instead of replicating.  Cells whose budget cannot
    support the requested rule become skipped rows with the reason.
    """
    cfg = normalize_config(config)
    proc = cfg["procedure"]
    table = CoverageTable()
    if proc == "conformal":
        for alpha in cfg["alpha"]:
            for m in _as_list(cfg["m"]):
                ex = conformal_grid_example(int(m), alpha)
                table.rows.append(
                    CoverageRow(
                        setting=0,
                        method="conformal_modified",
                        B=int(m),
                        alpha=alpha,
                        m=int(m),
                        reps=1,
                        coverage=ex.coverage,
                        mean_width=None,
                        seed=cfg["seed"],
                        width_kind="na",
                    )
                )
        return table

    is_test = proc in ("permutation", "randomization")
    methods = [proc] if is_test else cfg["methods"]
    with ThreadPoolExecutor(max_workers=cfg["threads"]) as pool:
        for alpha in cfg["alpha"]:
            for B in cfg["B"]:
                for method in methods:
                    if is_test:
                        runner = lambda r: _test_replicate(cfg, B, alpha, r)
                        label = proc
                    else:
                        runner = lambda r: _ci_replicate(cfg, B, alpha, method, r)
                        label = f"{proc}_{method}"
                    try:
                        outcomes = list(pool.map(runner, range(cfg["reps"])))
                    except BudgetTooSmall as exc:
                        table.skipped.append(
                            SkippedRow(cfg["setting"], label, B, alpha, reason=str(exc))
                        )
                        continue
                    covered = np.array([c for c, _ in outcomes], dtype=float)
                    widths = [w for _, w in outcomes if w is not None and math.isfinite(w)]
                    mean_width = float(np.mean(widths)) if widths else None
                    table.rows.append(
                        CoverageRow(
                            setting=cfg["setting"],
                            method=label,
                            B=B,
                            alpha=alpha,
                            m=cfg["n"] if proc == "sgd" else cfg["m"],
                            reps=cfg["reps"],
                            coverage=float(covered.mean()),
                            mean_width=mean_width,
                            seed=cfg["seed"],
                            width_kind="na" if is_test else ("span" if cfg["setting"] == 2 else "interval"),
                        )
                    )
    return table


def _csv_text(table: CoverageTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table.rows:
        writer.writerow(
            [
                row.setting,
                row.method,
                row.B,
                row.alpha,
                row.m,
                row.reps,
                row.coverage,
                "NA" if row.mean_width is None else row.mean_width,
                row.seed,
            ]
        )
    return buf.getvalue()


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _svg_text(table: CoverageTable) -> str:
    if not table.rows:
        raise InvalidInput("cannot plot an empty table")
    width, height = 640, 420
    ml, mr, mt, mb = 62, 20, 24, 48
    pw, ph = width - ml - mr, height - mt - mb
    bs = sorted({row.B for row in table.rows})
    b_lo, b_hi = bs[0], bs[-1]
    if b_lo == b_hi:
        b_lo, b_hi = b_lo - 1, b_hi + 1

    def sx(b: float) -> float:
        return ml + (b - b_lo) / (b_hi - b_lo) * pw

    def sy(c: float) -> float:
        return mt + (1.0 - c) * ph

    alpha = table.rows[0].alpha
    nominal = 1.0 - alpha
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(tick)
        parts.append(f'<line x1="{ml - 4}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end" '
            f'font-family="sans-serif">{tick:g}</text>'
        )
    for b in bs[: 12]:
        x = sx(b)
        parts.append(f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 4}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle" '
            f'font-family="sans-serif">{b}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 10}" font-size="12" text-anchor="middle" '
        f'font-family="sans-serif">budget B</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.2f}" font-size="12" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {mt + ph / 2:.2f})">coverage</text>'
    )
    y_nom = sy(nominal)
    parts.append(
        f'<line x1="{ml}" y1="{y_nom:.2f}" x2="{ml + pw}" y2="{y_nom:.2f}" '
        f'stroke="#555555" stroke-dasharray="6,4"/>'
    )
    methods = sorted({row.method for row in table.rows})
    for mi, method in enumerate(methods):
        pts = sorted(
            ((row.B, row.coverage) for row in table.rows if row.method == method),
            key=lambda t: t[0],
        )
        color = _PALETTE[mi % len(_PALETTE)]
        coords = " ".join(f"{sx(b):.2f},{sy(c):.2f}" for b, c in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        parts.append(
            f'<text x="{ml + pw - 6}" y="{mt + 16 + 14 * mi}" font-size="11" text-anchor="end" '
            f'font-family="sans-serif" fill="{color}">{method}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit(table: CoverageTable, fmt: str, path: str) -> str:
    """Write the table as CSV (fixed header, LF endings) or a
    self-contained SVG coverage plot; returns the path."""
    if fmt == "csv":
        text = _csv_text(table)
    elif fmt == "svg":
        text = _svg_text(table)
    else:
        raise InvalidInput(f"format must be 'csv' or 'svg', got {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_table(path: str) -> CoverageTable:
    """Parse a CSV produced by :func:`emit` back into a table."""
    table = CoverageTable()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise InvalidInput(f"unexpected CSV header {header!r}")
        for rec in reader:
            table.rows.append(
                CoverageRow(
                    setting=int(rec[0]),
                    method=rec[1],
                    B=int(rec[2]),
                    alpha=float(rec[3]),
                    m=int(rec[4]),
                    reps=int(rec[5]),
                    coverage=float(rec[6]),
                    mean_width=None if rec[7] == "NA" else float(rec[7]),
                    seed=int(rec[8]),
                )
            )
    return table
