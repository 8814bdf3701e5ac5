"""Experiment orchestration: counting campaigns and exponent fits.

Configs are JSON with polynomials in the text grammar.  B-grids are
geometric (powers of two ending at bmax by default) because exponent
fitting wants evenly spaced logs.  Grid points fan out over a thread pool
and are merged by bound, so outputs are byte-identical across reruns and
across thread counts; zero counts are excluded from fits, never imputed.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .enumeration import (CountSeries, ResidueFilter, count_affine,
                          count_affine_surface, count_projective)
from .poly import parse_poly


@dataclass
class ExperimentConfig:
    poly: str
    function: str                 # "N" | "M" | "Naff"
    bmax: int
    degree: int | None = None
    dim: int | None = None
    integral: bool = True
    grid_count: int = 5
    grid: list = field(default_factory=list)
    filters: list = field(default_factory=list)   # [(p, (r1, r2, r3)), ...]
    out_dir: str | None = None
    seed: int = 0
    threads: int = 1
    target_exponent: float | None = None
    tolerance: float = 0.25
    name: str = "experiment"

    def resolved_grid(self):
        if self.grid:
            grid = list(self.grid)
        else:
            grid = []
            b = self.bmax
            for _ in range(self.grid_count):
                grid.append(b)
                b //= 2
            grid = [b for b in grid if b >= 1]
            grid.reverse()
        if grid != sorted(set(grid)):
            raise ValueError("grid must be strictly increasing")
        if not grid:
            raise ValueError("empty grid")
        return grid

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        filters = [(int(p), tuple(int(r) for r in rs))
                   for p, rs in data.pop("filters", [])]
        return cls(filters=filters, **data)


@dataclass
class FitReport:
    tag: str
    slope: float
    intercept: float
    residual: float
    points_used: int
    target: float | None = None
    margin: float | None = None
    verdict: str | None = None


def fit_exponent(series: CountSeries, target: float | None = None,
                 tolerance: float = 0.25) -> FitReport:
    """Least-squares slope of log count against log B.

    Only entries with positive count participate; at least three are
    required.  With a target exponent the verdict compares the margin
    |slope - target| against the tolerance.
    """
    data = [(math.log(b), math.log(c)) for b, c in series.entries if c > 0]
    if len(data) < 3:
        raise ValueError("insufficient data")
    n = len(data)
    sx = sum(x for x, _ in data)
    sy = sum(y for _, y in data)
    sxx = sum(x * x for x, _ in data)
    sxy = sum(x * y for x, y in data)
    denom = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    residual = sum((y - slope * x - intercept) ** 2 for x, y in data)
    report = FitReport(tag=series.tag, slope=slope, intercept=intercept,
                       residual=residual, points_used=n)
    if target is not None:
        report.target = target
        report.margin = abs(slope - target)
        report.verdict = "pass" if report.margin <= tolerance else "fail"
    return report


def _count_one(config: ExperimentConfig, F, B: int) -> int:
    if config.function == "N":
        return count_projective(F, B)
    if config.function == "M":
        return count_affine(F, B)
    if config.function == "Naff":
        filters = [ResidueFilter(p, rs) for p, rs in config.filters]
        return count_affine_surface(F, B, filters=filters, collect=False)
    raise ValueError(f"unknown counting function {config.function!r}")


def build_series(config: ExperimentConfig) -> CountSeries:
    """Counting function sampled over the grid, fanned out over threads."""
    F = parse_poly(config.poly)
    if config.degree is not None and F.degree != config.degree:
        raise ValueError(
            f"declared degree {config.degree} != parsed degree {F.degree}"
        )
    grid = config.resolved_grid()
    threads = int(os.environ.get("RATPOINTS_THREADS", config.threads))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = dict(zip(grid, pool.map(
                lambda b: _count_one(config, F, b), grid)))
    else:
        counts = {b: _count_one(config, F, b) for b in grid}
    entries = [(b, counts[b]) for b in grid]
    return CountSeries(tag=f"{config.function}:{config.poly}", entries=entries)


def run_experiment(config: ExperimentConfig):
    """Run the counting campaign, write series.csv and report.json.

    Outputs are reproducible: same config and seed give byte-identical
    files regardless of the thread count.
    """
    seed = int(os.environ.get("RATPOINTS_SEED", config.seed))
    series = build_series(config)
    report = {
        "name": config.name,
        "poly": config.poly,
        "function": config.function,
        "seed": seed,
        "series": [[b, c] for b, c in series.entries],
    }
    positive = sum(1 for _, c in series.entries if c > 0)
    if positive >= 3:
        fit = fit_exponent(series, config.target_exponent, config.tolerance)
        report["fit"] = {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "points_used": fit.points_used,
            "target": fit.target,
            "margin": fit.margin,
            "verdict": fit.verdict,
        }
    else:
        report["fit"] = None
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        csv_path = os.path.join(config.out_dir, "series.csv")
        with open(csv_path, "w") as fh:
            fh.write("B,count\n")
            for b, c in series.entries:
                fh.write(f"{b},{c}\n")
        json_path = os.path.join(config.out_dir, "report.json")
        with open(json_path, "w") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return report
