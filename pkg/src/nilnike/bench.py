"""Attack cost benchmarks over a parameter grid.

Each grid point is (platform, p, alpha, n); every applicable attack is run on
``trials`` fresh instances and the mean operation count is reported.  Points
run in a process pool, each with its own RNG stream derived from the seed and
the point index, so the op columns do not depend on the worker count.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from statistics import fmean
from typing import Optional, Sequence

from .attacks import APPLICABLE, DEFAULT_BUDGET, generic_work_estimate, run_attack
from .platforms import PlatformDescriptor
from .protocol import run_exchange, setup
from .rng import make_rng

HEADER = ("platform", "p", "alpha", "n", "algorithm", "ops", "millis", "refused")


@dataclass(frozen=True)
class BenchPoint:
    platform: str
    p: int
    alpha: int
    n: int


@dataclass(frozen=True)
class BenchRow:
    platform: str
    p: int
    alpha: int
    n: int
    algorithm: str
    ops: float
    millis: float
    refused: bool

    def as_csv(self) -> list:
        return [
            self.platform,
            self.p,
            self.alpha,
            self.n,
            self.algorithm,
            f"{self.ops:.2f}",
            f"{self.millis:.3f}",
            int(self.refused),
        ]


def grid(
    platforms: Sequence[str],
    ps: Sequence[int],
    alphas: Sequence[int] = (1,),
    ns: Sequence[int] = (2,),
) -> list[BenchPoint]:
    """Cartesian grid, collapsing parameters a family does not have.

    Heisenberg always has alpha = 1, and the class-2 families always n = 2.
    """
    seen: dict[BenchPoint, None] = {}
    for fam, p, alpha, n in product(platforms, ps, alphas, ns):
        if fam == "heisenberg":
            alpha = 1
        if fam != "quaternion":
            n = 2
        seen.setdefault(BenchPoint(fam, p, alpha, n))
    return list(seen)


def _descriptor(point: BenchPoint, m: int) -> PlatformDescriptor:
    if point.platform == "heisenberg":
        return PlatformDescriptor.heisenberg(point.p, m)
    if point.platform == "cyclic-triple":
        return PlatformDescriptor.cyclic_triple(point.p, point.alpha)
    return PlatformDescriptor.quaternion(point.p, point.alpha, point.n)


def run_point(
    point: BenchPoint,
    index: int,
    seed: int,
    trials: int = 10,
    algorithms: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_BUDGET,
    m: int = 1,
) -> list[BenchRow]:
    rng = make_rng(seed, "bench", index)
    algs = [a for a in APPLICABLE[point.platform] if algorithms is None or a in algorithms]
    descriptor = _descriptor(point, m)
    ops: dict[str, list] = {a: [] for a in algs}
    millis: dict[str, list] = {a: [] for a in algs}
    refused = {a: False for a in algs}
    if "generic" in algs and generic_work_estimate(point.p, descriptor.key_alpha) > budget:
        refused["generic"] = True
    for _ in range(trials):
        params = setup(descriptor, point.n, rng)
        tr = run_exchange(params, rng)
        for a in algs:
            if refused[a]:
                continue
            report = run_attack(a, tr, budget=budget)
            if not report.success:
                if report.error == "BudgetExceeded":
                    refused[a] = True
                    continue
                raise RuntimeError(f"{a} failed at {point}: {report.error}")
            ops[a].append(report.ops)
            millis[a].append(report.millis)
    return [
        BenchRow(
            point.platform,
            point.p,
            point.alpha,
            point.n,
            a,
            0.0 if refused[a] or not ops[a] else fmean(ops[a]),
            0.0 if refused[a] or not millis[a] else fmean(millis[a]),
            refused[a],
        )
        for a in algs
    ]


def run_grid(
    points: Sequence[BenchPoint],
    seed: int = 0,
    trials: int = 10,
    algorithms: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_BUDGET,
    m: int = 1,
    workers: int = 1,
) -> list[BenchRow]:
    args = [(pt, i, seed, trials, algorithms, budget, m) for i, pt in enumerate(points)]
    if workers <= 1 or len(points) <= 1:
        chunks = [run_point(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_point_star, args))
    return [row for chunk in chunks for row in chunk]


def _run_point_star(args):
    return run_point(*args)


def to_csv(rows: Sequence[BenchRow], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        cells = row.as_csv()
        if not timing:
            cells[6] = "0"
        w.writerow(cells)
    return buf.getvalue()
