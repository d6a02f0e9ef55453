"""Random instances and the Monte-Carlo sweep harness.

Every realization gets its own seed derived from the master seed by a fixed
counter scheme (master * 1_000_003 + job index), so results are identical no
matter how many workers process the job list, and rows always come out
ordered by (cell, repetition, variant).
"""

from __future__ import annotations

import csv
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from anticoord.game_core import PayoffConstants, TypedBipartiteGraph
from anticoord.greedy import Variant, control_effort, run_greedy

CSV_COLUMNS = (
    "variant",
    "n",
    "p_B",
    "c0",
    "c1",
    "m0",
    "m1",
    "seed",
    "effort",
    "selections",
    "runtime_ms",
)

_SEED_STRIDE = 1_000_003


def gen_random_bipartite(n: int, p_b: float, seed: int) -> TypedBipartiteGraph:
    """Half the players type 0, half type 1; each cross pair is an edge with probability p_b."""
    if n % 2:
        raise ValueError(f"random bipartite generation needs an even player count, got {n}")
    if not 0 < p_b < 1:
        raise ValueError(f"edge probability must lie in (0, 1), got {p_b}")
    rng = random.Random(seed)
    half = n // 2
    edges = [
        (i, j)
        for i in range(half)
        for j in range(half, n)
        if rng.random() < p_b
    ]
    return TypedBipartiteGraph(n, [0] * half + [1] * half, edges)


def gen_random_bipartite_random_types(n: int, p_b: float, seed: int) -> TypedBipartiteGraph:
    """Types drawn i.i.d. fair-coin per player; cross pairs edged with probability p_b.

    This is the size-sweep construction (it also supports odd player counts).
    """
    if not 0 < p_b < 1:
        raise ValueError(f"edge probability must lie in (0, 1), got {p_b}")
    rng = random.Random(seed)
    types = [rng.randint(0, 1) for _ in range(n)]
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if types[i] != types[j] and rng.random() < p_b
    ]
    return TypedBipartiteGraph(n, types, edges)


def grid_constants(m_max: int = 10) -> list[Fraction]:
    """Cell midpoints c(m) = 2/(2m-1): the unique grid value with m*c > 1 > (m-1)*c."""
    return [Fraction(2, 2 * m - 1) for m in range(1, m_max + 1)]


def random_instances(
    count: int,
    seed: int,
    n_min: int = 4,
    n_max: int = 30,
    p_choices: Sequence[float] = (0.1, 0.3, 0.5),
) -> Iterator[tuple[TypedBipartiteGraph, PayoffConstants]]:
    """Seeded stream of (graph, constants) pairs over the experiment grid."""
    rng = random.Random(seed)
    grid = grid_constants()
    for _ in range(count):
        n = 2 * rng.randint(n_min // 2, n_max // 2)
        p = rng.choice(list(p_choices))
        graph = gen_random_bipartite(n, p, rng.randrange(2**31))
        constants = PayoffConstants(grid[rng.randrange(10)], grid[rng.randrange(10)])
        yield graph, constants


@dataclass
class ExperimentConfig:
    """One sweep: a constant grid, a size sweep, or a single cell."""

    mode: str  # "grid" | "size_sweep" | "single"
    variants: tuple = (Variant.CP, Variant.MAX_DEGREE, Variant.RAND)
    reps: int = 100
    seed: int = 0
    out: str = "sweep.csv"
    n: int = 20
    p_b: Optional[float] = 0.3  # size_sweep derives p = expected_degree / n instead
    grid_m_max: int = 10
    sizes: tuple[int, ...] = tuple(range(10, 75, 5))
    expected_degree: int = 6  # size_sweep edge probability is expected_degree / n
    m_cells: tuple[tuple[int, int], ...] = ()  # restrict grid mode to these (m0, m1) cells
    c0: Optional[Fraction] = None  # single and size_sweep modes
    c1: Optional[Fraction] = None
    deterministic: bool = False  # greedy tie-breaks: lowest index instead of seeded rng
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        for key in ("variants", "sizes", "m_cells"):
            if key in data:
                data[key] = tuple(
                    tuple(v) if isinstance(v, list) else v for v in data[key]
                )
        for key in ("c0", "c1"):
            if data.get(key) is not None:
                data[key] = Fraction(str(data[key]))
        return cls(**data)

    def __post_init__(self):
        if self.mode not in ("grid", "size_sweep", "single"):
            raise ValueError(f"unknown experiment mode {self.mode!r}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        self.variants = tuple(Variant(v) for v in self.variants)


def _grid_index(c: Fraction, grid: list[Fraction]) -> str:
    for m, value in enumerate(grid, start=1):
        if value == c:
            return str(m)
    return ""


def _job_list(config: ExperimentConfig) -> list[tuple]:
    grid = grid_constants(config.grid_m_max)
    jobs = []
    layout = "random" if config.mode == "size_sweep" else "half"

    def add(variant, n, p_b, c0, c1, m0, m1, rep):
        index = len(jobs)
        jobs.append(
            (
                index,
                variant.value,
                n,
                float(p_b),
                str(c0),
                str(c1),
                m0,
                m1,
                config.seed * _SEED_STRIDE + index,
                layout,
                config.deterministic,
            )
        )

    if config.mode == "grid":
        cells = config.m_cells or tuple(
            (m0, m1)
            for m0 in range(1, config.grid_m_max + 1)
            for m1 in range(1, config.grid_m_max + 1)
        )
        for m0, m1 in cells:
            for rep in range(config.reps):
                for variant in config.variants:
                    add(variant, config.n, config.p_b, grid[m0 - 1], grid[m1 - 1], str(m0), str(m1), rep)
    elif config.mode == "size_sweep":
        if config.c0 is None or config.c1 is None:
            raise ValueError("size_sweep mode needs explicit c0 and c1")
        m0, m1 = _grid_index(Fraction(config.c0), grid), _grid_index(Fraction(config.c1), grid)
        for n in config.sizes:
            p_b = Fraction(config.expected_degree, n)
            for rep in range(config.reps):
                for variant in config.variants:
                    add(variant, n, p_b, config.c0, config.c1, m0, m1, rep)
    else:
        if config.c0 is None or config.c1 is None:
            raise ValueError("single mode needs explicit c0 and c1")
        m0, m1 = _grid_index(Fraction(config.c0), grid), _grid_index(Fraction(config.c1), grid)
        for rep in range(config.reps):
            for variant in config.variants:
                add(variant, config.n, config.p_b, config.c0, config.c1, m0, m1, rep)
    return jobs


def _run_job(job: tuple) -> dict:
    index, variant, n, p_b, c0, c1, m0, m1, job_seed, layout, deterministic = job
    generator = gen_random_bipartite_random_types if layout == "random" else gen_random_bipartite
    graph = generator(n, p_b, job_seed)
    constants = PayoffConstants(Fraction(c0), Fraction(c1))
    start = time.perf_counter()
    result = run_greedy(
        graph, constants, variant, rng_seed=job_seed + 1, deterministic=deterministic
    )
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return {
        "index": index,
        "variant": variant,
        "n": n,
        "p_B": repr(p_b),
        "c0": c0,
        "c1": c1,
        "m0": m0,
        "m1": m1,
        "seed": job_seed,
        "effort": repr(float(control_effort(result, n))),
        "selections": len(result.controlled),
        "runtime_ms": f"{elapsed_ms:.3f}",
    }


def run_experiment(config: ExperimentConfig) -> str:
    """Run every job and write the CSV; returns the output path."""
    jobs = _job_list(config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_job, jobs, chunksize=16))
    else:
        rows = [_run_job(job) for job in jobs]
    rows.sort(key=lambda r: r["index"])
    with open(config.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return config.out
