"""Runtime scaling of the conjugacy search against the length of ``x``."""

from __future__ import annotations

import csv
import math
import random
import statistics
import time
from typing import Iterable

from .conjugacy import CspInstance, csp_solve
from .instances import random_conjugate_pair
from .presentation import GroupSpec
from .words import from_semidirect

CSV_HEADER = ("length", "trial", "seconds", "conjugator_len")


def run_bench(spec: GroupSpec, lengths: Iterable[int], trials: int, seed: int = 0,
              max_len: int = 3, workers: int = 1) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for length in lengths:
        for trial in range(trials):
            g, g1, _ = random_conjugate_pair(spec, length, rng)
            start = time.perf_counter()
            h = csp_solve(CspInstance(spec, g, g1), max_len=max_len, workers=workers)
            seconds = time.perf_counter() - start
            clen = from_semidirect(h.as_element, spec).length() if h else -1
            rows.append({"length": length, "trial": trial, "seconds": seconds,
                         "conjugator_len": clen})
    return rows


def write_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        w.writeheader()
        for row in rows:
            w.writerow({**row, "seconds": f"{row['seconds']:.6f}"})


def loglog_slope(rows: list[dict]) -> float:
    """Least-squares slope of log(median seconds) against log(length)."""
    by_len: dict[int, list[float]] = {}
    for row in rows:
        by_len.setdefault(int(row["length"]), []).append(float(row["seconds"]))
    xs = [math.log(k) for k in sorted(by_len)]
    ys = [math.log(statistics.median(by_len[k])) for k in sorted(by_len)]
    if len(xs) < 2:
        return 0.0
    return statistics.linear_regression(xs, ys).slope
