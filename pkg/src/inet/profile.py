"""Per-loop evaluation statistics and the available-parallelism profile.

The interaction count of a loop is the number of active pairs that existed
simultaneously at the start of that loop, i.e. the available parallelism.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable

CSV_HEADER = ["loop", "interactions", "communications", "live_equations", "elapsed_us"]


@dataclass(slots=True)
class LoopStats:
    loop_index: int
    interactions: int
    communications: int
    live_equations: int
    elapsed_us: int


@dataclass(slots=True)
class RunProfile:
    loops: list[LoopStats]

    @property
    def loop_count(self) -> int:
        return len(self.loops)

    @property
    def total_interactions(self) -> int:
        return sum(s.interactions for s in self.loops)

    @property
    def total_communications(self) -> int:
        return sum(s.communications for s in self.loops)

    @property
    def peak_parallelism(self) -> int:
        return max((s.interactions for s in self.loops), default=0)

    @property
    def mean_parallelism(self) -> float:
        if not self.loops:
            return 0.0
        return self.total_interactions / len(self.loops)

    def interactions_per_loop(self) -> list[int]:
        return [s.interactions for s in self.loops]


def record(stats: Iterable[LoopStats]) -> RunProfile:
    """Bundle the loop statistics of one evaluation run."""
    return RunProfile(list(stats))


def emit_csv(profile: RunProfile, sink: IO[str]) -> None:
    """Write the profile as CSV; one row per loop after a fixed header."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in profile.loops:
        writer.writerow(
            [s.loop_index, s.interactions, s.communications, s.live_equations, s.elapsed_us]
        )


def read_csv(source: IO[str]) -> RunProfile:
    """Re-ingest a CSV written by emit_csv; numerically loss-free."""
    reader = csv.reader(source)
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    loops = [LoopStats(*(int(cell) for cell in row)) for row in reader if row]
    return RunProfile(loops)


def summary_line(program: str, profile: RunProfile, wall_ms: float) -> str:
    """One-line summary for bench tables."""
    return (
        f"{program},{profile.loop_count},{profile.total_interactions},"
        f"{profile.peak_parallelism},{profile.mean_parallelism:.2f},{wall_ms:.1f}"
    )


def local_maxima(values: list[int]) -> int:
    """Count strict interior local maxima of a sequence."""
    return sum(
        1
        for i in range(1, len(values) - 1)
        if values[i - 1] < values[i] and values[i] > values[i + 1]
    )
