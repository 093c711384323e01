"""Independent reference implementations used to cross-check the real ones.

Everything here is deliberately written on different primitives than the
production code (statistics/Fraction/groupby instead of running sums and
state machines) and stays brute-force simple.
"""

from __future__ import annotations

import math
import statistics
from itertools import groupby


def rms_oracle(channels) -> float:
    return math.sqrt(statistics.fmean([x * x for x in channels]))


def classify_oracle(values, k_sigma: float = 3.0):
    """Per-index label assignment followed by a groupby run scan.

    Returns a list of (start_offset, end_offset, kind, confidence) tuples.
    """
    mu = statistics.fmean(values)
    sigma = statistics.pstdev(values)
    if sigma == 0.0:
        return []
    threshold = k_sigma * sigma

    def label(value: float) -> str:
        if value - mu > threshold:
            return "bump"
        if value - mu < -threshold:
            return "depression"
        return ""

    events = []
    position = 0
    for kind, group in groupby(values, key=label):
        run = list(group)
        if kind:
            extremum = max(abs(v - mu) for v in run)
            confidence = min(1.0, extremum / (2.0 * threshold))
            events.append((position, position + len(run) - 1, kind, confidence))
        position += len(run)
    return events


def lowest_free_port_oracle(range_start: int, range_end: int, taken) -> int | None:
    taken = set(taken)
    for port in range(range_start, range_end + 1):
        if port not in taken:
            return port
    return None


def placement_oracle(nodes, node_type: str, cpu: int, memory: int) -> str | None:
    """Exhaustive feasibility scan + argmax free cpu, name tie-break.

    ``nodes`` is a list of (name, node_type, cpu_free, memory_free) tuples.
    """
    feasible = [
        (name, cpu_free)
        for name, ntype, cpu_free, mem_free in nodes
        if ntype == node_type and cpu_free >= cpu and mem_free >= memory
    ]
    if not feasible:
        return None
    best_cpu = max(cpu_free for _, cpu_free in feasible)
    return min(name for name, cpu_free in feasible if cpu_free == best_cpu)
