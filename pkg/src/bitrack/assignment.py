"""Assignment cores: the greedy partial matcher used by the tracker and an
exact minimum-cost solver used by the metrics."""

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .distance import DistanceMatrix


@dataclass(frozen=True)
class Assignment:
    """Partial injective row->col mapping with its total cost."""

    pairs: tuple[tuple[int, int], ...]
    total_cost: float

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _as_array(costs) -> np.ndarray:
    if isinstance(costs, DistanceMatrix):
        return costs.values
    return np.asarray(costs, dtype=np.float64)


def greedy_assign(costs, row_order: Iterable[int]) -> Assignment:
    """Process rows in the given order; each takes its cheapest free column.

    Ties break toward the lowest column index. Rows whose free columns are
    all infeasible (+inf) stay unassigned. Stops early once every column is
    taken.
    """
    values = _as_array(costs)
    n_cols = values.shape[1]
    col_free = np.ones(n_cols, dtype=bool)
    pairs = []
    total = 0.0
    for r in row_order:
        if not col_free.any():
            break
        row = np.where(col_free, values[r], np.inf)
        j = int(np.argmin(row))
        if not np.isfinite(row[j]):
            continue
        pairs.append((int(r), j))
        col_free[j] = False
        total += float(values[r, j])
    return Assignment(tuple(pairs), total)


def hungarian(costs) -> Assignment:
    """Minimum-total-cost assignment covering min(rows, cols) feasible pairs.

    Handles rectangular matrices and +inf entries: infeasible pairs are
    internally replaced by a cost dominating any feasible assignment, so
    the solver first maximizes the number of feasible pairs and then
    minimizes their total cost; dominated pairs are stripped from the result.
    """
    values = _as_array(costs)
    if values.size == 0:
        return Assignment((), 0.0)
    finite = np.isfinite(values)
    if not finite.any():
        return Assignment((), 0.0)

    lo = values[finite].min()
    span = values[finite].max() - lo
    big = span * min(values.shape) + 1.0
    work = np.where(finite, values - lo, big)
    rows, cols = linear_sum_assignment(work)

    pairs = [(int(i), int(j)) for i, j in zip(rows, cols) if finite[i, j]]
    total = float(sum(values[i, j] for i, j in pairs))
    return Assignment(tuple(pairs), total)
