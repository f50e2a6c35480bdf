"""Multi-start projected ascent for scale-invariant ratio objectives.

Used for dual lower bounds (pairing / primal norm) and domination constants (target / source norm).
Every start is evaluated in a fixed order and the best few are refined by coordinate steps with step
halving. A refined start and every accepted step are projected back onto the unit sphere of
`normalize` (the sup norm unless a norm is given), so the step size keeps a fixed scale. The result
depends only on the start list and the budget.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

from mpmath import mpf

from src.seqcore.vectors import CoeffVec
from src.utils.config_loader import setting
from src.utils.errors import BudgetError
from src.utils.precision import to_mpf

logger = logging.getLogger(__name__)

MIN_STEP = mpf('1e-12')
REFINED_STARTS = 3


def sup_scale(x: CoeffVec):
    return max((abs(a) for a in x), default=mpf(0))


@dataclass(frozen=True)
class SearchResult:
    value: mpf
    witness: CoeffVec
    label: str
    evaluations: int


class RatioSearch:
    """Maximizes objective(x) over nonzero x; objective returns None where undefined and must satisfy
    objective(c x) = objective(x) for c > 0."""

    def __init__(self, objective: Callable[[CoeffVec], Optional[mpf]], budget=None, step=None,
                 normalize: Optional[Callable[[CoeffVec], mpf]] = None):
        self.objective = objective
        self.normalize = normalize or sup_scale
        self.budget = setting('search.budget', 2000) if budget is None else int(budget)
        self.step = to_mpf(str(setting('search.step', 0.25)) if step is None else step)
        if self.budget <= 0:
            raise BudgetError(f"search budget must be positive, got {self.budget}")
        self.evaluations = 0

    def _evaluate(self, x):
        self.evaluations += 1
        return self.objective(x)

    def _remaining(self):
        return self.budget - self.evaluations

    def project(self, entries):
        """Rescales onto the unit sphere of `normalize`; a vector of norm 0 is returned unchanged."""
        x = CoeffVec(tuple(entries))
        scale = self.normalize(x)
        if not scale:
            return list(entries)
        return [a / scale for a in entries]

    def _ascend(self, x: CoeffVec, value, allowance):
        """Coordinate steps of size h on the unit sphere, halving h when no step improves."""
        stop = self.evaluations + allowance
        h = self.step
        entries = self.project(x.entries)
        while h > MIN_STEP and self.evaluations < stop:
            improved = False
            for i in range(len(entries)):
                for direction in (1, -1):
                    if self.evaluations >= stop:
                        break
                    trial = list(entries)
                    trial[i] += direction * h
                    candidate = self._evaluate(CoeffVec(tuple(trial)))
                    if candidate is not None and candidate > value:
                        entries, value, improved = self.project(trial), candidate, True
            if not improved:
                h /= 2
        return CoeffVec(tuple(entries)), value

    def run(self, starts: List[tuple], ascend=True) -> SearchResult:
        """`starts` is a list of (label, CoeffVec); earlier starts win ties."""
        scored = []
        for label, x in starts:
            if self._remaining() <= 0:
                logger.warning(f"search budget {self.budget} exhausted after {len(scored)} starts")
                break
            if x.is_zero():
                continue
            value = self._evaluate(x)
            if value is not None:
                scored.append((value, len(scored), label, x))
        if not scored:
            raise BudgetError("no start produced a finite objective value")
        best_value, _, best_label, best_x = max(scored, key=lambda s: (s[0], -s[1]))

        if ascend:
            ranked = sorted(scored, key=lambda s: (-s[0], s[1]))[:REFINED_STARTS]
            for rank, (value, _, label, x) in enumerate(ranked):
                allowance = self._remaining() // (len(ranked) - rank)
                if allowance <= 0:
                    break
                refined, refined_value = self._ascend(x, value, allowance)
                if refined_value > best_value:
                    best_value, best_label, best_x = refined_value, f"{label}+ascent", refined
        logger.debug(f"ratio search: best {best_value} from {best_label} after {self.evaluations} evaluations")
        return SearchResult(best_value, best_x, best_label, self.evaluations)
