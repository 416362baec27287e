"""Finding certified universal exploration sequences by search.

The search keeps one walk state per instance (a labeled cubic graph plus a
start dart) and extends every still-uncovered walk as steps are appended,
so coverage is never recomputed from scratch.  Instances come from
:func:`labeled_cubic_matchings`, deduplicated by rooted canonical form; the
final certificate is issued by :func:`uesroute.verify.certify`, which walks
a different enumeration, so the search never certifies itself.
"""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass

from .cubic import canonical_rooted_form, graph_to_mate, labeled_cubic_matchings, mate_is_connected
from .exploration import Certificate, ExplorationSequence
from .verify import ENUM_LIMIT, certify, sample_instances

log = logging.getLogger(__name__)

__all__ = ["SearchBudget", "SearchFailure", "find_ues", "SequenceFamily", "provider_family"]

STRATEGIES = ("random_extend", "incremental_fix")


@dataclass(frozen=True)
class SearchBudget:
    max_length: int = 1 << 18
    attempts: int = 8


@dataclass(frozen=True)
class SearchFailure:
    bound: int
    reason: str
    length_reached: int
    uncovered: int

    def __bool__(self) -> bool:
        return False


class _Instances:
    """Walk states for a batch of (mate array, start dart) instances."""

    def __init__(self, items: list[tuple[list[int], int]]):
        self.mates = [m for m, _ in items]
        self.size = [len(m) // 3 for m in self.mates]
        self.cur = [s for _, s in items]
        self.seen = [1 << (m[s] // 3) for m, s in items]
        self.full = [(1 << n) - 1 for n in self.size]
        self.open = [i for i in range(len(items)) if self.seen[i] != self.full[i]]

    def advance(self, steps: list[int]) -> None:
        still = []
        for i in self.open:
            mate, d, seen, full = self.mates[i], self.cur[i], self.seen[i], self.full[i]
            for t in steps:
                h = mate[d]
                v3 = h - h % 3
                d = v3 + (h - v3 + t) % 3
                seen |= 1 << (mate[d] // 3)
                if seen == full:
                    break
            self.cur[i], self.seen[i] = d, seen
            if seen != full:
                still.append(i)
        self.open = still

    def shortest_extension(self, i: int, order: list[int]) -> list[int]:
        """Fewest steps taking walk ``i`` to a vertex it has not visited."""
        mate, seen = self.mates[i], self.seen[i]
        start = self.cur[i]
        parent = {start: None}
        queue = deque([start])
        while queue:
            d = queue.popleft()
            h = mate[d]
            v3 = h - h % 3
            for t in order:
                nd = v3 + (h - v3 + t) % 3
                if nd in parent:
                    continue
                parent[nd] = (d, t)
                if not seen >> (mate[nd] // 3) & 1:
                    path = []
                    while parent[nd] is not None:
                        nd, t = parent[nd]
                        path.append(t)
                    return path[::-1]
                queue.append(nd)
        raise RuntimeError("component already covered")


def exhaustive_items(bound: int) -> list[tuple[list[int], int]]:
    """Every connected labeled cubic multigraph up to ``bound`` vertices with every start, up to rooted isomorphism."""
    forms = {}
    for n in range(2, bound + 1, 2):
        for mate in labeled_cubic_matchings(n):
            if not mate_is_connected(mate):
                continue
            for start in range(3 * n):
                forms.setdefault(canonical_rooted_form(mate, start), None)
    return [(list(form[1:]), form[0]) for form in forms]


def sampled_items(bound: int, samples: int, seed: int) -> list[tuple[list[int], int]]:
    items = []
    for g, d in sample_instances(bound, samples, seed):
        mate, order = graph_to_mate(g)
        items.append((mate, 3 * order.index(d.vertex) + d.port))
    return items


def _search(inst: _Instances, strategy: str, rng: random.Random, max_length: int, prefix: list[int]) -> list[int] | None:
    steps = list(prefix)
    inst.advance(steps)
    if strategy == "random_extend":
        chunk = max(1, len(steps))
        while inst.open:
            if len(steps) >= max_length:
                return None
            chunk = min(chunk, max_length - len(steps))
            new = [rng.randrange(3) for _ in range(chunk)]
            steps += new
            inst.advance(new)
            chunk = len(steps)
        return steps
    order = [0, 1, 2]
    while inst.open:
        rng.shuffle(order)
        new = inst.shortest_extension(inst.open[0], order)
        if len(steps) + len(new) > max_length:
            return None
        steps += new
        inst.advance(new)
    return steps


def _trim(items, steps: list[int]) -> list[int]:
    """Shortest prefix of ``steps`` that still covers every instance."""
    inst = _Instances(items)
    need = 0
    for i in list(inst.open):
        mate, d, seen, full = inst.mates[i], inst.cur[i], inst.seen[i], inst.full[i]
        for k, t in enumerate(steps, 1):
            h = mate[d]
            v3 = h - h % 3
            d = v3 + (h - v3 + t) % 3
            seen |= 1 << (mate[d] // 3)
            if seen == full:
                need = max(need, k)
                break
        else:
            return steps
    return steps[:need]


def find_ues(
    bound: int,
    strategy: str = "random_extend",
    budget: SearchBudget = SearchBudget(),
    seed: int = 0,
    *,
    mode: str | None = None,
    samples: int = 200,
    min_length: int = 0,
) -> ExplorationSequence | SearchFailure:
    """Search for a sequence certified universal for cubic graphs up to ``bound`` vertices.

    ``mode`` defaults to exhaustive for ``bound <= 4`` and sampled above
    that; exhaustive mode accepts bounds up to ``ENUM_LIMIT``.  The sampled search trains on
    one seeded sample and is certified on another.  ``min_length`` pads the
    result with seeded random steps (padding cannot break coverage).
    """
    if bound <= 0 or bound % 2:
        raise ValueError(f"bound must be a positive even number, got {bound}")
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if mode is None:
        mode = "exhaustive" if bound <= 4 else "sampled"
    rng = random.Random(seed)
    if mode == "exhaustive":
        if bound > ENUM_LIMIT:
            raise ValueError(f"exhaustive search is only available up to bound {ENUM_LIMIT}")
        items = exhaustive_items(bound)
    else:
        items = sampled_items(bound, samples, rng.randrange(2**32))

    steps: list[int] = []
    uncovered = len(items)
    for attempt in range(budget.attempts):
        inst = _Instances(items)
        found = _search(inst, strategy, rng, budget.max_length, steps)
        if found is None:
            uncovered = len(inst.open)
            log.info("bound %d attempt %d: budget exhausted with %d open walks", bound, attempt, uncovered)
            return SearchFailure(bound, "max_length exceeded", budget.max_length, uncovered)
        found = _trim(items, found)
        if mode == "sampled":
            # Margin against overfitting the training sample.
            found += [rng.randrange(3) for _ in range(len(found))]
        if len(found) < min_length:
            found += [rng.randrange(3) for _ in range(min_length - len(found))]
        cand = ExplorationSequence(tuple(found), bound)
        if mode == "exhaustive":
            cert, verdict = certify(cand, bound, "exhaustive")
        else:
            cert, verdict = certify(cand, bound, "sampled", samples=samples, seed=rng.randrange(2**32))
        if verdict:
            log.info("bound %d: certified length %d (%s)", bound, len(cert), cert.certificate.to_line())
            return cert
        # Held-out sample found a gap: learn it and keep extending.
        ce = verdict.counterexample
        mate, order = graph_to_mate(ce.graph)
        items = items + [(mate, 3 * order.index(ce.start.vertex) + ce.start.port)]
        steps = found
    return SearchFailure(bound, "attempts exhausted", len(steps), uncovered)


class SequenceFamily:
    """Lazily certified sequences ``T_{2^k}`` for ``k = 0, 1, 2, ...``.

    Ratings up to ``exhaustive_bound`` are certified exhaustively, larger ones
    by sampling.  Lengths are kept nondecreasing in ``k``.
    """

    def __init__(
        self,
        seed: int = 0,
        *,
        strategy: str = "random_extend",
        exhaustive_bound: int = 4,
        samples: int = 200,
        budget: SearchBudget = SearchBudget(),
    ):
        self.seed = seed
        self.strategy = strategy
        self.exhaustive_bound = exhaustive_bound
        self.samples = samples
        self.budget = budget
        self._cache: dict[int, ExplorationSequence] = {}

    def get(self, k: int) -> ExplorationSequence:
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k in self._cache:
            return self._cache[k]
        if k == 0:
            # No cubic graph has one vertex; the empty sequence is vacuously universal.
            seq = ExplorationSequence((), 1, Certificate("exhaustive", 1))
        else:
            prev = self.get(k - 1)
            bound = 2**k
            mode = "exhaustive" if bound <= self.exhaustive_bound else "sampled"
            found = find_ues(
                bound,
                self.strategy,
                self.budget,
                seed=self.seed * 7919 + k,
                mode=mode,
                samples=self.samples,
                min_length=len(prev),
            )
            if not found:
                raise RuntimeError(f"sequence search failed at k={k}: {found}")
            seq = found
        self._cache[k] = seq
        return seq

    __getitem__ = get

    def rated_at_least(self, size: int) -> tuple[int, ExplorationSequence]:
        """Smallest ``k`` with ``2^k >= size`` and its sequence."""
        k = max(0, (max(size, 1) - 1).bit_length())
        return k, self.get(k)

    def __iter__(self):
        k = 0
        while True:
            yield self.get(k)
            k += 1


def provider_family(seed: int = 0, **kw) -> SequenceFamily:
    return SequenceFamily(seed, **kw)
