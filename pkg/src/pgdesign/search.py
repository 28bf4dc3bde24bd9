"""Exhaustive search of k-subsets of a small group for two-valued profiles.

Candidates are enumerated in lexicographic order of their sorted index
tuples and processed in contiguous chunks; chunk results are concatenated
in order, so the output never depends on scheduling.  With ``fix_zero``
only sets containing the identity are tried, which loses nothing up to
translation because profiles are translation invariant.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from pgdesign.groups import GroupSpec, Subset
from pgdesign.verify import family_profile

DEFAULT_BUDGET = 10**7
CHUNK = 4096


class SearchBudgetError(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"search space has {count} candidates, budget is {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class SearchHit:
    block: Subset
    in_value: int
    off_value: int | None

    def as_dict(self) -> dict:
        return {"block": self.block.format(), "in_value": self.in_value, "off_value": self.off_value}


@dataclass
class SearchJob:
    group: GroupSpec
    k: int
    fix_zero: bool = True
    semantics: str = "window"
    dedupe: bool = False
    budget: int = DEFAULT_BUDGET
    found: list[SearchHit] = field(default_factory=list)
    candidates_tried: int = 0

    @property
    def mode(self) -> str:
        return "translates-fixed" if self.fix_zero else "all"

    @property
    def space(self) -> int:
        v, k = self.group.order, self.k
        if k < 1 or k > v:
            return 0
        return comb(v - 1, k - 1) if self.fix_zero else comb(v, k)

    def as_dict(self) -> dict:
        return {
            "group": self.group.describe(),
            "k": self.k,
            "mode": self.mode,
            "semantics": self.semantics,
            "dedupe": self.dedupe,
            "space": self.space,
            "candidates_tried": self.candidates_tried,
            "found": [h.as_dict() for h in self.found],
        }


def candidate_blocks(v: int, k: int, fix_zero: bool):
    if fix_zero:
        return ((0,) + rest for rest in itertools.combinations(range(1, v), k - 1))
    return itertools.combinations(range(v), k)


def _chunks(it, size: int):
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64)


def chunk_profiles(group: GroupSpec, cands: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Window sums T(x) for each candidate row, and the membership masks (both C x v)."""
    c, k = cands.shape
    v = group.order
    sub = group.sub_table
    rows = np.arange(c)[:, None]
    diffs = sub[cands[:, :, None], cands[:, None, :]].reshape(c, k * k)
    delta = np.bincount((diffs + rows * v).ravel(), minlength=c * v).reshape(c, v)
    # T(x) = sum_{y in S} delta(x - y)
    xy = sub[np.arange(v)[None, :, None], cands[:, None, :]]  # c x v x k
    sums = delta[rows[:, :, None], xy].sum(axis=2)
    mask = np.zeros((c, v), dtype=bool)
    mask[rows, cands] = True
    return sums, mask


def _scan(group: GroupSpec, cands: np.ndarray) -> list[tuple[tuple[int, ...], int, int | None]]:
    sums, mask = chunk_profiles(group, cands)
    big = np.iinfo(np.int64).max
    in_min = np.where(mask, sums, big).min(axis=1)
    in_max = np.where(mask, sums, -1).max(axis=1)
    off_min = np.where(~mask, sums, big).min(axis=1)
    off_max = np.where(~mask, sums, -1).max(axis=1)
    has_off = (~mask).any(axis=1)
    ok = (in_min == in_max) & (~has_off | (off_min == off_max))
    return [
        (tuple(cands[i].tolist()), int(in_min[i]), int(off_min[i]) if has_off[i] else None)
        for i in np.nonzero(ok)[0]
    ]


def translation_canonical(group: GroupSpec, indices) -> tuple[int, ...]:
    """Least sorted tuple among the translates S - s, s in S."""
    arr = np.asarray(indices, dtype=np.int64)
    shifted = np.sort(group.sub(arr[None, :], arr[:, None]), axis=1)
    return min(tuple(row) for row in shifted.tolist())


def run_search(job: SearchJob, workers: int = 1) -> SearchJob:
    """Fill ``job.found``; raises SearchBudgetError before doing any work if over budget."""
    space = job.space
    if space > job.budget:
        raise SearchBudgetError(space, job.budget)
    v = job.group.order
    chunks = _chunks(candidate_blocks(v, job.k, job.fix_zero), CHUNK) if space else iter(())
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _scan(job.group, c), chunks))
    else:
        parts = [_scan(job.group, c) for c in chunks]
    seen: set[tuple[int, ...]] = set()
    found = []
    for idx, iv, ov in itertools.chain.from_iterable(parts):
        if job.dedupe:
            key = translation_canonical(job.group, idx)
            if key in seen:
                continue
            seen.add(key)
        block = Subset(job.group, idx)
        # every hit is re-derived by the general profiler before it is emitted
        prof = family_profile([block], job.semantics)
        if not prof.two_valued or (prof.in_value, prof.off_value) != (iv, ov):
            raise AssertionError(f"vectorized scan disagrees with family_profile on {block.format()}")
        found.append(SearchHit(block, iv, ov))
    job.found = found
    job.candidates_tried = space
    return job
