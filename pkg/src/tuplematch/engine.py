"""Vectorized all-pairs rule evaluation.

For one argument (or aggregated argument), the distinct member sets are the
rows of a 0/1 membership matrix ``M`` over the individuals they mention. A
coverage matrix ``cov`` marks, for each set ``B`` and individual ``e``,
whether ``{e}`` is below ``B`` under the argument's preorder. Then

    miss = M @ (1 - cov).T

counts the elements of ``A`` not covered by ``B``: ``A <= B`` iff it is zero,
and it is also the size of the semantic set difference. Coverage is
reflexive for all three preorders, so the two difference sets of a pair are
disjoint and their union size is ``miss[a, b] + miss[b, a]``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .config import MatchingConfig
from .kb import KnowledgeBase
from .preorder import UNKNOWN, ArgumentValue, LinkClosure, OntoSubsumption, PreorderSpec, Subset
from .rules import MatchLink, RelatednessLevel
from .tuples import TupleRecord, aggregate_all

ROW_BLOCK = 256


def _coverage(sets: list[frozenset[str]], universe: list[str], M: np.ndarray, spec: PreorderSpec,
              kb: KnowledgeBase) -> np.ndarray:
    if isinstance(spec, Subset):
        return M.astype(bool)
    pos = {e: i for i, e in enumerate(universe)}
    u = len(universe)
    if isinstance(spec, LinkClosure):
        R = np.zeros((u, u))
        for i, e in enumerate(universe):
            for f in kb.p_reachable_set(e, spec.predicate):
                j = pos.get(f)
                if j is not None:
                    R[i, j] = 1.0
        return (M @ R.T) > 0
    if isinstance(spec, OntoSubsumption):
        view = spec.view
        msci = [kb.msci(view, e) for e in universe]
        classes = sorted(set().union(*msci)) if msci else []
        cpos = {c: k for k, c in enumerate(classes)}
        MS = np.zeros((u, len(classes)))
        Q = np.zeros((u, len(classes)))
        for i, cs in enumerate(msci):
            for c in cs:
                MS[i, cpos[c]] = 1.0
        for i, cs in enumerate(msci):
            for c1 in classes:
                if any(kb.subsumed_by(c1, c2) for c2 in cs):
                    Q[i, cpos[c1]] = 1.0
        up = (M @ Q) > 0
        bad = ((~up).astype(float) @ MS.T) > 0
        nonempty = MS.any(axis=1)
        return M.astype(bool) | (nonempty[None, :] & ~bad)
    raise TypeError(f"unsupported preorder {spec!r}")


class _Column:
    """Pairwise relations among the distinct values one argument takes."""

    def __init__(self, values: Sequence[ArgumentValue], spec: PreorderSpec, kb: KnowledgeBase):
        distinct: dict = {}
        vid = np.empty(len(values), dtype=np.int64)
        for t, v in enumerate(values):
            vid[t] = distinct.setdefault(v, len(distinct))
        self.vid = vid
        keys = list(distinct)
        self.unknown = np.array([v is UNKNOWN for v in keys], dtype=bool)
        sets = [frozenset() if v is UNKNOWN else v for v in keys]
        universe = sorted(set().union(*sets)) if sets else []
        pos = {e: i for i, e in enumerate(universe)}
        M = np.zeros((len(keys), len(universe)))
        for r, s in enumerate(sets):
            for e in s:
                M[r, pos[e]] = 1.0
        cov = _coverage(sets, universe, M, spec, kb)
        miss = np.rint(M @ (~cov).T.astype(float)).astype(np.int32)
        unk = self.unknown
        leq = miss == 0
        leq[:, unk] = True
        leq[np.ix_(unk, ~unk)] = False
        self.leq = leq
        self.miss = miss
        self.size = M.sum(axis=1).astype(np.int32)
        self.inter = np.rint(M @ M.T).astype(np.int32)


def _evaluate_rows(rows: np.ndarray, cols: np.ndarray, args: list[_Column], blocks: list[_Column],
                   config: MatchingConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    shape = (len(rows), len(cols))
    eq = np.ones(shape, dtype=bool)
    fwd = np.ones(shape, dtype=bool)
    bwd = np.ones(shape, dtype=bool)
    r4 = np.ones(shape, dtype=bool)
    for col in args:
        vr, vc = col.vid[rows], col.vid[cols]
        L = col.leq[np.ix_(vr, vc)]
        LT = col.leq[np.ix_(vc, vr)].T
        E = vr[:, None] == vc[None, :]
        spec_r = ~col.unknown[vr]
        spec_c = ~col.unknown[vc]
        eq &= E
        fwd &= L
        bwd &= LT
        r4 &= E | (spec_c[None, :] & L) | (spec_r[:, None] & LT)

    specified = np.zeros(shape, dtype=np.int32)
    all_sim = np.ones(shape, dtype=bool)
    n_comparable = np.zeros(shape, dtype=np.int32)
    p, q = config.gamma_sim.numerator, config.gamma_sim.denominator
    for col in blocks:
        vr, vc = col.vid[rows], col.vid[cols]
        both = ~col.unknown[vr][:, None] & ~col.unknown[vc][None, :]
        L = col.leq[np.ix_(vr, vc)]
        LT = col.leq[np.ix_(vc, vr)].T
        comparable = L | LT
        diff = col.miss[np.ix_(vr, vc)].astype(np.int64) + col.miss[np.ix_(vc, vr)].T
        union = col.size[vr][:, None] + col.size[vc][None, :] - col.inter[np.ix_(vr, vc)]
        sim_ok = comparable | ((union - diff) * q >= p * union.astype(np.int64))
        specified += both
        all_sim &= ~both | sim_ok
        n_comparable += both & comparable
    r5 = (specified >= config.gamma_unknown) & (all_sim | (n_comparable >= config.gamma_comp))

    level = np.zeros(shape, dtype=np.int8)
    for value, mask in (
        (5, r5),
        (4, r4),
        (-3, bwd),
        (3, fwd),
        (2, fwd & bwd),
        (1, eq),
    ):
        level[mask] = value
    upper = cols[None, :] > rows[:, None]
    a, b = np.nonzero((level != 0) & upper)
    return rows[a], cols[b], level[a, b]


def match_matrix(tuples: Sequence[TupleRecord], config: MatchingConfig, kb: KnowledgeBase,
                 workers: int) -> list[MatchLink]:
    n = len(tuples)
    if n < 2:
        return []
    arg_specs = config.arg_specs(kb)
    block_specs = config.block_specs(kb)
    args = [_Column([t.args[i] for t in tuples], spec, kb) for i, spec in enumerate(arg_specs)]
    aggregated = [aggregate_all(t, config, kb) for t in tuples]
    blocks = [_Column([ag[k] for ag in aggregated], spec, kb) for k, spec in enumerate(block_specs)]

    cols = np.arange(n)
    starts = range(0, n - 1, ROW_BLOCK)

    def run(start: int):
        rows = np.arange(start, min(start + ROW_BLOCK, n))
        return _evaluate_rows(rows, cols, args, blocks, config)

    with ThreadPoolExecutor(max(1, workers)) as pool:
        parts = list(pool.map(run, starts))

    ids = [t.id for t in tuples]
    links: list[MatchLink] = []
    for ra, rb, lv in parts:
        for a, b, v in zip(ra.tolist(), rb.tolist(), lv.tolist()):
            if v == 3:
                links.append(MatchLink(ids[a], ids[b], RelatednessLevel.MORE_SPECIFIC))
            elif v == -3:
                links.append(MatchLink(ids[b], ids[a], RelatednessLevel.MORE_SPECIFIC))
            else:
                level = RelatednessLevel(v)
                links.append(MatchLink(ids[a], ids[b], level))
                links.append(MatchLink(ids[b], ids[a], level))
    return links
