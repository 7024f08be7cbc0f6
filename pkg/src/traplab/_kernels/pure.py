"""Pure-numpy simulation kernels (fallback backend).

Implements exactly the same randomness-consumption protocol as the Cython
backend in ``_core.pyx`` so that both produce bit-identical output for the
same ``(master_seed, replica_index)``:

* stream for replica ``i`` of a batch: ``PCG64(SeedSequence((master_seed,
  index_offset + i)))``;
* walk kernels first draw one uniform for the start state (even when the
  start pool has a single element), then consume blocks of
  ``B_r = min(64 << r, 8192)`` draws per round ``r``: an exponential block
  (holding times) followed by a uniform block (moves);
* hit/chain kernels without holding times consume uniform blocks only;
* K-process kernels draw one exponential for the initial sojourn when the
  start is finite, then per round a gap block (exponential), a site block
  (uniform), and a duration block (exponential);
* bounded integers are ``min(trunc(u * n), n - 1)``;
* clocks accumulate left to right in float64 (``np.cumsum`` seeded with the
  running clock, matching scalar ``t += h``).

States are 1-based ranks except hypercube chains, which report vertices.
"""

from __future__ import annotations

import numpy as np

from ..rng import bit_generator_for

_BLOCK_CAP = 8192


def _block_size(round_index: int) -> int:
    return min(64 << round_index, _BLOCK_CAP)


def _generator(master_seed, index):
    return np.random.Generator(bit_generator_for(int(master_seed), int(index)))


def _pick(u: float, n: int) -> int:
    i = int(u * n)
    return n - 1 if i >= n else i


def _chain_cumsum(base: float, increments: np.ndarray) -> np.ndarray:
    """Running clock ``base + h0 + h1 + ...`` with scalar-loop rounding."""
    buf = np.empty(increments.shape[0] + 1)
    buf[0] = base
    buf[1:] = increments
    return np.cumsum(buf)[1:]


# ---------------------------------------------------------------------------
# embedded-chain hitting kernels

def hypercube_hit_ranks(d, rank_of_vertex, target_mask, start_pool,
                        master_seed, index_offset, n_replicas):
    """First rank of the target set hit by the jump chain, per replica."""
    out = np.empty(n_replicas, dtype=np.int64)
    pool = np.asarray(start_pool, dtype=np.int64)
    npool = pool.shape[0]
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        v = int(pool[_pick(g.random(), npool)])
        r = 0
        while True:
            flips = np.minimum((g.random(_block_size(r)) * d).astype(np.int64), d - 1)
            r += 1
            path = np.bitwise_xor.accumulate(np.int64(1) << flips)
            path ^= np.int64(v)
            hits = target_mask[path]
            k = int(np.argmax(hits))
            if hits[k]:
                out[i] = rank_of_vertex[path[k]]
                break
            v = int(path[-1])
    return out


def complete_hit_ranks(M, target_mask, start_pool, master_seed,
                       index_offset, n_replicas):
    out = np.empty(n_replicas, dtype=np.int64)
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        g.random()  # start draw; the uniform chain law does not depend on it
        r = 0
        while True:
            ranks = np.minimum((g.random(_block_size(r)) * M).astype(np.int64), M - 1) + 1
            r += 1
            hits = target_mask[ranks - 1]
            k = int(np.argmax(hits))
            if hits[k]:
                out[i] = ranks[k]
                break
    return out


# ---------------------------------------------------------------------------
# trap-model walks with holding times

def _hypercube_round(g, B, d, v, means_by_vertex, t):
    holds_raw = g.standard_exponential(B)
    flips = np.minimum((g.random(B) * d).astype(np.int64), d - 1)
    post = np.bitwise_xor.accumulate(np.int64(1) << flips)
    post ^= np.int64(v)
    pre = np.empty(B, dtype=np.int64)
    pre[0] = v
    pre[1:] = post[:-1]
    cum = _chain_cumsum(t, means_by_vertex[pre] * holds_raw)
    return pre, post, cum


def _complete_round(g, B, M, cur, means_by_rank, t):
    holds_raw = g.standard_exponential(B)
    draws = np.minimum((g.random(B) * M).astype(np.int64), M - 1) + 1
    pre = np.empty(B, dtype=np.int64)
    pre[0] = cur
    pre[1:] = draws[:-1]
    cum = _chain_cumsum(t, means_by_rank[pre - 1] * holds_raw)
    return pre, draws, cum


def hypercube_states_at_times(d, rank_of_vertex, means_by_vertex, start_pool,
                              times, master_seed, index_offset, n_replicas):
    """Rank occupied at each query time (times ascending), per replica."""
    Q = times.shape[0]
    out = np.empty((n_replicas, Q), dtype=np.int64)
    pool = np.asarray(start_pool, dtype=np.int64)
    npool = pool.shape[0]
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        v = int(pool[_pick(g.random(), npool)])
        t = 0.0
        q = 0
        r = 0
        while q < Q:
            pre, post, cum = _hypercube_round(g, _block_size(r), d, v, means_by_vertex, t)
            r += 1
            hi = int(np.searchsorted(times, cum[-1], side="left"))
            if hi > q:
                js = np.searchsorted(cum, times[q:hi], side="right")
                out[i, q:hi] = rank_of_vertex[pre[js]]
                q = hi
            t = float(cum[-1])
            v = int(post[-1])
    return out


def complete_states_at_times(M, means_by_rank, start_pool, times,
                             master_seed, index_offset, n_replicas):
    Q = times.shape[0]
    out = np.empty((n_replicas, Q), dtype=np.int64)
    pool = np.asarray(start_pool, dtype=np.int64)
    npool = pool.shape[0]
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        cur = int(pool[_pick(g.random(), npool)])
        t = 0.0
        q = 0
        r = 0
        while q < Q:
            pre, draws, cum = _complete_round(g, _block_size(r), M, cur, means_by_rank, t)
            r += 1
            hi = int(np.searchsorted(times, cum[-1], side="left"))
            if hi > q:
                js = np.searchsorted(cum, times[q:hi], side="right")
                out[i, q:hi] = pre[js]
                q = hi
            t = float(cum[-1])
            cur = int(draws[-1])
    return out


def hypercube_trajectory(d, rank_of_vertex, means_by_vertex, start_pool,
                         horizon, master_seed, replica_index):
    """Jump record ``(times, ranks, start_rank)`` up to the horizon."""
    g = _generator(master_seed, replica_index)
    pool = np.asarray(start_pool, dtype=np.int64)
    v = int(pool[_pick(g.random(), pool.shape[0])])
    start_rank = int(rank_of_vertex[v])
    t = 0.0
    times = []
    ranks = []
    r = 0
    while True:
        pre, post, cum = _hypercube_round(g, _block_size(r), d, v, means_by_vertex, t)
        r += 1
        keep = int(np.searchsorted(cum, horizon, side="right"))
        times.append(cum[:keep])
        ranks.append(rank_of_vertex[post[:keep]])
        if keep < cum.shape[0]:
            break
        t = float(cum[-1])
        v = int(post[-1])
    return np.concatenate(times), np.concatenate(ranks), start_rank


def complete_trajectory(M, means_by_rank, start_pool, horizon,
                        master_seed, replica_index):
    """Like :func:`hypercube_trajectory`; self-jumps are merged away."""
    g = _generator(master_seed, replica_index)
    pool = np.asarray(start_pool, dtype=np.int64)
    cur = int(pool[_pick(g.random(), pool.shape[0])])
    start_rank = cur
    t = 0.0
    times = []
    ranks = []
    r = 0
    while True:
        pre, draws, cum = _complete_round(g, _block_size(r), M, cur, means_by_rank, t)
        r += 1
        keep = int(np.searchsorted(cum, horizon, side="right"))
        moved = draws[:keep] != pre[:keep]
        times.append(cum[:keep][moved])
        ranks.append(draws[:keep][moved])
        if keep < cum.shape[0]:
            break
        t = float(cum[-1])
        cur = int(draws[-1])
    return np.concatenate(times), np.concatenate(ranks), start_rank


# ---------------------------------------------------------------------------
# raw embedded chains

def hypercube_chain(d, n_steps, start_pool, master_seed, index_offset, n_replicas):
    """Jump-chain vertices, shape (n_replicas, n_steps + 1)."""
    out = np.empty((n_replicas, n_steps + 1), dtype=np.int64)
    pool = np.asarray(start_pool, dtype=np.int64)
    npool = pool.shape[0]
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        v = int(pool[_pick(g.random(), npool)])
        out[i, 0] = v
        done = 0
        r = 0
        while done < n_steps:
            B = _block_size(r)
            r += 1
            flips = np.minimum((g.random(B) * d).astype(np.int64), d - 1)
            path = np.bitwise_xor.accumulate(np.int64(1) << flips)
            path ^= np.int64(v)
            take = min(B, n_steps - done)
            out[i, done + 1:done + 1 + take] = path[:take]
            done += take
            v = int(path[-1])
    return out


def complete_chain(M, means_by_rank, n_steps, start_pool, with_holds,
                   master_seed, index_offset, n_replicas):
    """Raw jump chain on the complete graph, self-jumps included.

    Returns ``(ranks, holds)`` where ``holds[i, k]`` is the sojourn drawn at
    ``ranks[i, k]`` before step ``k + 1`` (``holds is None`` without holds).
    """
    out = np.empty((n_replicas, n_steps + 1), dtype=np.int64)
    holds = np.empty((n_replicas, n_steps)) if with_holds else None
    pool = np.asarray(start_pool, dtype=np.int64)
    npool = pool.shape[0]
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        cur = int(pool[_pick(g.random(), npool)])
        out[i, 0] = cur
        done = 0
        r = 0
        while done < n_steps:
            B = _block_size(r)
            r += 1
            if with_holds:
                hraw = g.standard_exponential(B)
            draws = np.minimum((g.random(B) * M).astype(np.int64), M - 1) + 1
            take = min(B, n_steps - done)
            pre = np.empty(take, dtype=np.int64)
            pre[0] = cur
            pre[1:] = draws[:take - 1]
            if with_holds:
                holds[i, done:done + take] = means_by_rank[pre - 1] * hraw[:take]
            out[i, done + 1:done + 1 + take] = draws[:take]
            done += take
            cur = int(draws[-1])
    return out, holds


# ---------------------------------------------------------------------------
# K-process kernels (Poisson-clock construction)

def _k_round(g, B, M, gamma):
    gaps = g.standard_exponential(B) / M
    sites = np.minimum((g.random(B) * M).astype(np.int64), M - 1) + 1
    durations = gamma[sites - 1] * g.standard_exponential(B)
    return gaps, sites, durations


def k_events(gamma, y0, horizon, min_events, master_seed, replica_index):
    """Raw clock events ``(secondary_times, sites, durations, t0_hold)``.

    Events are generated until the accumulated primary time exceeds
    ``horizon`` and at least ``min_events`` events exist.  ``y0 == 0``
    encodes a start at infinity (zero initial sojourn, no draw).
    """
    M = gamma.shape[0]
    g = _generator(master_seed, replica_index)
    t0_hold = float(gamma[y0 - 1] * g.standard_exponential()) if y0 > 0 else 0.0
    sec, sit, dur = [], [], []
    total = t0_hold
    sec_base = 0.0
    n_done = 0
    n_exceed = 0 if total > horizon else None
    r = 0
    while n_exceed is None or n_done < max(n_exceed, min_events):
        gaps, sites, durations = _k_round(g, _block_size(r), M, gamma)
        r += 1
        sec.append(_chain_cumsum(sec_base, gaps))
        sit.append(sites)
        dur.append(durations)
        cum = _chain_cumsum(total, durations)
        if n_exceed is None:
            j = int(np.searchsorted(cum, horizon, side="right"))
            if j < cum.shape[0]:
                n_exceed = n_done + j + 1
        total = float(cum[-1])
        sec_base = float(sec[-1][-1])
        n_done += sites.shape[0]
    n = max(n_exceed, min_events)
    if not sec:
        return np.empty(0), np.empty(0, dtype=np.int64), np.empty(0), t0_hold
    return (np.concatenate(sec)[:n], np.concatenate(sit)[:n],
            np.concatenate(dur)[:n], t0_hold)


def k_states_at_times(gamma, y0, times, master_seed, index_offset, n_replicas):
    """K-process state at each query time (1-based site), per replica."""
    M = gamma.shape[0]
    Q = times.shape[0]
    out = np.empty((n_replicas, Q), dtype=np.int64)
    for i in range(n_replicas):
        g = _generator(master_seed, index_offset + i)
        t_next = float(gamma[y0 - 1] * g.standard_exponential()) if y0 > 0 else 0.0
        q = int(np.searchsorted(times, t_next, side="left"))
        out[i, :q] = y0
        r = 0
        while q < Q:
            gaps, sites, durations = _k_round(g, _block_size(r), M, gamma)
            r += 1
            cum = _chain_cumsum(t_next, durations)
            hi = int(np.searchsorted(times, cum[-1], side="left"))
            if hi > q:
                js = np.searchsorted(cum, times[q:hi], side="right")
                out[i, q:hi] = sites[js]
                q = hi
            t_next = float(cum[-1])
    return out
