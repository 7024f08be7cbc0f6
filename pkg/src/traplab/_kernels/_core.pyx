#cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulation kernels.

Mirrors ``traplab._kernels.pure`` draw for draw: same per-replica PCG64
streams, same block schedule, same numpy C distribution functions
(``random_standard_exponential`` ziggurat, ``next_double`` uniforms), so the
two backends return bit-identical results.  See the pure module docstring
for the protocol.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential,
    random_standard_exponential_fill,
    random_standard_uniform_fill,
)

from ..rng import bit_generator_for

cnp.import_array()

cdef int BLOCK_CAP = 8192


cdef inline int _block_size(int round_index) nogil:
    cdef long b = 64
    b = b << round_index
    if b > BLOCK_CAP:
        b = BLOCK_CAP
    return <int> b


cdef inline long _pick(double u, long n) nogil:
    cdef long i = <long> (u * n)
    if i >= n:
        i = n - 1
    return i


cdef bitgen_t *_bitgen(object pcg):
    return <bitgen_t *> PyCapsule_GetPointer(pcg.capsule, "BitGenerator")


# ---------------------------------------------------------------------------
# embedded-chain hitting kernels

def hypercube_hit_ranks(int d, long[::1] rank_of_vertex,
                        unsigned char[::1] target_mask, long[::1] start_pool,
                        object master_seed, long index_offset, long n_replicas):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n_replicas, dtype=np.int64)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, v, npool = start_pool.shape[0]
    cdef int r, k, B
    cdef bint done
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        v = start_pool[_pick(rng.next_double(rng.state), npool)]
        r = 0
        done = False
        while not done:
            B = _block_size(r)
            r += 1
            random_standard_uniform_fill(rng, B, &ublk[0])
            for k in range(B):
                v ^= (<long> 1) << _pick(ublk[k], d)
                if target_mask[v]:
                    out[i] = rank_of_vertex[v]
                    done = True
                    break
    return out


def complete_hit_ranks(long M, unsigned char[::1] target_mask,
                       long[::1] start_pool, object master_seed,
                       long index_offset, long n_replicas):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n_replicas, dtype=np.int64)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, nxt
    cdef int r, k, B
    cdef bint done
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        rng.next_double(rng.state)  # start draw; law is start-independent
        r = 0
        done = False
        while not done:
            B = _block_size(r)
            r += 1
            random_standard_uniform_fill(rng, B, &ublk[0])
            for k in range(B):
                nxt = _pick(ublk[k], M) + 1
                if target_mask[nxt - 1]:
                    out[i] = nxt
                    done = True
                    break
    return out


# ---------------------------------------------------------------------------
# trap-model walks with holding times

def hypercube_states_at_times(int d, long[::1] rank_of_vertex,
                              double[::1] means_by_vertex, long[::1] start_pool,
                              double[::1] times, object master_seed,
                              long index_offset, long n_replicas):
    cdef long Q = times.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((n_replicas, Q), dtype=np.int64)
    cdef double[::1] eblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, q, v, npool = start_pool.shape[0]
    cdef int r, k, B
    cdef double t
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        v = start_pool[_pick(rng.next_double(rng.state), npool)]
        t = 0.0
        q = 0
        r = 0
        while q < Q:
            B = _block_size(r)
            r += 1
            random_standard_exponential_fill(rng, B, &eblk[0])
            random_standard_uniform_fill(rng, B, &ublk[0])
            for k in range(B):
                t += means_by_vertex[v] * eblk[k]
                while q < Q and times[q] < t:
                    out[i, q] = rank_of_vertex[v]
                    q += 1
                if q == Q:
                    break
                v ^= (<long> 1) << _pick(ublk[k], d)
    return out


def complete_states_at_times(long M, double[::1] means_by_rank,
                             long[::1] start_pool, double[::1] times,
                             object master_seed, long index_offset,
                             long n_replicas):
    cdef long Q = times.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((n_replicas, Q), dtype=np.int64)
    cdef double[::1] eblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, q, cur, npool = start_pool.shape[0]
    cdef int r, k, B
    cdef double t
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        cur = start_pool[_pick(rng.next_double(rng.state), npool)]
        t = 0.0
        q = 0
        r = 0
        while q < Q:
            B = _block_size(r)
            r += 1
            random_standard_exponential_fill(rng, B, &eblk[0])
            random_standard_uniform_fill(rng, B, &ublk[0])
            for k in range(B):
                t += means_by_rank[cur - 1] * eblk[k]
                while q < Q and times[q] < t:
                    out[i, q] = cur
                    q += 1
                if q == Q:
                    break
                cur = _pick(ublk[k], M) + 1
    return out


def hypercube_trajectory(int d, long[::1] rank_of_vertex,
                         double[::1] means_by_vertex, long[::1] start_pool,
                         double horizon, object master_seed, long replica_index):
    cdef double[::1] eblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long v, n = 0, cap = 1024
    cdef int r = 0, k, B
    cdef double t = 0.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] times = np.empty(cap)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ranks = np.empty(cap, dtype=np.int64)
    pcg = bit_generator_for(master_seed, replica_index)
    rng = _bitgen(pcg)
    v = start_pool[_pick(rng.next_double(rng.state), start_pool.shape[0])]
    cdef long start_rank = rank_of_vertex[v]
    while True:
        B = _block_size(r)
        r += 1
        random_standard_exponential_fill(rng, B, &eblk[0])
        random_standard_uniform_fill(rng, B, &ublk[0])
        for k in range(B):
            t += means_by_vertex[v] * eblk[k]
            if t > horizon:
                return times[:n].copy(), ranks[:n].copy(), start_rank
            v ^= (<long> 1) << _pick(ublk[k], d)
            if n == cap:
                cap *= 2
                times = np.resize(times, cap)
                ranks = np.resize(ranks, cap)
            times[n] = t
            ranks[n] = rank_of_vertex[v]
            n += 1


def complete_trajectory(long M, double[::1] means_by_rank, long[::1] start_pool,
                        double horizon, object master_seed, long replica_index):
    cdef double[::1] eblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long cur, nxt, n = 0, cap = 1024
    cdef int r = 0, k, B
    cdef double t = 0.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] times = np.empty(cap)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ranks = np.empty(cap, dtype=np.int64)
    pcg = bit_generator_for(master_seed, replica_index)
    rng = _bitgen(pcg)
    cur = start_pool[_pick(rng.next_double(rng.state), start_pool.shape[0])]
    cdef long start_rank = cur
    while True:
        B = _block_size(r)
        r += 1
        random_standard_exponential_fill(rng, B, &eblk[0])
        random_standard_uniform_fill(rng, B, &ublk[0])
        for k in range(B):
            t += means_by_rank[cur - 1] * eblk[k]
            if t > horizon:
                return times[:n].copy(), ranks[:n].copy(), start_rank
            nxt = _pick(ublk[k], M) + 1
            if nxt != cur:
                if n == cap:
                    cap *= 2
                    times = np.resize(times, cap)
                    ranks = np.resize(ranks, cap)
                times[n] = t
                ranks[n] = nxt
                n += 1
                cur = nxt


# ---------------------------------------------------------------------------
# raw embedded chains

def hypercube_chain(int d, long n_steps, long[::1] start_pool,
                    object master_seed, long index_offset, long n_replicas):
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty(
        (n_replicas, n_steps + 1), dtype=np.int64)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, v, done, npool = start_pool.shape[0]
    cdef int r, k, B, take
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        v = start_pool[_pick(rng.next_double(rng.state), npool)]
        out[i, 0] = v
        done = 0
        r = 0
        while done < n_steps:
            B = _block_size(r)
            r += 1
            random_standard_uniform_fill(rng, B, &ublk[0])
            take = B if B < n_steps - done else <int> (n_steps - done)
            for k in range(take):
                v ^= (<long> 1) << _pick(ublk[k], d)
                out[i, done + 1 + k] = v
            done += take
    return out


def complete_chain(long M, double[::1] means_by_rank, long n_steps,
                   long[::1] start_pool, bint with_holds, object master_seed,
                   long index_offset, long n_replicas):
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty(
        (n_replicas, n_steps + 1), dtype=np.int64)
    holds_arr = np.empty((n_replicas, n_steps)) if with_holds else None
    cdef double[:, ::1] holds = holds_arr if with_holds else np.empty((1, 1))
    cdef double[::1] eblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, cur, done, npool = start_pool.shape[0]
    cdef int r, k, B, take
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        cur = start_pool[_pick(rng.next_double(rng.state), npool)]
        out[i, 0] = cur
        done = 0
        r = 0
        while done < n_steps:
            B = _block_size(r)
            r += 1
            if with_holds:
                random_standard_exponential_fill(rng, B, &eblk[0])
            random_standard_uniform_fill(rng, B, &ublk[0])
            take = B if B < n_steps - done else <int> (n_steps - done)
            for k in range(take):
                if with_holds:
                    holds[i, done + k] = means_by_rank[cur - 1] * eblk[k]
                cur = _pick(ublk[k], M) + 1
                out[i, done + 1 + k] = cur
            done += take
    return out, holds_arr


# ---------------------------------------------------------------------------
# K-process kernels (Poisson-clock construction)

def k_events(double[::1] gamma, long y0, double horizon, long min_events,
             object master_seed, long replica_index):
    cdef long M = gamma.shape[0]
    cdef double[::1] gblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef double[::1] dblk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long site, n = 0, cap = 256, n_exceed = -1
    cdef int r = 0, k, B
    cdef double t0_hold = 0.0, total, sec_t = 0.0, dur
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sec = np.empty(cap)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sites = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] durs = np.empty(cap)
    pcg = bit_generator_for(master_seed, replica_index)
    rng = _bitgen(pcg)
    if y0 > 0:
        t0_hold = gamma[y0 - 1] * random_standard_exponential(rng)
    total = t0_hold
    if total > horizon:
        n_exceed = 0
    while n_exceed < 0 or n < (n_exceed if n_exceed > min_events else min_events):
        B = _block_size(r)
        r += 1
        random_standard_exponential_fill(rng, B, &gblk[0])
        random_standard_uniform_fill(rng, B, &ublk[0])
        random_standard_exponential_fill(rng, B, &dblk[0])
        for k in range(B):
            if n_exceed >= 0 and n >= (n_exceed if n_exceed > min_events else min_events):
                break
            sec_t += gblk[k] / M
            site = _pick(ublk[k], M) + 1
            dur = gamma[site - 1] * dblk[k]
            total += dur
            if n == cap:
                cap *= 2
                sec = np.resize(sec, cap)
                sites = np.resize(sites, cap)
                durs = np.resize(durs, cap)
            sec[n] = sec_t
            sites[n] = site
            durs[n] = dur
            n += 1
            if n_exceed < 0 and total > horizon:
                n_exceed = n
    return sec[:n].copy(), sites[:n].copy(), durs[:n].copy(), t0_hold


def k_states_at_times(double[::1] gamma, long y0, double[::1] times,
                      object master_seed, long index_offset, long n_replicas):
    cdef long M = gamma.shape[0]
    cdef long Q = times.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((n_replicas, Q), dtype=np.int64)
    cdef double[::1] gblk = np.empty(BLOCK_CAP)
    cdef double[::1] ublk = np.empty(BLOCK_CAP)
    cdef double[::1] dblk = np.empty(BLOCK_CAP)
    cdef bitgen_t *rng
    cdef long i, q, site, state
    cdef int r, k, B
    cdef double t_next
    for i in range(n_replicas):
        pcg = bit_generator_for(master_seed, index_offset + i)
        rng = _bitgen(pcg)
        state = y0
        if y0 > 0:
            t_next = gamma[y0 - 1] * random_standard_exponential(rng)
        else:
            t_next = 0.0
        q = 0
        while q < Q and times[q] < t_next:
            out[i, q] = state
            q += 1
        r = 0
        while q < Q:
            B = _block_size(r)
            r += 1
            random_standard_exponential_fill(rng, B, &gblk[0])
            random_standard_uniform_fill(rng, B, &ublk[0])
            random_standard_exponential_fill(rng, B, &dblk[0])
            for k in range(B):
                site = _pick(ublk[k], M) + 1
                t_next += gamma[site - 1] * dblk[k]
                while q < Q and times[q] < t_next:
                    out[i, q] = site
                    q += 1
                if q == Q:
                    break
    return out
