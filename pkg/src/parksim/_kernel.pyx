# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled simulation kernel: the hot twin of parksim._kernel_py.

Same inputs, same outputs, bit for bit. The pure-Python module is the
readable reference; this one flattens its data structures into arrays
(a hand-rolled binary event heap, append-only rings for the searching
queue and its running minimum) and keeps the arithmetic byte-identical:
plain IEEE +, max, / on the pre-drawn inputs, minute lookups via a C
long cast exactly like Python's int(t) for non-negative t. No fast-math,
no reordering, no extra rounding. Change semantics here and in
_kernel_py together or not at all; the parity suite compares them.
"""

import numpy as np

cimport cython
from libc.math cimport INFINITY, NAN

# Event kind codes double as the equal-time rank (shared with _kernel_py).
cdef enum:
    EV_DEPARTURE = 0
    EV_SCAN = 1
    EV_REACH = 2
    EV_ARRIVAL = 3

cdef enum:
    OUT_PARKED = 0
    OUT_FAILED_TO_PARK = 1
    OUT_DECLINED_COULD_HAVE = 2
    OUT_DECLINED_CORRECTLY = 3


cdef inline bint _ev_less(double t1, int k1, long s1,
                          double t2, int k2, long s2) noexcept nogil:
    if t1 != t2:
        return t1 < t2
    if k1 != k2:
        return k1 < k2
    return s1 < s2


cdef inline long _heap_push(double[::1] ht, int[::1] hk, long[::1] hs,
                            long[::1] hc, long size,
                            double t, int kind, long seq, long car) noexcept nogil:
    cdef long i = size, p
    ht[i] = t
    hk[i] = kind
    hs[i] = seq
    hc[i] = car
    while i > 0:
        p = (i - 1) >> 1
        if _ev_less(ht[i], hk[i], hs[i], ht[p], hk[p], hs[p]):
            ht[i], ht[p] = ht[p], ht[i]
            hk[i], hk[p] = hk[p], hk[i]
            hs[i], hs[p] = hs[p], hs[i]
            hc[i], hc[p] = hc[p], hc[i]
            i = p
        else:
            break
    return size + 1


cdef inline long _heap_pop(double[::1] ht, int[::1] hk, long[::1] hs,
                           long[::1] hc, long size) noexcept nogil:
    # Swap the root into slot size-1 for the caller to read, then restore
    # the heap over the remaining size-1 slots. Returns the new size.
    cdef long last = size - 1, i = 0, c
    ht[0], ht[last] = ht[last], ht[0]
    hk[0], hk[last] = hk[last], hk[0]
    hs[0], hs[last] = hs[last], hs[0]
    hc[0], hc[last] = hc[last], hc[0]
    while True:
        c = 2 * i + 1
        if c >= last:
            break
        if c + 1 < last and _ev_less(ht[c + 1], hk[c + 1], hs[c + 1],
                                     ht[c], hk[c], hs[c]):
            c += 1
        if _ev_less(ht[c], hk[c], hs[c], ht[i], hk[i], hs[i]):
            ht[i], ht[c] = ht[c], ht[i]
            hk[i], hk[c] = hk[c], hk[i]
            hs[i], hs[c] = hs[c], hs[i]
            hc[i], hc[c] = hc[c], hc[i]
            i = c
        else:
            break
    return last


def simulate_trace_driven(double[::1] entry_times,
                          double[::1] velocities,
                          double region_length,
                          int[::1] truth_free,
                          int[::1] det_free,
                          long horizon):
    """Probe drivers against a fixed ground-truth trace.

    See parksim._kernel_py.simulate_trace_driven for the event model;
    inputs and outputs are identical.
    """
    cdef long n = entry_times.shape[0]
    n_c_arr = np.zeros(n, dtype=np.int32)
    d_r_arr = np.zeros(n, dtype=np.int32)
    warm_arr = np.zeros(n, dtype=np.uint8)
    vmin_arr = np.full(n, np.nan)
    d_m_arr = np.zeros(n, dtype=np.uint8)
    out_arr = np.zeros(n, dtype=np.uint8)
    rt_arr = np.zeros(n, dtype=np.float64)
    if n == 0:
        return n_c_arr, d_r_arr, warm_arr, vmin_arr, d_m_arr, out_arr, rt_arr

    cdef int[::1] n_c = n_c_arr
    cdef int[::1] d_r = d_r_arr
    cdef unsigned char[::1] warmup = warm_arr
    cdef double[::1] v_min = vmin_arr
    cdef unsigned char[::1] d_m = d_m_arr
    cdef unsigned char[::1] outcome = out_arr
    cdef double[::1] rtime = rt_arr

    cdef long cap = 2 * n + 16
    heap_t = np.empty(cap, dtype=np.float64)
    heap_k = np.empty(cap, dtype=np.int32)
    heap_s = np.empty(cap, dtype=np.int64)
    heap_c = np.empty(cap, dtype=np.int64)
    cdef double[::1] ht = heap_t
    cdef int[::1] hk = heap_k
    cdef long[::1] hs = heap_s
    cdef long[::1] hc = heap_c
    cdef long hsize = 0, seq = 0

    # Searching queue and its running minimum: append-only arrays with
    # moving head/tail indices (each car is pushed at most once).
    ring = np.empty(n + 1, dtype=np.float64)
    floor_ = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] searching = ring
    cdef double[::1] v_floor = floor_
    cdef long sr_head = 0, sr_tail = 0
    cdef long mq_head = 0, mq_tail = 0

    cdef double tail_reach = -INFINITY
    cdef double last_res_time = NAN
    cdef long claimed_here = 0
    cdef long resolved = 0

    cdef double t, v, t_c, reach, vmin_val
    cdef long car, nc, minute, ahead
    cdef int kind, det, shown, dm, warm

    hsize = _heap_push(ht, hk, hs, hc, hsize, entry_times[0], EV_ARRIVAL, seq, 0)
    seq += 1

    while hsize > 0:
        hsize = _heap_pop(ht, hk, hs, hc, hsize)
        t = ht[hsize]
        kind = hk[hsize]
        car = hc[hsize]

        if kind == EV_ARRIVAL:
            if car + 1 < n:
                hsize = _heap_push(ht, hk, hs, hc, hsize,
                                   entry_times[car + 1], EV_ARRIVAL, seq, car + 1)
                seq += 1
            det = det_free[<long>t]
            warm = det < 0
            shown = 0 if warm else det
            nc = sr_tail - sr_head
            vmin_val = v_floor[mq_head] if nc > 0 else NAN
            v = velocities[car]
            if nc >= shown:
                dm = 0
            elif nc > 0 and vmin_val > v:
                dm = 0
            else:
                dm = 1
            n_c[car] = <int>nc
            d_r[car] = shown
            warmup[car] = <unsigned char>warm
            v_min[car] = vmin_val
            d_m[car] = <unsigned char>dm
            t_c = region_length / v
            if dm:
                reach = t + t_c
                if reach < tail_reach:
                    reach = tail_reach
                tail_reach = reach
                searching[sr_tail] = v
                sr_tail += 1
                while mq_tail > mq_head and v_floor[mq_tail - 1] > v:
                    mq_tail -= 1
                v_floor[mq_tail] = v
                mq_tail += 1
                hsize = _heap_push(ht, hk, hs, hc, hsize, reach, EV_REACH, seq, car)
            else:
                hsize = _heap_push(ht, hk, hs, hc, hsize, t + t_c, EV_REACH, seq, car)
            seq += 1

        else:  # EV_REACH
            if d_m[car]:
                v = searching[sr_head]
                sr_head += 1
                if v_floor[mq_head] == v:
                    mq_head += 1
            minute = <long>t
            if minute >= horizon:
                minute = horizon - 1
            if t != last_res_time:
                last_res_time = t
                claimed_here = 0
            ahead = claimed_here
            if d_m[car]:
                if truth_free[minute] > ahead:
                    outcome[car] = OUT_PARKED
                    claimed_here += 1
                else:
                    outcome[car] = OUT_FAILED_TO_PARK
            else:
                if truth_free[minute] > ahead:
                    outcome[car] = OUT_DECLINED_COULD_HAVE
                else:
                    outcome[car] = OUT_DECLINED_CORRECTLY
            rtime[car] = t
            resolved += 1
            if resolved == n:
                break

    return n_c_arr, d_r_arr, warm_arr, vmin_arr, d_m_arr, out_arr, rt_arr


def simulate_closed_loop(double[::1] entry_times,
                         double[::1] velocities,
                         double[::1] durations,
                         long spots,
                         double region_length,
                         long schedule_ds,
                         long scan_offset,
                         long horizon):
    """Self-contained street with engine-owned occupancy.

    See parksim._kernel_py.simulate_closed_loop for the event model;
    inputs and outputs are identical.
    """
    cdef long n = entry_times.shape[0]
    n_c_arr = np.zeros(n, dtype=np.int32)
    d_r_arr = np.zeros(n, dtype=np.int32)
    warm_arr = np.zeros(n, dtype=np.uint8)
    vmin_arr = np.full(n, np.nan)
    d_m_arr = np.zeros(n, dtype=np.uint8)
    out_arr = np.zeros(n, dtype=np.uint8)
    rt_arr = np.zeros(n, dtype=np.float64)
    if n == 0:
        return n_c_arr, d_r_arr, warm_arr, vmin_arr, d_m_arr, out_arr, rt_arr

    cdef int[::1] n_c = n_c_arr
    cdef int[::1] d_r = d_r_arr
    cdef unsigned char[::1] warmup = warm_arr
    cdef double[::1] v_min = vmin_arr
    cdef unsigned char[::1] d_m = d_m_arr
    cdef unsigned char[::1] outcome = out_arr
    cdef double[::1] rtime = rt_arr

    cdef long cap = 2 * n + 16
    heap_t = np.empty(cap, dtype=np.float64)
    heap_k = np.empty(cap, dtype=np.int32)
    heap_s = np.empty(cap, dtype=np.int64)
    heap_c = np.empty(cap, dtype=np.int64)
    cdef double[::1] ht = heap_t
    cdef int[::1] hk = heap_k
    cdef long[::1] hs = heap_s
    cdef long[::1] hc = heap_c
    cdef long hsize = 0, seq = 0

    ring = np.empty(n + 1, dtype=np.float64)
    floor_ = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] searching = ring
    cdef double[::1] v_floor = floor_
    cdef long sr_head = 0, sr_tail = 0
    cdef long mq_head = 0, mq_tail = 0

    cdef double tail_reach = -INFINITY
    cdef long occupied = 0
    cdef long det_latest = -1
    cdef long resolved = 0

    cdef double t, v, t_c, reach, vmin_val, nxt
    cdef long car, nc, free
    cdef int kind, dm, warm
    cdef long det, shown

    if schedule_ds > 0 and scan_offset < horizon:
        hsize = _heap_push(ht, hk, hs, hc, hsize,
                           <double>scan_offset, EV_SCAN, seq, -1)
        seq += 1
    hsize = _heap_push(ht, hk, hs, hc, hsize, entry_times[0], EV_ARRIVAL, seq, 0)
    seq += 1

    while hsize > 0:
        hsize = _heap_pop(ht, hk, hs, hc, hsize)
        t = ht[hsize]
        kind = hk[hsize]
        car = hc[hsize]

        if kind == EV_ARRIVAL:
            if car + 1 < n:
                hsize = _heap_push(ht, hk, hs, hc, hsize,
                                   entry_times[car + 1], EV_ARRIVAL, seq, car + 1)
                seq += 1
            if schedule_ds == 0:
                det = spots - occupied
            else:
                det = det_latest
            warm = det < 0
            shown = 0 if warm else det
            nc = sr_tail - sr_head
            vmin_val = v_floor[mq_head] if nc > 0 else NAN
            v = velocities[car]
            if nc >= shown:
                dm = 0
            elif nc > 0 and vmin_val > v:
                dm = 0
            else:
                dm = 1
            n_c[car] = <int>nc
            d_r[car] = <int>shown
            warmup[car] = <unsigned char>warm
            v_min[car] = vmin_val
            d_m[car] = <unsigned char>dm
            t_c = region_length / v
            if dm:
                reach = t + t_c
                if reach < tail_reach:
                    reach = tail_reach
                tail_reach = reach
                searching[sr_tail] = v
                sr_tail += 1
                while mq_tail > mq_head and v_floor[mq_tail - 1] > v:
                    mq_tail -= 1
                v_floor[mq_tail] = v
                mq_tail += 1
                hsize = _heap_push(ht, hk, hs, hc, hsize, reach, EV_REACH, seq, car)
            else:
                hsize = _heap_push(ht, hk, hs, hc, hsize, t + t_c, EV_REACH, seq, car)
            seq += 1

        elif kind == EV_REACH:
            if d_m[car]:
                v = searching[sr_head]
                sr_head += 1
                if v_floor[mq_head] == v:
                    mq_head += 1
            free = spots - occupied
            if d_m[car]:
                if free > 0:
                    outcome[car] = OUT_PARKED
                    occupied += 1
                    hsize = _heap_push(ht, hk, hs, hc, hsize,
                                       t + durations[car], EV_DEPARTURE, seq, car)
                    seq += 1
                else:
                    outcome[car] = OUT_FAILED_TO_PARK
            else:
                if free > 0:
                    outcome[car] = OUT_DECLINED_COULD_HAVE
                else:
                    outcome[car] = OUT_DECLINED_CORRECTLY
            rtime[car] = t
            resolved += 1
            if resolved == n:
                break

        elif kind == EV_SCAN:
            det_latest = spots - occupied
            nxt = t + schedule_ds
            if nxt < horizon:
                hsize = _heap_push(ht, hk, hs, hc, hsize, nxt, EV_SCAN, seq, -1)
                seq += 1

        else:  # EV_DEPARTURE
            occupied -= 1

    return n_c_arr, d_r_arr, warm_arr, vmin_arr, d_m_arr, out_arr, rt_arr
