# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernel for the S.D.o.F. formulas and their exhaustive sweeps.

Same public surface as ``_dof_core_py``. Division keeps Python floor
semantics (``cdivision`` is off), although every floored quantity here is
nonnegative by construction.
"""

BACKEND = "cython"


cdef inline long _pos(long x) nogil:
    return x if x > 0 else 0


cdef inline long _min2(long a, long b) nogil:
    return a if a < b else b


cdef inline long _min3(long a, long b, long c) nogil:
    return _min2(_min2(a, b), c)


cdef inline long _abs(long x) nogil:
    return -x if x < 0 else x


cdef inline void _s1_s2(long n_s, long n_h, long n_d, long n_ep, long *s1, long *s2) nogil:
    s1[0] = _pos(_min2(n_s, n_ep) + _min2(_pos(n_h - n_d), n_ep) - n_ep)
    s2[0] = _pos(_min2(n_s, n_ep) + _min2(n_h, n_ep) - n_ep) - s1[0]


cdef inline long _helper_g(long n_s, long n_h, long n_d, long n_ep) nogil:
    cdef long s1, s2, d_c1, d_c2
    _s1_s2(n_s, n_h, n_d, n_ep, &s1, &s2)
    d_c1 = _pos(n_s - n_ep) + s1
    d_c2 = _min2(s2, _pos(n_d - d_c1) // 2)
    return _min3(d_c1 + d_c2, n_d, n_s)


cdef inline long _helper_sdof_max(long n_sum, long n_s, long n_ep) nogil:
    cdef long delta = _pos(n_sum - _abs(n_s - n_ep)) // 3 + _pos(n_s - n_ep)
    return _min3(delta, n_sum, n_s)


cdef inline long _helper_optimal_nh(long n_sum, long n_s, long n_ep) nogil:
    cdef long gap = _abs(n_s - n_ep)
    cdef long third
    if n_sum <= gap:
        return 0
    third = (n_sum - gap) // 3
    if n_s <= n_ep:
        return n_ep - n_s + third
    return third


cdef inline long _sdof_active(long n_a, long n_b, long n_b_t, long n_e_t, long n_e_r) nogil:
    cdef long n_b_r = n_b - n_b_t
    if n_e_t >= n_e_r:
        return _min2(_pos(n_b_r - n_e_t), n_a)
    if n_e_t >= n_b_r:
        return 0
    return _helper_g(n_a, n_b_t, n_b_r - n_e_t, n_e_r - n_e_t)


cdef inline void _sdof_active_max(long n_a, long n_b, long n_e_t, long n_e_r,
                                  long *dof, long *n_b_t) nogil:
    cdef long x = n_a - n_e_r + n_e_t
    cdef long eta, third
    if n_e_t >= n_e_r:
        dof[0] = _min2(_pos(n_b - n_e_t), n_a)
    else:
        eta = _pos(n_b - n_e_t - _abs(x)) // 3 + _pos(x)
        dof[0] = _min3(eta, _pos(n_b - n_e_t), n_a)
    if n_e_t < _min2(n_e_r, n_b - _abs(x)):
        third = (n_b - n_e_t - _abs(x)) // 3
        if n_a <= n_e_r - n_e_t:
            n_b_t[0] = n_e_r - n_e_t - n_a + third
        else:
            n_b_t[0] = third
    else:
        n_b_t[0] = 0


cdef inline long _max_over_split(long n_a, long n_b, long n_e_t, long n_e_r) nogil:
    cdef long best = -1, d, t
    for t in range(n_b + 1):
        d = _sdof_active(n_a, n_b, t, n_e_t, n_e_r)
        if d > best:
            best = d
    return best


cdef inline long _worst_case_sdof(long n_a, long n_b, long n_e) nogil:
    if n_e >= n_b:
        return 0
    if (n_b - n_a if n_b - n_a > 2 * n_a else 2 * n_a) <= 2 * n_e:
        return _min3((n_b - n_e + n_a) // 3, n_b - n_e, n_a)
    if n_b - n_a <= 2 * n_e and n_e < _min2(n_b, n_a):
        if n_e > n_a - n_b:
            return _min2((n_b - n_a + n_e) // 3 + n_a - n_e, n_b - n_e)
        return n_b - n_e
    return n_a


cdef inline long _greedy(long n_c1, long n_c2, long n_c3, long n_d, long n_s) nogil:
    cdef long k = 0, used = 0, i
    for i in range(n_c1):
        if k == n_s or used + 1 > n_d:
            return k
        k += 1
        used += 1
    for i in range(n_c2):
        if k == n_s or used + 1 > n_d:
            return k
        k += 1
        used += 1
    for i in range(n_c3):
        if k == n_s or used + 2 > n_d:
            return k
        k += 1
        used += 2
    return k


def pos(long x):
    return _pos(x)


def s1_s2(long n_s, long n_h, long n_d, long n_ep):
    cdef long s1, s2
    _s1_s2(n_s, n_h, n_d, n_ep, &s1, &s2)
    return s1, s2


def helper_g(long n_s, long n_h, long n_d, long n_ep):
    return _helper_g(n_s, n_h, n_d, n_ep)


def helper_sdof_max(long n_sum, long n_s, long n_ep):
    return _helper_sdof_max(n_sum, n_s, n_ep)


def helper_optimal_nh(long n_sum, long n_s, long n_ep):
    return _helper_optimal_nh(n_sum, n_s, n_ep)


def sdof_active(long n_a, long n_b, long n_b_t, long n_e_t, long n_e_r):
    return _sdof_active(n_a, n_b, n_b_t, n_e_t, n_e_r)


def sdof_active_max(long n_a, long n_b, long n_e_t, long n_e_r):
    cdef long dof, n_b_t
    _sdof_active_max(n_a, n_b, n_e_t, n_e_r, &dof, &n_b_t)
    return dof, n_b_t


def worst_case_sdof(long n_a, long n_b, long n_e):
    return _worst_case_sdof(n_a, n_b, n_e)


def greedy_select_count(long n_c1, long n_c2, long n_c3, long n_d, long n_s):
    return _greedy(n_c1, n_c2, n_c3, n_d, n_s)


def oracle_max_over_split(long n_a, long n_b, long n_e_t, long n_e_r):
    cdef long best = -1, d, n_b_t
    arg = []
    for n_b_t in range(n_b + 1):
        d = _sdof_active(n_a, n_b, n_b_t, n_e_t, n_e_r)
        if d > best:
            best = d
            arg = [n_b_t]
        elif d == best:
            arg.append(n_b_t)
    return best, arg


def oracle_worst_case(long n_a, long n_b, long n_e):
    cdef long worst = -1, d, n_e_t
    arg = []
    for n_e_t in range(n_e + 1):
        d = _max_over_split(n_a, n_b, n_e_t, n_e - n_e_t)
        if worst < 0 or d < worst:
            worst = d
            arg = [n_e_t]
        elif d == worst:
            arg.append(n_e_t)
    return worst, arg


def split_max_sweep(long na_max, long nb_max, long ne_max):
    cdef long n_a, n_b, n_e_t, n_e_r, t, d, dof, n_b_t, best, at_star
    cdef long checked = 0
    bad = []
    for n_a in range(1, na_max + 1):
        for n_b in range(1, nb_max + 1):
            for n_e_t in range(ne_max + 1):
                for n_e_r in range(ne_max + 1):
                    checked += 1
                    _sdof_active_max(n_a, n_b, n_e_t, n_e_r, &dof, &n_b_t)
                    best = -1
                    for t in range(n_b + 1):
                        d = _sdof_active(n_a, n_b, t, n_e_t, n_e_r)
                        if d > best:
                            best = d
                    if 0 <= n_b_t <= n_b:
                        at_star = _sdof_active(n_a, n_b, n_b_t, n_e_t, n_e_r)
                    else:
                        at_star = -1
                    if dof != best or at_star != best:
                        bad.append((n_a, n_b, n_e_t, n_e_r, dof, n_b_t, best))
    return checked, bad


def worst_case_sweep(long na_max, long nb_max, long ne_max):
    cdef long n_a, n_b, n_e, t, d, worst, wc, first, last
    cdef long checked = 0
    bad = []
    cor1 = []
    cor2 = []
    for n_a in range(1, na_max + 1):
        for n_b in range(1, nb_max + 1):
            for n_e in range(ne_max + 1):
                checked += 1
                wc = _worst_case_sdof(n_a, n_b, n_e)
                worst = -1
                for t in range(n_e + 1):
                    d = _max_over_split(n_a, n_b, t, n_e - t)
                    if worst < 0 or d < worst:
                        worst = d
                first = _max_over_split(n_a, n_b, 0, n_e)
                last = _max_over_split(n_a, n_b, n_e, 0)
                if wc != worst:
                    bad.append((n_a, n_b, n_e, wc, worst))
                if first != worst and last != worst:
                    cor1.append((n_a, n_b, n_e, worst, tuple(oracle_worst_case(n_a, n_b, n_e)[1])))
                if n_b > n_e and worst < 1:
                    cor2.append((n_a, n_b, n_e, worst))
    return checked, bad, cor1, cor2


def helper_max_sweep(long nsum_max, long ns_max, long nep_max):
    cdef long n_sum, n_s, n_ep, n_h, g, best, closed, nh_hat, at_nh
    cdef long checked = 0
    bad = []
    for n_sum in range(nsum_max + 1):
        for n_s in range(ns_max + 1):
            for n_ep in range(nep_max + 1):
                checked += 1
                best = -1
                for n_h in range(n_sum + 1):
                    g = _helper_g(n_s, n_h, n_sum - n_h, n_ep)
                    if g > best:
                        best = g
                closed = _helper_sdof_max(n_sum, n_s, n_ep)
                nh_hat = _helper_optimal_nh(n_sum, n_s, n_ep)
                if 0 <= nh_hat <= n_sum:
                    at_nh = _helper_g(n_s, nh_hat, n_sum - nh_hat, n_ep)
                else:
                    at_nh = -1
                if not (best == closed and closed == at_nh):
                    bad.append((n_sum, n_s, n_ep, closed, nh_hat, at_nh, best))
    return checked, bad


def budget_sweep(long nsum_max, long ns_max, long nep_max):
    cdef long n_sum, n_s, n_ep, n_h, n_d, s1, s2, k, g
    cdef long checked = 0
    bad = []
    for n_sum in range(nsum_max + 1):
        for n_s in range(ns_max + 1):
            for n_ep in range(nep_max + 1):
                for n_h in range(n_sum + 1):
                    n_d = n_sum - n_h
                    checked += 1
                    _s1_s2(n_s, n_h, n_d, n_ep, &s1, &s2)
                    k = _greedy(_pos(n_s - n_ep), s1, s2, n_d, n_s)
                    g = _helper_g(n_s, n_h, n_d, n_ep)
                    if k != g:
                        bad.append((n_s, n_h, n_d, n_ep, k, g))
    return checked, bad
