"""Pure-Python integer kernel for the S.D.o.F. formulas and their exhaustive sweeps.

This module mirrors ``_dof_core.pyx`` function for function; ``fdsecrecy.dof``
imports the compiled version when available and falls back to this one.
The sweeps resolve formulas through module globals at call time, so a test
can monkeypatch a single formula and watch the verifier catch it.
"""

BACKEND = "python"


def pos(x):
    return x if x > 0 else 0


def s1_s2(n_s, n_h, n_d, n_ep):
    s1 = pos(min(n_s, n_ep) + min(pos(n_h - n_d), n_ep) - n_ep)
    s2 = pos(min(n_s, n_ep) + min(n_h, n_ep) - n_ep) - s1
    return s1, s2


def helper_g(n_s, n_h, n_d, n_ep):
    s1, s2 = s1_s2(n_s, n_h, n_d, n_ep)
    d_c1 = pos(n_s - n_ep) + s1
    d_c2 = min(s2, pos(n_d - d_c1) // 2)
    return min(d_c1 + d_c2, n_d, n_s)


def helper_sdof_max(n_sum, n_s, n_ep):
    delta = pos(n_sum - abs(n_s - n_ep)) // 3 + pos(n_s - n_ep)
    return min(delta, n_sum, n_s)


def helper_optimal_nh(n_sum, n_s, n_ep):
    gap = abs(n_s - n_ep)
    if n_sum <= gap:
        return 0
    third = (n_sum - gap) // 3
    if n_s <= n_ep:
        return n_ep - n_s + third
    return third


def sdof_active(n_a, n_b, n_b_t, n_e_t, n_e_r):
    n_b_r = n_b - n_b_t
    if n_e_t >= n_e_r:
        return min(pos(n_b_r - n_e_t), n_a)
    if n_e_t >= n_b_r:
        return 0
    return helper_g(n_a, n_b_t, n_b_r - n_e_t, n_e_r - n_e_t)


def sdof_active_max(n_a, n_b, n_e_t, n_e_r):
    """Return ``(dof, n_b_t_star)`` for a fixed Eve split."""
    x = n_a - n_e_r + n_e_t
    if n_e_t >= n_e_r:
        dof = min(pos(n_b - n_e_t), n_a)
    else:
        eta = pos(n_b - n_e_t - abs(x)) // 3 + pos(x)
        dof = min(eta, pos(n_b - n_e_t), n_a)
    if n_e_t < min(n_e_r, n_b - abs(x)):
        third = (n_b - n_e_t - abs(x)) // 3
        if n_a <= n_e_r - n_e_t:
            n_b_t = n_e_r - n_e_t - n_a + third
        else:
            n_b_t = third
    else:
        n_b_t = 0
    return dof, n_b_t


def worst_case_sdof(n_a, n_b, n_e):
    # Conditions with halves are compared after doubling both sides.
    if n_e >= n_b:
        return 0
    if max(n_b - n_a, 2 * n_a) <= 2 * n_e:
        return min((n_b - n_e + n_a) // 3, n_b - n_e, n_a)
    if n_b - n_a <= 2 * n_e and n_e < min(n_b, n_a):
        if n_e > n_a - n_b:
            return min((n_b - n_a + n_e) // 3 + n_a - n_e, n_b - n_e)
        return n_b - n_e
    return n_a


def greedy_select_count(n_c1, n_c2, n_c3, n_d, n_s):
    """Streams picked C1 -> C2 -> C3 at receive costs 1, 1, 2 under budget ``n_d``."""
    k = 0
    used = 0
    for count, cost in ((n_c1, 1), (n_c2, 1), (n_c3, 2)):
        for _ in range(count):
            if k == n_s or used + cost > n_d:
                return k
            k += 1
            used += cost
    return k


def oracle_max_over_split(n_a, n_b, n_e_t, n_e_r):
    """Return ``(max_dof, argmax_list)`` over every Bob split."""
    best = -1
    arg = []
    for n_b_t in range(n_b + 1):
        d = sdof_active(n_a, n_b, n_b_t, n_e_t, n_e_r)
        if d > best:
            best = d
            arg = [n_b_t]
        elif d == best:
            arg.append(n_b_t)
    return best, arg


def oracle_worst_case(n_a, n_b, n_e):
    """Return ``(min_dof, argmin_list)`` over every Eve split, each scored by searching all Bob splits."""
    worst = None
    arg = []
    for n_e_t in range(n_e + 1):
        d = oracle_max_over_split(n_a, n_b, n_e_t, n_e - n_e_t)[0]
        if worst is None or d < worst:
            worst = d
            arg = [n_e_t]
        elif d == worst:
            arg.append(n_e_t)
    return worst, arg


def split_max_sweep(na_max, nb_max, ne_max):
    checked = 0
    bad = []
    for n_a in range(1, na_max + 1):
        for n_b in range(1, nb_max + 1):
            for n_e_t in range(ne_max + 1):
                for n_e_r in range(ne_max + 1):
                    checked += 1
                    dof, n_b_t = sdof_active_max(n_a, n_b, n_e_t, n_e_r)
                    best, arg = oracle_max_over_split(n_a, n_b, n_e_t, n_e_r)
                    if dof != best or n_b_t not in arg:
                        bad.append((n_a, n_b, n_e_t, n_e_r, dof, n_b_t, best))
    return checked, bad


def worst_case_sweep(na_max, nb_max, ne_max):
    """Return ``(checked, formula_mismatches, argmin_not_at_extreme, more_bob_than_eve_but_zero)``."""
    checked = 0
    bad = []
    cor1 = []
    cor2 = []
    for n_a in range(1, na_max + 1):
        for n_b in range(1, nb_max + 1):
            for n_e in range(ne_max + 1):
                checked += 1
                wc = worst_case_sdof(n_a, n_b, n_e)
                worst, arg = oracle_worst_case(n_a, n_b, n_e)
                if wc != worst:
                    bad.append((n_a, n_b, n_e, wc, worst))
                if 0 not in arg and n_e not in arg:
                    cor1.append((n_a, n_b, n_e, worst, tuple(arg)))
                if n_b > n_e and worst < 1:
                    cor2.append((n_a, n_b, n_e, worst))
    return checked, bad, cor1, cor2


def helper_max_sweep(nsum_max, ns_max, nep_max):
    checked = 0
    bad = []
    for n_sum in range(nsum_max + 1):
        for n_s in range(ns_max + 1):
            for n_ep in range(nep_max + 1):
                checked += 1
                best = max(helper_g(n_s, n_h, n_sum - n_h, n_ep) for n_h in range(n_sum + 1))
                closed = helper_sdof_max(n_sum, n_s, n_ep)
                n_h = helper_optimal_nh(n_sum, n_s, n_ep)
                at_nh = helper_g(n_s, n_h, n_sum - n_h, n_ep) if 0 <= n_h <= n_sum else -1
                if not (best == closed == at_nh):
                    bad.append((n_sum, n_s, n_ep, closed, n_h, at_nh, best))
    return checked, bad


def budget_sweep(nsum_max, ns_max, nep_max):
    checked = 0
    bad = []
    for n_sum in range(nsum_max + 1):
        for n_s in range(ns_max + 1):
            for n_ep in range(nep_max + 1):
                for n_h in range(n_sum + 1):
                    n_d = n_sum - n_h
                    checked += 1
                    s1, s2 = s1_s2(n_s, n_h, n_d, n_ep)
                    k = greedy_select_count(pos(n_s - n_ep), s1, s2, n_d, n_s)
                    g = helper_g(n_s, n_h, n_d, n_ep)
                    if k != g:
                        bad.append((n_s, n_h, n_d, n_ep, k, g))
    return checked, bad
