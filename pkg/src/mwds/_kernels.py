"""Hot kernels over the closed-neighbourhood CSR arrays.

Solution state is three arrays: ``in_set`` (bool), ``cover`` (int64 cover
counts) and ``stats`` (int64 ``[total_weight, num_nondominated]``). Every
kernel with a ``_np`` twin is selected through :func:`pick`; the rest are
compiled when numba is on and run as plain Python otherwise.
"""
import numpy as np

from ._jit import njit, now, pick
from ._rng import rng_int

ADD, DEL, SWAP = 0, 1, 2
FORBID_INSERT, FORBID_REMOVE = 0, 1


# --- neighbourhood counts -------------------------------------------------

def _cover_gain_loop(cptr, cidx, cover, out):
    for i in range(len(cover)):
        c = 0
        for p in range(cptr[i], cptr[i + 1]):
            if cover[cidx[p]] == 0:
                c += 1
        out[i] = c


def _cover_gain_np(cptr, cidx, cover, out):
    out[:] = np.add.reduceat((cover[cidx] == 0).astype(np.int64), cptr[:-1])


def _critical_loop(cptr, cidx, cover, out):
    for i in range(len(cover)):
        c = 0
        for p in range(cptr[i], cptr[i + 1]):
            if cover[cidx[p]] == 1:
                c += 1
        out[i] = c


def _critical_np(cptr, cidx, cover, out):
    out[:] = np.add.reduceat((cover[cidx] == 1).astype(np.int64), cptr[:-1])


def _recount_loop(cptr, cidx, w, in_set, cover, stats):
    n = len(w)
    total = 0
    for i in range(n):
        c = 0
        for p in range(cptr[i], cptr[i + 1]):
            if in_set[cidx[p]]:
                c += 1
        cover[i] = c
        if in_set[i]:
            total += w[i]
    nd = 0
    for i in range(n):
        if cover[i] == 0:
            nd += 1
    stats[0] = total
    stats[1] = nd


def _recount_np(cptr, cidx, w, in_set, cover, stats):
    cover[:] = np.add.reduceat(in_set[cidx].astype(np.int64), cptr[:-1])
    stats[0] = w[in_set].sum()
    stats[1] = np.count_nonzero(cover == 0)


cover_gain = pick(_cover_gain_loop, _cover_gain_np)
critical = pick(_critical_loop, _critical_np)
recount = pick(_recount_loop, _recount_np)


# --- single-vertex updates ------------------------------------------------

def _apply_add_loop(cptr, cidx, w, in_set, cover, stats, i):
    in_set[i] = True
    stats[0] += w[i]
    for p in range(cptr[i], cptr[i + 1]):
        k = cidx[p]
        if cover[k] == 0:
            stats[1] -= 1
        cover[k] += 1


def _apply_add_np(cptr, cidx, w, in_set, cover, stats, i):
    nb = cidx[cptr[i]:cptr[i + 1]]
    in_set[i] = True
    stats[0] += w[i]
    stats[1] -= np.count_nonzero(cover[nb] == 0)
    cover[nb] += 1


def _apply_remove_loop(cptr, cidx, w, in_set, cover, stats, i):
    in_set[i] = False
    stats[0] -= w[i]
    for p in range(cptr[i], cptr[i + 1]):
        k = cidx[p]
        cover[k] -= 1
        if cover[k] == 0:
            stats[1] += 1


def _apply_remove_np(cptr, cidx, w, in_set, cover, stats, i):
    nb = cidx[cptr[i]:cptr[i + 1]]
    in_set[i] = False
    stats[0] -= w[i]
    cover[nb] -= 1
    stats[1] += np.count_nonzero(cover[nb] == 0)


apply_add = pick(_apply_add_loop, _apply_add_np)
apply_remove = pick(_apply_remove_loop, _apply_remove_np)


@njit
def freq_in(ft, fe, v, t):
    if t >= 0:
        fe[v] = t


@njit
def freq_out(ft, fe, v, t):
    if t >= 0:
        ft[v] += t - fe[v]
        fe[v] = -1


# --- node elimination -----------------------------------------------------

def _redundant_best_loop(cptr, cidx, w, in_set, cover):
    best = -1
    for j in range(len(w)):
        if not in_set[j]:
            continue
        if best >= 0 and w[j] <= w[best]:
            continue
        redundant = True
        for p in range(cptr[j], cptr[j + 1]):
            if cover[cidx[p]] < 2:
                redundant = False
                break
        if redundant:
            best = j
    return best


def _redundant_best_np(cptr, cidx, w, in_set, cover):
    crit = np.add.reduceat((cover[cidx] == 1).astype(np.int64), cptr[:-1])
    ids = np.flatnonzero(in_set & (crit == 0))
    if len(ids) == 0:
        return -1
    return ids[np.argmax(w[ids])]


redundant_best = pick(_redundant_best_loop, _redundant_best_np)


@njit
def eliminate(cptr, cidx, w, in_set, cover, stats, ft, fe, t):
    """Drop the heaviest redundant member (smallest id on ties) until none is left."""
    removed = 0
    while True:
        j = redundant_best(cptr, cidx, w, in_set, cover)
        if j < 0:
            return removed
        apply_remove(cptr, cidx, w, in_set, cover, stats, j)
        freq_out(ft, fe, j, t)
        removed += 1


@njit
def audit(cptr, cidx, w, in_set, cover, stats, sc_cover, sc_stats, sc_crit, out):
    """Recount from scratch; out += [counter mismatches, redundant members, audits]."""
    recount(cptr, cidx, w, in_set, sc_cover, sc_stats)
    bad = 0
    for i in range(len(w)):
        if sc_cover[i] != cover[i]:
            bad += 1
    if sc_stats[0] != stats[0] or sc_stats[1] != stats[1]:
        bad += 1
    critical(cptr, cidx, sc_cover, sc_crit)
    red = 0
    for j in range(len(w)):
        if in_set[j] and sc_crit[j] == 0:
            red += 1
    out[0] += bad
    out[1] += red
    out[2] += 1


# --- construction and perturbation ----------------------------------------

def _nth_positive_loop(arr, rng):
    count = 0
    for v in range(len(arr)):
        if arr[v] > 0:
            count += 1
    r = rng_int(rng, count)
    for v in range(len(arr)):
        if arr[v] > 0:
            if r == 0:
                return v
            r -= 1
    return -1


def _nth_positive_np(arr, rng):
    ids = np.flatnonzero(arr > 0)
    return ids[rng_int(rng, len(ids))]


nth_positive = pick(_nth_positive_loop, _nth_positive_np)


@njit
def construct(cptr, cidx, w, in_set, cover, stats, rng):
    gain = np.empty(len(w), dtype=np.int64)
    while stats[1] > 0:
        cover_gain(cptr, cidx, cover, gain)
        v = nth_positive(gain, rng)
        apply_add(cptr, cidx, w, in_set, cover, stats, v)


@njit
def ruin(cptr, cidx, w, in_set, cover, stats, q, rng):
    members = np.flatnonzero(in_set)
    size = len(members)
    for t in range(min(q, size)):
        r = t + rng_int(rng, size - t)
        v = members[r]
        members[r] = members[t]
        members[t] = v
        apply_remove(cptr, cidx, w, in_set, cover, stats, v)


def _greedy_scores_loop(cptr, cidx, w, cover, delta, wsum):
    for i in range(len(w)):
        d = 0
        s = 0
        for p in range(cptr[i], cptr[i + 1]):
            k = cidx[p]
            if cover[k] == 0:
                d += 1
                s += w[k]
        delta[i] = d
        wsum[i] = s


def _greedy_scores_np(cptr, cidx, w, cover, delta, wsum):
    unc = (cover[cidx] == 0).astype(np.int64)
    delta[:] = np.add.reduceat(unc, cptr[:-1])
    wsum[:] = np.add.reduceat(unc * w[cidx], cptr[:-1])


greedy_scores = pick(_greedy_scores_loop, _greedy_scores_np)


@njit
def greedy_pick(w, delta, num, second, rng):
    """Vertex of highest (or second-highest) ``num/w`` among those with delta > 0.

    Ratios are compared by cross-multiplication; ties are uniform.
    """
    n = len(w)
    bn, bd, t1 = -1, 1, 0
    for i in range(n):
        if delta[i] <= 0:
            continue
        c = num[i] * bd - bn * w[i]
        if bn < 0 or c > 0:
            bn, bd, t1 = num[i], w[i], 1
        elif c == 0:
            t1 += 1
    if t1 == 0:
        return -1
    # target value (tn/td) and its multiplicity
    tn, td, cnt = bn, bd, t1
    if second and t1 == 1:
        sn, sd, t2 = -1, 1, 0
        for i in range(n):
            if delta[i] <= 0 or num[i] * bd - bn * w[i] >= 0:
                continue
            c = num[i] * sd - sn * w[i]
            if sn < 0 or c > 0:
                sn, sd, t2 = num[i], w[i], 1
            elif c == 0:
                t2 += 1
        if t2 > 0:
            tn, td, cnt = sn, sd, t2
    r = rng_int(rng, cnt)
    for i in range(n):
        if delta[i] > 0 and num[i] * td == tn * w[i]:
            if r == 0:
                return i
            r -= 1
    return -1


@njit
def reconstruct(cptr, cidx, w, in_set, cover, stats, rng, crit_counts):
    n = len(w)
    delta = np.empty(n, dtype=np.int64)
    wsum = np.empty(n, dtype=np.int64)
    while stats[1] > 0:
        c = rng_int(rng, 4)
        crit_counts[c] += 1
        greedy_scores(cptr, cidx, w, cover, delta, wsum)
        if c < 2:
            v = greedy_pick(w, delta, delta, c == 1, rng)
        else:
            v = greedy_pick(w, delta, wsum, c == 3, rng)
        apply_add(cptr, cidx, w, in_set, cover, stats, v)


@njit
def ruin_count(rho, size):
    # tolerance absorbs products such as 0.29 * 100 = 28.999999999999996
    return int(np.floor(rho * size + 1e-9))


@njit
def perturb(cptr, cidx, w, in_set, cover, stats, rho, rng, crit_counts, ft, fe, t):
    size = 0
    for v in range(len(w)):
        if in_set[v]:
            size += 1
    ruin(cptr, cidx, w, in_set, cover, stats, ruin_count(rho, size), rng)
    reconstruct(cptr, cidx, w, in_set, cover, stats, rng, crit_counts)
    eliminate(cptr, cidx, w, in_set, cover, stats, ft, fe, t)


# --- tabu memory and move selection ---------------------------------------

@njit
def tabu_blocking(seq, meta, cap, kind, v):
    """Push index of the active label (kind, v), or -1 when not tabu."""
    s = seq[kind, v]
    if s >= 0 and s >= meta[0] - cap:
        return s
    return -1


@njit
def tabu_push(seq, ring, meta, kind, v):
    s = meta[0]
    cap = ring.shape[0]
    ring[s % cap, 0] = kind
    ring[s % cap, 1] = v
    seq[kind, v] = s
    meta[0] = s + 1


@njit
def _before(p, q, kind, va, vb, delta):
    if delta[p] != delta[q]:
        return delta[p] < delta[q]
    if kind[p] != kind[q]:
        return kind[p] < kind[q]
    if va[p] != va[q]:
        return va[p] < va[q]
    return vb[p] < vb[q]


def _select_move_loop(c, kind, va, vb, dw, dnd, delta, seq, meta, cap, weight, nd, f_best):
    """Index of the best admissible candidate.

    Tabu candidates are admissible only if they yield a feasible solution
    lighter than ``f_best``. If nothing is admissible the candidate whose
    blocking label is oldest is returned.
    """
    best = -1
    fb = -1
    fblk = 0
    for p in range(c):
        k = kind[p]
        if k == ADD:
            blk = tabu_blocking(seq, meta, cap, FORBID_INSERT, va[p])
        elif k == DEL:
            blk = tabu_blocking(seq, meta, cap, FORBID_REMOVE, va[p])
        else:
            blk = max(tabu_blocking(seq, meta, cap, FORBID_INSERT, va[p]),
                      tabu_blocking(seq, meta, cap, FORBID_REMOVE, vb[p]))
        if blk < 0 or (nd + dnd[p] == 0 and weight + dw[p] < f_best):
            if best < 0 or _before(p, best, kind, va, vb, delta):
                best = p
        elif fb < 0 or blk < fblk or (blk == fblk and _before(p, fb, kind, va, vb, delta)):
            fb = p
            fblk = blk
    return best if best >= 0 else fb


def _select_move_np(c, kind, va, vb, dw, dnd, delta, seq, meta, cap, weight, nd, f_best):
    k, a, b, d = kind[:c], va[:c], vb[:c], delta[:c]
    lo = meta[0] - cap

    def active(label, v):
        s = seq[label, v]
        return np.where((s >= 0) & (s >= lo), s, -1)

    blk_ins = active(FORBID_INSERT, a)
    blk = np.where(k == ADD, blk_ins,
                   np.where(k == DEL, active(FORBID_REMOVE, a),
                            np.maximum(blk_ins, active(FORBID_REMOVE, np.maximum(b, 0)))))
    ok = (blk < 0) | ((nd + dnd[:c] == 0) & (weight + dw[:c] < f_best))
    if ok.any():
        idx = np.flatnonzero(ok)
        return idx[np.lexsort((b[idx], a[idx], k[idx], d[idx]))[0]]
    return np.lexsort((b, a, k, d, blk))[0]


select_move = pick(_select_move_loop, _select_move_np)


# --- SWAP evaluation ------------------------------------------------------

def _swap_eval_loop(cptr, cidx, w, cover, top_a, top_d, mark, dw, dnd, off):
    kd = len(top_d)
    for a in range(len(top_a)):
        i = top_a[a]
        gain = 0
        for p in range(cptr[i], cptr[i + 1]):
            k = cidx[p]
            mark[k] = True
            if cover[k] == 0:
                gain += 1
        for b in range(kd):
            j = top_d[b]
            loss = 0
            for p in range(cptr[j], cptr[j + 1]):
                k = cidx[p]
                if cover[k] == 1 and not mark[k]:
                    loss += 1
            dw[off + a * kd + b] = w[i] - w[j]
            dnd[off + a * kd + b] = loss - gain
        for p in range(cptr[i], cptr[i + 1]):
            mark[cidx[p]] = False


def _swap_eval_np(cptr, cidx, w, cover, top_a, top_d, mark, dw, dnd, off):
    ka, kd, n = len(top_a), len(top_d), len(w)
    ina = np.zeros((ka, n), dtype=np.int64)
    crit_d = np.zeros((kd, n), dtype=np.int64)
    one = (cover == 1).astype(np.int64)
    for a in range(ka):
        ina[a, cidx[cptr[top_a[a]]:cptr[top_a[a] + 1]]] = 1
    for b in range(kd):
        nb = cidx[cptr[top_d[b]]:cptr[top_d[b] + 1]]
        crit_d[b, nb] = one[nb]
    shared = ina @ crit_d.T
    gain = ina @ (cover == 0).astype(np.int64)
    loss = crit_d.sum(axis=1)[None, :] - shared
    dnd[off:off + ka * kd] = (loss - gain[:, None]).ravel()
    dw[off:off + ka * kd] = (w[top_a][:, None] - w[top_d][None, :]).ravel()


swap_eval = pick(_swap_eval_loop, _swap_eval_np)


@njit
def ceil_sqrt(n):
    k = int(np.sqrt(n))
    while k * k < n:
        k += 1
    while k > 0 and (k - 1) * (k - 1) >= n:
        k -= 1
    return k


def _neighborhood_loop(cptr, cidx, w, pen, in_set, cover, use_swap, k,
                 gain, crit, add_ids, del_ids, mark, kind, va, vb, dw, dnd, delta):
    """Fill the candidate arrays with ADD, DEL and restricted SWAP moves.

    Returns ``(count, n_swaps)``.
    """
    cover_gain(cptr, cidx, cover, gain)
    critical(cptr, cidx, cover, crit)
    na = 0
    nd = 0
    for v in range(len(w)):
        if in_set[v]:
            del_ids[nd] = v
            nd += 1
        else:
            add_ids[na] = v
            na += 1
    c = 0
    for a in range(na):
        v = add_ids[a]
        kind[c] = ADD
        va[c] = v
        vb[c] = -1
        dw[c] = w[v]
        dnd[c] = -gain[v]
        delta[c] = dw[c] + pen * dnd[c]
        c += 1
    for b in range(nd):
        v = del_ids[b]
        kind[c] = DEL
        va[c] = v
        vb[c] = -1
        dw[c] = -w[v]
        dnd[c] = crit[v]
        delta[c] = dw[c] + pen * dnd[c]
        c += 1
    nsw = 0
    if use_swap and na > 0 and nd > 0:
        ka = min(k, na)
        kd = min(k, nd)
        top_a = add_ids[np.argsort(delta[:na], kind="mergesort")[:ka]]
        top_d = del_ids[np.argsort(delta[na:na + nd], kind="mergesort")[:kd]]
        swap_eval(cptr, cidx, w, cover, top_a, top_d, mark, dw, dnd, c)
        for a in range(ka):
            for b in range(kd):
                p = c + a * kd + b
                kind[p] = SWAP
                va[p] = top_a[a]
                vb[p] = top_d[b]
                delta[p] = dw[p] + pen * dnd[p]
        nsw = ka * kd
        c += nsw
    return c, nsw


def _neighborhood_np(cptr, cidx, w, pen, in_set, cover, use_swap, k,
                     gain, crit, add_ids, del_ids, mark, kind, va, vb, dw, dnd, delta):
    _cover_gain_np(cptr, cidx, cover, gain)
    _critical_np(cptr, cidx, cover, crit)
    adds = np.flatnonzero(~in_set)
    dels = np.flatnonzero(in_set)
    na, nd = len(adds), len(dels)
    c = na + nd
    kind[:na] = ADD
    kind[na:c] = DEL
    va[:na] = adds
    va[na:c] = dels
    vb[:c] = -1
    dw[:na] = w[adds]
    dw[na:c] = -w[dels]
    dnd[:na] = -gain[adds]
    dnd[na:c] = crit[dels]
    delta[:c] = dw[:c] + pen * dnd[:c]
    nsw = 0
    if use_swap and na > 0 and nd > 0:
        ka, kd = min(k, na), min(k, nd)
        top_a = adds[np.argsort(delta[:na], kind="mergesort")[:ka]]
        top_d = dels[np.argsort(delta[na:c], kind="mergesort")[:kd]]
        _swap_eval_np(cptr, cidx, w, cover, top_a, top_d, mark, dw, dnd, c)
        nsw = ka * kd
        s = slice(c, c + nsw)
        kind[s] = SWAP
        va[s] = np.repeat(top_a, kd)
        vb[s] = np.tile(top_d, ka)
        delta[s] = dw[s] + pen * dnd[s]
        c += nsw
    return c, nsw


neighborhood = pick(_neighborhood_loop, _neighborhood_np)


# --- tabu search loop -----------------------------------------------------

@njit
def search_loop(cptr, cidx, w, wmax, in_set, cover, stats, best_in, best_stats,
                seq, ring, meta, ft, fe, rng, i_max, i_ni, i_pert, rho,
                alpha_min, alpha_max, alpha_step, use_swap,
                tr_alpha, tr_f, tr_w, tr_nd, tr_feas, tr_new, tr_swaps,
                crit_counts, audit_out, do_audit):
    """Tabu search from the current solution; returns the number of iterations.

    ``fe`` must hold the entry time (0) of every initial member; all open
    frequency spans are closed on return.
    """
    n = len(w)
    cap = ring.shape[0]
    k = ceil_sqrt(n)
    ncap = n + k * k
    gain = np.empty(n, dtype=np.int64)
    crit = np.empty(n, dtype=np.int64)
    add_ids = np.empty(n, dtype=np.int64)
    del_ids = np.empty(n, dtype=np.int64)
    mark = np.zeros(n, dtype=np.bool_)
    kind = np.empty(ncap, dtype=np.int64)
    va = np.empty(ncap, dtype=np.int64)
    vb = np.empty(ncap, dtype=np.int64)
    dw = np.empty(ncap, dtype=np.int64)
    dnd = np.empty(ncap, dtype=np.int64)
    delta = np.empty(ncap, dtype=np.float64)
    sc_in = np.empty(n, dtype=np.bool_)
    sc_cover = np.empty(n, dtype=np.int64)
    sc_stats = np.empty(2, dtype=np.int64)
    au_cover = np.empty(n, dtype=np.int64)
    au_stats = np.empty(2, dtype=np.int64)

    eliminate(cptr, cidx, w, in_set, cover, stats, ft, fe, 0)
    if do_audit:
        audit(cptr, cidx, w, in_set, cover, stats, au_cover, au_stats, crit, audit_out)
    best_in[:] = in_set
    best_stats[:] = stats

    alpha = alpha_min
    it = 0
    ini = 0
    while ini < i_ni and it < i_max:
        if alpha < alpha_max:
            alpha += alpha_step
        else:
            alpha = alpha_min
        pen = alpha * wmax
        c, nsw = neighborhood(cptr, cidx, w, pen, in_set, cover, use_swap, k, gain, crit,
                              add_ids, del_ids, mark, kind, va, vb, dw, dnd, delta)
        p = select_move(c, kind, va, vb, dw, dnd, delta, seq, meta, cap,
                        stats[0], stats[1], best_stats[0])
        t = it + 1
        if kind[p] == ADD:
            apply_add(cptr, cidx, w, in_set, cover, stats, va[p])
            freq_in(ft, fe, va[p], t)
            tabu_push(seq, ring, meta, FORBID_REMOVE, va[p])
        elif kind[p] == DEL:
            apply_remove(cptr, cidx, w, in_set, cover, stats, va[p])
            freq_out(ft, fe, va[p], t)
            tabu_push(seq, ring, meta, FORBID_INSERT, va[p])
        else:
            apply_add(cptr, cidx, w, in_set, cover, stats, va[p])
            freq_in(ft, fe, va[p], t)
            apply_remove(cptr, cidx, w, in_set, cover, stats, vb[p])
            freq_out(ft, fe, vb[p], t)
            tabu_push(seq, ring, meta, FORBID_INSERT, vb[p])
        eliminate(cptr, cidx, w, in_set, cover, stats, ft, fe, t)
        if do_audit:
            audit(cptr, cidx, w, in_set, cover, stats, au_cover, au_stats, crit, audit_out)

        new_best = stats[1] == 0 and stats[0] < best_stats[0]
        if new_best:
            best_in[:] = in_set
            best_stats[:] = stats
            ini = 0
        tr_alpha[it] = alpha
        tr_f[it] = stats[0] + pen * stats[1]
        tr_w[it] = stats[0]
        tr_nd[it] = stats[1]
        tr_feas[it] = stats[1] == 0
        tr_new[it] = new_best
        tr_swaps[it] = nsw

        if it > 0 and it % i_pert == 0:
            sc_in[:] = best_in
            recount(cptr, cidx, w, sc_in, sc_cover, sc_stats)
            perturb(cptr, cidx, w, sc_in, sc_cover, sc_stats, rho, rng, crit_counts, ft, fe, -1)
            if do_audit:
                audit(cptr, cidx, w, sc_in, sc_cover, sc_stats, au_cover, au_stats, crit, audit_out)
            for v in range(n):
                if sc_in[v] != in_set[v]:
                    if sc_in[v]:
                        freq_in(ft, fe, v, t)
                    else:
                        freq_out(ft, fe, v, t)
            in_set[:] = sc_in
            cover[:] = sc_cover
            stats[:] = sc_stats
        ini += 1
        it += 1

    for v in range(n):
        if in_set[v]:
            freq_out(ft, fe, v, it)
    return it


# --- reduced integer program ----------------------------------------------

@njit
def lb_core(cptr, cidx, w, status, cover, used):
    """Disjoint-cover lower bound on the extra weight still needed.

    Uncovered vertices are taken in id order and kept when none of their
    undecided coverers is shared with an earlier kept vertex; each kept vertex
    contributes the lightest of its undecided coverers.
    """
    n = len(w)
    lb = 0
    for u in range(n):
        if cover[u] != 0:
            continue
        ok = True
        mn = -1
        for p in range(cptr[u], cptr[u + 1]):
            v = cidx[p]
            if status[v] == 0:
                if used[v]:
                    ok = False
                    break
                if mn < 0 or w[v] < mn:
                    mn = w[v]
        if ok and mn >= 0:
            for p in range(cptr[u], cptr[u + 1]):
                v = cidx[p]
                if status[v] == 0:
                    used[v] = True
            lb += mn
    for u in range(n):
        used[u] = False
    return lb


@njit
def _bnb_include(cptr, cidx, w, status, avail, cover, b, delta_uncov):
    status[b] = 1
    for p in range(cptr[b], cptr[b + 1]):
        u = cidx[p]
        avail[u] -= 1
        cover[u] += 1
        if cover[u] == 1:
            delta_uncov -= 1
    return delta_uncov


@njit
def _bnb_uninclude(cptr, cidx, w, status, avail, cover, b, delta_uncov):
    status[b] = 0
    for p in range(cptr[b], cptr[b + 1]):
        u = cidx[p]
        avail[u] += 1
        cover[u] -= 1
        if cover[u] == 0:
            delta_uncov += 1
    return delta_uncov


@njit
def _bnb_exclude(cptr, cidx, status, avail, cover, b, dead):
    status[b] = 2
    for p in range(cptr[b], cptr[b + 1]):
        u = cidx[p]
        avail[u] -= 1
        if cover[u] == 0 and avail[u] == 0:
            dead += 1
    return dead


@njit
def _bnb_unexclude(cptr, cidx, status, avail, cover, b, dead):
    status[b] = 0
    for p in range(cptr[b], cptr[b + 1]):
        u = cidx[p]
        if cover[u] == 0 and avail[u] == 0:
            dead -= 1
        avail[u] += 1
    return dead


@njit
def branch_and_bound(cptr, cidx, w, free, best_in, deadline, node_limit):
    """Depth-first search over the free vertices of the covering ILP.

    ``best_in`` holds the warm start on entry and the incumbent on exit.
    Returns ``(best_weight, exhausted, nodes)``.
    """
    n = len(w)
    status = np.zeros(n, dtype=np.int8)
    avail = np.zeros(n, dtype=np.int64)
    cover = np.zeros(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    flist = np.flatnonzero(free)
    for v in range(n):
        if free[v]:
            for p in range(cptr[v], cptr[v + 1]):
                avail[cidx[p]] += 1
        else:
            status[v] = 2
    dead = 0
    for u in range(n):
        if avail[u] == 0:
            dead += 1
    n_uncov = n
    best_w = 0
    for v in range(n):
        if best_in[v]:
            best_w += w[v]
    cost = 0
    stack_var = np.empty(len(flist) + 1, dtype=np.int64)
    stack_phase = np.empty(len(flist) + 1, dtype=np.int8)
    top = 0
    nodes = 0
    exhausted = True
    descend = True
    while True:
        if descend:
            nodes += 1
            if node_limit > 0 and nodes > node_limit:
                exhausted = False
                break
            if (nodes & 127) == 0 and now() > deadline:
                exhausted = False
                break
            prune = True
            if n_uncov == 0:
                if cost < best_w:
                    best_w = cost
                    for v in range(n):
                        best_in[v] = status[v] == 1
            elif dead == 0:
                if cost + lb_core(cptr, cidx, w, status, cover, used) < best_w:
                    prune = False
            if not prune:
                b = -1
                bsc = 0
                for q in range(len(flist)):
                    v = flist[q]
                    if status[v] != 0:
                        continue
                    sc = 0
                    for p in range(cptr[v], cptr[v + 1]):
                        if cover[cidx[p]] == 0:
                            sc += 1
                    if sc > bsc or (sc == bsc and sc > 0 and w[v] > w[b]):
                        b = v
                        bsc = sc
                stack_var[top] = b
                stack_phase[top] = 0
                top += 1
                n_uncov = _bnb_include(cptr, cidx, w, status, avail, cover, b, n_uncov)
                cost += w[b]
                continue
            descend = False
        if top == 0:
            break
        b = stack_var[top - 1]
        if stack_phase[top - 1] == 0:
            n_uncov = _bnb_uninclude(cptr, cidx, w, status, avail, cover, b, n_uncov)
            cost -= w[b]
            dead = _bnb_exclude(cptr, cidx, status, avail, cover, b, dead)
            stack_phase[top - 1] = 1
            descend = True
        else:
            dead = _bnb_unexclude(cptr, cidx, status, avail, cover, b, dead)
            top -= 1
    return best_w, exhausted, nodes
