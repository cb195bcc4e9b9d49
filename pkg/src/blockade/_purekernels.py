"""Pure-Python twins of the compiled kernels.

Same signatures and bit-identical results as the Cython module `_fast`;
`_kernels` picks whichever is available at import time.
"""

from __future__ import annotations


def push_relabel_max_flow(
    n: int,
    s: int,
    t: int,
    head: list[int],
    cap: list[int],
    first: list[int],
    nxt: list[int],
) -> int:
    """Highest-label push-relabel with gap relabeling.

    The residual network is a forward-star list where arc e and e^1 are
    twins. Mutates cap in place to residual capacities and returns the flow
    value; on return every vertex other than s and t is balanced, so the
    residual encodes a genuine flow.
    """
    height = [0] * n
    excess = [0] * n
    count = [0] * (2 * n + 1)
    cur = list(first)

    height[s] = n
    count[0] = n - 1
    count[n] = 1

    e = first[s]
    while e != -1:
        c = cap[e]
        if c > 0:
            cap[e] = 0
            cap[e ^ 1] += c
            excess[head[e]] += c
            excess[s] -= c
        e = nxt[e]

    buckets: list[list[int]] = [[] for _ in range(2 * n + 1)]
    highest = 0
    for v in range(n):
        if v != s and v != t and excess[v] > 0:
            buckets[height[v]].append(v)
            if height[v] > highest:
                highest = height[v]

    while True:
        while highest >= 0 and not buckets[highest]:
            highest -= 1
        if highest < 0:
            break
        u = buckets[highest].pop()
        if u == s or u == t or excess[u] <= 0:
            continue
        if height[u] != highest:
            # Stale entry left behind by a gap relabel.
            buckets[height[u]].append(u)
            if height[u] > highest:
                highest = height[u]
            continue
        while excess[u] > 0:
            e = cur[u]
            if e == -1:
                old = height[u]
                count[old] -= 1
                if count[old] == 0 and old < n:
                    for v in range(n):
                        if v != s and old < height[v] < n:
                            count[height[v]] -= 1
                            height[v] = n + 1
                            count[n + 1] += 1
                    height[u] = n + 1
                else:
                    new_h = 2 * n
                    f = first[u]
                    while f != -1:
                        if cap[f] > 0 and height[head[f]] + 1 < new_h:
                            new_h = height[head[f]] + 1
                        f = nxt[f]
                    height[u] = new_h
                count[height[u]] += 1
                cur[u] = first[u]
                continue
            if cap[e] > 0 and height[u] == height[head[e]] + 1:
                v = head[e]
                d = excess[u] if excess[u] < cap[e] else cap[e]
                cap[e] -= d
                cap[e ^ 1] += d
                excess[u] -= d
                if excess[v] == 0 and v != s and v != t:
                    buckets[height[v]].append(v)
                    if height[v] > highest:
                        highest = height[v]
                excess[v] += d
            else:
                cur[u] = nxt[e]
        if excess[u] > 0:
            buckets[height[u]].append(u)
            if height[u] > highest:
                highest = height[u]

    return excess[t]


def max_weight_clique_bitset(
    n: int,
    masks: list[int],
    weights: list[float],
    lower_bound: float,
    seed_clique: int,
    seed_candidates: int,
) -> tuple[float, int]:
    """Branch and bound maximum-weight clique over bitset adjacency.

    Explores extensions of the partial clique seed_clique by vertices from
    seed_candidates (bitmasks). Weights must be nonnegative. Returns
    (best weight, best clique mask) where the weight includes the seed
    vertices; (lower_bound, 0) when nothing beats lower_bound strictly.
    """
    best_w = lower_bound
    best_mask = 0
    seed_w = 0.0
    m = seed_clique
    while m:
        v = (m & -m).bit_length() - 1
        seed_w += weights[v]
        m &= m - 1
    if seed_clique and seed_w > best_w:
        best_w = seed_w
        best_mask = seed_clique

    def bound(cand: int) -> float:
        # Greedy coloring bound: a clique takes at most one vertex per color
        # class, so sum the heaviest weight of each class.
        total = 0.0
        rest = cand
        while rest:
            cls_best = 0.0
            cls = 0
            sub = rest
            while sub:
                v = (sub & -sub).bit_length() - 1
                sub &= sub - 1
                if not cls & masks[v]:
                    cls |= 1 << v
                    if weights[v] > cls_best:
                        cls_best = weights[v]
            rest &= ~cls
            total += cls_best
        return total

    def expand(clique: int, cw: float, cand: int) -> None:
        nonlocal best_w, best_mask
        while cand:
            if cw + bound(cand) <= best_w + 1e-12:
                return
            v = cand.bit_length() - 1
            bit = 1 << v
            cand ^= bit
            new_w = cw + weights[v]
            if new_w > best_w:
                best_w = new_w
                best_mask = clique | bit
            sub = cand & masks[v]
            if sub:
                expand(clique | bit, new_w, sub)

    expand(seed_clique, seed_w, seed_candidates)
    return best_w, best_mask
