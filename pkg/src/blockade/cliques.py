"""Maximum clique and maximum-weight clique search."""

from __future__ import annotations

from typing import Iterable, Sequence

from .graphs import UndirectedGraph, _as_mask
from ._kernels import max_weight_clique_bitset


def _mask_to_clique(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return tuple(out)


def max_weight_clique(
    g: UndirectedGraph,
    weights: Sequence[float],
    removed: Iterable[int] = (),
    lower_bound: float = 0.0,
    include: Iterable[int] = (),
) -> tuple[float, tuple[int, ...]]:
    """Maximum-weight clique with nonnegative weights.

    Cliques must contain every vertex of `include` and avoid `removed`.
    Returns (weight, clique); when no clique beats lower_bound strictly the
    result is (lower_bound, ()).
    """
    removed_mask = _as_mask(removed)
    include = tuple(sorted(set(include)))
    seed = 0
    cand = ~removed_mask & ((1 << g.n) - 1)
    for v in include:
        if removed_mask >> v & 1:
            return lower_bound, ()
        seed |= 1 << v
        cand &= g.masks[v]
    cand &= ~seed
    if any(w < 0 for w in weights):
        raise ValueError("clique weights must be nonnegative")
    best_w, best_mask = max_weight_clique_bitset(
        g.n, list(g.masks), list(weights), lower_bound, seed, cand
    )
    if best_mask == 0:
        return lower_bound, ()
    return best_w, _mask_to_clique(best_mask)


def clique_number(g: UndirectedGraph, removed: Iterable[int] = ()) -> int:
    """Size of a maximum clique of g minus the removed vertices."""
    w, _ = max_weight_clique(g, [1.0] * g.n, removed=removed)
    return int(round(w))


def clique_number_through(
    g: UndirectedGraph, v: int, removed: Iterable[int] = ()
) -> int:
    """Size of a maximum clique containing v (0 when v is removed)."""
    removed = frozenset(removed)
    if v in removed:
        return 0
    w, _ = max_weight_clique(g, [1.0] * g.n, removed=removed, include=[v])
    return int(round(w))


def maximalize_clique(
    g: UndirectedGraph, clique: Iterable[int], removed: Iterable[int] = ()
) -> tuple[int, ...]:
    """Greedily extend a clique to a maximal one, adding smallest ids first."""
    removed = frozenset(removed)
    members = set(clique)
    full = (1 << g.n) - 1
    cand = full & ~_as_mask(removed) & ~_as_mask(members)
    for v in members:
        cand &= g.masks[v]
    while cand:
        v = (cand & -cand).bit_length() - 1
        members.add(v)
        cand &= g.masks[v]
    return tuple(sorted(members))
