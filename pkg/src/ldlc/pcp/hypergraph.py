"""Explicit weighted hypergraphs built from the verifier's query distribution."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import CapExceeded, ParamOutOfRange
from .proofs import Proof, size_repr
from .verifiers import EXACT_CAP, evaluate, randomness_count, randomness_space, run_test

INDEPENDENT_CAP = 30


@dataclass
class WeightedHypergraph:
    """Vertices are ``(block, coset index)``; edges are multisets with rational weights.

    ``orders`` keeps, per edge, the query order of the first transcript that
    produced it (the 4-color group check needs to know which reads pair up).
    """

    uniformity: int
    blocks: list
    edges: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)
    mode: str = "exact"
    samples: int | None = None

    @property
    def vertex_count(self) -> int:
        return sum(b["size"] for b in self.blocks)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.edges.values(), Fraction(0))

    def vertices_in_edges(self) -> list:
        return sorted({v for e in self.edges for v in e})

    def validate(self) -> bool:
        for e, w in self.edges.items():
            if len(e) != self.uniformity or w <= 0:
                return False
            for b, i in e:
                if not (0 <= b < len(self.blocks) and 0 <= i < self.blocks[b]["size"]):
                    return False
        return True

    def induced(self, vertices) -> "WeightedHypergraph":
        """Edges lying wholly inside ``vertices`` (weights kept as they are)."""
        keep = set(vertices)
        edges = {e: w for e, w in self.edges.items() if set(e) <= keep}
        return WeightedHypergraph(self.uniformity, self.blocks, edges, {e: self.orders[e] for e in edges}, self.mode, self.samples)

    def to_json(self) -> dict:
        edges = []
        for e in sorted(self.edges):
            w = self.edges[e]
            edges.append({
                "verts": [[b, size_repr(i)] for b, i in self.orders[e]],
                "weight_num": w.numerator,
                "weight_den": w.denominator,
            })
        return {
            "uniformity": self.uniformity,
            "mode": self.mode,
            "samples": self.samples,
            "vertex_count": size_repr(self.vertex_count),
            "blocks": [{"owner_vertex": b["owner"], "size": size_repr(b["size"])} for b in self.blocks],
            "edges": edges,
        }


def _block_list(ctx):
    return [{"owner": b.owner, "size": b.size} for b in ctx.blocks]


def materialize_hypergraph(proof: Proof, mode: str = "exact", budget: int = EXACT_CAP, seed: int | None = None) -> WeightedHypergraph:
    """Hyperedges of the verifier, from full enumeration or ``budget`` sampled transcripts.

    The proof only supplies the context (instance, test, degree); its values
    are never read here, so any proof of the right shape will do.
    """
    ctx = proof.context
    h = WeightedHypergraph(ctx.config.uniformity, _block_list(ctx), mode=mode)
    if mode == "exact":
        count = randomness_count(ctx)
        if count > budget:
            raise CapExceeded("randomness space", count, budget)
        acc: dict = {}
        for rnd, w in randomness_space(ctx, budget):
            tr = evaluate(proof, rnd)
            _add(h, tr.refs(proof), w, acc)
        h.edges = acc
        return h
    if mode != "sample":
        raise ParamOutOfRange(f"unknown mode {mode!r}")
    if budget < 1:
        raise ParamOutOfRange("budget must be positive")
    seed = ctx.config.seed if seed is None else seed
    counts: Counter = Counter()
    for t in range(budget):
        refs = run_test(proof, seed, t).refs(proof)
        key = tuple(sorted(refs))
        counts[key] += 1
        h.orders.setdefault(key, tuple(refs))
    h.edges = {k: Fraction(c, budget) for k, c in counts.items()}
    h.samples = budget
    return h


def _add(h, refs, w, acc):
    key = tuple(sorted(refs))
    acc[key] = acc.get(key, Fraction(0)) + w
    h.orders.setdefault(key, tuple(refs))


@dataclass
class ColoringVerdict:
    proper: bool
    violating: list
    checked: int
    group_failures: list | None = None

    def to_json(self) -> dict:
        out = {"proper": self.proper, "checked": self.checked, "violating": [[[b, size_repr(i)] for b, i in e] for e in self.violating]}
        if self.group_failures is not None:
            out["group_failures"] = [[[b, size_repr(i)] for b, i in e] for e in self.group_failures]
        return out


def _color_fn(coloring):
    if isinstance(coloring, Proof):
        return coloring.color_of_ref
    if isinstance(coloring, dict):
        return lambda b, i: coloring[(b, i)]
    return coloring


def check_coloring(h: WeightedHypergraph, coloring, k: int, groups: bool = False) -> ColoringVerdict:
    """Proper iff no edge is monochromatic.

    ``coloring`` is a proof, a dict keyed by ``(block, index)``, or a
    callable ``(block, index) -> color``. With ``groups`` (4-uniform only),
    also require one of the four F2 components to vary inside its pair of
    reads, the way the paired 2-color reads do.
    """
    color = _color_fn(coloring)
    bad, gbad = [], []
    for e in sorted(h.edges):
        cols = [color(b, i) for b, i in h.orders[e]]
        if any(not 0 <= c < k for c in cols):
            raise ParamOutOfRange(f"color outside [0, {k})")
        if len(set(cols)) == 1:
            bad.append(e)
        if groups:
            if h.uniformity != 4:
                raise ParamOutOfRange("group check applies to 4-uniform hypergraphs")
            hi = [c >> 1 for c in cols]
            lo = [c & 1 for c in cols]
            varied = [hi[0] != hi[1], lo[0] != lo[1], hi[2] != hi[3], lo[2] != lo[3]]
            if not any(varied):
                gbad.append(e)
    return ColoringVerdict(not bad and not gbad, bad, len(h.edges), gbad if groups else None)


def _edge_masks(h, vertices):
    pos = {v: t for t, v in enumerate(vertices)}
    masks = set()
    for e in h.edges:
        m = 0
        for v in e:
            m |= 1 << pos[v]
        masks.add(m)
    return sorted(masks)


def _branch(n, masks, order):
    """Largest subset of ``range(n)`` containing no mask, deciding vertices in ``order``."""
    by_vertex = [[m for m in masks if m >> v & 1] for v in range(n)]
    best = [0, 0]

    def go(t, chosen, size):
        if size + (n - t) <= best[0]:
            return
        if t == n:
            best[0], best[1] = size, chosen
            return
        v = order[t]
        with_v = chosen | (1 << v)
        if all(m & with_v != m for m in by_vertex[v]):
            go(t + 1, with_v, size + 1)
        go(t + 1, chosen, size)

    go(0, 0, 0)
    return best[0], best[1]


def independent_set_bruteforce(h: WeightedHypergraph, order: str = "natural", cap: int = INDEPENDENT_CAP):
    """Maximum independent set (no hyperedge wholly inside it), exact.

    Vertices outside every edge always belong to the answer, so only the
    vertices that appear in edges count against ``cap``. ``order`` picks the
    branching order: ``natural`` or ``degree`` (most constrained first).
    Returns ``(size, members)`` with members listed among edge vertices only.
    """
    verts = h.vertices_in_edges()
    if len(verts) > cap:
        raise CapExceeded("vertices in edges", len(verts), cap)
    free = h.vertex_count - len(verts)
    masks = _edge_masks(h, verts)
    n = len(verts)
    if order == "natural":
        seq = list(range(n))
    elif order == "degree":
        deg = [sum(m >> v & 1 for m in masks) for v in range(n)]
        seq = sorted(range(n), key=lambda v: (-deg[v], v))
    else:
        raise ParamOutOfRange(f"unknown order {order!r}")
    size, chosen = _branch(n, masks, seq)
    return free + size, [verts[t] for t in range(n) if chosen >> t & 1]


def independent_set_subsets(h: WeightedHypergraph, cap: int = 22):
    """Second, order-free search: scan all subsets of edge vertices at once (vectorized)."""
    verts = h.vertices_in_edges()
    n = len(verts)
    if n > cap:
        raise CapExceeded("vertices in edges", n, cap)
    masks = np.array(_edge_masks(h, verts), dtype=np.int64)
    subsets = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(subsets.shape, dtype=bool)
    for m in masks:
        ok &= (subsets & m) != m
    pop = np.zeros(subsets.shape, dtype=np.int64)
    for t in range(n):
        pop += (subsets >> t) & 1
    best = int(pop[ok].max()) if ok.any() else 0
    return h.vertex_count - n + best
