"""Verifier configuration and the per-vertex blocks a proof is written on."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ..errors import ParamOutOfRange, ShapeMismatch
from ..folding import FoldingIdeal, clause_gadget, ideal_basis
from ..labelcover import BipartiteLC, MultilayeredLC
from ..polyspace import space, substitution_map

KINDS = ("2c8u", "4c4u", "3c3u")
UNIFORMITY = {"2c8u": 8, "4c4u": 4, "3c3u": 3}
COLORS = {"2c8u": 2, "4c4u": 4, "3c3u": 3}


@dataclass(frozen=True)
class VerifierConfig:
    """Which test to run, at which degree, from which seed.

    ``free_degree`` lifts the degree checks (multiple of 4 for the binary
    tests, at least 3 for the ternary one) for small experiments such as
    enumerating all randomness at d = 0.
    """

    kind: str
    d: int
    seed: int = 0
    free_degree: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParamOutOfRange(f"unknown test {self.kind!r}; expected one of {KINDS}")
        if self.d < 0:
            raise ParamOutOfRange("d must be non-negative")
        if self.free_degree:
            return
        if self.kind in ("2c8u", "4c4u") and (self.d % 4 or self.d < 4):
            raise ParamOutOfRange(f"{self.kind} needs d a positive multiple of 4, got {self.d}")
        if self.kind == "3c3u" and self.d < 3:
            raise ParamOutOfRange(f"3c3u needs d >= 3, got {self.d}")

    @property
    def warnings(self) -> list:
        out = []
        if self.kind in ("2c8u", "4c4u") and self.d < 8:
            out.append("d < 8: below the degree the soundness analysis assumes")
        if self.free_degree:
            out.append("degree checks disabled")
        return out

    @property
    def uniformity(self) -> int:
        return UNIFORMITY[self.kind]

    @property
    def colors(self) -> int:
        return COLORS[self.kind]

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": self.d, "seed": self.seed, "free_degree": self.free_degree}


@dataclass(frozen=True)
class Block:
    """One vertex block: the quotient ``ambient / ideal`` owned by a label-cover vertex."""

    id: int
    owner: str
    ideal: FoldingIdeal = field(repr=False)
    paired: bool = False

    @property
    def ambient(self):
        return self.ideal.ambient

    @property
    def base_size(self) -> int:
        return self.ideal.quotient.size

    @property
    def size(self) -> int:
        return self.base_size ** 2 if self.paired else self.base_size

    def index(self, query) -> int:
        """Coset index of a query (a coefficient vector, or a pair of them)."""
        q = self.ideal.quotient
        if self.paired:
            return int(q.index(query[0])) * self.base_size + int(q.index(query[1]))
        return int(q.index(query))

    def key(self, query) -> bytes:
        q = self.ideal.quotient
        if self.paired:
            return q.key(query[0]) + b"|" + q.key(query[1])
        return q.key(query)

    def representative(self, index: int):
        q = self.ideal.quotient
        if self.paired:
            i, j = divmod(index, self.base_size)
            return q.representative(i), q.representative(j)
        return q.representative(index)


class BinaryContext:
    """Blocks and query spaces of the 2-color and 4-color tests over a bipartite instance."""

    def __init__(self, instance: BipartiteLC, config: VerifierConfig):
        if not isinstance(instance, BipartiteLC):
            raise ShapeMismatch(f"{config.kind} runs on a bipartite instance")
        if config.kind not in ("2c8u", "4c4u"):
            raise ShapeMismatch(f"{config.kind} is not a binary test")
        self.instance, self.config = instance, config
        r, d = instance.r, config.d
        self.p = 2
        self.big = space(3 * r, d, 2)
        self.small = space(r, d, 2)
        self.gsp = space(3 * r, d // 4, 2)
        self.hsp = space(3 * r, 3 * d // 4, 2)
        self.paired = config.kind == "4c4u"

    @cached_property
    def blocks(self) -> list:
        out = []
        for u in range(len(self.instance.U)):
            gadgets = [clause_gadget(c, 2, 3 * self.instance.r) for c in self.instance.gadget_clauses(u)]
            ideal = _shared_ideal(tuple(tuple(g.clause) for g in gadgets), 2, self.big.n, self.config.d - 3, self.big.d)
            out.append(Block(u, self.instance.vertex_id("U", u), ideal, self.paired))
        return out

    def compose(self, f, edge) -> np.ndarray:
        """``f o pi_edge`` written in the big space."""
        out = np.zeros(self.big.dim, dtype=np.uint8)
        out[substitution_map(self.small, self.big, edge.projection)] = f
        return out

    def point(self, u: int, label: int) -> np.ndarray:
        return np.array([(label >> t) & 1 for t in range(self.big.n)], dtype=np.uint8)


class TernaryContext:
    """Blocks and query spaces of the 3-color test over a layered instance."""

    def __init__(self, instance: MultilayeredLC, config: VerifierConfig):
        if not isinstance(instance, MultilayeredLC):
            raise ShapeMismatch("3c3u runs on a multilayered instance")
        if config.kind != "3c3u":
            raise ShapeMismatch(f"{config.kind} is not the ternary test")
        self.instance, self.config = instance, config
        self.p = 3
        d = config.d
        self.low = [space(m, d, 3) for m in instance.m]
        self.high = [space(m, 2 * d, 3) for m in instance.m]
        self.offsets = np.concatenate([[0], np.cumsum([len(L) for L in instance.layers])]).astype(int).tolist()
        self.paired = False

    def block_id(self, layer: int, idx: int) -> int:
        return self.offsets[layer] + idx

    def locate(self, block_id: int):
        layer = int(np.searchsorted(self.offsets, block_id, side="right")) - 1
        return layer, block_id - self.offsets[layer]

    @cached_property
    def blocks(self) -> list:
        out = []
        inst, d = self.instance, self.config.d
        for layer, vertices in enumerate(inst.layers):
            m = inst.m[layer]
            for idx in range(len(vertices)):
                clauses = tuple(tuple(c) for c in inst.gadget_clauses(layer, idx))
                ideal = _shared_ideal(clauses, 3, m, 2 * d - 6, 2 * d)
                out.append(Block(self.block_id(layer, idx), inst.vertex_id(layer, idx), ideal))
        return out

    def compose(self, f, edge, i: int, j: int) -> np.ndarray:
        out = np.zeros(self.high[i].dim, dtype=np.uint8)
        out[substitution_map(self.high[j], self.high[i], edge.projection)] = f
        return out


@lru_cache(maxsize=4096)
def _shared_ideal(clauses: tuple, p: int, n: int, mult_degree: int, ambient_degree: int) -> FoldingIdeal:
    gadgets = [clause_gadget(c, p, n) for c in clauses]
    return ideal_basis(gadgets, mult_degree, space(n, ambient_degree, p))


def make_context(instance, config: VerifierConfig):
    if config.kind == "3c3u":
        return TernaryContext(instance, config)
    return BinaryContext(instance, config)
