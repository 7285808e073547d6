"""Proofs: one table per vertex block, read through canonical coset labels."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import CapExceeded, NotSatisfying, ParamOutOfRange, ShapeMismatch
from ..folding import FoldedTable
from ..labelcover import label_bits
from .context import BinaryContext, Block, TernaryContext, make_context

EXPLICIT_CAP = 1 << 22


class BlockTable:
    """Values on one block. ``value`` takes a query (vector or pair of vectors)."""

    kind = "abstract"

    def value(self, block: Block, query) -> int:
        raise NotImplementedError

    def value_at(self, block: Block, index: int) -> int:
        return self.value(block, block.representative(index))

    def to_json(self, block: Block) -> dict:
        raise NotImplementedError


class ExplicitTable(BlockTable):
    """Values stored per coset index (pairs use index ``i * N + j``)."""

    kind = "explicit"

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.uint8)

    def value(self, block, query):
        return int(self.values[block.index(query)])

    def value_at(self, block, index):
        return int(self.values[index])

    def to_json(self, block):
        if block.paired:
            return {"type": "explicit", "paired": True, "values": (self.values + ord("0")).tobytes().decode()}
        out = FoldedTable(block.ideal, self.values).to_json()
        out["type"] = "explicit"
        return out


class PointTable(BlockTable):
    """Long code of a point: ``g -> g(a)``; for pairs, color ``2 g1(a) + g2(a)``."""

    kind = "point"

    def __init__(self, point):
        self.point = np.asarray(point, dtype=np.uint8)
        self._ev = {}

    def _eval(self, block, vec):
        ev = self._ev.get(block.ambient)
        if ev is None:
            ev = self._ev[block.ambient] = block.ambient.eval_vector(self.point).astype(np.int64)
        return int(np.dot(ev, vec) % block.ambient.p)

    def value(self, block, query):
        if block.paired:
            return 2 * self._eval(block, query[0]) + self._eval(block, query[1])
        return self._eval(block, query)

    def to_json(self, block):
        return {"type": "point", "point": "".join(str(int(x)) for x in self.point)}


class ConstantTable(BlockTable):
    kind = "constant"

    def __init__(self, color: int):
        self.color = int(color)

    def value(self, block, query):
        return self.color

    def value_at(self, block, index):
        return self.color

    def to_json(self, block):
        return {"type": "constant", "value": self.color}


class HashedTable(BlockTable):
    """Independent-looking uniform colors per coset, derived from a seed by hashing the coset label."""

    kind = "hashed"

    def __init__(self, seed: int, colors: int):
        self.seed, self.colors = int(seed), int(colors)

    def value(self, block, query):
        h = hashlib.blake2b(block.key(query), digest_size=8, key=f"{self.seed}:{block.id}".encode())
        return int.from_bytes(h.digest(), "little") % self.colors

    def to_json(self, block):
        return {"type": "hashed", "seed": self.seed, "colors": self.colors}


class Proof:
    """A coloring of every block of a context."""

    def __init__(self, context, tables: dict, label: str = ""):
        self.context = context
        self.tables = tables
        self.label = label
        missing = [b.id for b in context.blocks if b.id not in tables]
        if missing:
            raise ShapeMismatch(f"proof has no table for blocks {missing[:5]}")

    @property
    def config(self):
        return self.context.config

    def read(self, block_id: int, query) -> int:
        return self.tables[block_id].value(self.context.blocks[block_id], query)

    def color_of_ref(self, block_id: int, index: int) -> int:
        return self.tables[block_id].value_at(self.context.blocks[block_id], index)

    def to_json(self) -> dict:
        inst = self.context.instance
        return {
            "config": self.config.to_json(),
            "instance": {"type": inst.kind, "r": inst.r, "ell": getattr(inst, "ell", None), "T": getattr(inst, "T", None), "cnf": inst.cnf.to_json()},
            "label": self.label,
            "blocks": [{"owner": b.owner, "size": size_repr(b.size), "table": self.tables[b.id].to_json(b)} for b in self.context.blocks],
        }


def size_repr(n: int):
    """Block sizes and coset indices: ints when JSON-safe, else hex strings."""
    return n if n < (1 << 53) else hex(n)


def _table_from_json(obj, block):
    t = obj["type"]
    if t == "explicit":
        vals = np.frombuffer(obj["values"].encode(), dtype=np.uint8) - ord("0")
        if vals.shape[0] != block.size:
            raise ShapeMismatch(f"block {block.owner}: {vals.shape[0]} values for {block.size} vertices")
        return ExplicitTable(vals)
    if t == "point":
        return PointTable([int(c) for c in obj["point"]])
    if t == "constant":
        return ConstantTable(obj["value"])
    if t == "hashed":
        return HashedTable(obj["seed"], obj["colors"])
    raise ShapeMismatch(f"unknown table type {t!r}")


def proof_from_json(obj: dict, instance=None):
    from ..labelcover import CnfInstance, build_bipartite, build_multilayered
    from .context import VerifierConfig

    cfg = VerifierConfig(**obj["config"])
    meta = obj["instance"]
    if instance is None:
        cnf = CnfInstance.from_json(meta["cnf"])
        if meta["type"] == "bipartite":
            instance = build_bipartite(cnf, meta["r"])
        else:
            instance = build_multilayered(cnf, meta["r"], meta["ell"], T_override=meta["T"])
    ctx = make_context(instance, cfg)
    if len(obj["blocks"]) != len(ctx.blocks):
        raise ShapeMismatch("proof block count does not match the instance")
    tables = {b.id: _table_from_json(e["table"], b) for b, e in zip(ctx.blocks, obj["blocks"])}
    return Proof(ctx, tables, obj.get("label", ""))


def _explicit_from_point(block, point, cap):
    if block.size > cap:
        raise CapExceeded(f"explicit table for {block.owner}", block.size, cap)
    reps = block.ideal.quotient.representatives(cap).astype(np.int64)
    vals = reps @ block.ambient.eval_vector(point).astype(np.int64) % block.ambient.p
    if block.paired:
        return ExplicitTable((2 * vals[:, None] + vals[None, :]).reshape(-1))
    return ExplicitTable(vals)


def honest_proof(instance, assignment, config, explicit: bool | None = None, cap: int = EXPLICIT_CAP) -> Proof:
    """Folded long codes of the labels induced by a satisfying assignment.

    Binary tests get explicit per-coset tables when the blocks are small
    enough (``explicit=None`` decides automatically); the ternary test uses
    point tables, whose lift is the long code itself.
    """
    if not instance.cnf.satisfied_by(assignment):
        raise NotSatisfying("assignment does not satisfy the formula")
    ctx = make_context(instance, config)
    tables = {}
    if isinstance(ctx, BinaryContext):
        for b in ctx.blocks:
            pt = label_bits(instance.u_label(b.id, assignment), ctx.big.n)
            small = b.size <= cap
            if explicit or (explicit is None and small):
                tables[b.id] = _explicit_from_point(b, pt, cap)
            else:
                tables[b.id] = PointTable(pt)
    else:
        for b in ctx.blocks:
            layer, idx = ctx.locate(b.id)
            pt = label_bits(instance.label_from_assignment(layer, idx, assignment), instance.m[layer])
            tables[b.id] = _explicit_from_point(b, pt, cap) if explicit else PointTable(pt)
    return Proof(ctx, tables, "honest")


def point_proof(instance, labels, config) -> Proof:
    """Long codes of arbitrary per-block labels (each must satisfy its own clauses to be folded)."""
    ctx = make_context(instance, config)
    tables = {}
    for b in ctx.blocks:
        m = b.ambient.n
        tables[b.id] = PointTable(label_bits(int(labels[b.id]), m))
    return Proof(ctx, tables, "point")


def constant_proof(instance, config, color: int = 0) -> Proof:
    ctx = make_context(instance, config)
    if not 0 <= color < config.colors:
        raise ParamOutOfRange(f"color {color} outside [0, {config.colors})")
    return Proof(ctx, {b.id: ConstantTable(color) for b in ctx.blocks}, "constant")


def random_proof(instance, config, seed: int = 0, explicit: bool = False, cap: int = EXPLICIT_CAP) -> Proof:
    """Uniform random colors per vertex (explicit tables, or hashed ones for huge blocks)."""
    ctx = make_context(instance, config)
    tables = {}
    rng = np.random.default_rng(seed)
    for b in ctx.blocks:
        if explicit:
            if b.size > cap:
                raise CapExceeded(f"explicit table for {b.owner}", b.size, cap)
            tables[b.id] = ExplicitTable(rng.integers(0, config.colors, b.size))
        else:
            tables[b.id] = HashedTable(seed, config.colors)
    return Proof(ctx, tables, "random")
