"""The three verifiers, their transcripts, and acceptance measurement."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.stats import binomtest

from ..errors import CapExceeded, ParamOutOfRange
from ..polyspace import multiply
from ..rng import stream
from .context import BinaryContext, TernaryContext
from .proofs import Proof, size_repr

EXACT_CAP = 1 << 30
TRANSCRIPT_LANE = 1


@dataclass(frozen=True)
class Randomness:
    """Discrete choices (vertex/edge indices) plus one flat coefficient vector."""

    choices: tuple
    coeffs: np.ndarray = field(repr=False)


@dataclass
class QueryTranscript:
    kind: str
    index: int
    randomness: dict
    queries: list = field(repr=False)
    reads: tuple
    accept: bool
    groups: tuple | None = None
    sum_target: int | None = None

    @property
    def strong(self) -> bool | None:
        """2-color test: some query pair disagrees (None for the other tests)."""
        return None if self.groups is None else any(self.groups)

    @property
    def sum_ok(self) -> bool | None:
        if self.sum_target is None:
            return None
        return sum(self.reads) % 3 == self.sum_target

    def refs(self, proof: Proof) -> list:
        blocks = proof.context.blocks
        return [(b, blocks[b].index(q)) for b, q in self.queries]

    def to_json(self, proof: Proof | None = None) -> dict:
        out = {
            "test": self.kind,
            "index": self.index,
            "randomness": self.randomness,
            "reads": list(self.reads),
            "accept": self.accept,
        }
        if self.groups is not None:
            out["groups"] = list(self.groups)
        if self.sum_target is not None:
            out["sum_target"] = self.sum_target
        if proof is not None:
            out["refs"] = [[b, size_repr(i)] for b, i in self.refs(proof)]
        return out


def _bits(v) -> str:
    return (np.asarray(v, dtype=np.uint8) + ord("0")).tobytes().decode()


# --------------------------------------------------------------------------
# randomness layout


def _binary_layout(ctx: BinaryContext):
    sizes = [ctx.small.dim] + [ctx.big.dim] * 4 + [ctx.gsp.dim] * 2 + [ctx.hsp.dim] * 4
    return sizes, int(np.sum(sizes))


def _split(flat, sizes):
    return np.split(flat, np.cumsum(sizes)[:-1])


def _ternary_layout(ctx: TernaryContext, pair):
    i, j = pair
    sizes = [ctx.low[i].dim, ctx.high[i].dim, ctx.high[j].dim]
    return sizes, int(np.sum(sizes))


def sample_randomness(ctx, rng: np.random.Generator) -> Randomness:
    if isinstance(ctx, BinaryContext):
        inst = ctx.instance
        v = inst.active_v[int(rng.integers(len(inst.active_v)))]
        nbrs = inst.edges_of_v[v]
        e1 = nbrs[int(rng.integers(len(nbrs)))]
        e2 = nbrs[int(rng.integers(len(nbrs)))]
        _, total = _binary_layout(ctx)
        return Randomness((v, e1, e2), rng.integers(0, 2, total, dtype=np.uint8))
    pairs = ctx.instance.layer_pairs()
    pair = pairs[int(rng.integers(len(pairs)))]
    edges = ctx.instance.edges[pair]
    e = int(rng.integers(len(edges)))
    _, total = _ternary_layout(ctx, pair)
    return Randomness((pair, e), rng.integers(0, 3, total, dtype=np.uint8))


def randomness_space(ctx, cap: int = EXACT_CAP):
    """All ``(Randomness, weight)`` pairs; refuses when the space exceeds ``cap``."""
    if isinstance(ctx, BinaryContext):
        inst = ctx.instance
        _, total = _binary_layout(ctx)
        count = sum(len(inst.edges_of_v[v]) ** 2 for v in inst.active_v) * 2 ** total
        if count > cap:
            raise CapExceeded("randomness space", count, cap)
        base = Fraction(1, len(inst.active_v) * 2 ** total)
        for v in inst.active_v:
            nbrs = inst.edges_of_v[v]
            w = base / len(nbrs) ** 2
            for e1, e2 in product(nbrs, repeat=2):
                for flat in product(range(2), repeat=total):
                    yield Randomness((v, e1, e2), np.array(flat, dtype=np.uint8)), w
        return
    inst = ctx.instance
    pairs = inst.layer_pairs()
    count = sum(len(inst.edges[pr]) * 3 ** _ternary_layout(ctx, pr)[1] for pr in pairs)
    if count > cap:
        raise CapExceeded("randomness space", count, cap)
    for pr in pairs:
        _, total = _ternary_layout(ctx, pr)
        w = Fraction(1, len(pairs) * len(inst.edges[pr]) * 3 ** total)
        for e in range(len(inst.edges[pr])):
            for flat in product(range(3), repeat=total):
                yield Randomness((pr, e), np.array(flat, dtype=np.uint8)), w


def randomness_count(ctx) -> int:
    if isinstance(ctx, BinaryContext):
        inst = ctx.instance
        return sum(len(inst.edges_of_v[v]) ** 2 for v in inst.active_v) * 2 ** _binary_layout(ctx)[1]
    inst = ctx.instance
    return sum(len(inst.edges[pr]) * 3 ** _ternary_layout(ctx, pr)[1] for pr in inst.layer_pairs())


# --------------------------------------------------------------------------
# queries


def binary_queries(ctx: BinaryContext, rnd: Randomness):
    """The four query pairs ``(e_i, e_i + eta_i)`` and the blocks they go to."""
    inst = ctx.instance
    v, i1, i2 = rnd.choices
    ed_u, ed_w = inst.edges[i1], inst.edges[i2]
    f, e1, e2, e3, e4, g1, g2, h1, h2, h3, h4 = _split(rnd.coeffs, _binary_layout(ctx)[0])
    fu, fw = ctx.compose(f, ed_u), ctx.compose(f, ed_w)

    def prod(g, h):
        return multiply(g, ctx.gsp, h, ctx.hsp, ctx.big)

    one = np.zeros(ctx.big.dim, dtype=np.uint8)
    one[0] = 1
    g1c = g1.copy()
    g1c[0] ^= 1
    g2c = g2.copy()
    g2c[0] ^= 1
    eta = [
        one ^ fu ^ prod(g1, h1),
        one ^ fu ^ prod(g1c, h2),
        fw ^ prod(g2, h3),
        fw ^ prod(g2c, h4),
    ]
    es = [e1, e2, e3, e4]
    pairs = [(es[k], es[k] ^ eta[k]) for k in range(4)]
    summary = {
        "v": inst.vertex_id("V", v),
        "u": inst.vertex_id("U", ed_u.u),
        "w": inst.vertex_id("U", ed_w.u),
        "u_equals_w": ed_u.u == ed_w.u,
        "f": _bits(f),
        "e": [_bits(x) for x in es],
        "g": [_bits(g1), _bits(g2)],
        "h": [_bits(x) for x in (h1, h2, h3, h4)],
    }
    return ed_u.u, ed_w.u, pairs, summary


def ternary_queries(ctx: TernaryContext, rnd: Randomness):
    inst = ctx.instance
    (i, j), e = rnd.choices
    edge = inst.edges[(i, j)][e]
    pc, g, f = _split(rnd.coeffs, _ternary_layout(ctx, (i, j))[0])
    sq = multiply(pc, ctx.low[i], pc, ctx.low[i], ctx.high[i]).astype(np.int64)
    sq[0] += 1
    g_prime = ((sq - g - ctx.compose(f, edge, i, j)) % 3).astype(np.uint8)
    bu, bv = ctx.block_id(i, edge.u), ctx.block_id(j, edge.v)
    queries = [(bu, g), (bu, g_prime), (bv, f)]
    summary = {
        "layers": [i, j],
        "u": inst.vertex_id(i, edge.u),
        "v": inst.vertex_id(j, edge.v),
        "p": _bits(pc),
        "g": _bits(g),
        "f": _bits(f),
    }
    return queries, pc, summary


def evaluate(proof: Proof, rnd: Randomness, index: int = -1) -> QueryTranscript:
    ctx = proof.context
    kind = ctx.config.kind
    if isinstance(ctx, TernaryContext):
        queries, pc, summary = ternary_queries(ctx, rnd)
        reads = tuple(proof.read(b, q) for b, q in queries)
        target = None
        table = proof.tables[queries[0][0]]
        point = getattr(table, "point", None)
        if point is not None:
            i = rnd.choices[0][0]
            pa = int(np.dot(_low_eval(proof, queries[0][0], ctx.low[i], point), pc) % 3)
            target = (pa * pa + 1) % 3
        return QueryTranscript(kind, index, summary, queries, reads, len(set(reads)) > 1, sum_target=target)
    bu, bw, pairs, summary = binary_queries(ctx, rnd)
    blocks = [bu, bu, bw, bw]
    if kind == "2c8u":
        queries = [(blocks[k], q) for k in range(4) for q in pairs[k]]
        reads = tuple(proof.read(b, q) for b, q in queries)
        groups = tuple(reads[2 * k] != reads[2 * k + 1] for k in range(4))
        return QueryTranscript(kind, index, summary, queries, reads, len(set(reads)) > 1, groups)
    # paired reads: (e1, e2), (e1+eta1, e2+eta2) on u; likewise (e3, e4) on w
    queries = [
        (bu, (pairs[0][0], pairs[1][0])),
        (bu, (pairs[0][1], pairs[1][1])),
        (bw, (pairs[2][0], pairs[3][0])),
        (bw, (pairs[2][1], pairs[3][1])),
    ]
    reads = tuple(proof.read(b, q) for b, q in queries)
    return QueryTranscript(kind, index, summary, queries, reads, len(set(reads)) > 1)


def _low_eval(proof, block_id, sp, point):
    cache = proof.__dict__.setdefault("_low_eval", {})
    ev = cache.get(block_id)
    if ev is None:
        ev = cache[block_id] = sp.eval_vector(point).astype(np.int64)
    return ev


def run_test(proof: Proof, seed: int, index: int = 0) -> QueryTranscript:
    """One execution of the verifier; transcript ``index`` under ``seed`` is always the same."""
    rng = stream(seed, index, TRANSCRIPT_LANE)
    return evaluate(proof, sample_randomness(proof.context, rng), index)


def transcripts(proof: Proof, seed: int, count: int, start: int = 0):
    for t in range(start, start + count):
        yield run_test(proof, seed, t)


def paired_reads(reads8) -> tuple:
    """Colors the 4-color test sees when the 2-color reads are grouped in pairs."""
    r = reads8
    return (2 * r[0] + r[2], 2 * r[1] + r[3], 2 * r[4] + r[6], 2 * r[5] + r[7])


# --------------------------------------------------------------------------
# acceptance


@dataclass
class AcceptanceResult:
    kind: str
    mode: str
    total: int
    accepts: int
    estimate: float
    ci: tuple
    exact: Fraction | None = None
    strong_failures: int | None = None
    sum_violations: int | None = None

    @property
    def rejections(self) -> int:
        return self.total - self.accepts

    def to_json(self) -> dict:
        out = {
            "test": self.kind,
            "mode": self.mode,
            "transcripts": self.total,
            "accepts": self.accepts,
            "rejections": self.rejections,
            "estimate": self.estimate,
            "ci95": list(self.ci),
        }
        if self.exact is not None:
            out["exact"] = {"num": self.exact.numerator, "den": self.exact.denominator}
        if self.strong_failures is not None:
            out["strong_failures"] = self.strong_failures
        if self.sum_violations is not None:
            out["sum_violations"] = self.sum_violations
        return out


def _chunk(proof, seed, lo, hi):
    acc = strong_bad = sum_bad = 0
    for t in range(lo, hi):
        tr = run_test(proof, seed, t)
        acc += tr.accept
        if tr.strong is False:
            strong_bad += 1
        if tr.sum_ok is False:
            sum_bad += 1
    return acc, strong_bad, sum_bad


def acceptance_probability(proof: Proof, mode: str = "montecarlo", samples: int = 10_000, seed: int | None = None,
                           workers: int = 1, cap: int = EXACT_CAP) -> AcceptanceResult:
    """Monte Carlo estimate with a Clopper-Pearson 95% interval, or the exact rational value."""
    kind = proof.config.kind
    strong = 0 if kind == "2c8u" else None
    if mode == "exact":
        total = randomness_count(proof.context)
        if total > cap:
            raise CapExceeded("randomness space", total, cap)
        prob, acc, sums, n = Fraction(0), 0, 0, 0
        for rnd, w in randomness_space(proof.context, cap):
            tr = evaluate(proof, rnd)
            n += 1
            if tr.accept:
                prob += w
                acc += 1
            if strong is not None and tr.strong is False:
                strong += 1
            if tr.sum_ok is False:
                sums += 1
        return AcceptanceResult(kind, "exact", n, acc, float(prob), (float(prob), float(prob)), prob, strong,
                                sums if kind == "3c3u" else None)
    if mode != "montecarlo":
        raise ParamOutOfRange(f"unknown mode {mode!r}")
    if samples < 1:
        raise ParamOutOfRange("samples must be positive")
    seed = proof.config.seed if seed is None else seed
    workers = max(1, int(workers))
    bounds = np.linspace(0, samples, workers + 1).astype(int)
    if workers == 1:
        parts = [_chunk(proof, seed, 0, samples)]
    else:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda k: _chunk(proof, seed, bounds[k], bounds[k + 1]), range(workers)))
    acc = sum(p[0] for p in parts)
    ci = binomtest(acc, samples).proportion_ci(0.95, method="exact")
    return AcceptanceResult(
        kind, "montecarlo", samples, acc, acc / samples, (float(ci.low), float(ci.high)), None,
        sum(p[1] for p in parts) if kind == "2c8u" else None,
        sum(p[2] for p in parts) if kind == "3c3u" else None,
    )
