"""3SAT input, repeated bipartite label cover and its multilayered variant.

Vertex tuples are ordered and may repeat entries, so every projection is a
plain coordinate map on labels. A label is stored as an int whose bit ``t``
is coordinate ``t``; clause slot ``s`` of a vertex owns coordinates
``3s, 3s+1, 3s+2`` and variable slots follow the clause slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product

import numpy as np

from .errors import CapExceeded, ClauseArity, MalformedDimacs, NotSatisfying, ParamOutOfRange

VERTEX_CAP = 1 << 20
OPT_CAP = 1 << 24
SAT_CAP = 1 << 24


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        cl = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in cl:
            _check_clause(c, self.num_vars)
        object.__setattr__(self, "clauses", cl)

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any((assignment[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)

    def find_satisfying(self, cap: int = SAT_CAP):
        """First satisfying assignment in counting order, or None."""
        if 2 ** self.num_vars > cap:
            raise CapExceeded("satisfying-assignment search", 2 ** self.num_vars, cap)
        for bits in range(2 ** self.num_vars):
            a = [(bits >> i) & 1 for i in range(self.num_vars)]
            if self.satisfied_by(a):
                return a
        return None

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"num_vars": self.num_vars, "clauses": [list(c) for c in self.clauses]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["num_vars"], tuple(tuple(c) for c in obj["clauses"]))


def _check_clause(c, num_vars):
    if len(c) != 3:
        raise ClauseArity(f"clause {list(c)} has {len(c)} literals, expected 3")
    if len({abs(l) for l in c}) != 3:
        raise ClauseArity(f"clause {list(c)} repeats a variable")
    for l in c:
        if l == 0 or abs(l) > num_vars:
            raise MalformedDimacs(f"literal {l} out of range 1..{num_vars}")


def parse_dimacs(text: str) -> CnfInstance:
    header = None
    clauses, cur = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise MalformedDimacs(f"line {lineno}: bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedDimacs(f"line {lineno}: non-integer counts") from None
            continue
        if header is None:
            raise MalformedDimacs(f"line {lineno}: clause before the problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise MalformedDimacs(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if header is None:
        raise MalformedDimacs("missing 'p cnf' line")
    if cur:
        raise MalformedDimacs("last clause is not terminated by 0")
    nv, nc = header
    if nv < 0 or nc != len(clauses):
        raise MalformedDimacs(f"header announces {nc} clauses, found {len(clauses)}")
    return CnfInstance(nv, tuple(clauses))


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    projection: tuple  # coordinate t of the v-label is coordinate projection[t] of the u-label

    def project(self, label: int) -> int:
        return project_label(label, self.projection)


def project_label(label: int, projection) -> int:
    out = 0
    for t, q in enumerate(projection):
        out |= ((label >> q) & 1) << t
    return out


def label_bits(label: int, m: int) -> list:
    return [(label >> t) & 1 for t in range(m)]


def bits_label(bits) -> int:
    return sum(int(b) << t for t, b in enumerate(bits))


def slot_clauses(cnf: CnfInstance, clause_ids) -> list:
    """Clauses re-indexed to vertex coordinates: literal +/-(3s + j + 1) for slot s, position j."""
    out = []
    for s, ci in enumerate(clause_ids):
        c = cnf.clauses[ci]
        out.append(tuple((3 * s + j + 1) * (1 if l > 0 else -1) for j, l in enumerate(c)))
    return out


def satisfies_slots(label: int, slots) -> bool:
    return all(any(((label >> (abs(l) - 1)) & 1) == (l > 0) for l in c) for c in slots)


def _degree_summary(counts):
    vals = sorted(set(counts))
    return {"min": vals[0] if vals else 0, "max": vals[-1] if vals else 0, "regular": len(vals) <= 1}


class BipartiteLC:
    """Repeated label cover: U = clause r-tuples, V = variable r-tuples."""

    kind = "bipartite"

    def __init__(self, cnf: CnfInstance, r: int, cap: int = VERTEX_CAP):
        if r < 1:
            raise ParamOutOfRange("r must be at least 1")
        self.cnf, self.r = cnf, r
        m, nv = len(cnf.clauses), cnf.num_vars
        if m ** r * 3 ** r > cap or nv ** r > cap:
            raise CapExceeded("bipartite label cover size", max(m ** r * 3 ** r, nv ** r), cap)
        self.U = list(product(range(m), repeat=r))
        self.V = [tuple(v) for v in product(range(1, nv + 1), repeat=r)]
        vindex = {v: i for i, v in enumerate(self.V)}
        self.edges = []
        for ui, u in enumerate(self.U):
            for ch in product(range(3), repeat=r):
                v = tuple(abs(cnf.clauses[c][k]) for c, k in zip(u, ch))
                proj = tuple(3 * s + k for s, k in enumerate(ch))
                self.edges.append(Edge(ui, vindex[v], proj))
        self.u_bits, self.v_bits = 3 * r, r

    @cached_property
    def edges_of_u(self):
        out = [[] for _ in self.U]
        for e, edge in enumerate(self.edges):
            out[edge.u].append(e)
        return out

    @cached_property
    def edges_of_v(self):
        out = [[] for _ in self.V]
        for e, edge in enumerate(self.edges):
            out[edge.v].append(e)
        return out

    @cached_property
    def active_v(self) -> list:
        """V vertices with at least one edge (the verifier samples among these)."""
        return [v for v in range(len(self.V)) if self.edges_of_v[v]]

    def gadget_clauses(self, u: int) -> list:
        return slot_clauses(self.cnf, self.U[u])

    def u_label(self, u: int, assignment) -> int:
        """Label of ``u`` read off a global assignment (slot by slot)."""
        return bits_label([assignment[abs(l) - 1] for c in self.U[u] for l in self.cnf.clauses[c]])

    def labels_from_assignment(self, assignment):
        if not self.cnf.satisfied_by(assignment):
            raise NotSatisfying("assignment does not satisfy the formula")
        lu = [self.u_label(u, assignment) for u in range(len(self.U))]
        lv = [bits_label([assignment[x - 1] for x in v]) for v in self.V]
        return lu, lv

    def regularity(self) -> dict:
        return {
            "left": _degree_summary([len(x) for x in self.edges_of_u]),
            "right": _degree_summary([len(x) for x in self.edges_of_v]),
        }

    def vertex_id(self, side: str, i: int) -> str:
        if side == "U":
            return "C:" + ",".join(str(c + 1) for c in self.U[i])
        return "X:" + ",".join(str(x) for x in self.V[i])

    def to_json(self) -> dict:
        return {
            "type": "bipartite",
            "r": self.r,
            "ell": None,
            "T": None,
            "cnf": self.cnf.to_json(),
            "alphabet_bits": {"U": self.u_bits, "V": self.v_bits},
            "vertices": {"U": [self.vertex_id("U", i) for i in range(len(self.U))], "V": [self.vertex_id("V", i) for i in range(len(self.V))]},
            "edges": [[self.vertex_id("U", e.u), self.vertex_id("V", e.v), list(e.projection)] for e in self.edges],
            "regularity": self.regularity(),
        }


def build_bipartite(cnf: CnfInstance, r: int, cap: int = VERTEX_CAP) -> BipartiteLC:
    return BipartiteLC(cnf, r, cap)


@dataclass(frozen=True)
class LayerVertex:
    clauses: tuple
    vars: tuple


class MultilayeredLC:
    """Layered label cover; layer i vertices hold (T+ell-i)r clause slots and ir variable slots."""

    kind = "multilayered"

    def __init__(self, cnf: CnfInstance, r: int, ell: int, eta: float | None = None, T: int | None = None, cap: int = VERTEX_CAP):
        if r < 1:
            raise ParamOutOfRange("r must be at least 1")
        if ell < 2:
            raise ParamOutOfRange("ell must be at least 2")
        if T is None:
            if not eta or eta <= 0:
                raise ParamOutOfRange("eta must be positive unless T is given")
            T = math.ceil(ell / eta)
        if T < 1:
            raise ParamOutOfRange("T must be at least 1")
        self.cnf, self.r, self.ell, self.T = cnf, r, ell, T
        self.eta_requested = eta
        self.eta_effective = ell / T
        m, nv = len(cnf.clauses), cnf.num_vars
        self.n_clause_slots = [(T + ell - i) * r for i in range(ell)]
        self.n_var_slots = [i * r for i in range(ell)]
        self.m = [3 * c + v for c, v in zip(self.n_clause_slots, self.n_var_slots)]
        total = sum(m ** c * nv ** v for c, v in zip(self.n_clause_slots, self.n_var_slots))
        if total > cap:
            raise CapExceeded("multilayered vertex count", total, cap)
        self.layers = [
            [LayerVertex(tuple(c), tuple(v)) for c in product(range(m), repeat=nc) for v in product(range(1, nv + 1), repeat=nvs)]
            for nc, nvs in zip(self.n_clause_slots, self.n_var_slots)
        ]
        self._index = [{x: k for k, x in enumerate(layer)} for layer in self.layers]
        self.edges = {}
        for i in range(ell):
            for j in range(i + 1, ell):
                self.edges[(i, j)] = self._build_edges(i, j, cap)

    def _build_edges(self, i, j, cap):
        k = (j - i) * self.r
        nc, nvs = self.n_clause_slots[i], self.n_var_slots[i]
        per_u = math.perm(nc, k) * 3 ** k
        if per_u * len(self.layers[i]) > cap:
            raise CapExceeded(f"edges between layers {i} and {j}", per_u * len(self.layers[i]), cap)
        out = []
        for ui, u in enumerate(self.layers[i]):
            for pos in permutations(range(nc), k):
                rest = [s for s in range(nc) if s not in pos]
                for ch in product(range(3), repeat=k):
                    new_vars = tuple(abs(self.cnf.clauses[u.clauses[s]][c]) for s, c in zip(pos, ch))
                    v = LayerVertex(tuple(u.clauses[s] for s in rest), u.vars + new_vars)
                    proj = tuple(3 * s + t for s in rest for t in range(3))
                    proj += tuple(3 * nc + t for t in range(nvs))
                    proj += tuple(3 * s + c for s, c in zip(pos, ch))
                    out.append(Edge(ui, self._index[j][v], proj))
        return out

    def gadget_clauses(self, layer: int, idx: int) -> list:
        return slot_clauses(self.cnf, self.layers[layer][idx].clauses)

    def label_from_assignment(self, layer: int, idx: int, assignment) -> int:
        v = self.layers[layer][idx]
        bits = [assignment[abs(l) - 1] for c in v.clauses for l in self.cnf.clauses[c]]
        bits += [assignment[x - 1] for x in v.vars]
        return bits_label(bits)

    def labels_from_assignment(self, assignment):
        if not self.cnf.satisfied_by(assignment):
            raise NotSatisfying("assignment does not satisfy the formula")
        return [[self.label_from_assignment(i, k, assignment) for k in range(len(L))] for i, L in enumerate(self.layers)]

    def layer_pairs(self) -> list:
        return sorted(self.edges)

    def vertex_id(self, layer: int, idx: int) -> str:
        v = self.layers[layer][idx]
        return f"L{layer}|C:" + ",".join(str(c + 1) for c in v.clauses) + "|X:" + ",".join(str(x) for x in v.vars)

    def composition_violations(self) -> int:
        """Count two-step chains whose composed projection is not a direct edge."""
        bad = 0
        for i in range(self.ell):
            for j in range(i + 1, self.ell):
                for k in range(j + 1, self.ell):
                    direct = {(e.u, e.v, e.projection) for e in self.edges[(i, k)]}
                    by_u = {}
                    for e2 in self.edges[(j, k)]:
                        by_u.setdefault(e2.u, []).append(e2)
                    for e1 in self.edges[(i, j)]:
                        for e2 in by_u.get(e1.v, []):
                            comp = tuple(e1.projection[q] for q in e2.projection)
                            if (e1.u, e2.v, comp) not in direct:
                                bad += 1
        return bad

    def to_json(self) -> dict:
        return {
            "type": "multilayered",
            "r": self.r,
            "ell": self.ell,
            "T": self.T,
            "eta_requested": self.eta_requested,
            "eta_effective": self.eta_effective,
            "cnf": self.cnf.to_json(),
            "alphabet_bits": self.m,
            "vertices": [[self.vertex_id(i, k) for k in range(len(L))] for i, L in enumerate(self.layers)],
            "edges": {
                f"{i}-{j}": [[self.vertex_id(i, e.u), self.vertex_id(j, e.v), list(e.projection)] for e in es]
                for (i, j), es in sorted(self.edges.items())
            },
        }


def build_multilayered(cnf: CnfInstance, r: int, ell: int, eta: float | None = None, T_override: int | None = None, cap: int = VERTEX_CAP) -> MultilayeredLC:
    return MultilayeredLC(cnf, r, ell, eta=eta, T=T_override, cap=cap)


def instance_from_json(obj: dict):
    cnf = CnfInstance.from_json(obj["cnf"])
    if obj["type"] == "bipartite":
        return build_bipartite(cnf, obj["r"])
    return build_multilayered(cnf, obj["r"], obj["ell"], eta=obj.get("eta_requested"), T_override=obj["T"])


# --------------------------------------------------------------------------
# OPT


def _sat_labels(slots, m):
    return np.array([a for a in range(2 ** m) if satisfies_slots(a, slots)], dtype=np.int64)


def _mixed_radix(start, stop, radices):
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, len(radices)), dtype=np.int64)
    for k, rad in enumerate(radices):
        idx, out[:, k] = np.divmod(idx, rad)
    return out


def _opt_core(edges, a_slots, a_bits, b_allowed, cap, chunk=1 << 14):
    """Max fraction of edges satisfiable.

    ``edges`` map an A-vertex label to a B-vertex label; A labels must
    satisfy ``a_slots``; ``b_allowed[b]`` lists admissible B labels (None for any).
    Enumerates whichever side has the smaller labeling space.
    """
    if not edges:
        return Fraction(1)
    a_ids = sorted({e.u for e in edges})
    b_ids = sorted({e.v for e in edges})
    a_pos = {a: k for k, a in enumerate(a_ids)}
    b_pos = {b: k for k, b in enumerate(b_ids)}
    sat = {a: _sat_labels(a_slots[a], a_bits[a]) for a in a_ids}
    proj_vals = [np.array([project_label(int(x), e.projection) for x in sat[e.u]], dtype=np.int64) for e in edges]
    a_space = math.prod(max(len(sat[a]), 1) for a in a_ids)
    b_lists = {}
    for b in b_ids:
        allowed = b_allowed.get(b)
        b_lists[b] = np.arange(2 ** len(edges[0].projection), dtype=np.int64) if allowed is None else np.asarray(allowed, dtype=np.int64)
    b_space = math.prod(len(b_lists[b]) for b in b_ids)
    if min(a_space, b_space) > cap:
        raise CapExceeded("label cover OPT enumeration", min(a_space, b_space), cap)
    best = 0
    if b_space <= a_space:
        radices = [len(b_lists[b]) for b in b_ids]
        by_a = {}
        for k, e in enumerate(edges):
            by_a.setdefault(e.u, []).append(k)
        for start in range(0, b_space, chunk):
            choice = _mixed_radix(start, min(b_space, start + chunk), radices)
            lab = np.stack([b_lists[b][choice[:, k]] for k, b in enumerate(b_ids)], axis=1)
            total = np.zeros(choice.shape[0], dtype=np.int64)
            for a, ks in by_a.items():
                if not len(sat[a]):
                    continue
                cnt = np.zeros((choice.shape[0], len(sat[a])), dtype=np.int64)
                for k in ks:
                    cnt += lab[:, b_pos[edges[k].v]][:, None] == proj_vals[k][None, :]
                total += cnt.max(axis=1)
            best = max(best, int(total.max()))
    else:
        radices = [max(len(sat[a]), 1) for a in a_ids]
        by_b = {}
        for k, e in enumerate(edges):
            by_b.setdefault(e.v, []).append(k)
        for start in range(0, a_space, chunk):
            choice = _mixed_radix(start, min(a_space, start + chunk), radices)
            total = np.zeros(choice.shape[0], dtype=np.int64)
            for b, ks in by_b.items():
                vals = np.stack(
                    [proj_vals[k][choice[:, a_pos[edges[k].u]]] if len(sat[edges[k].u]) else np.full(choice.shape[0], -1 - k) for k in ks],
                    axis=1,
                )
                ok = np.isin(vals, b_lists[b])
                eq = (vals[:, :, None] == vals[:, None, :]) & ok[:, :, None] & ok[:, None, :]
                total += eq.sum(axis=2).max(axis=1)
            best = max(best, int(total.max()))
    return Fraction(best, len(edges))


def opt_bruteforce(instance, layers: tuple | None = None, cap: int = OPT_CAP) -> Fraction:
    """Exact maximum fraction of satisfied edges (of E_ij for a layered instance)."""
    if isinstance(instance, BipartiteLC):
        slots = {u: instance.gadget_clauses(u) for u in range(len(instance.U))}
        bits = {u: instance.u_bits for u in range(len(instance.U))}
        return _opt_core(instance.edges, slots, bits, {}, cap)
    i, j = layers if layers is not None else (0, 1)
    if not 0 <= i < j < instance.ell:
        raise ParamOutOfRange(f"bad layer pair {(i, j)}")
    es = instance.edges[(i, j)]
    slots = {u: instance.gadget_clauses(i, u) for u in range(len(instance.layers[i]))}
    bits = {u: instance.m[i] for u in range(len(instance.layers[i]))}
    allowed = {v: _sat_labels(instance.gadget_clauses(j, v), instance.m[j]) for v in {e.v for e in es}}
    return _opt_core(es, slots, bits, allowed, cap)


def smoothness_estimate(instance, u, a: int, b: int, samples: int | None = None, rng=None, target_layer: int | None = None):
    """Probability over a random edge at ``u`` that labels ``a`` and ``b`` project equally.

    ``u`` is a U index for bipartite instances and ``(layer, index)`` for
    layered ones. Exact (a Fraction) unless ``samples`` is given.
    """
    if a == b:
        raise ParamOutOfRange("labels must differ")
    if isinstance(instance, BipartiteLC):
        es = [instance.edges[e] for e in instance.edges_of_u[u]]
    else:
        i, idx = u
        j = i + 1 if target_layer is None else target_layer
        es = [e for e in instance.edges[(i, j)] if e.u == idx]
    if not es:
        return Fraction(0)
    if samples is None:
        return Fraction(sum(e.project(a) == e.project(b) for e in es), len(es))
    rng = rng if rng is not None else np.random.default_rng(0)
    picks = rng.integers(0, len(es), size=samples)
    hits = np.array([es[k].project(a) == es[k].project(b) for k in range(len(es))])
    return float(hits[picks].mean())
