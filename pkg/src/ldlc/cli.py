"""Command-line entry point: ``ldlc <group> <command> [options]``.

Every command writes a JSON document to ``--out`` (when given) and a short
summary to standard output. Exit codes: 0 success, 2 bad input or
parameters, 3 a size cap was hit, 70 an internal invariant failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, jsonio
from .errors import CapExceeded, InvariantViolation, LdlcError
from .rng import check_seed

EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 2, 3, 70


class UsageError(LdlcError):
    pass


# --------------------------------------------------------------------------
# helpers


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path) -> dict:
    try:
        return jsonio.read(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from None


def _assignment(text: str | None, cnf):
    if text is None:
        a = cnf.find_satisfying()
        if a is None:
            raise UsageError("formula is unsatisfiable; no honest proof exists")
        return a
    bits = [int(x) for x in text.replace(",", " ").split()] if any(c in text for c in ", ") else [int(c) for c in text]
    if len(bits) != cnf.num_vars or any(b not in (0, 1) for b in bits):
        raise UsageError(f"assignment needs {cnf.num_vars} bits")
    return bits


def _load_instance(args):
    from .labelcover import build_bipartite, build_multilayered, instance_from_json, parse_dimacs

    if getattr(args, "instance", None):
        return instance_from_json(_read_json(args.instance))
    if not getattr(args, "cnf", None):
        raise UsageError("give --instance or --cnf")
    cnf = parse_dimacs(_read_text(args.cnf))
    if getattr(args, "ell", None):
        return build_multilayered(cnf, args.r, args.ell, eta=args.eta, T_override=args.T)
    return build_bipartite(cnf, args.r)


def _table(text: str, p: int, n: int | None = None):
    from .polyspace import FunctionTable

    return FunctionTable.from_string(text, p, n)


def _frac(x):
    return {"num": x.numerator, "den": x.denominator, "value": float(x)} if isinstance(x, Fraction) else x


# --------------------------------------------------------------------------
# lc


def cmd_lc_build(args):
    from .labelcover import build_bipartite, parse_dimacs

    inst = build_bipartite(parse_dimacs(_read_text(args.cnf)), args.r)
    print(f"bipartite label cover: |U|={len(inst.U)} |V|={len(inst.V)} |E|={len(inst.edges)}")
    return "instance", inst.to_json()


def cmd_lc_multilayer(args):
    from .labelcover import build_multilayered, parse_dimacs

    inst = build_multilayered(parse_dimacs(_read_text(args.cnf)), args.r, args.ell, eta=args.eta, T_override=args.T)
    sizes = [len(L) for L in inst.layers]
    print(f"multilayered label cover: ell={inst.ell} T={inst.T} layer sizes={sizes} alphabet bits={inst.m}")
    return "instance", inst.to_json()


def cmd_lc_opt(args):
    from .labelcover import opt_bruteforce

    inst = _load_instance(args)
    layers = tuple(args.layers) if args.layers else None
    val = opt_bruteforce(inst, layers)
    print(f"OPT = {val} ({float(val):.6f})")
    return "opt", {"opt": _frac(val), "layers": list(layers) if layers else None}


# --------------------------------------------------------------------------
# pcp


def _config(args, d_default=None):
    from .pcp import VerifierConfig

    d = args.d if args.d is not None else (3 if args.test == "3c3u" else 4)
    return VerifierConfig(args.test, d, check_seed(args.seed), args.free_degree)


def cmd_pcp_prove(args):
    from .pcp import honest_proof

    inst = _load_instance(args)
    cfg = _config(args)
    want = "multilayered" if cfg.kind == "3c3u" else "bipartite"
    if inst.kind != want:
        raise UsageError(f"{cfg.kind} needs a {want} instance")
    proof = honest_proof(inst, _assignment(args.assignment, inst.cnf), cfg, explicit=args.explicit or None)
    kinds = sorted({t.kind for t in proof.tables.values()})
    print(f"honest {cfg.kind} proof: {len(proof.context.blocks)} blocks, tables={kinds}")
    for w in cfg.warnings:
        print(f"warning: {w}")
    return "proof", proof.to_json()


def _load_proof(args):
    from .pcp import proof_from_json

    proof = proof_from_json(_read_json(args.proof))
    if args.test and proof.config.kind != args.test:
        raise UsageError(f"proof is for {proof.config.kind}, not {args.test}")
    return proof


def cmd_pcp_accept(args):
    from .pcp import acceptance_probability

    proof = _load_proof(args)
    res = acceptance_probability(proof, args.mode, args.samples, check_seed(args.seed), args.threads)
    extra = ""
    if res.strong_failures is not None:
        extra += f", strong-check failures {res.strong_failures}"
    if res.sum_violations is not None:
        extra += f", sum-law violations {res.sum_violations}"
    if res.exact is not None:
        print(f"acceptance {res.exact} (exact over {res.total} randomness tuples){extra}")
    else:
        print(f"acceptance {res.estimate} ({res.accepts}/{res.total}), rejections {res.rejections}, "
              f"95% CI [{res.ci[0]:.6f}, {res.ci[1]:.6f}]{extra}")
    return "acceptance", res.to_json()


def cmd_pcp_hypergraph(args):
    from .pcp import materialize_hypergraph

    proof = _load_proof(args)
    h = materialize_hypergraph(proof, args.mode, args.budget, check_seed(args.seed))
    print(f"{h.uniformity}-uniform hypergraph: {len(h.blocks)} blocks, {h.vertex_count} vertices, "
          f"{len(h.edges)} distinct edges, total weight {h.total_weight}")
    return "hypergraph", h.to_json()


def cmd_pcp_transcript(args):
    from .pcp import transcripts

    proof = _load_proof(args)
    recs = [t.to_json(proof if args.refs else None) for t in transcripts(proof, check_seed(args.seed), args.count, args.start)]
    acc = sum(r["accept"] for r in recs)
    print(f"{len(recs)} transcripts, {acc} accepted")
    return "transcripts", recs


# --------------------------------------------------------------------------
# hg


def _hypergraph_from_json(obj):
    from .pcp.hypergraph import WeightedHypergraph

    def ref(v):
        b, i = v
        return int(b), int(i, 16) if isinstance(i, str) else int(i)

    def size(s):
        return int(s, 16) if isinstance(s, str) else int(s)

    blocks = [{"owner": b["owner_vertex"], "size": size(b["size"])} for b in obj["blocks"]]
    h = WeightedHypergraph(obj["uniformity"], blocks, mode=obj.get("mode", "exact"), samples=obj.get("samples"))
    for e in obj["edges"]:
        order = tuple(ref(v) for v in e["verts"])
        key = tuple(sorted(order))
        h.edges[key] = Fraction(e["weight_num"], e["weight_den"])
        h.orders[key] = order
    if not h.validate():
        raise UsageError("hypergraph file has edges outside its blocks")
    return h


def cmd_hg_check_coloring(args):
    from .pcp.hypergraph import check_coloring

    h = _hypergraph_from_json(_read_json(args.hypergraph))
    if args.proof:
        coloring = _load_proof(args)
    elif args.coloring:
        obj = _read_json(args.coloring)
        coloring = {(int(b), int(i, 16) if isinstance(i, str) else int(i)): int(c) for b, i, c in obj["colors"]}
    elif args.constant is not None:
        c = args.constant
        coloring = lambda b, i: c  # noqa: E731
    else:
        raise UsageError("give --proof, --coloring or --constant")
    k = args.k if args.k else h.uniformity and {8: 2, 4: 4, 3: 3}[h.uniformity]
    v = check_coloring(h, coloring, k, groups=args.groups)
    print(f"{'proper' if v.proper else 'NOT proper'} {k}-coloring: {len(v.violating)} monochromatic of {v.checked} edges")
    return "coloring", v.to_json()


def cmd_hg_independent_set(args):
    from .pcp.hypergraph import independent_set_bruteforce

    h = _hypergraph_from_json(_read_json(args.hypergraph))
    if args.vertices:
        keep = [(int(b), int(i)) for b, i in (v.split(":") for v in args.vertices.split(","))]
        h = h.induced(keep)
    size, members = independent_set_bruteforce(h, args.order, args.cap)
    print(f"maximum independent set: {size} of {h.vertex_count} vertices")
    return "independent_set", {"size": size, "vertex_count": h.vertex_count, "members_in_edges": [list(m) for m in members]}


# --------------------------------------------------------------------------
# poly


def cmd_poly_dual_check(args):
    from .algebra import same_span
    from .polyspace import dual_space_basis, space, tables_of

    sd = space(args.n, args.d, args.p)
    dual = np.array([t.values for t in dual_space_basis(sd)], dtype=np.uint8).reshape(-1, args.p ** args.n)
    expect_deg = (args.p - 1) * args.n - args.d - 1
    target = space(args.n, expect_deg, args.p)
    tgt = tables_of(np.eye(target.dim, dtype=np.int64), target) if target.dim else np.zeros((0, args.p ** args.n), np.uint8)
    ok = same_span(dual, tgt, args.p) if dual.shape[0] == tgt.shape[0] else False
    print(f"dual of P^{args.n}_{args.d} over F{args.p}: dim {dual.shape[0]}, equals P^{args.n}_{expect_deg}: {ok}")
    return "dual_check", {"dual_dim": int(dual.shape[0]), "expected_degree": expect_deg, "expected_dim": target.dim, "equal": bool(ok)}


def cmd_poly_distance(args):
    from .polyspace import distance_to_space, space

    t = _table(args.table, args.p, args.n)
    dist = distance_to_space(t, space(t.n, args.d, args.p))
    print(f"distance from table to P^{t.n}_{args.d}: {dist}")
    return "distance", {"distance": dist, "table": t.to_string()}


def cmd_poly_interpolate(args):
    from .folding import poly_to_json
    from .polyspace import interpolate_vanishing

    pts = [tuple(int(c) for c in s) for s in args.points.split(",")] if args.points else []
    vals = [int(c) for c in args.values] if args.values else [0] * len(pts)
    if len(vals) != len(pts):
        raise UsageError("need one value per point")
    f = interpolate_vanishing(pts, dict(zip(pts, vals)), args.d, args.n, args.p)
    print(f"interpolant of degree {f.degree} with {len(f.terms())} terms")
    return "polynomial", poly_to_json(f)


# --------------------------------------------------------------------------
# fourier


def cmd_fourier_spectrum(args):
    from .fourier import sign_table, spectrum
    from .polyspace import space

    sd = space(args.n, args.d, args.p)
    colors = np.frombuffer(args.colors.strip().encode(), dtype=np.uint8) - ord("0")
    if colors.shape[0] != sd.size or (colors >= args.p).any():
        raise UsageError(f"need {sd.size} colors in [0, {args.p})")
    vals = sign_table(colors, args.p) if args.exact else np.exp(2j * np.pi * colors / args.p)
    spec = spectrum(vals, sd, exact_mode=args.exact)
    items = spec.to_json()
    print(f"spectrum over P^{args.n}_{args.d} (F{args.p}): {len(items)} nonzero coefficients, "
          f"sum of squares {spec.sum_of_squares()}")
    return "spectrum", {"n": args.n, "d": args.d, "p": args.p, "exact": args.exact, "coefficients": items}


# --------------------------------------------------------------------------
# quad


def _quadform(args):
    from .quadform import build_quadform

    beta = _table(args.beta, 3, args.n)
    return beta, build_quadform(beta, args.n, args.d)


def cmd_quad_build(args):
    _, q = _quadform(args)
    print(f"Q for beta={args.beta}: {q.matrix.shape[0]}x{q.matrix.shape[0]}")
    out = q.to_json()
    out["matrix"] = q.matrix.tolist()
    return "quadform", out


def cmd_quad_rank(args):
    from .folding import poly_to_json
    from .quadform import coset_distance, rank_and_kernel

    beta, q = _quadform(args)
    rk, ker = rank_and_kernel(q)
    delta = coset_distance(beta, args.d)
    print(f"rank {rk}, Delta {delta}, kernel dimension {len(ker)}")
    return "quad_rank", {"rank": rk, "delta": delta, "kernel": [poly_to_json(k) for k in ker], "beta": beta.to_string()}


def cmd_quad_dist(args):
    from .quadform import quad_distribution
    from .rng import stream

    _, q = _quadform(args)
    dist = quad_distribution(q, args.offset, args.mode, args.samples, stream(check_seed(args.seed), 0))
    print(f"distribution of p^T Q p + shift ({args.mode}): {[str(x) for x in dist.probs]}, distance from uniform {dist.distance}")
    return "quad_distribution", dist.to_json()


def cmd_quad_phi(args):
    from .quadform import phi_bruteforce

    val = phi_bruteforce(args.d, args.k, args.D, args.n_max)
    print(f"Phi_(d={args.d},k={args.k})(D={args.D}) over n <= {args.n_max}: {val}")
    return "phi", {"d": args.d, "k": args.k, "D": args.D, "n_max": args.n_max, "phi": val}


# --------------------------------------------------------------------------
# dg


def cmd_dg_estimate(args):
    from .pcp.dg import dg_correlation_estimate, random_far_gamma

    if args.gamma:
        gamma = _table(args.gamma, 2, args.n)
    else:
        gamma = random_far_gamma(args.n, args.d, check_seed(args.seed))
    res = dg_correlation_estimate(gamma, args.n, args.d, args.g_samples, args.h_samples, check_seed(args.seed),
                                  args.inner, not args.no_certify)
    print(f"E_g|E_h chi(gh)| ~ {res.estimate:.6f} +/- {res.stderr:.6f} (95% CI [{res.ci95[0]:.6f}, {res.ci95[1]:.6f}]), "
          f"distance {res.distance}, bound {res.bound:.6g}")
    out = res.to_json()
    out["gamma"] = gamma.to_string()
    return "dg_estimate", out


# --------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("--out", help="write the JSON result here")
    p.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
    p.add_argument("--threads", type=int, default=1, help="worker cap for sampling")


def _add_instance(p):
    p.add_argument("--instance", help="instance JSON from 'lc build' or 'lc multilayer'")
    p.add_argument("--cnf", help="DIMACS file (instead of --instance)")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--ell", type=int)
    p.add_argument("--eta", type=float)
    p.add_argument("--T", type=int)


def _add_test(p, required=False):
    p.add_argument("--test", choices=["2c8u", "4c4u", "3c3u"], required=required)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ldlc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"ldlc {__version__}")
    groups = ap.add_subparsers(dest="group", required=True)

    def cmd(group_parsers, name, func, help_):
        p = group_parsers.add_parser(name, help=help_)
        _add_common(p)
        p.set_defaults(func=func)
        return p

    lc = groups.add_parser("lc", help="label cover instances").add_subparsers(dest="cmd", required=True)
    p = cmd(lc, "build", cmd_lc_build, "bipartite label cover from a CNF")
    p.add_argument("--cnf", required=True)
    p.add_argument("--r", type=int, default=1)
    p = cmd(lc, "multilayer", cmd_lc_multilayer, "layered label cover from a CNF")
    p.add_argument("--cnf", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--T", type=int)
    p = cmd(lc, "opt", cmd_lc_opt, "exact OPT by brute force")
    _add_instance(p)
    p.add_argument("--layers", type=int, nargs=2)

    pcp = groups.add_parser("pcp", help="verifiers and proofs").add_subparsers(dest="cmd", required=True)
    p = cmd(pcp, "prove", cmd_pcp_prove, "honest proof from a satisfying assignment")
    _add_instance(p)
    _add_test(p, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--assignment", help="bits like 100 or 1,0,0 (default: first satisfying)")
    p.add_argument("--explicit", action="store_true", help="store every coset value")
    p.add_argument("--free-degree", action="store_true", help="skip the degree checks")
    p = cmd(pcp, "accept", cmd_pcp_accept, "acceptance probability of a proof")
    p.add_argument("--proof", required=True)
    _add_test(p)
    p.add_argument("--mode", choices=["montecarlo", "exact"], default="montecarlo")
    p.add_argument("--samples", type=int, default=10_000)
    p = cmd(pcp, "hypergraph", cmd_pcp_hypergraph, "materialize the verifier's hypergraph")
    p.add_argument("--proof", required=True, help="any proof on the instance (fixes test, degree and blocks)")
    _add_test(p)
    p.add_argument("--mode", choices=["exact", "sample"], default="sample")
    p.add_argument("--budget", type=int, default=10_000)
    p = cmd(pcp, "transcript", cmd_pcp_transcript, "verifier transcripts as JSON lines")
    p.add_argument("--proof", required=True)
    _add_test(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--refs", action="store_true", help="include coset indices of the queried vertices")

    hg = groups.add_parser("hg", help="hypergraph checks").add_subparsers(dest="cmd", required=True)
    p = cmd(hg, "check-coloring", cmd_hg_check_coloring, "is a coloring proper")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--proof")
    p.add_argument("--coloring", help='JSON {"colors": [[block, index, color], ...]}')
    p.add_argument("--constant", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--groups", action="store_true", help="also require a non-constant query pair (4-uniform)")
    _add_test(p)
    p = cmd(hg, "independent-set", cmd_hg_independent_set, "exact maximum independent set")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--cap", type=int, default=30)
    p.add_argument("--order", choices=["natural", "degree"], default="natural")
    p.add_argument("--vertices", help="restrict to block:index,block:index,...")

    poly = groups.add_parser("poly", help="polynomial spaces").add_subparsers(dest="cmd", required=True)
    p = cmd(poly, "dual-check", cmd_poly_dual_check, "compare the dual space with the expected degree")
    for a in ("--n", "--d"):
        p.add_argument(a, type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p = cmd(poly, "distance", cmd_poly_distance, "Hamming distance from a table to P^n_d")
    p.add_argument("--table", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p = cmd(poly, "interpolate", cmd_poly_interpolate, "low-degree polynomial through given points")
    p.add_argument("--points", help="comma-separated points, e.g. 010,111")
    p.add_argument("--values", help="one digit per point (default all 0)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=2)

    fo = groups.add_parser("fourier", help="spectra").add_subparsers(dest="cmd", required=True)
    p = cmd(fo, "spectrum", cmd_fourier_spectrum, "Fourier spectrum of omega^A over P^n_d")
    p.add_argument("--colors", required=True, help="one digit per element of P^n_d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--exact", action="store_true")

    qd = groups.add_parser("quad", help="quadratic forms over F3").add_subparsers(dest="cmd", required=True)
    for name, func, help_ in [
        ("build", cmd_quad_build, "the matrix of beta"),
        ("rank", cmd_quad_rank, "rank, kernel and coset distance"),
        ("dist", cmd_quad_dist, "distribution of the form at uniform p"),
    ]:
        p = cmd(qd, name, func, help_)
        p.add_argument("--beta", required=True, help="table on F3^n, one digit per point")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        if name == "dist":
            p.add_argument("--mode", choices=["exact", "enumerate", "montecarlo"], default="exact")
            p.add_argument("--offset", type=int, default=1)
            p.add_argument("--samples", type=int, default=100_000)
    p = cmd(qd, "phi", cmd_quad_phi, "brute-force Phi")
    for a in ("--d", "--k", "--D"):
        p.add_argument(a, type=int, required=True)
    p.add_argument("--n-max", type=int, default=2)

    dg = groups.add_parser("dg", help="correlation estimator").add_subparsers(dest="cmd", required=True)
    p = cmd(dg, "estimate", cmd_dg_estimate, "estimate E_g |E_h chi_gamma(g h)|")
    p.add_argument("--gamma", help="table on F2^n (default: a random certified-far one)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g-samples", type=int, default=1000)
    p.add_argument("--h-samples", type=int, default=1000)
    p.add_argument("--inner", choices=["montecarlo", "exact"], default="montecarlo")
    p.add_argument("--no-certify", action="store_true")
    return ap


def _run_config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    return dict(sorted(cfg.items()))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        kind, payload = args.func(args)
        if args.out:
            cfg = _run_config(args)
            if kind == "transcripts":
                jsonio.write_lines(args.out, payload, cfg)
            else:
                jsonio.write(args.out, kind, payload, cfg)
        return 0
    except CapExceeded as exc:
        print(f"error: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantViolation, ArithmeticError) as exc:
        print(f"error: internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (LdlcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
