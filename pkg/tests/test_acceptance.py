"""Acceptance criteria, one marked group per criterion.

Run ``pytest tests/test_acceptance.py -s`` (or the whole suite): the terminal
summary prints one PASS/FAIL line per criterion.
"""
import itertools
import shutil
from fractions import Fraction

import numpy as np
import pytest

from ldlc.algebra import as_matrix, same_span
from ldlc.cli import main
from ldlc.folding import FoldedTable, clause_gadget, good_support_check, ideal_basis, is_folded, lift, long_code_values
from ldlc.fourier import chi_exponent, project_pushforward, sign_table, spectrum
from ldlc.labelcover import CnfInstance, build_bipartite, build_multilayered
from ldlc.pcp import (
    VerifierConfig,
    acceptance_probability,
    block_autocorrelation,
    certify_distance,
    check_coloring,
    dg_correlation_estimate,
    dual_element,
    honest_proof,
    materialize_hypergraph,
    paired_reads,
    random_far_gamma,
    random_proof,
    run_test,
    theorem_bound,
    triple_correlation_check,
)
from ldlc.polyspace import (
    FunctionTable,
    ReducedPoly,
    all_tables,
    dual_space_basis,
    min_nonzero_weight,
    point_digits,
    space,
    substitute,
    sz_min_support_bound,
    tables_of,
)
from ldlc.quadform import (
    b_space_basis,
    build_quadform,
    coset_distance,
    diagonal_form,
    phi_bruteforce,
    quad_distribution,
    rank_and_kernel,
)

SEED = 20261015
MICRO = CnfInstance(3, ((1, 2, 3), (-1, 2, -3)))


def _domains():
    yield from ((n, d, 2) for n in range(1, 5) for d in range(n + 1))
    yield from ((n, d, 3) for n in range(1, 3) for d in range(2 * n + 1))


DOMAINS = list(_domains())


def _ids(domains):
    return ["n{}d{}p{}".format(*sd) for sd in domains]


# --------------------------------------------------------------------------
# C1


@pytest.mark.criterion("C1", "dual-space law")
@pytest.mark.parametrize("n,d,p", DOMAINS, ids=_ids(DOMAINS))
def test_c1_dual_space_law(n, d, p):
    dual = dual_space_basis(space(n, d, p))
    target = space(n, (p - 1) * n - d - 1, p)
    got = np.array([t.values for t in dual], dtype=np.uint8).reshape(-1, p ** n)
    want = target.generator_tables.reshape(-1, p ** n)
    assert got.shape[0] == want.shape[0] == p ** n - space(n, d, p).dim
    if want.shape[0]:
        assert same_span(got, want, p)
        # both containments, spelled out: dual vectors kill P^n_d, targets lie in the dual
        gens = space(n, d, p).generator_tables.astype(np.int64)
        assert not (want.astype(np.int64) @ gens.T % p).any()


# --------------------------------------------------------------------------
# C2


@pytest.mark.criterion("C2", "minimum-weight law")
@pytest.mark.parametrize("n,d,p", DOMAINS, ids=_ids(DOMAINS))
def test_c2_min_weight_law(n, d, p):
    sd = space(n, d, p)
    w = min_nonzero_weight(sd)
    assert w >= sz_min_support_bound(sd)
    # independent check of the bound itself, in floating point
    assert w >= np.ceil(p ** (n - d / (p - 1)) - 1e-9)


# --------------------------------------------------------------------------
# C3


FOURIER_DOMAINS = [sd for sd in DOMAINS if sd[2] ** space(*sd).dim <= 1 << 16]


@pytest.mark.criterion("C3", "Fourier suite")
@pytest.mark.parametrize("n,d,p", FOURIER_DOMAINS, ids=_ids(FOURIER_DOMAINS))
def test_c3_parseval_and_reconstruction(n, d, p):
    sd = space(n, d, p)
    rng = np.random.default_rng([SEED, n, d, p])
    for _ in range(100):
        colors = rng.integers(0, p, sd.size)
        A = sign_table(colors, p)
        spec = spectrum(A, sd, exact_mode=True)
        assert spec.sum_of_squares() - 1 == 0  # E|A|^2 = 1 for character-valued A
        assert np.array_equal(spec.reconstruct(), A)


@pytest.mark.criterion("C3", "Fourier suite")
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c3_projection_law_exhaustive(n):
    """Every beta on F2^n, every injective coordinate map, every monomial (a basis of all f)."""
    betas = all_tables(n, 2).astype(np.int64)
    rng = np.random.default_rng([SEED, n])
    for m in range(1, n + 1):
        src, dst = space(m, m, 2), space(n, m, 2)
        for pi in itertools.permutations(range(n), m):
            lifted = np.stack([substitute(row, src, dst, pi) for row in np.eye(src.dim, dtype=np.uint8)])
            lhs = betas @ tables_of(lifted, dst).astype(np.int64).T % 2
            pushed = np.stack([project_pushforward(FunctionTable(n, 2, b), pi).values for b in betas]).astype(np.int64)
            rhs = pushed @ src.generator_tables.astype(np.int64).T % 2
            assert np.array_equal(lhs, rhs), (n, pi)
            # the same law through the public character API, on one random pair
            f = ReducedPoly(src, src.random(rng))
            beta = FunctionTable(n, 2, betas[int(rng.integers(len(betas)))])
            g = ReducedPoly(dst, substitute(f.coeffs, src, dst, pi))
            assert chi_exponent(beta, g) == chi_exponent(project_pushforward(beta, pi), f)


# --------------------------------------------------------------------------
# C4


def _folding_setup(n, d):
    amb = space(n, d, 2)
    g = clause_gadget((1, 2, 3), 2, n)
    return amb, g, ideal_basis([g], d - 3, amb)


def _flagged(n, g, d):
    return [FunctionTable(n, 2, t) for t in all_tables(n, 2) if good_support_check(FunctionTable(n, 2, t), [g], d)]


def _coset_indicators(J):
    """The indicator of each coset: a basis of every folded function (the transform is linear)."""
    for c in range(J.quotient.size):
        vals = np.zeros(J.quotient.size, dtype=np.uint8)
        vals[c] = 1
        yield lift(FoldedTable(J, vals)).astype(np.int64)


def _random_sign_tables(J, count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        colors = lift(FoldedTable(J, rng.integers(0, 2, J.quotient.size, dtype=np.uint8)))
        yield sign_table(colors.astype(np.int64), 2)


def _check_vanishing(amb, flagged, tables):
    checked = 0
    for A in tables:
        spec = spectrum(A, amb, exact_mode=True)
        for beta in flagged:
            assert spec.coefficient(beta) == 0
            checked += 1
    return checked


@pytest.mark.criterion("C4", "folding suite")
def test_c4_folded_tables_at_d3():
    amb, g, J = _folding_setup(3, 3)
    assert J.quotient.dim == 7
    # supports must be smaller than 2^(d-3) = 1, so nothing is flagged at d = 3
    assert _flagged(3, g, 3) == []


@pytest.mark.criterion("C4", "folding suite")
def test_c4_folded_tables_at_d4():
    amb, g, J = _folding_setup(3, 4)
    assert J.quotient.dim == 7
    flagged = _flagged(3, g, 4)
    assert [b.to_string() for b in flagged] == ["10000000"]
    assert _check_vanishing(amb, flagged, _coset_indicators(J)) == 128
    assert _check_vanishing(amb, flagged, _random_sign_tables(J, 100, SEED)) == 100


@pytest.mark.criterion("C4", "folding suite")
def test_c4_folded_tables_at_d4_n4_random():
    amb, g, J = _folding_setup(4, 4)
    flagged = _flagged(4, g, 4)
    assert len(flagged) == 2
    assert _check_vanishing(amb, flagged, _random_sign_tables(J, 50, SEED)) == 100


@pytest.mark.criterion("C4", "folding suite")
@pytest.mark.parametrize("d", [3, 4])
def test_c4_honest_long_codes_folded(d):
    amb, g, J = _folding_setup(3, d)
    sat = [a for a in itertools.product((0, 1), repeat=3) if g.satisfied_by(a)]
    assert len(sat) == 7
    for a in sat:
        assert is_folded(long_code_values(a, amb), J)
    assert not is_folded(long_code_values((0, 0, 0), amb), J)


# --------------------------------------------------------------------------
# C5


def _square_pairing(beta, d, c):
    sd = space(beta.n, d, 3)
    vals = np.array([sd.eval_vector(x).astype(np.int64) @ c % 3 for x in point_digits(beta.n, 3)])
    return int(beta.values.astype(np.int64) @ (vals * vals) % 3)


def _betas_n1():
    return [FunctionTable(1, 3, t) for t in all_tables(1, 3)]


def _betas_n2(count, seed):
    rng = np.random.default_rng(seed)
    return [FunctionTable(2, 3, rng.integers(0, 3, 9, dtype=np.uint8)) for _ in range(count)]


@pytest.mark.criterion("C5", "quadratic form suite")
def test_c5a_square_identity():
    for d in (1, 2):
        for beta in _betas_n1():
            q = build_quadform(beta, 1, d)
            for c in space(1, d, 3).elements():
                assert q.value(c) == _square_pairing(beta, d, c.astype(np.int64))
    rng = np.random.default_rng(SEED)
    for _ in range(10_000):
        d = int(rng.integers(1, 3))
        beta = FunctionTable(2, 3, rng.integers(0, 3, 9, dtype=np.uint8))
        c = rng.integers(0, 3, space(2, d, 3).dim)
        assert build_quadform(beta, 2, d).value(c) == _square_pairing(beta, d, c)


def _rank_cases():
    for d in (1, 2):
        for beta in _betas_n1():
            yield 1, d, beta
    for d in (1, 2):
        for beta in _betas_n2(1000, SEED + d):
            yield 2, d, beta


@pytest.mark.criterion("C5", "quadratic form suite")
def test_c5b_rank_versus_distance():
    equal_cases = 0
    for n, d, beta in _rank_cases():
        r, _ = rank_and_kernel(build_quadform(beta, n, d))
        delta = coset_distance(beta, d)
        assert r <= delta
        if delta < 3 ** (d / 2):
            assert r == delta
            equal_cases += 1
    assert equal_cases > 0


@pytest.mark.criterion("C5", "quadratic form suite")
def test_c5c_kernel_is_b_space():
    for n, d, beta in _rank_cases():
        _, ker = rank_and_kernel(build_quadform(beta, n, d))
        b = b_space_basis(beta, n, d, d)
        assert len(ker) == len(b)
        if ker:
            dim = space(n, d, 3).dim
            assert same_span(as_matrix([k.coeffs for k in ker], 3, dim), as_matrix([k.coeffs for k in b], 3, dim), 3)


@pytest.mark.criterion("C5", "quadratic form suite")
def test_c5d_distribution():
    sq = quad_distribution(np.array([[1]]), mode="enumerate")
    assert sq.probs == (Fraction(1, 3), Fraction(2, 3), Fraction(0)) and sq.distance == Fraction(1, 3)
    for pattern in ([1, 1, 1, 1], [2, 2, 2, 2], [1, 2, 1, 2]):
        dists = [quad_distribution(diagonal_form(pattern[:r] + [0] * (4 - r)), mode="enumerate").distance for r in range(1, 5)]
        assert all(a >= b for a, b in zip(dists, dists[1:])), (pattern, dists)
        assert dists[3] < dists[0]


# --------------------------------------------------------------------------
# C6


@pytest.mark.criterion("C6", "phi base cases")
@pytest.mark.parametrize("D", [0, 1])
def test_c6_phi_base_cases(D):
    d = 1
    for k in (3, 4):
        val = phi_bruteforce(d, k, D, 2)
        assert val == 0
    for k in (0, 1, 2):
        val = phi_bruteforce(d, k, D, 2)
        assert val is not None and val >= 1
    assert phi_bruteforce(1, 1, 0, 1) >= 1


# --------------------------------------------------------------------------
# C7 and C8


def _micro_proof(kind):
    a = MICRO.find_satisfying()
    if kind == "3c3u":
        inst = build_multilayered(MICRO, 1, 2, T_override=1)
        return honest_proof(inst, a, VerifierConfig("3c3u", 3, seed=SEED))
    return honest_proof(build_bipartite(MICRO, 1), a, VerifierConfig(kind, 4, seed=SEED))


@pytest.mark.criterion("C7", "completeness = 1")
@pytest.mark.parametrize("kind", ["2c8u", "4c4u", "3c3u"])
def test_c7_completeness(kind):
    res = acceptance_probability(_micro_proof(kind), samples=100_000)
    assert res.total == 100_000 and res.accepts == 100_000
    if kind == "2c8u":
        assert res.strong_failures == 0
    if kind == "3c3u":
        assert res.sum_violations == 0


@pytest.mark.criterion("C8", "doubling consistency")
def test_c8_doubling_reads():
    p2, p4 = _micro_proof("2c8u"), _micro_proof("4c4u")
    for t in range(10_000):
        r2, r4 = run_test(p2, SEED, t), run_test(p4, SEED, t)
        assert tuple(r4.reads) == paired_reads(r2.reads)
        assert r2.randomness == r4.randomness


@pytest.mark.criterion("C8", "doubling consistency")
def test_c8_honest_four_coloring_proper():
    p4 = _micro_proof("4c4u")
    h = materialize_hypergraph(p4, mode="sample", budget=10_000, seed=SEED)
    assert h.validate() and h.samples == 10_000
    v = check_coloring(h, p4, 4)
    assert v.proper and not v.violating


# --------------------------------------------------------------------------
# C9


@pytest.mark.criterion("C9", "Fourier identities")
def test_c9_autocorrelation_exact():
    proof = random_proof(build_bipartite(MICRO, 1), VerifierConfig("2c8u", 4), seed=SEED, explicit=True)
    block = proof.context.blocks[0]
    assert block.ideal.quotient.dim <= 12
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        res = block_autocorrelation(proof, 0, block.ambient.random(rng))
        assert res.residual == 0


@pytest.mark.criterion("C9", "Fourier identities")
@pytest.mark.parametrize("positions", [(0,), (1,)])
def test_c9_triple_correlation(positions):
    low, hu, hv = space(2, 1, 3), space(2, 2, 3), space(1, 2, 3)
    assert hu.dim <= 8
    rng = np.random.default_rng([SEED, positions[0]])
    for _ in range(3):
        res = triple_correlation_check(rng.integers(0, 3, hu.size), rng.integers(0, 3, hv.size), low, hu, hv, positions)
        assert res.residual <= 1e-9


# --------------------------------------------------------------------------
# C10


@pytest.fixture(scope="module")
def far_estimate():
    gamma = random_far_gamma(6, 4, seed=SEED)
    est = dg_correlation_estimate(gamma, 6, 4, g_samples=10_000, h_samples=10_000, seed=SEED)
    print(f"\ndg estimate n=6 d=4: {est.estimate:.5f} ci95=({est.ci95[0]:.5f}, {est.ci95[1]:.5f}) "
          f"stderr={est.stderr:.5f} distance={est.distance} bound={est.bound:.5f}")
    return est


@pytest.mark.criterion("C10", "correlation estimator sanity")
def test_c10_far_estimate_below_ceiling(far_estimate):
    assert far_estimate.far and far_estimate.distance >= 4
    assert far_estimate.estimate < 0.05
    assert far_estimate.ci95[0] <= far_estimate.estimate <= far_estimate.ci95[1]


@pytest.mark.criterion("C10", "correlation estimator sanity")
def test_c10_bound_not_violated(far_estimate):
    # g = 0 alone puts 1/|P^6_1| = 1/128 into the exact expectation, which is above 2^-8
    assert far_estimate.bound == theorem_bound(4) == 2.0 ** -8
    assert far_estimate.estimate - 2 * far_estimate.stderr < far_estimate.bound


@pytest.mark.criterion("C10", "correlation estimator sanity")
def test_c10_dual_gamma_is_one():
    gamma = dual_element(6, 4, seed=SEED)
    assert certify_distance(gamma, 6, 4) == 0
    est = dg_correlation_estimate(gamma, 6, 4, g_samples=200, h_samples=200, seed=SEED)
    assert est.estimate == 1.0
    zero = dg_correlation_estimate(FunctionTable.zeros(6, 2), 6, 4, g_samples=200, h_samples=200, seed=SEED)
    assert zero.estimate == 1.0


# --------------------------------------------------------------------------
# C11


PIPELINE = [
    ("inst.json", ["lc", "build", "--cnf", "{cnf}", "--r", "1"]),
    ("ml.json", ["lc", "multilayer", "--cnf", "{cnf}", "--ell", "2", "--T", "1"]),
    ("opt.json", ["lc", "opt", "--instance", "{inst}"]),
    ("proof.json", ["pcp", "prove", "--test", "4c4u", "--d", "4", "--instance", "{inst}"]),
    ("proof3.json", ["pcp", "prove", "--test", "3c3u", "--instance", "{ml}"]),
    ("acc.json", ["pcp", "accept", "--proof", "{proof}", "--samples", "300", "--seed", "7"]),
    ("acc3.json", ["pcp", "accept", "--proof", "{proof3}", "--samples", "300", "--seed", "7", "--threads", "2"]),
    ("hg.json", ["pcp", "hypergraph", "--proof", "{proof}", "--budget", "300", "--seed", "3"]),
    ("tr.jsonl", ["pcp", "transcript", "--proof", "{proof3}", "--count", "20", "--refs", "--seed", "4"]),
    ("col.json", ["hg", "check-coloring", "--hypergraph", "{hg}", "--proof", "{proof}"]),
    ("proof0.json", ["pcp", "prove", "--test", "2c8u", "--d", "0", "--free-degree", "--instance", "{inst}"]),
    ("hg0.json", ["pcp", "hypergraph", "--proof", "{proof0}", "--mode", "exact", "--budget", "100000"]),
    ("is.json", ["hg", "independent-set", "--hypergraph", "{hg0}", "--order", "degree"]),
    ("dual.json", ["poly", "dual-check", "--n", "2", "--d", "2", "--p", "3"]),
    ("dist.json", ["poly", "distance", "--table", "01101001", "--d", "1"]),
    ("interp.json", ["poly", "interpolate", "--points", "01,11", "--values", "12", "--n", "2", "--d", "2", "--p", "3"]),
    ("spec.json", ["fourier", "spectrum", "--colors", "012210120", "--n", "1", "--d", "1", "--p", "3", "--exact"]),
    ("qb.json", ["quad", "build", "--beta", "100000020", "--n", "2", "--d", "1"]),
    ("qr.json", ["quad", "rank", "--beta", "100000000", "--n", "2", "--d", "1"]),
    ("qd.json", ["quad", "dist", "--beta", "120", "--n", "1", "--d", "1", "--mode", "montecarlo", "--samples", "1000", "--seed", "5"]),
    ("phi.json", ["quad", "phi", "--d", "1", "--k", "1", "--D", "0", "--n-max", "1"]),
    ("dg.json", ["dg", "estimate", "--n", "6", "--d", "4", "--g-samples", "100", "--h-samples", "100", "--seed", "9"]),
]


def _run_pipeline(root):
    root.mkdir()
    (root / "micro.cnf").write_text(MICRO.to_dimacs())
    paths = {"cnf": root / "micro.cnf"}
    for name, argv in PIPELINE:
        paths[name.split(".")[0]] = root / name
    for name, argv in PIPELINE:
        code = main([a.format(**paths) for a in argv] + ["--out", str(root / name)])
        assert code == 0, argv
    return {name: (root / name).read_bytes() for name, _ in PIPELINE}


@pytest.mark.criterion("C11", "reproducibility")
def test_c11_byte_identical_reruns(tmp_path):
    first = _run_pipeline(tmp_path / "a")
    second = _run_pipeline(tmp_path / "b")
    for name in first:
        a = first[name].replace(str(tmp_path / "a").encode(), b"ROOT")
        b = second[name].replace(str(tmp_path / "b").encode(), b"ROOT")
        assert a == b, name
    # and with the very same paths, with no normalization at all
    third = _run_pipeline(tmp_path / "c")
    shutil.rmtree(tmp_path / "c")
    assert _run_pipeline(tmp_path / "c") == third
