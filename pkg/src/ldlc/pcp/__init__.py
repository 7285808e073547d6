"""Verifiers, honest proofs, hypergraphs and the Fourier-side checks."""
from .context import KINDS, Block, BinaryContext, TernaryContext, VerifierConfig, make_context
from .dg import DgEstimate, certify_distance, dg_correlation_estimate, dg_exact, dual_element, random_far_gamma, theorem_bound
from .hypergraph import (
    ColoringVerdict,
    WeightedHypergraph,
    check_coloring,
    independent_set_bruteforce,
    independent_set_subsets,
    materialize_hypergraph,
)
from .identities import IdentityResult, autocorrelation_check, block_autocorrelation, block_table, triple_correlation_check
from .proofs import (
    ConstantTable,
    ExplicitTable,
    HashedTable,
    PointTable,
    Proof,
    constant_proof,
    honest_proof,
    point_proof,
    proof_from_json,
    random_proof,
)
from .verifiers import (
    AcceptanceResult,
    QueryTranscript,
    Randomness,
    acceptance_probability,
    evaluate,
    paired_reads,
    randomness_count,
    randomness_space,
    run_test,
    sample_randomness,
    transcripts,
)
