"""Exact Jacobsthal / Jacobsthal-Lucas arithmetic, Lehmer-property testing
with rejection certificates, and a small identity-verification language."""

from .identity import evaluate, parse, to_source, verify_range
from .lehmer import (
    AxiomConfig,
    LehmerStatus,
    LehmerVerdict,
    RejectionCertificate,
    RejectionRule,
    ScanReport,
    check_growth_bound,
    check_valuation_bound,
    even_index_cutoff,
    is_lehmer_direct,
    recheck_certificate,
    reject_jacobsthal,
    reject_jacobsthal_lucas,
    residue_constraint_holds,
    scan,
    sieve_search,
    valuation_cutoff,
)
from .numtheory import (
    FactorBudget,
    Factorization,
    factorize,
    fermat_prime_exponent,
    is_probable_prime,
    is_squarefree,
    jacobi,
    omega,
    totient,
    totient_sieve,
    v2,
)
from .sequences import (
    DecompositionWitness,
    LucasParams,
    closed_form_j,
    closed_form_jl,
    j_minus_one_decomposition,
    jacobsthal,
    jacobsthal_lucas,
    jl_minus_one_decomposition,
    lucas_uv,
    quad_residual,
)

__version__ = "0.1.0"
