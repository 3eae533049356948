"""Lehmer-property machinery.

A Lehmer number is a composite m with phi(m) | m - 1; any such m is
necessarily odd and square-free, and published results force it to have at
least 15 distinct prime factors.  That count bound enters here only as an
explicit, configurable assumption (AxiomConfig), and every certificate
records the bound it relied on.

Two routes are implemented and cross-checked:

* the direct definitional test (factor, then check phi(m) | m - 1), and
* factorization-free rejection certificates for Jacobsthal and
  Jacobsthal-Lucas members, built from the minus-one decompositions: a
  width-K prime signature would force 2**K | value - 1, but the observed
  2-adic valuation of value - 1 is 1 (odd index) or 2 (even Jacobsthal
  index), and an even-index Jacobsthal-Lucas value has value - 1 = 2**n,
  which forces every prime factor to be a Fermat prime 2**(2**k) + 1 with
  k = v2(n) -- at most one distinct prime, contradicting compositeness.

The floating-point inequality checkers use natural logarithms throughout
and compare on the log scale with a relative guard band: near-ties raise
instead of silently deciding a strict inequality.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator

from . import numtheory
from .numtheory import (
    FactorBudget,
    Factorization,
    IncompleteFactorizationError,
    v2,
)
from .sequences import (
    j_minus_one_decomposition,
    jacobsthal,
    jacobsthal_lucas,
    jl_minus_one_decomposition,
)

LN2 = math.log(2.0)

# Relative width of the no-decision zone around equality in the inequality
# checkers (absolute width on the log scale).
GUARD_BAND = 1e-9


class NumericallyAmbiguousError(ArithmeticError):
    """A strict comparison landed inside the guard band."""


class DomainError(ValueError):
    """Argument outside the documented domain of an inequality check."""


class LehmerStatus(enum.Enum):
    LEHMER = "Lehmer"
    NOT_COMPOSITE = "NotComposite"
    NOT_ODD = "NotOdd"
    NOT_SQUARE_FREE = "NotSquareFree"
    TOTIENT_DOES_NOT_DIVIDE = "TotientDoesNotDivide"
    INDETERMINATE = "Indeterminate"


_DEFINITE_REJECTIONS = frozenset(
    {
        LehmerStatus.NOT_COMPOSITE,
        LehmerStatus.NOT_ODD,
        LehmerStatus.NOT_SQUARE_FREE,
        LehmerStatus.TOTIENT_DOES_NOT_DIVIDE,
    }
)


class RejectionRule(enum.Enum):
    SMALL_INDEX_DIRECT = "SmallIndexDirect"
    ODD_INDEX_VALUATION = "OddIndexValuation"
    EVEN_INDEX_VALUATION = "EvenIndexValuation"
    EVEN_INDEX_FERMAT_STRUCTURE = "EvenIndexFermatStructure"
    DEGENERATE_VALUE = "DegenerateValue"


@dataclass(frozen=True)
class AxiomConfig:
    """Assumed lower bound on the distinct-prime count of a Lehmer number.

    15 is the strongest published bound; lowering it makes certificates
    honestly weaker (see RejectionCertificate.conclusive).
    """

    omega_lower_bound: int = 15

    def __post_init__(self):
        if self.omega_lower_bound < 2:
            raise ValueError("omega lower bound must be at least 2")


DEFAULT_AXIOMS = AxiomConfig()


@dataclass(frozen=True)
class LehmerVerdict:
    candidate: int
    status: LehmerStatus
    evidence: Factorization | None = None


@dataclass(frozen=True)
class RejectionCertificate:
    """Why index n of a sequence cannot be a Lehmer number.

    details holds the rule-specific integers needed to re-check the claim
    without re-running the scan (see recheck_certificate).
    """

    sequence: str  # "J" or "j"
    n: int
    rule: RejectionRule
    details: dict[str, int]

    @property
    def conclusive(self) -> bool:
        """Whether the rule actually rejects under the recorded bound.

        A valuation certificate needs observed v2 < omega_lower_bound; the
        other rules reject under any legal bound (>= 2).
        """
        if self.rule in (RejectionRule.ODD_INDEX_VALUATION, RejectionRule.EVEN_INDEX_VALUATION):
            return self.details["v2"] < self.details["omega_lower_bound"]
        return True


def is_lehmer_direct(
    m: int, budget: FactorBudget | None = None, cache=None
) -> LehmerVerdict:
    """Definitional test, stages in order: composite? odd? square-free?
    phi(m) | m-1?  The first failing stage names the verdict.

    Indeterminate is returned only when the factorization stays incomplete
    and no earlier stage already rejected; a repeated prime visible in a
    partial factorization is still a definite NotSquareFree.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if m == 1 or numtheory.is_probable_prime(m):
        return LehmerVerdict(m, LehmerStatus.NOT_COMPOSITE)
    if m % 2 == 0:
        return LehmerVerdict(m, LehmerStatus.NOT_ODD)
    f = numtheory.factorize(m, budget, cache)
    if any(e > 1 for _, e in f.factors):
        return LehmerVerdict(m, LehmerStatus.NOT_SQUARE_FREE, f)
    if not f.complete:
        return LehmerVerdict(m, LehmerStatus.INDETERMINATE, f)
    phi = numtheory.totient(f)
    if (m - 1) % phi:
        return LehmerVerdict(m, LehmerStatus.TOTIENT_DOES_NOT_DIVIDE, f)
    return LehmerVerdict(m, LehmerStatus.LEHMER, f)


def reject_jacobsthal(n: int, axioms: AxiomConfig = DEFAULT_AXIOMS) -> RejectionCertificate:
    """Certificate that J_n is not a Lehmer number, without factoring J_n.

    Values below 3 cannot be composite (DegenerateValue).  Otherwise the
    minus-one decomposition pins v2(J_n - 1) to 1 (odd n) or 2 (even n),
    while a Lehmer J_n would need 2**omega_lower_bound | J_n - 1.
    """
    value = jacobsthal(n)
    bound = axioms.omega_lower_bound
    if value < 3:
        return RejectionCertificate("J", n, RejectionRule.DEGENERATE_VALUE, {"value": value})
    witness = j_minus_one_decomposition(n)
    val = sum(v2(f) for f in witness.factors)
    rule = RejectionRule.ODD_INDEX_VALUATION if n % 2 else RejectionRule.EVEN_INDEX_VALUATION
    return RejectionCertificate("J", n, rule, {"v2": val, "omega_lower_bound": bound})


def reject_jacobsthal_lucas(
    n: int, axioms: AxiomConfig = DEFAULT_AXIOMS
) -> RejectionCertificate:
    """Certificate that j_n is not a Lehmer number, without factoring j_n.

    Odd n: v2(j_n - 1) = 1 via the decomposition.  Even n: j_n - 1 = 2**n,
    so a Lehmer j_n would be a square-free product of Fermat primes
    2**(2**k) + 1, and each of them dividing 2**n + 1 forces k = v2(n);
    all factors would coincide, so j_n could not be composite.
    """
    value = jacobsthal_lucas(n)
    bound = axioms.omega_lower_bound
    if value < 3:
        return RejectionCertificate("j", n, RejectionRule.DEGENERATE_VALUE, {"value": value})
    if n % 2:
        witness = jl_minus_one_decomposition(n)
        val = sum(v2(f) for f in witness.factors)
        return RejectionCertificate(
            "j", n, RejectionRule.ODD_INDEX_VALUATION, {"v2": val, "omega_lower_bound": bound}
        )
    return RejectionCertificate(
        "j",
        n,
        RejectionRule.EVEN_INDEX_FERMAT_STRUCTURE,
        {"v2_n": v2(n), "omega_lower_bound": bound},
    )


def recheck_certificate(
    cert: RejectionCertificate, budget: FactorBudget | None = None, cache=None
) -> bool:
    """Re-derive a certificate's claim from scratch; True when it holds.

    Valuation rules are re-checked against v2(value - 1) computed directly,
    not through the decomposition that produced the certificate.
    """
    value = jacobsthal(cert.n) if cert.sequence == "J" else jacobsthal_lucas(cert.n)
    rule = cert.rule
    if rule is RejectionRule.DEGENERATE_VALUE:
        return value < 3 and cert.details["value"] == value
    if rule is RejectionRule.ODD_INDEX_VALUATION:
        if cert.n % 2 == 0:
            return False
        return (
            v2(value - 1) == cert.details["v2"]
            and cert.details["v2"] < cert.details["omega_lower_bound"]
        )
    if rule is RejectionRule.EVEN_INDEX_VALUATION:
        if cert.n % 2:
            return False
        return (
            v2(value - 1) == cert.details["v2"]
            and cert.details["v2"] < cert.details["omega_lower_bound"]
        )
    if rule is RejectionRule.EVEN_INDEX_FERMAT_STRUCTURE:
        return (
            cert.n % 2 == 0
            and value - 1 == 1 << cert.n
            and v2(cert.n) == cert.details["v2_n"]
            and cert.details["omega_lower_bound"] >= 2
        )
    # SmallIndexDirect: replay the definitional test
    verdict = is_lehmer_direct(value, budget, cache) if value >= 1 else None
    return verdict is not None and verdict.status in _DEFINITE_REJECTIONS


def check_growth_bound(k: int, n: int) -> bool:
    """Whether 2**k * ln(k) > n/3 (natural logs).

    Compared on the log scale; a gap smaller than the relative guard band
    raises NumericallyAmbiguousError rather than deciding.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    lhs = k * LN2 + math.log(math.log(k))
    rhs = math.log(n) - math.log(3.0)
    if abs(lhs - rhs) <= GUARD_BAND:
        raise NumericallyAmbiguousError(
            f"2**{k}*ln({k}) vs {n}/3 falls inside the guard band"
        )
    return lhs > rhs


def check_valuation_bound(k: int, n: int) -> bool:
    """Whether 2**k > n / (4 * ln(ln(n))).

    Needs n >= 16 so that ln(ln(n)) > 1; below that the right-hand side is
    not meaningful for this comparison and DomainError is raised.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if n < 16:
        raise DomainError(f"need n >= 16 so that ln(ln(n)) > 1, got {n}")
    lhs = k * LN2
    rhs = math.log(n) - math.log(4.0) - math.log(math.log(math.log(n)))
    if abs(lhs - rhs) <= GUARD_BAND:
        raise NumericallyAmbiguousError(
            f"2**{k} vs {n}/(4*ln(ln({n}))) falls inside the guard band"
        )
    return lhs > rhs


def _largest_satisfying(pred: Callable[[int], bool], lo: int, hi: int) -> int:
    # pred must be True at lo and monotone true-then-false on [lo, hi]
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def valuation_cutoff() -> int:
    """Largest n with ln(ln(n)) < 3*ln(2), i.e. floor(e**8) = 2980."""
    return _largest_satisfying(lambda x: math.log(math.log(x)) < 3 * LN2, 16, 10**6)


def even_index_cutoff() -> int:
    """Largest n >= 16 with n <= 16 * (ln(ln(n)))**2.

    n / (ln ln n)**2 is increasing on this range, so bisection applies;
    beyond the result the inequality fails for good.
    """
    return _largest_satisfying(
        lambda x: x <= 16 * math.log(math.log(x)) ** 2, 16, 10**6
    )


def residue_constraint_holds(
    n: int, budget: FactorBudget | None = None, cache=None
) -> bool:
    """Whether every prime factor of the even-index value j_n is 1 mod 4.

    Needs a complete factorization of j_n within budget; raises
    IncompleteFactorizationError otherwise.
    """
    if n < 2 or n % 2:
        raise ValueError(f"need even n >= 2, got {n}")
    f = numtheory.factorize(jacobsthal_lucas(n), budget, cache)
    if not f.complete:
        raise IncompleteFactorizationError(
            f"budget exhausted factoring j_{n} (cofactor {f.cofactor})"
        )
    return all(p % 4 == 1 for p, _ in f.factors)


def sieve_search(limit: int) -> list[int]:
    """All odd composite m <= limit with phi(m) | m - 1 (expected: none).

    Compositeness comes from an independent prime sieve, not from the
    totient values being tested.
    """
    phi = numtheory.totient_sieve(limit)
    flags = numtheory.prime_flags(limit)
    hits = []
    for m in range(9, limit + 1, 2):
        if flags[m]:
            continue
        if (m - 1) % phi[m] == 0:
            hits.append(m)
    return hits


@dataclass(frozen=True)
class ScanEntry:
    n: int
    certificate: RejectionCertificate | None
    verdict: LehmerVerdict | None
    fallback: bool
    elapsed_ms: float


@dataclass
class ScanReport:
    sequence: str
    n_lo: int
    n_hi: int
    mode: str
    axioms: AxiomConfig
    entries: list[ScanEntry]
    rule_counts: dict[str, int]
    status_counts: dict[str, int]
    lehmer_count: int
    indeterminate_count: int
    fallback_count: int
    elapsed_s: float


def _direct_verdict(value: int, budget, cache) -> LehmerVerdict:
    if value < 1:
        # J_0 = 0: zero is neither prime nor composite
        return LehmerVerdict(value, LehmerStatus.NOT_COMPOSITE)
    return is_lehmer_direct(value, budget, cache)


def iter_scan(
    sequence: str,
    n_max: int,
    mode: str,
    axioms: AxiomConfig = DEFAULT_AXIOMS,
    budget: FactorBudget | None = None,
    cache=None,
) -> Iterator[ScanEntry]:
    """Yield one entry per index in [0, n_max], in order.

    Certificate mode never factors a sequence value as long as every
    certificate is conclusive under the configured axioms.  When one is
    not (weakened omega bound), that index falls back to the definitional
    test: the entry carries the direct verdict, fallback=True, and -- when
    the verdict definitely rejects -- a SmallIndexDirect certificate in
    place of the inconclusive one.
    """
    if sequence not in ("J", "j"):
        raise ValueError(f"sequence must be 'J' or 'j', got {sequence!r}")
    if mode not in ("certificate", "direct"):
        raise ValueError(f"mode must be 'certificate' or 'direct', got {mode!r}")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    value_of = jacobsthal if sequence == "J" else jacobsthal_lucas
    reject = reject_jacobsthal if sequence == "J" else reject_jacobsthal_lucas
    for n in range(n_max + 1):
        t0 = time.perf_counter()
        if mode == "certificate":
            cert = reject(n, axioms)
            if cert.conclusive:
                yield ScanEntry(n, cert, None, False, (time.perf_counter() - t0) * 1000)
                continue
            verdict = _direct_verdict(value_of(n), budget, cache)
            if verdict.status in _DEFINITE_REJECTIONS:
                cert = RejectionCertificate(
                    sequence,
                    n,
                    RejectionRule.SMALL_INDEX_DIRECT,
                    {"omega_lower_bound": axioms.omega_lower_bound},
                )
                yield ScanEntry(n, cert, verdict, True, (time.perf_counter() - t0) * 1000)
            else:
                yield ScanEntry(n, None, verdict, True, (time.perf_counter() - t0) * 1000)
        else:
            verdict = _direct_verdict(value_of(n), budget, cache)
            yield ScanEntry(n, None, verdict, False, (time.perf_counter() - t0) * 1000)


def summarize(
    sequence: str,
    n_max: int,
    mode: str,
    axioms: AxiomConfig,
    entries: list[ScanEntry],
    elapsed_s: float,
) -> ScanReport:
    rule_counts: dict[str, int] = {}
    status_counts: dict[str, int] = {}
    lehmer = indeterminate = fallbacks = 0
    for e in entries:
        if e.certificate is not None:
            rule_counts[e.certificate.rule.value] = rule_counts.get(e.certificate.rule.value, 0) + 1
        if e.verdict is not None:
            status_counts[e.verdict.status.value] = status_counts.get(e.verdict.status.value, 0) + 1
            if e.verdict.status is LehmerStatus.LEHMER:
                lehmer += 1
            if e.verdict.status is LehmerStatus.INDETERMINATE:
                indeterminate += 1
        if e.fallback:
            fallbacks += 1
    return ScanReport(
        sequence=sequence,
        n_lo=0,
        n_hi=n_max,
        mode=mode,
        axioms=axioms,
        entries=entries,
        rule_counts=rule_counts,
        status_counts=status_counts,
        lehmer_count=lehmer,
        indeterminate_count=indeterminate,
        fallback_count=fallbacks,
        elapsed_s=elapsed_s,
    )


def scan(
    sequence: str,
    n_max: int,
    mode: str,
    axioms: AxiomConfig = DEFAULT_AXIOMS,
    budget: FactorBudget | None = None,
    cache=None,
) -> ScanReport:
    """Run a full scan and aggregate it; see iter_scan for the semantics."""
    t0 = time.perf_counter()
    entries = list(iter_scan(sequence, n_max, mode, axioms, budget, cache))
    return summarize(sequence, n_max, mode, axioms, entries, time.perf_counter() - t0)
