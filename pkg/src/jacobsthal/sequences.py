"""Exact integer arithmetic for Jacobsthal, Jacobsthal-Lucas, and general
second-order Lucas sequences, plus the minus-one product decompositions that
feed the 2-adic valuation arguments downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple


class DegenerateDiscriminantError(ValueError):
    """Lucas parameters with P**2 == 4*Q are rejected."""


class IndexTooSmallError(ValueError):
    """The minus-one decompositions need an index of at least 2."""


class LucasParams(NamedTuple):
    p: int
    q: int


# J = U(1, -2) and j = V(1, -2); the characteristic roots of x**2 - x - 2
# are 2 and -1.
JACOBSTHAL_PARAMS = LucasParams(1, -2)


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError(f"sequence index must be nonnegative, got {n}")


def lucas_uv(params: LucasParams | tuple[int, int], n: int) -> tuple[int, int]:
    """Return (U_n, V_n) for the pair with X_n = P*X_{n-1} - Q*X_{n-2}.

    Seeds are U0=0, U1=1, V0=2, V1=P.  Evaluated by index halving, so the
    cost is O(log n) big-integer multiplications.  The halvings in the
    odd-index step are exact: 2*U_{m+1} = P*U_m + V_m and
    2*V_{m+1} = (P**2-4Q)*U_m + P*V_m hold over the integers.
    """
    p, q = params
    disc = p * p - 4 * q
    if disc == 0:
        raise DegenerateDiscriminantError(
            f"degenerate parameters: P**2 == 4*Q for P={p}, Q={q}"
        )
    _check_index(n)
    if n == 0:
        return 0, 2
    u, v, qk = 1, p, q  # values at index 1; qk tracks Q**k
    for bit in bin(n)[3:]:
        u, v, qk = u * v, v * v - 2 * qk, qk * qk
        if bit == "1":
            u, v, qk = (p * u + v) // 2, (disc * u + p * v) // 2, qk * q
    return u, v


def jacobsthal(n: int) -> int:
    """n-th Jacobsthal number: 0, 1, 1, 3, 5, 11, 21, ..."""
    return lucas_uv(JACOBSTHAL_PARAMS, n)[0]


def jacobsthal_lucas(n: int) -> int:
    """n-th Jacobsthal-Lucas number: 2, 1, 5, 7, 17, 31, ..."""
    return lucas_uv(JACOBSTHAL_PARAMS, n)[1]


def closed_form_j(n: int) -> int:
    """(2**n - (-1)**n) // 3; the division is always exact (asserted)."""
    _check_index(n)
    num = (1 << n) - (-1) ** n
    quot, rem = divmod(num, 3)
    assert rem == 0, "2**n - (-1)**n is divisible by 3 for every n >= 0"
    return quot


def closed_form_jl(n: int) -> int:
    """2**n + (-1)**n."""
    _check_index(n)
    return (1 << n) + (-1) ** n


def quad_residual(n: int) -> int:
    """j_n**2 - 9*J_n**2 - 4*(-2)**n; identically zero for all n."""
    _check_index(n)
    u, v = lucas_uv(JACOBSTHAL_PARAMS, n)
    return v * v - 9 * u * u - 4 * (-2) ** n


@dataclass(frozen=True)
class DecompositionWitness:
    """Explicit factor list for a sequence value minus one.

    Factors are kept individually (not just a truth value) so a valuation
    argument can point at the one even factor.
    """

    branch: str  # "odd" or "even", the parity of the decomposed index
    factors: tuple[int, ...]
    product: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "product", math.prod(self.factors))


def j_minus_one_decomposition(n: int) -> DecompositionWitness:
    """Split J_n - 1 as 2 * J_h * j_h (odd n, h=(n-1)//2) or 4 * J_{n-2} (even n)."""
    if n < 2:
        raise IndexTooSmallError(f"decomposition needs n >= 2, got {n}")
    if n % 2:
        u, v = lucas_uv(JACOBSTHAL_PARAMS, (n - 1) // 2)
        return DecompositionWitness("odd", (2, u, v))
    return DecompositionWitness("even", (4, jacobsthal(n - 2)))


def jl_minus_one_decomposition(n: int) -> DecompositionWitness:
    """Split j_n - 1 as 6 * J_h * j_h (odd n, h=(n-1)//2) or 2**n (even n)."""
    if n < 2:
        raise IndexTooSmallError(f"decomposition needs n >= 2, got {n}")
    if n % 2:
        u, v = lucas_uv(JACOBSTHAL_PARAMS, (n - 1) // 2)
        return DecompositionWitness("odd", (6, u, v))
    return DecompositionWitness("even", (1 << n,))
