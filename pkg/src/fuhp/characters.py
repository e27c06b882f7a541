"""Multiplicative characters of F_q^x, of the norm-one subgroup U, and of
F_q(sqrt(delta))^x, all pinned to the deterministic generators of the context.

Characters are indexed by integers: beta_j(g^m) = exp(2*pi*i*j*m/(q-1)) on the
base field and nu_j(zeta^m) = exp(2*pi*i*j*m/(q^2-1)) on the extension. All
values are roots of unity of order at most q^2-1, carried in double precision.
"""

import cmath
from dataclasses import dataclass

from .field import ext_norm, norm_one_subgroup


def beta(ctx, j, a):
    """Character of F_q^x with index j mod (q-1), evaluated at nonzero a."""
    a %= ctx.q
    if a == 0:
        raise ValueError("beta is only defined on F_q^x (a = 0 given)")
    return cmath.exp(2j * cmath.pi * j * ctx.dlog_q[a] / (ctx.q - 1))


def ext_char(ctx, j, z):
    """Character of F_q(sqrt(delta))^x with index j mod (q^2-1), at nonzero z."""
    if z.is_zero():
        raise ValueError("character undefined at zero")
    n2 = ctx.q * ctx.q - 1
    return cmath.exp(2j * cmath.pi * j * ctx.dlog_q2[z] / n2)


def nu(ctx, j, u):
    """ext_char restricted to the norm-one subgroup U; rejects N(u) != 1."""
    if ext_norm(ctx, u) != 1:
        raise ValueError(f"nu is only defined on the norm-one subgroup, N({u}) != 1")
    return ext_char(ctx, j, u)


def u_index(ctx, u):
    """Position of u in the cyclic order of U generated by zeta^(q-1)."""
    if ext_norm(ctx, u) != 1:
        raise ValueError(f"element {u} is not in the norm-one subgroup")
    m = ctx.dlog_q2[u]
    # N(zeta^m) = zeta^(m(q+1)) = 1 forces (q-1) | m
    assert m % (ctx.q - 1) == 0
    return m // (ctx.q - 1)


def nu0(ctx, u):
    """Sign character of U: +1 on squares in U, i.e. on even cyclic indices."""
    return -1 if u_index(ctx, u) % 2 else 1


def nu_equals_inverse(ctx, j):
    """True when nu_j restricted to U coincides with its inverse character.

    The restriction to U has index j mod (q+1); it is self-inverse exactly
    when (q-1)*j mod (q^2-1) lies in {0, (q^2-1)/2}.
    """
    n2 = ctx.q * ctx.q - 1
    return (ctx.q - 1) * j % n2 in (0, n2 // 2)


@dataclass(frozen=True)
class OrthogonalityReport:
    """Maximum residuals of the character orthogonality sums."""

    base_residual: float
    u_residual: float

    @property
    def max_residual(self):
        return max(self.base_residual, self.u_residual)


def character_orthogonality_check(ctx, tol=1e-12):
    """Verify sum_a beta_j(a) conj(beta_k(a)) = (q-1)[j=k] and the analogue on U.

    Returns the report with the largest residual over all index pairs; the
    tol argument is only advisory (callers compare against it).
    """
    q = ctx.q
    base_res = 0.0
    units = [a for a in range(1, q)]
    for j in range(q - 1):
        for k in range(q - 1):
            s = sum(beta(ctx, j, a) * beta(ctx, k, a).conjugate() for a in units)
            target = (q - 1) if j == k else 0.0
            base_res = max(base_res, abs(s - target))

    u = norm_one_subgroup(ctx)
    u_res = 0.0
    for j in range(q + 1):
        for k in range(q + 1):
            s = sum(nu(ctx, j, w) * nu(ctx, k, w).conjugate() for w in u)
            target = (q + 1) if j == k else 0.0
            u_res = max(u_res, abs(s - target))
    return OrthogonalityReport(base_residual=base_res, u_residual=u_res)
