"""Arithmetic groundwork: F_q, its quadratic extension, and their characters.

Everything downstream (graphs, spherical functions, theta sums) is built on
one deterministic context object: smallest non-square delta, smallest
generators, and full discrete-log tables. Run this first to see the raw
material the other demos consume.
"""

from fuhp import (
    character_orthogonality_check,
    ext_norm,
    ext_trace,
    field_context,
    norm_one_subgroup,
    nu0,
    quadratic_character,
)

q = 5
ctx = field_context(q)
print(f"F_{q} with delta = {ctx.delta} (smallest non-square)")
print(f"generator of F_{q}^x: {ctx.g}")
print(f"generator zeta of F_{q}(sqrt({ctx.delta}))^x: {ctx.zeta.a} + {ctx.zeta.b}*sqrt({ctx.delta})")

print("\nsign character on F_5:", {a: quadratic_character(ctx, a) for a in range(q)})

print("\nnorm-one subgroup U (cyclic order, one full lap):")
for k, u in enumerate(norm_one_subgroup(ctx)):
    print(f"  u_{k} = {u.a} + {u.b}*sqrt(2)   N = {ext_norm(ctx, u)}   "
          f"Tr = {ext_trace(ctx, u)}   nu0 = {nu0(ctx, u):+d}")

report = character_orthogonality_check(ctx)
print(f"\ncharacter orthogonality residuals: base field {report.base_residual:.2e}, "
      f"norm-one subgroup {report.u_residual:.2e}")
assert report.max_residual < 1e-12
print("both families are orthonormal to machine precision.")
