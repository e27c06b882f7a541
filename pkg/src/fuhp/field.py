"""Exact arithmetic in F_q (q an odd prime) and its quadratic extension F_q(sqrt(delta)).

A ``FieldCtx`` bundles the modulus q, a fixed non-square delta, deterministic
generators of both multiplicative groups, and complete discrete-log tables.
Generators are always the smallest candidates (lexicographic (a, b) order in
the extension), so every index derived from them -- character labels, theta
phases -- is reproducible across runs and machines.

Elements of F_q are plain ints reduced mod q; elements of F_q(sqrt(delta))
are ``ExtElement`` pairs (a, b) standing for a + b*sqrt(delta).
"""

from dataclasses import dataclass, field


def is_odd_prime(n):
    """Trial-division primality test, restricted to odd n >= 3."""
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def find_nonsquare(q):
    """Smallest positive residue that is not a quadratic residue mod q."""
    if not is_odd_prime(q):
        raise ValueError(f"q must be an odd prime >= 3, got {q}")
    squares = {(x * x) % q for x in range(1, q)}
    for a in range(2, q):
        if a not in squares:
            return a
    raise AssertionError("odd prime field always has a non-square")


@dataclass(frozen=True)
class ExtElement:
    """a + b*sqrt(delta), both coordinates reduced mod q."""

    a: int
    b: int

    def is_zero(self):
        return self.a == 0 and self.b == 0


EXT_ONE = ExtElement(1, 0)
EXT_ZERO = ExtElement(0, 0)


@dataclass(frozen=True)
class FieldCtx:
    """Arithmetic context for F_q and F_q(sqrt(delta)).

    g generates F_q^x (order q-1), zeta generates F_q(sqrt(delta))^x
    (order q^2-1); dlog_q and dlog_q2 are the full inverse power tables.
    """

    q: int
    delta: int
    g: int
    zeta: ExtElement
    dlog_q: dict = field(repr=False, compare=False)
    dlog_q2: dict = field(repr=False, compare=False)

    # -- base field helpers -------------------------------------------------

    def inv(self, a):
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return pow(a, self.q - 2, self.q)

    def ext(self, a, b=0):
        return ExtElement(a % self.q, b % self.q)


def ext_add(ctx, z, w):
    return ExtElement((z.a + w.a) % ctx.q, (z.b + w.b) % ctx.q)


def ext_sub(ctx, z, w):
    return ExtElement((z.a - w.a) % ctx.q, (z.b - w.b) % ctx.q)


def ext_neg(ctx, z):
    return ExtElement(-z.a % ctx.q, -z.b % ctx.q)


def ext_mul(ctx, z, w):
    q, d = ctx.q, ctx.delta
    return ExtElement((z.a * w.a + d * z.b * w.b) % q, (z.a * w.b + z.b * w.a) % q)


def ext_conj(ctx, z):
    """Field conjugate: a + b*sqrt(delta) -> a - b*sqrt(delta)."""
    return ExtElement(z.a, -z.b % ctx.q)


def ext_norm(ctx, z):
    """N(z) = z * conj(z) = a^2 - delta*b^2, an element of F_q."""
    return (z.a * z.a - ctx.delta * z.b * z.b) % ctx.q


def ext_trace(ctx, z):
    """Tr(z) = z + conj(z) = 2a, an element of F_q."""
    return (2 * z.a) % ctx.q


def ext_inv(ctx, z):
    n = ext_norm(ctx, z)
    if n == 0:
        raise ZeroDivisionError("inverse of zero in F_q(sqrt(delta))")
    ninv = ctx.inv(n)
    return ExtElement(z.a * ninv % ctx.q, -z.b * ninv % ctx.q)


def ext_pow(ctx, z, n):
    if n < 0:
        return ext_pow(ctx, ext_inv(ctx, z), -n)
    out = EXT_ONE
    base = z
    while n:
        if n & 1:
            out = ext_mul(ctx, out, base)
        base = ext_mul(ctx, base, base)
        n >>= 1
    return out


def field_context(q, delta=None):
    """Build the full arithmetic context for F_q and F_q(sqrt(delta)).

    delta defaults to the smallest non-square mod q; an explicit delta is
    validated. Raises ValueError for non-prime or even q, or square delta.
    """
    if not is_odd_prime(q):
        raise ValueError(f"q must be an odd prime >= 3, got {q}")
    squares = {(x * x) % q for x in range(1, q)}
    if delta is None:
        delta = find_nonsquare(q)
    else:
        delta %= q
        if delta == 0 or delta in squares:
            raise ValueError(f"delta={delta} is a square mod {q}; need a non-square")

    # smallest generator of F_q^x
    base_factors = _prime_factors(q - 1)
    g = None
    for c in range(2, q):
        if all(pow(c, (q - 1) // p, q) != 1 for p in base_factors):
            g = c
            break
    assert g is not None, "cyclic group F_q^x must have a generator"

    dlog_q = {}
    acc = 1
    for m in range(q - 1):
        dlog_q[acc] = m
        acc = acc * g % q

    # smallest generator of F_q(sqrt(delta))^x in lexicographic (a, b) order
    n2 = q * q - 1
    ext_factors = _prime_factors(n2)
    ctx0 = FieldCtx(q=q, delta=delta, g=g, zeta=EXT_ONE, dlog_q=dlog_q, dlog_q2={})
    zeta = None
    for a in range(q):
        for b in range(q):
            cand = ExtElement(a, b)
            if cand.is_zero():
                continue
            if all(ext_pow(ctx0, cand, n2 // p) != EXT_ONE for p in ext_factors):
                zeta = cand
                break
        if zeta is not None:
            break
    assert zeta is not None, "cyclic group F_{q^2}^x must have a generator"

    dlog_q2 = {}
    accz = EXT_ONE
    for m in range(n2):
        dlog_q2[accz] = m
        accz = ext_mul(ctx0, accz, zeta)
    assert len(dlog_q2) == n2, "powers of zeta must exhaust the group"

    return FieldCtx(q=q, delta=delta, g=g, zeta=zeta, dlog_q=dlog_q, dlog_q2=dlog_q2)


def quadratic_character(ctx, a):
    """The sign character of F_q^x: +1 on nonzero squares, -1 on non-squares, 0 at 0."""
    a %= ctx.q
    if a == 0:
        return 0
    return 1 if pow(a, (ctx.q - 1) // 2, ctx.q) == 1 else -1


def find_generator(ctx, which="base"):
    """Deterministic generator: 'base' for F_q^x, 'extension' for F_q(sqrt(delta))^x."""
    if which == "base":
        return ctx.g
    if which == "extension":
        return ctx.zeta
    raise ValueError(f"which must be 'base' or 'extension', got {which!r}")


def norm_one_subgroup(ctx):
    """All z with N(z) = 1, in the cyclic order generated by zeta^(q-1).

    The norm maps zeta^m to zeta^(m(q+1)), so its kernel is the q+1 powers
    of zeta^(q-1); the returned list starts at 1 and follows that cycle.
    """
    gen = ext_pow(ctx, ctx.zeta, ctx.q - 1)
    out = []
    u = EXT_ONE
    for _ in range(ctx.q + 1):
        out.append(u)
        u = ext_mul(ctx, u, gen)
    assert u == EXT_ONE, "norm-one subgroup must close after q+1 steps"
    return out
