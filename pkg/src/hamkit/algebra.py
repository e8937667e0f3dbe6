"""Ring and field descriptors with plain Python values as elements.

Every descriptor exposes zero/one attributes and add/sub/mul/neg/is_zero
methods; fields add inv. Elements are ints (fields, residues) or tuples
(group algebras, truncated polynomials), so they hash and compare naturally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GuardError

# ---------------------------------------------------------------------------
# primality helpers


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(limit + 1) if sieve[i]]


def random_prime_31(rng) -> int:
    """A uniform-ish random prime in [2^30, 2^31)."""
    while True:
        cand = rng.getrandbits(31) | (1 << 30) | 1
        if is_prime(cand):
            return cand


# ---------------------------------------------------------------------------
# GF(2) polynomial arithmetic on ints (bit i = coefficient of x^i)


def gf2_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def gf2_mod(a: int, mod: int) -> int:
    dm = mod.bit_length()
    while a.bit_length() >= dm:
        a ^= mod << (a.bit_length() - dm)
    return a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def gf2_powmod(base: int, exp: int, mod: int) -> int:
    out = 1
    base = gf2_mod(base, mod)
    while exp:
        if exp & 1:
            out = gf2_mod(gf2_mul(out, base), mod)
        base = gf2_mod(gf2_mul(base, base), mod)
        exp >>= 1
    return out


def gf2_is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if gf2_mod(poly, g) == 0:
                return False
    return True


# ---------------------------------------------------------------------------
# fields and rings


class PrimeField:
    """GF(p) on ints 0..p-1."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def __repr__(self):
        return f"PrimeField({self.p})"


class IntegerRing:
    """Plain arbitrary-precision integers."""

    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a):
        return a == 0


INTEGERS = IntegerRing()


class ResidueRing:
    """Z modulo p^k on ints 0..p^k-1. Not a field for k > 1."""

    MODULUS_LIMIT = 1 << 62

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("exponent must be at least 1")
        modulus = p**k
        if modulus >= self.MODULUS_LIMIT:
            raise GuardError(f"modulus {p}^{k} exceeds the 2^62 residue guard")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.zero = 0
        self.one = 1 % modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def __repr__(self):
        return f"ResidueRing({self.p}^{self.k})"


@dataclass(frozen=True)
class ResidueElem:
    """A value together with its prime-power modulus."""

    value: int
    p: int
    k: int

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def __post_init__(self):
        if not (0 <= self.value < self.modulus):
            raise ValueError("residue out of range")


class BinaryField:
    """GF(2^m) on ints, with log/exp tables and numpy batched helpers."""

    TABLE_LIMIT_M = 16

    def __init__(self, m: int, poly: int | None = None):
        if not (1 <= m <= self.TABLE_LIMIT_M):
            raise GuardError(f"binary field degree {m} outside supported 1..{self.TABLE_LIMIT_M}")
        if poly is None:
            poly = find_irreducible(m)
        if poly.bit_length() - 1 != m or not gf2_is_irreducible(poly):
            raise ValueError(f"{poly:#x} is not an irreducible polynomial of degree {m}")
        self.m = m
        self.q = 1 << m
        self.poly = poly
        self.zero = 0
        self.one = 1
        self._build_tables()

    def _raw_mul(self, a: int, b: int) -> int:
        return gf2_mod(gf2_mul(a, b), self.poly)

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for cand in range(2, q):
            if all(_raw_pow(self, cand, order // f) != 1 for f in factors):
                gen = cand
                break
        if gen is None:  # q == 2
            gen = 1
        exp = [0] * (2 * order)
        log = [0] * q
        acc = 1
        for i in range(order):
            exp[i] = acc
            exp[i + order] = acc
            log[acc] = i
            acc = self._raw_mul(acc, gen)
        assert acc == 1, "generator order mismatch"
        self.generator = gen
        self._exp = exp
        self._log = log
        self.np_exp = np.array(exp + [0], dtype=np.int32)
        self.np_log = np.array(log, dtype=np.int32)

    # scalar ops
    def add(self, a, b):
        return a ^ b

    sub = add

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def neg(self, a):
        return a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.q - 1) - self._log[a]]

    def pow(self, a, e):
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def is_zero(self, a):
        return a == 0

    # numpy batched ops on int32 arrays
    def nmul(self, a, b):
        prod = self.np_exp[self.np_log[a] + self.np_log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def ninv(self, a):
        return self.np_exp[(self.q - 1) - self.np_log[a]]

    def __repr__(self):
        return f"BinaryField(m={self.m}, poly={self.poly:#x})"


def _raw_pow(field: BinaryField, base: int, e: int) -> int:
    out = 1
    while e:
        if e & 1:
            out = field._raw_mul(out, base)
        base = field._raw_mul(base, base)
        e >>= 1
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def find_irreducible(m: int) -> int:
    """Smallest irreducible polynomial of degree m over GF(2)."""
    for cand in range((1 << m) + 1, 1 << (m + 1), 2):
        if gf2_is_irreducible(cand):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {m}")


def make_binary_field(n: int) -> BinaryField:
    """Field sized for an n-vertex instance: order at least n squared."""
    if n < 2:
        raise ValueError("need n >= 2")
    m = 2 * (n - 1).bit_length()
    return BinaryField(m)


# ---------------------------------------------------------------------------
# group algebra of (Z/2)^k over a binary field


class GroupAlgebra:
    """Formal sums over the group (Z/2)^k with binary-field coefficients.

    Elements are tuples of 2^k field values, indexed by group element. The
    product is xor-convolution. Every (unit(g) + one) squares to zero, which
    is what kills non-multilinear monomials in the sieves built on top.
    """

    K_LIMIT = 8

    def __init__(self, field: BinaryField, k: int):
        if not (0 <= k <= self.K_LIMIT):
            raise GuardError(f"group algebra rank {k} outside supported 0..{self.K_LIMIT}")
        self.field = field
        self.k = k
        self.dim = 1 << k
        self.zero = (0,) * self.dim
        self.one = self.unit(0)

    def unit(self, g: int):
        if not (0 <= g < self.dim):
            raise ValueError(f"group element {g} out of range")
        out = [0] * self.dim
        out[g] = 1
        return tuple(out)

    def from_coeffs(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.dim:
            raise ValueError("wrong coefficient count")
        return coeffs

    def add(self, a, b):
        return tuple(x ^ y for x, y in zip(a, b))

    sub = add

    def neg(self, a):
        return a

    def scale(self, c: int, a):
        if c == 0:
            return self.zero
        mul = self.field.mul
        return tuple(mul(c, x) for x in a)

    def mul(self, a, b):
        fexp = self.field._exp
        flog = self.field._log
        out = [0] * self.dim
        for g, ca in enumerate(a):
            if ca == 0:
                continue
            la = flog[ca]
            for h, cb in enumerate(b):
                if cb == 0:
                    continue
                out[g ^ h] ^= fexp[la + flog[cb]]
        return tuple(out)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def __repr__(self):
        return f"GroupAlgebra(2^{self.k} over GF(2^{self.field.m}))"


# ---------------------------------------------------------------------------
# truncated polynomials over an arbitrary coefficient ring


class TruncatedPolyRing:
    """Polynomials in one variable t, truncated beyond degree cap.

    Elements are tuples of cap+1 coefficient-ring values, low degree first.
    """

    def __init__(self, coeff_ring, cap: int):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.coeff = coeff_ring
        self.cap = cap
        self.zero = (coeff_ring.zero,) * (cap + 1)
        self.one = (coeff_ring.one,) + (coeff_ring.zero,) * cap

    def const(self, c):
        return (c,) + (self.coeff.zero,) * self.cap

    def t_times(self, c):
        """The element c*t (zero when the cap is 0)."""
        if self.cap == 0:
            return self.zero
        out = [self.coeff.zero] * (self.cap + 1)
        out[1] = c
        return tuple(out)

    def add(self, a, b):
        cadd = self.coeff.add
        return tuple(cadd(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        csub = self.coeff.sub
        return tuple(csub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        cneg = self.coeff.neg
        return tuple(cneg(x) for x in a)

    def mul(self, a, b):
        czero = self.coeff.zero
        cadd = self.coeff.add
        cmul = self.coeff.mul
        cis0 = self.coeff.is_zero
        out = [czero] * (self.cap + 1)
        for i, ai in enumerate(a):
            if cis0(ai):
                continue
            for j in range(self.cap + 1 - i):
                bj = b[j]
                if cis0(bj):
                    continue
                out[i + j] = cadd(out[i + j], cmul(ai, bj))
        return tuple(out)

    def is_zero(self, a):
        return all(self.coeff.is_zero(x) for x in a)

    def __repr__(self):
        return f"TruncatedPolyRing(cap={self.cap}, coeff={self.coeff!r})"


# ---------------------------------------------------------------------------
# CRT and interpolation


def crt_combine(triples) -> tuple[int, int]:
    """Combine residues (value, p, k) over pairwise distinct primes.

    Returns (x, M) with x congruent to every input modulo its prime power
    and M the product of the prime powers.
    """
    seen = set()
    x, modulus = 0, 1
    for value, p, k in triples:
        if p in seen:
            raise ValueError(f"prime {p} repeated")
        seen.add(p)
        pk = p**k
        if not (0 <= value < pk):
            raise ValueError("residue out of range")
        # solve x' = x (mod modulus), x' = value (mod pk)
        inc = (value - x) % pk
        step = (inc * pow(modulus % pk, -1, pk)) % pk
        x = x + modulus * step
        modulus *= pk
    return x % modulus, modulus


def interpolate_univariate(points, degree: int, p: int) -> tuple[int, ...]:
    """Coefficients (low first) of the degree <= `degree` poly through points mod p.

    Needs at least degree+1 points with distinct abscissae; any extra points
    are checked for consistency.
    """
    field = PrimeField(p)
    pts = list(points)
    if len(pts) < degree + 1:
        raise ValueError("not enough points")
    xs = [x % p for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("abscissae must be distinct")
    base = pts[: degree + 1]
    # full = prod (X - x_i) for the base points
    full = [1]
    for x, _ in base:
        nxt = [0] * (len(full) + 1)
        for i, c in enumerate(full):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - c * x) % p
        full = nxt
    coeffs = [0] * (degree + 1)
    for x, y in base:
        # quotient full / (X - x) by synthetic division
        quot = [0] * (degree + 1)
        carry = 0
        for i in range(degree + 1, 0, -1):
            carry = (full[i] + carry * x) % p
            quot[i - 1] = carry
        denom = 0
        xe = 1
        for c in quot:
            denom = (denom + c * xe) % p
            xe = xe * x % p
        scale = y % p * field.inv(denom) % p
        for i in range(degree + 1):
            coeffs[i] = (coeffs[i] + scale * quot[i]) % p
    for x, y in pts[degree + 1 :]:
        acc = 0
        xe = 1
        for c in coeffs:
            acc = (acc + c * xe) % p
            xe = xe * x % p
        if acc != y % p:
            raise ValueError("points are not on a single degree-bounded polynomial")
    return tuple(coeffs)


@dataclass(frozen=True)
class UnivariatePolyPF:
    """A univariate polynomial over GF(p), coefficients low degree first."""

    p: int
    coeffs: tuple[int, ...]

    def eval_at(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] % self.p:
                return i
        return -1
