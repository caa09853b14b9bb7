"""Modular arithmetic and parameter generation for the p0 = 4*p1*q1 + 1 group.

All values are plain Python ints (arbitrary precision).  The multiplicative
group mod p0 contains a cyclic subgroup of prime order p1; exponents of
subgroup elements may be reduced mod n = p1*q1 because p1 divides n.
"""

import random
from dataclasses import dataclass

from .errors import DomainError, GenerationFailed, NotInvertible

MILLER_RABIN_ROUNDS = 32
DLOG_CAP = 1 << 22
PRIME_SEARCH_BUDGET = 4096
GENERATOR_SEARCH_BUDGET = 64

_module_rng = random.Random()


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus via square-and-multiply."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise DomainError("exponent must be non-negative")
    return pow(base, exponent, modulus)


def gcd(a: int, b: int) -> int:
    """Greatest common divisor by Euclid's algorithm; gcd(0, b) = b."""
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with a*x + b*y = g
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inv(x: int, modulus: int) -> int:
    """Inverse of x mod modulus; raises NotInvertible when gcd(x, m) != 1."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    g, inv, _ = _xgcd(x % modulus, modulus)
    if g != 1:
        raise NotInvertible(f"gcd({x}, {modulus}) = {g}")
    return inv % modulus


def is_probable_prime(x: int, rounds: int = MILLER_RABIN_ROUNDS, rng=None) -> bool:
    """Miller-Rabin with `rounds` random bases; exact for x < 4."""
    if rounds < 1:
        raise DomainError("rounds must be >= 1")
    if x < 2:
        return False
    if x < 4:  # 2 and 3
        return True
    if x % 2 == 0:
        return False
    rng = rng or _module_rng
    d, r = x - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(rounds):
        a = rng.randrange(2, x - 1)
        w = pow(a, d, x)
        if w == 1 or w == x - 1:
            continue
        for _ in range(r - 1):
            w = pow(w, 2, x)
            if w == x - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PublicParams:
    """The published group description {g2, p0, n}."""

    p0: int
    n: int
    g2: int


@dataclass(frozen=True)
class GroupParams:
    """Full group description; p1 and q1 stay with the system center."""

    p0: int
    p1: int
    q1: int
    n: int
    g2: int

    def public(self) -> PublicParams:
        return PublicParams(p0=self.p0, n=self.n, g2=self.g2)

    def validate(self) -> None:
        """Check all structural invariants; raises DomainError on violation."""
        if self.n != self.p1 * self.q1:
            raise DomainError("n != p1*q1")
        if self.p0 != 4 * self.n + 1:
            raise DomainError("p0 != 4*n + 1")
        if self.p1 == self.q1:
            raise DomainError("p1 and q1 must be distinct")
        for name, p in (("p0", self.p0), ("p1", self.p1), ("q1", self.q1)):
            if not is_probable_prime(p):
                raise DomainError(f"{name} = {p} is not prime")
        if not 1 < self.g2 < self.p0:
            raise DomainError("g2 out of range")
        if pow(self.g2, self.p1, self.p0) != 1:
            raise DomainError("g2**p1 != 1 mod p0")


def group_modulus(p1: int, q1: int) -> int | None:
    """p0 = 4*p1*q1 + 1 when (p1, q1) is an acceptable pair, else None."""
    if p1 == q1:
        return None
    if not (is_probable_prime(p1) and is_probable_prime(q1)):
        return None
    p0 = 4 * p1 * q1 + 1
    return p0 if is_probable_prime(p0) else None


def random_prime(bits: int, rng, max_tries: int = PRIME_SEARCH_BUDGET) -> int:
    """A random prime of exactly `bits` bits."""
    if bits < 2:
        raise DomainError("bits must be >= 2")
    for _ in range(max_tries):
        candidate = rng.randrange(1 << (bits - 1), 1 << bits)
        if is_probable_prime(candidate, rng=rng):
            return candidate
    raise GenerationFailed(f"no {bits}-bit prime found in {max_tries} draws")


def gen_group_primes(bits: int, rng, max_tries: int = PRIME_SEARCH_BUDGET) -> tuple[int, int, int]:
    """Draw primes p1 != q1 of `bits` bits until p0 = 4*p1*q1 + 1 is prime."""
    for _ in range(max_tries):
        p1 = random_prime(bits, rng)
        q1 = random_prime(bits, rng)
        p0 = group_modulus(p1, q1)
        if p0 is not None:
            return p1, q1, p0
    raise GenerationFailed(f"no acceptable prime pair found in {max_tries} draws")


def find_subgroup_generator(p0: int, p1: int, rng, max_tries: int = GENERATOR_SEARCH_BUDGET) -> int:
    """An element of exact order p1 in Z*_p0, via g = h**((p0-1)/p1)."""
    if (p0 - 1) % p1 != 0:
        raise DomainError("p1 does not divide p0 - 1")
    cofactor = (p0 - 1) // p1
    for _ in range(max_tries):
        h = rng.randrange(2, p0)
        g = pow(h, cofactor, p0)
        if g != 1:
            # g**p1 = h**(p0-1) = 1, and p1 prime forces exact order p1
            return g
    raise GenerationFailed(f"no generator found in {max_tries} draws")


def dlog_bruteforce(y: int, pub: PublicParams, cap: int = DLOG_CAP) -> int | None:
    """Smallest x with g2**x = y mod p0, by linear scan; None when not found.

    The scan stops once the powers of g2 cycle back to 1, so it never
    searches past the subgroup order even though p1 is not public.
    """
    if not 1 <= y < pub.p0:
        raise DomainError(f"y must be in [1, p0), got {y}")
    acc = 1
    for x in range(cap):
        if acc == y:
            return x
        acc = acc * pub.g2 % pub.p0
        if acc == 1:  # cycled through the whole subgroup
            return None
    return None
