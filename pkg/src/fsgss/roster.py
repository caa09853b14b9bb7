"""System-center setup, member key generation, and the group roster."""

import re
from dataclasses import dataclass, field

from . import modmath
from .errors import DomainError, DuplicateMember
from .modmath import GroupParams, PublicParams

MANAGER_ID = "u0"

_ID_PATTERN = re.compile(r"[A-Za-z0-9_.-]+\Z")


@dataclass(frozen=True)
class ScSecret:
    """The system center's retained secret: the factorization of n."""

    p1: int
    q1: int


@dataclass(frozen=True)
class KeyPair:
    x: int  # secret exponent in [1, n)
    y: int  # public value g2**x mod p0


@dataclass(frozen=True)
class GroupPublicInfo:
    """Everything a verifier needs: the group description plus y0."""

    p0: int
    n: int
    g2: int
    y0: int

    def as_dict(self) -> dict:
        return {"p0": self.p0, "n": self.n, "g2": self.g2, "y0": self.y0}


@dataclass
class Roster:
    """Ordered registration list; index 0 is reserved for the manager."""

    entries: list[tuple[str, int]] = field(default_factory=list)

    def ids(self) -> list[str]:
        return [member_id for member_id, _ in self.entries]

    def get(self, member_id: str) -> int:
        for mid, y in self.entries:
            if mid == member_id:
                return y
        raise KeyError(member_id)

    def __contains__(self, member_id: str) -> bool:
        return any(mid == member_id for mid, _ in self.entries)


def sc_setup(bits: int, rng) -> tuple[PublicParams, ScSecret]:
    """Generate group parameters; publish {g2, p0, n}, retain {p1, q1}."""
    p1, q1, p0 = modmath.gen_group_primes(bits, rng)
    g2 = modmath.find_subgroup_generator(p0, p1, rng)
    return PublicParams(p0=p0, n=p1 * q1, g2=g2), ScSecret(p1=p1, q1=q1)


def params_from_setup(pub: PublicParams, sec: ScSecret) -> GroupParams:
    """Recombine the published and retained halves (test/SC-side helper)."""
    return GroupParams(p0=pub.p0, p1=sec.p1, q1=sec.q1, n=pub.n, g2=pub.g2)


def member_keygen(pub: PublicParams, rng) -> KeyPair:
    """Sample x in [1, n) and publish y = g2**x mod p0.

    Draws with y = 1 (x a multiple of the subgroup order) are rejected:
    the identity is a degenerate public key.  At real scale this has
    negligible probability; at desk scale it matters.
    """
    while True:
        x = rng.randrange(1, pub.n)
        y = pow(pub.g2, x, pub.p0)
        if y != 1:
            return KeyPair(x=x, y=y)


def register(roster: Roster, member_id: str, y: int) -> Roster:
    """Add (member_id, y) to the roster; duplicate ids are an error."""
    if not _ID_PATTERN.match(member_id):
        raise DomainError(f"invalid member id: {member_id!r}")
    if member_id in roster:
        raise DuplicateMember(member_id)
    roster.entries.append((member_id, y))
    return roster
