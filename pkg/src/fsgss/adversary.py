"""Executable attacker for desk-scale experiments.

Two forgery routes are implemented.  `forge_with_dlp` models an attacker
who can take discrete logs in the signing subgroup: it extracts the
manager's exponent from y0, synthesizes r4 with a known log, and solves
both verification checks directly.  `forge_reuse` needs no oracle at
all: check 2 binds m only through values the signer chose fresh, so an
intercepted signature's (r4, r6, s1) can be replayed under a new message
with new (c, E, s2).

`run_failstop_trial` stages the dispute that makes the scheme fail-stop:
the attacker can learn a member's key exponent only up to the subgroup
order p1, so the representation b* it commits to agrees with the real b
mod p1 but matches it mod n just 1 out of q1 times; any mismatch hands
the honest member a factor of n.
"""

from dataclasses import dataclass

from .authority import ForgeryProof, prove_forgery
from .errors import DomainError, GenerationFailed, OracleTooWeak
from .handshake import MemberCredential
from .modmath import DLOG_CAP, PublicParams, dlog_bruteforce, gcd, mod_inv
from .roster import GroupPublicInfo
from .signing import Signature

# A signature seen on the wire carries no more than its seven fields.
InterceptedSignature = Signature

FORGE_BUDGET = 64


class BruteForceDlpOracle:
    """Discrete-log oracle backed by exhaustive search.

    Knowing how to take logs implies knowing the subgroup order, so the
    oracle exposes it as `.order`.  Raises OracleTooWeak when the search
    cap is too small for the group.
    """

    def __init__(self, pub: GroupPublicInfo, cap: int = DLOG_CAP):
        self.pub = pub
        self.cap = cap
        # order of g2 = first exponent > 0 whose power returns to 1
        acc, order = pub.g2 % pub.p0, 1
        while acc != 1:
            acc = acc * pub.g2 % pub.p0
            order += 1
            if order > cap:
                raise OracleTooWeak(f"subgroup order exceeds cap {cap}")
        self.order = order

    def dlog(self, y: int) -> int:
        result = dlog_bruteforce(y, _public_triple(self.pub), cap=self.cap)
        if result is None:
            raise OracleTooWeak(f"no discrete log for {y} within cap {self.cap}")
        return result


def _public_triple(pub: GroupPublicInfo) -> PublicParams:
    return PublicParams(p0=pub.p0, n=pub.n, g2=pub.g2)


def forge_with_dlp(m_star: int, pub: GroupPublicInfo, oracle, rng) -> Signature:
    """Forge a verifying signature on m_star given a discrete-log oracle."""
    if not 0 <= m_star < pub.n:
        raise DomainError(f"m_star out of range: {m_star}")
    x0_log = oracle.dlog(pub.y0)
    n, p0 = pub.n, pub.p0
    lam = rng.randrange(1, n)
    r4 = pow(pub.g2, lam, p0)
    s1 = rng.randrange(1, n)
    r6 = (x0_log * r4 + lam * s1) % n
    c, e_cap, s2 = _solve_message_check(m_star, r6, pub, rng)
    return Signature(m=m_star, c=c, e_cap=e_cap, r4=r4, r6=r6, s1=s1, s2=s2)


def forge_reuse(
    intercepted: InterceptedSignature, m_star: int, pub: GroupPublicInfo, rng
) -> Signature:
    """Transplant an intercepted signature onto a new message.

    Keeps (r4, r6, s1), which check 1 constrains, and rebuilds the
    message-dependent (c, E, s2).  Uses no secret and no oracle.
    """
    if not 0 <= m_star < pub.n:
        raise DomainError(f"m_star out of range: {m_star}")
    c, e_cap, s2 = _solve_message_check(m_star, intercepted.r6, pub, rng)
    return Signature(
        m=m_star, c=c, e_cap=e_cap, r4=intercepted.r4,
        r6=intercepted.r6, s1=intercepted.s1, s2=s2,
    )


def _solve_message_check(m: int, r6: int, pub: GroupPublicInfo, rng):
    """Pick (c, e) and solve s2 so that g2**(m+r6) = g2**(c*E) * E**s2."""
    n = pub.n
    for _ in range(FORGE_BUDGET):
        e = rng.randrange(1, n)
        if gcd(e, n) != 1:
            continue
        c = rng.randrange(1, n)
        e_cap = pow(pub.g2, e, pub.p0)
        s2 = (m + r6 - c * e_cap) * mod_inv(e, n) % n
        return c, e_cap, s2
    raise GenerationFailed("no invertible forgery nonce e within budget")


@dataclass(frozen=True)
class FailStopTrial:
    collided: bool  # b_star hit the member's representation exactly
    factor: int | None  # nontrivial factor of n when not collided
    b: int  # the member's revealed representation, mod n
    b_star: int  # the representation implied by the attacker's forgery


def run_failstop_trial(
    credential: MemberCredential, pub: GroupPublicInfo, oracle, rng
) -> FailStopTrial:
    """One round of the forgery dispute at desk scale.

    The attacker takes logs of the session transcript (r1, r3) to learn
    b mod p1, then commits to a uniformly random lift of that residue
    mod n.  The honest member reveals b; the pair either collides
    (probability 1/q1) or factors n.
    """
    k_log = oracle.dlog(credential.r1)
    if k_log == 0:
        raise DomainError("degenerate session: r1 = 1 hides the member exponent")
    b_log = oracle.dlog(credential.r3)
    p1 = oracle.order
    b_residue = b_log * mod_inv(k_log, p1) % p1
    q1 = pub.n // p1
    b_star = b_residue + p1 * rng.randrange(q1)
    b = credential.b % pub.n
    outcome = prove_forgery(b, b_star, pub.n)
    factor = outcome.factor if isinstance(outcome, ForgeryProof) else None
    return FailStopTrial(collided=b_star == b, factor=factor, b=b, b_star=b_star)
