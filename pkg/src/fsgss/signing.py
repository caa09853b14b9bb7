"""Group signature creation and verification.

A signature on scalar m is the seven-tuple {m, c, E, r4, r6, s1, s2}.
Verification accepts iff both congruences hold in the group mod p0, with
exponent scalars reduced mod n:

    g2**r6 == y0**r4 * r4**s1          (check 1)
    g2**(m + r6) == g2**(c*E) * E**s2  (check 2)

Two signing modes exist.  `repaired` (the default) scales the credential
identity by mu = r4 * rho3**-1 mod n, so rho3*mu = r4 holds mod n by
construction and check 1 passes for every honest signature.  `literal`
uses mu = r5 mod n instead; because r4 = r3*r5 is reduced mod p0, which
is incompatible with mod-n scalar arithmetic, check 1 then only passes
when r4 happens to equal rho3*r5 mod p1.  The literal mode is kept so
that the discrepancy stays observable.
"""

from dataclasses import dataclass

from .errors import DomainError, GenerationFailed, MalformedSignature, NotInvertible
from .handshake import MemberCredential
from .modmath import gcd, mod_inv
from .roster import GroupPublicInfo

MODE_REPAIRED = "repaired"
MODE_LITERAL = "literal"
MODES = (MODE_REPAIRED, MODE_LITERAL)

NONCE_BUDGET = 64


@dataclass(frozen=True)
class Signature:
    m: int
    c: int
    e_cap: int  # E = g2**e mod p0
    r4: int
    r6: int
    s1: int
    s2: int

    def as_dict(self) -> dict:
        return {
            "m": self.m, "c": self.c, "e_cap": self.e_cap, "r4": self.r4,
            "r6": self.r6, "s1": self.s1, "s2": self.s2,
        }


@dataclass(frozen=True)
class SigningNonces:
    c: int
    e: int
    r5: int  # g2**c mod p0
    e_cap: int  # g2**e mod p0


def draw_signing_nonces(pub: GroupPublicInfo, rng) -> SigningNonces:
    """Fresh (c, e) in [1, n) with gcd(e, n) = 1, plus their group images."""
    for _ in range(NONCE_BUDGET):
        c = rng.randrange(1, pub.n)
        e = rng.randrange(1, pub.n)
        if gcd(e, pub.n) != 1:
            continue
        return SigningNonces(
            c=c, e=e, r5=pow(pub.g2, c, pub.p0), e_cap=pow(pub.g2, e, pub.p0)
        )
    raise GenerationFailed("no invertible signing nonce e within budget")


def sign(
    credential: MemberCredential,
    pub: GroupPublicInfo,
    m: int,
    rng,
    mode: str = MODE_REPAIRED,
) -> Signature:
    """Sign scalar m in [0, n) with the given credential."""
    if mode not in MODES:
        raise DomainError(f"unknown mode: {mode!r}")
    if not 0 <= m < pub.n:
        raise DomainError(f"m out of range: {m}")
    n, p0 = pub.n, pub.p0
    ba = (credential.b % n) * credential.a % n
    last_error = None
    for _ in range(NONCE_BUDGET):
        nonces = draw_signing_nonces(pub, rng)
        r4 = credential.r3 * nonces.r5 % p0
        try:
            if mode == MODE_LITERAL:
                mu = nonces.r5 % n
            else:
                mu = r4 * mod_inv(credential.rho3, n) % n
        except NotInvertible as exc:
            last_error = exc  # rho3 shares a factor with n; retry per budget
            continue
        s1 = mu * credential.s % n
        r6 = (ba + nonces.c * credential.s) * mu % n
        s2 = (m + r6 - nonces.c * nonces.e_cap) * mod_inv(nonces.e, n) % n
        return Signature(
            m=m, c=nonces.c, e_cap=nonces.e_cap, r4=r4, r6=r6, s1=s1, s2=s2
        )
    raise GenerationFailed(f"signing failed within budget: {last_error}")


def validate_signature(pub: GroupPublicInfo, sig: Signature) -> None:
    """Range-check every field; raises MalformedSignature."""
    for name in ("e_cap", "r4"):
        value = getattr(sig, name)
        if not 1 <= value < pub.p0:
            raise MalformedSignature(f"{name} out of range: {value}")
    for name in ("m", "c", "r6", "s1", "s2"):
        value = getattr(sig, name)
        if not 0 <= value < pub.n:
            raise MalformedSignature(f"{name} out of range: {value}")


def verify(pub: GroupPublicInfo, sig: Signature) -> bool:
    """True iff both verification congruences hold.

    Uses only public values {g2, p0, n, y0}; nothing in the check or the
    signature identifies the member who signed.
    """
    validate_signature(pub, sig)
    p0, n = pub.p0, pub.n
    lhs1 = pow(pub.g2, sig.r6, p0)
    rhs1 = pow(pub.y0, sig.r4 % n, p0) * pow(sig.r4, sig.s1, p0) % p0
    if lhs1 != rhs1:
        return False
    lhs2 = pow(pub.g2, (sig.m + sig.r6) % n, p0)
    rhs2 = pow(pub.g2, sig.c * sig.e_cap % n, p0) * pow(sig.e_cap, sig.s2, p0) % p0
    return lhs2 == rhs2
