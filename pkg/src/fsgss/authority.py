"""Manager-only capabilities: opening signatures and proving forgeries.

Opening walks the session registry and, per session, unwinds the scalar
chain of a verified signature:

    mu   = s1 * s**-1        (mod n)
    rho3 : solutions of rho3 * mu = r4  (mod n)
    b    = rho3 * r2**-1     (mod n)

mu need not be a unit mod n (honest signatures can have gcd(r4, n) > 1),
so the middle step solves the congruence and enumerates its gcd(mu, n)
solutions rather than inverting.  A candidate is accepted only if it
replays the session transcript and is consistent with the signature's
r6 under the manager's secret key:

    (g2**(k*b) mod p0) mod n == rho3
    r6 == x0*r4 + (k*b + c)*s1   (mod n in repaired mode; in literal
                                  mode only the group image of both
                                  sides can be compared)

A proof of forgery is a nontrivial factor of n extracted from two
exponent representations that agree mod p1 but differ mod n.
"""

from dataclasses import dataclass

from .errors import NotInvertible, ParseError, RefusedUnverified
from .handshake import SessionRecord
from .modmath import gcd, mod_inv
from .roster import GroupPublicInfo
from .signing import MODE_LITERAL, MODE_REPAIRED, Signature, verify
from .wire import parse_hex, to_hex

INDISTINGUISHABLE = "indistinguishable"
NO_FACTOR = "no-factor"

# Sessions whose congruence step would enumerate more candidates than
# this are skipped; only reachable for degenerate scalars (mu = 0).
CANDIDATE_LIMIT = 4096

REGISTRY_FIELDS = ("member", "k", "r1", "r2", "a", "s")


@dataclass(frozen=True)
class OpeningMatch:
    member_id: str
    b: int  # recovered signer exponent, as a residue mod n
    rho3: int


@dataclass(frozen=True)
class OpeningResult:
    matches: list
    skipped: list  # (member_id, reason) for sessions the chain cannot process

    def member_ids(self) -> list:
        return [match.member_id for match in self.matches]


@dataclass(frozen=True)
class ForgeryProof:
    """Two representations of the same mod-p1 exponent and the factor of n
    their difference exposes."""

    b: int
    b_star: int
    factor: int


def open_signature(
    sig: Signature,
    registry: list,
    x0: int,
    pub: GroupPublicInfo,
    mode: str = MODE_REPAIRED,
) -> OpeningResult:
    """Identify the session(s) that could have produced a valid signature.

    Refuses signatures that do not verify.  Returns every session passing
    the replay and consistency checks; desk-scale collisions make
    multiple matches possible, so callers decide how to treat ties.
    """
    if not verify(pub, sig):
        raise RefusedUnverified("will not open a signature that fails verification")
    n, p0, g2 = pub.n, pub.p0, pub.g2
    matches, skipped = [], []
    for record in registry:
        try:
            s_inv = mod_inv(record.s, n)
        except NotInvertible:
            skipped.append((record.member_id, "s not invertible mod n"))
            continue
        try:
            r2_inv = mod_inv(record.r2, n)
        except NotInvertible:
            skipped.append((record.member_id, "r2 not invertible mod n"))
            continue
        mu = sig.s1 * s_inv % n
        for rho3 in _solve_linear(mu, sig.r4 % n, n, record, skipped):
            b = rho3 * r2_inv % n
            if pow(g2, record.k * b, p0) % n != rho3:
                continue
            if not _r6_consistent(sig, record.k, b, x0, pub, mode):
                continue
            matches.append(OpeningMatch(member_id=record.member_id, b=b, rho3=rho3))
    return OpeningResult(matches=matches, skipped=skipped)


def _solve_linear(mu: int, target: int, n: int, record, skipped) -> list:
    """All rho3 in [0, n) with rho3 * mu = target (mod n)."""
    d = gcd(mu, n)
    if target % d != 0:
        return []
    if d > CANDIDATE_LIMIT:
        skipped.append((record.member_id, f"degenerate scalar, {d} candidates"))
        return []
    step = n // d
    base = 0 if step == 1 else target // d * mod_inv(mu // d, step) % step
    return [base + i * step for i in range(d)]


def _r6_consistent(sig, k, b, x0, pub, mode) -> bool:
    expected = x0 * sig.r4 + (k * b + sig.c) * sig.s1
    if mode == MODE_LITERAL:
        # literal signing only guarantees the identity up to the subgroup
        # order, which the manager does not know; compare group images.
        return pow(pub.g2, sig.r6, pub.p0) == pow(pub.g2, expected % pub.n, pub.p0)
    return (sig.r6 - expected) % pub.n == 0


def prove_forgery(b: int, b_star: int, n: int):
    """gcd(|b - b_star|, n) when it is a nontrivial factor.

    Returns a ForgeryProof, or INDISTINGUISHABLE when the two
    representations coincide, or NO_FACTOR when the difference shares no
    proper factor with n (the inputs do not witness a forgery).
    """
    if b == b_star:
        return INDISTINGUISHABLE
    d = gcd(abs(b - b_star), n)
    if d in (1, n):
        return NO_FACTOR
    return ForgeryProof(b=b, b_star=b_star, factor=d)


def registry_store(path, records: list) -> None:
    """Append session records to the registry file (one line per record)."""
    with open(path, "a", encoding="ascii") as fh:
        for record in records:
            fh.write(format_record(record) + "\n")


def registry_load(path) -> list:
    """Parse a registry file; raises ParseError with the offending line."""
    with open(path, "r", encoding="ascii", newline="") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        raise ParseError("truncated final line", line=text.count("\n") + 1)
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        records.append(parse_record(line, lineno))
    return records


def format_record(record: SessionRecord) -> str:
    return (
        f"member={record.member_id} k={to_hex(record.k)} r1={to_hex(record.r1)}"
        f" r2={to_hex(record.r2)} a={to_hex(record.a)} s={to_hex(record.s)}"
    )


def parse_record(line: str, lineno: int | None = None) -> SessionRecord:
    parts = line.split(" ")
    if len(parts) != len(REGISTRY_FIELDS):
        raise ParseError(
            f"expected {len(REGISTRY_FIELDS)} fields, got {len(parts)}", line=lineno
        )
    values = {}
    for part, expected in zip(parts, REGISTRY_FIELDS):
        name, sep, value = part.partition("=")
        if not sep or name != expected:
            raise ParseError(f"expected {expected}=..., got {part!r}", line=lineno)
        values[name] = value
    return SessionRecord(
        member_id=values["member"],
        k=parse_hex(values["k"], line=lineno),
        r1=parse_hex(values["r1"], line=lineno),
        r2=parse_hex(values["r2"], line=lineno),
        a=parse_hex(values["a"], line=lineno),
        s=parse_hex(values["s"], line=lineno),
    )
