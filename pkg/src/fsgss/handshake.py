"""The 3-way enrollment exchange between the manager and a member.

Message flow:  member -> REQ -> manager -> R1{r1} -> member -> R2{r2}
-> manager -> AS{a, s} -> member finalizes.  The manager ends up with a
session record (k, r1, r2, a, s) that later lets it open signatures; the
member ends up with signing material (b', b, r1, r3, rho3, r2, a, s).
Neither side ever learns the other's secret exponents.

Scalars that mix a group element into mod-n arithmetic always go through
its residue mod n; this is exact in the exponent because p1 divides n.
"""

from dataclasses import dataclass, field

from .errors import (
    CredentialInvalid,
    DomainError,
    GenerationFailed,
    ProtocolError,
)
from .modmath import gcd, mod_inv
from .roster import GroupPublicInfo, KeyPair, Roster
from .wire import WireMessage, message

RESAMPLE_BUDGET = 64


@dataclass
class ManagerSession:
    """Manager-side state for one enrollment, keyed by member id."""

    member_id: str
    k: int
    r1: int
    stage: str = "r1-sent"  # -> "issued"
    r2: int | None = None
    a: int | None = None
    s: int | None = None

    def record(self) -> "SessionRecord":
        if self.stage != "issued":
            raise ProtocolError(f"session for {self.member_id} not issued yet")
        return SessionRecord(
            member_id=self.member_id, k=self.k, r1=self.r1,
            r2=self.r2, a=self.a, s=self.s,
        )


@dataclass(frozen=True)
class SessionRecord:
    """The persisted per-session tuple that enables opening."""

    member_id: str
    k: int
    r1: int
    r2: int
    a: int
    s: int

    def as_dict(self) -> dict:
        return {
            "member": self.member_id, "k": self.k, "r1": self.r1,
            "r2": self.r2, "a": self.a, "s": self.s,
        }


@dataclass
class ManagerState:
    """The manager's long-lived state: keypair, roster view, sessions."""

    keypair: KeyPair
    pub: GroupPublicInfo
    roster: Roster
    sessions: dict = field(default_factory=dict)
    records: list = field(default_factory=list)


@dataclass(frozen=True)
class MemberCredential:
    """A member's post-enrollment signing material."""

    member_id: str
    b_prime: int
    b: int
    r1: int
    r3: int
    rho3: int
    r2: int
    a: int
    s: int

    def as_dict(self) -> dict:
        return {
            "member": self.member_id, "b_prime": self.b_prime, "b": self.b,
            "r1": self.r1, "r3": self.r3, "rho3": self.rho3,
            "r2": self.r2, "a": self.a, "s": self.s,
        }


@dataclass
class EnrollmentDraft:
    """Member-side credential-in-progress."""

    member_id: str
    pub: GroupPublicInfo
    stage: str = "start"  # -> "await-r1" -> "await-as" -> "done"
    r1: int | None = None
    b_prime: int | None = None
    b: int | None = None
    r3: int | None = None
    rho3: int | None = None
    r2: int | None = None


def mgr_begin(state: ManagerState, member_id: str, rng) -> WireMessage:
    """Open a session: fresh k in [1, n), r1 = g2**k mod p0, send R1.

    Draws with r1 = 1 are rejected; an identity commitment would make the
    session useless for opening (and trivially linkable).
    """
    if member_id not in state.roster:
        raise ProtocolError(f"member {member_id!r} is not registered")
    pub = state.pub
    for _ in range(RESAMPLE_BUDGET):
        k = rng.randrange(1, pub.n)
        r1 = pow(pub.g2, k, pub.p0)
        if r1 != 1:
            break
    else:
        raise GenerationFailed("could not draw a non-degenerate session nonce")
    state.sessions[member_id] = ManagerSession(member_id=member_id, k=k, r1=r1)
    return message("R1", r1=r1)


def member_respond(draft: EnrollmentDraft, r1_msg: WireMessage, rng) -> WireMessage:
    """Pick b' (with gcd(b, n) = 1), derive r3, rho3, and reply R2{r2}."""
    if draft.stage != "await-r1":
        raise ProtocolError(f"unexpected R1 in stage {draft.stage!r}")
    if r1_msg.tag != "R1":
        raise ProtocolError(f"expected R1, got {r1_msg.tag}")
    pub = draft.pub
    r1 = r1_msg["r1"]
    if not 1 <= r1 < pub.p0:
        raise DomainError(f"r1 out of range: {r1}")
    for _ in range(RESAMPLE_BUDGET):
        b_prime = rng.randrange(1, pub.n)
        b = pow(pub.g2, b_prime, pub.p0)
        if gcd(b, pub.n) == 1:
            break
    else:
        raise GenerationFailed("no b with gcd(b, n) = 1 within budget")
    r3 = pow(r1, b, pub.p0)
    rho3 = r3 % pub.n
    r2 = rho3 * mod_inv(b % pub.n, pub.n) % pub.n
    draft.r1, draft.b_prime, draft.b = r1, b_prime, b
    draft.r3, draft.rho3, draft.r2 = r3, rho3, r2
    draft.stage = "await-as"
    return message("R2", r2=r2)


def mgr_issue(state: ManagerState, member_id: str, r2_msg: WireMessage, rng) -> WireMessage:
    """Sample s coprime to n, set a = x0*r2 + k*s mod n, persist the record."""
    session = state.sessions.get(member_id)
    if session is None or session.stage != "r1-sent":
        raise ProtocolError(f"no open session for {member_id!r} awaiting R2")
    if r2_msg.tag != "R2":
        raise ProtocolError(f"expected R2, got {r2_msg.tag}")
    pub = state.pub
    r2 = r2_msg["r2"]
    if not 0 <= r2 < pub.n:
        raise DomainError(f"r2 out of range: {r2}")
    for _ in range(RESAMPLE_BUDGET):
        s = rng.randrange(1, pub.n)
        if gcd(s, pub.n) == 1:
            break
    else:
        raise GenerationFailed("no s with gcd(s, n) = 1 within budget")
    a = (state.keypair.x * r2 + session.k * s) % pub.n
    session.r2, session.a, session.s = r2, a, s
    session.stage = "issued"
    state.records.append(session.record())
    return message("AS", a=a, s=s)


def member_finalize(draft: EnrollmentDraft, as_msg: WireMessage) -> MemberCredential:
    """Check the issued (a, s) against the credential identity and finish.

    Accepts iff g2**(b*a) = y0**rho3 * r3**s (mod p0), exponents mod n.
    """
    if draft.stage != "await-as":
        raise ProtocolError(f"unexpected AS in stage {draft.stage!r}")
    if as_msg.tag != "AS":
        raise ProtocolError(f"expected AS, got {as_msg.tag}")
    pub = draft.pub
    a, s = as_msg["a"], as_msg["s"]
    if not 0 <= a < pub.n or not 0 <= s < pub.n:
        raise DomainError(f"a or s out of range: {a}, {s}")
    lhs = pow(pub.g2, (draft.b % pub.n) * a % pub.n, pub.p0)
    rhs = pow(pub.y0, draft.rho3, pub.p0) * pow(draft.r3, s, pub.p0) % pub.p0
    if lhs != rhs:
        raise CredentialInvalid(f"credential check failed for {draft.member_id!r}")
    draft.stage = "done"
    return MemberCredential(
        member_id=draft.member_id, b_prime=draft.b_prime, b=draft.b,
        r1=draft.r1, r3=draft.r3, rho3=draft.rho3,
        r2=draft.r2, a=a, s=s,
    )


class ManagerEnrollment:
    """Manager-side state machine: REQ -> R1, R2 -> AS, in that order."""

    def __init__(self, state: ManagerState, member_id: str):
        self.state = state
        self.member_id = member_id
        self.stage = "await-req"

    def handle(self, msg: WireMessage, rng) -> WireMessage:
        if self.stage == "await-req":
            if msg.tag != "REQ":
                raise ProtocolError(f"expected REQ, got {msg.tag}")
            reply = mgr_begin(self.state, self.member_id, rng)
            self.stage = "await-r2"
            return reply
        if self.stage == "await-r2":
            reply = mgr_issue(self.state, self.member_id, msg, rng)
            self.stage = "done"
            return reply
        raise ProtocolError(f"enrollment already complete, got {msg.tag}")


class MemberEnrollment:
    """Member-side state machine: sends REQ, consumes R1 then AS."""

    def __init__(self, member_id: str, pub: GroupPublicInfo):
        self.draft = EnrollmentDraft(member_id=member_id, pub=pub)

    def request(self) -> WireMessage:
        if self.draft.stage != "start":
            raise ProtocolError(f"request already sent (stage {self.draft.stage!r})")
        self.draft.stage = "await-r1"
        return message("REQ")

    def handle(self, msg: WireMessage, rng) -> WireMessage | MemberCredential:
        if self.draft.stage == "await-r1":
            return member_respond(self.draft, msg, rng)
        if self.draft.stage == "await-as":
            return member_finalize(self.draft, msg)
        raise ProtocolError(f"unexpected {msg.tag} in stage {self.draft.stage!r}")
