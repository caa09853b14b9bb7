"""In-process message bus and the protocol parties that run over it.

Every cross-party value travels as an encoded wire message, so the
canonical format is exercised on each hop.  Taps registered on the bus
observe a decoded copy of everything sent; this is where an adversary
attaches.

Each party keeps a `knowledge` dict recording which protocol parameters
it has seen, keyed by the canonical parameter names.  The knowledge
audit compares those key sets against the expected per-role sets; a key
showing up in the wrong role's dict is a leak.  Long-term key secrets
(x values, the factorization of n) live in typed attributes, not in the
knowledge dicts, mirroring how the parameter table tracks only protocol
state.
"""

from collections import deque
from dataclasses import dataclass, field

from . import handshake, signing
from .errors import ProtocolError
from .modmath import GroupParams
from .roster import (
    MANAGER_ID,
    GroupPublicInfo,
    Roster,
    ScSecret,
    member_keygen,
    register,
)
from .signing import MODE_REPAIRED, Signature
from .wire import WireMessage, decode, encode, message

# Expected knowledge per role, straight from the holder table.
SIGNATURE_KEYS = {"m", "c", "e_cap", "r4", "r6", "s1", "s2"}
TABLE_SC = {"g2", "p0", "n", "y_i"}
TABLE_MANAGER = TABLE_SC | {"r1", "k", "r2", "a", "s"}
TABLE_MEMBER = (TABLE_MANAGER - {"k"}) | {"b_prime", "b"} | SIGNATURE_KEYS
TABLE_RECIPIENT = {"g2", "p0", "n"} | SIGNATURE_KEYS


class MessageBus:
    def __init__(self):
        self._queues = {}
        self._taps = []

    def attach_tap(self, tap) -> None:
        """tap(sender, recipient, message) is invoked for every send."""
        self._taps.append(tap)

    def send(self, sender: str, recipient: str, msg: WireMessage) -> None:
        data = encode(msg)
        for tap in self._taps:
            tap(sender, recipient, decode(data))
        self._queues.setdefault(recipient, deque()).append((sender, data))

    def receive(self, recipient: str) -> tuple[str, WireMessage]:
        queue = self._queues.get(recipient)
        if not queue:
            raise ProtocolError(f"no message waiting for {recipient!r}")
        sender, data = queue.popleft()
        return sender, decode(data)


@dataclass
class Party:
    name: str
    knowledge: dict = field(default_factory=dict)

    def learn(self, **values) -> None:
        self.knowledge.update(values)


class SystemCenterParty(Party):
    """Holds the full group description and the registration roster."""

    def __init__(self, params: GroupParams):
        super().__init__(name="SC")
        self.params = params
        self.secret = ScSecret(p1=params.p1, q1=params.q1)
        self.roster = Roster()
        pub = params.public()
        self.learn(g2=pub.g2, p0=pub.p0, n=pub.n, y_i={})

    def enroll_key(self, member_id: str, y: int) -> None:
        register(self.roster, member_id, y)
        self.knowledge["y_i"] = dict(self.roster.entries)


class ManagerParty(Party):
    def __init__(self, sc: SystemCenterParty, rng):
        super().__init__(name=MANAGER_ID)
        public = sc.params.public()
        self.keypair = member_keygen(public, rng)
        sc.enroll_key(MANAGER_ID, self.keypair.y)
        self.pub = GroupPublicInfo(
            p0=public.p0, n=public.n, g2=public.g2, y0=self.keypair.y
        )
        self.state = handshake.ManagerState(
            keypair=self.keypair, pub=self.pub, roster=sc.roster
        )
        self.enrollments = {}
        self.learn(g2=public.g2, p0=public.p0, n=public.n,
                   y_i=dict(sc.roster.entries))

    def serve_one(self, bus: MessageBus, rng) -> None:
        """Receive one enrollment message and send the reply."""
        sender, msg = bus.receive(self.name)
        machine = self.enrollments.get(sender)
        if machine is None or machine.stage == "done":
            machine = handshake.ManagerEnrollment(self.state, sender)
            self.enrollments[sender] = machine
        reply = machine.handle(msg, rng)
        session = self.state.sessions[sender]
        if reply.tag == "R1":
            self.learn(k=session.k, r1=session.r1,
                       y_i=dict(self.state.roster.entries))
        else:
            self.learn(r2=session.r2, a=session.a, s=session.s)
        bus.send(self.name, sender, reply)

    @property
    def records(self) -> list:
        return self.state.records


class MemberParty(Party):
    def __init__(self, name: str, sc: SystemCenterParty, rng):
        super().__init__(name=name)
        self.public = sc.params.public()
        self.keypair = member_keygen(self.public, rng)
        sc.enroll_key(name, self.keypair.y)
        self.pub = None  # GroupPublicInfo once the manager key is known
        self.credential = None
        self._machine = None
        self.learn(g2=self.public.g2, p0=self.public.p0, n=self.public.n,
                   y_i={name: self.keypair.y})

    def bind_group(self, y0: int) -> None:
        self.pub = GroupPublicInfo(
            p0=self.public.p0, n=self.public.n, g2=self.public.g2, y0=y0
        )
        self.knowledge["y_i"] = dict(self.knowledge["y_i"], **{MANAGER_ID: y0})

    def start_enroll(self, bus: MessageBus) -> None:
        if self.pub is None:
            raise ProtocolError(f"{self.name} has no group public info yet")
        self._machine = handshake.MemberEnrollment(self.name, self.pub)
        bus.send(self.name, MANAGER_ID, self._machine.request())

    def step_enroll(self, bus: MessageBus, rng) -> None:
        """Consume one manager reply; reply in turn or finish enrollment."""
        _, msg = bus.receive(self.name)
        result = self._machine.handle(msg, rng)
        draft = self._machine.draft
        if isinstance(result, WireMessage):
            self.learn(r1=draft.r1, b_prime=draft.b_prime, b=draft.b, r2=draft.r2)
            bus.send(self.name, MANAGER_ID, result)
        else:
            self.credential = result
            self.learn(a=result.a, s=result.s)

    def sign_message(self, m: int, rng, mode: str = MODE_REPAIRED) -> Signature:
        if self.credential is None:
            raise ProtocolError(f"{self.name} is not enrolled")
        sig = signing.sign(self.credential, self.pub, m, rng, mode=mode)
        self.learn(**sig.as_dict())
        return sig

    def send_signature(self, bus: MessageBus, recipient: str, sig: Signature) -> None:
        bus.send(self.name, recipient, message("SIG", **sig.as_dict()))


class RecipientParty(Party):
    def __init__(self, pub: GroupPublicInfo, name: str = "R"):
        super().__init__(name=name)
        self.pub = pub
        self.last_signature = None
        self.last_valid = None
        self.learn(g2=pub.g2, p0=pub.p0, n=pub.n)

    def receive_signature(self, bus: MessageBus) -> bool:
        _, msg = bus.receive(self.name)
        if msg.tag != "SIG":
            raise ProtocolError(f"expected SIG, got {msg.tag}")
        sig = Signature(**msg.fields)
        self.last_signature = sig
        self.last_valid = signing.verify(self.pub, sig)
        self.learn(**sig.as_dict())
        return self.last_valid


def enroll_over_bus(bus: MessageBus, manager: ManagerParty,
                    member: MemberParty, rng) -> handshake.MemberCredential:
    """Drive one full REQ -> R1 -> R2 -> AS exchange to completion."""
    member.start_enroll(bus)
    manager.serve_one(bus, rng)  # REQ -> R1
    member.step_enroll(bus, rng)  # R1 -> R2
    manager.serve_one(bus, rng)  # R2 -> AS
    member.step_enroll(bus, rng)  # AS -> credential
    return member.credential
