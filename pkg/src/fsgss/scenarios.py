"""Multi-party scenario runs on the fixed desk-scale parameter set.

Scenarios drive real parties over the in-process bus and aggregate
rates.  Everything is derived from one seeded RNG, so a report is a pure
function of (scenario, trials, seed) and renders to identical bytes on
every run.
"""

import random
from dataclasses import dataclass

from . import signing
from .adversary import (
    BruteForceDlpOracle,
    forge_reuse,
    forge_with_dlp,
    run_failstop_trial,
)
from .authority import open_signature
from .bus import (
    ManagerParty,
    MemberParty,
    MessageBus,
    RecipientParty,
    SystemCenterParty,
    enroll_over_bus,
)
from .errors import DomainError, GenerationFailed
from .modmath import GroupParams, gcd
from .signing import MODE_LITERAL, Signature

# Desk-scale groups: small enough for exhaustive discrete logs in tests.
DESK_PARAMS = GroupParams(p0=1013, p1=11, q1=23, n=253, g2=122)
MICRO_PARAMS = GroupParams(p0=61, p1=3, q1=5, n=15, g2=47)

SCENARIO_NAMES = ("honest", "maul", "dlp-forge", "failstop")

ENROLL_BUDGET = 64


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    trials: int
    passes: int
    fails: int
    rates: dict
    seed: int

    def render(self) -> str:
        lines = [
            f"scenario={self.scenario}",
            f"seed={self.seed}",
            f"trials={self.trials}",
            f"passes={self.passes}",
            f"fails={self.fails}",
        ]
        lines += [f"rate.{key}={self.rates[key]:.6f}" for key in sorted(self.rates)]
        return "\n".join(lines) + "\n"


@dataclass
class DeskWorld:
    params: GroupParams
    bus: MessageBus
    sc: SystemCenterParty
    manager: ManagerParty
    members: list
    recipient: RecipientParty

    @property
    def pub(self):
        return self.manager.pub

    @property
    def registry(self) -> list:
        return self.manager.records


def enroll_signable(world: DeskWorld, member: MemberParty, rng) -> None:
    """Enroll until the credential can sign in repaired mode.

    A credential whose rho3 shares a factor with n cannot form the
    repaired multiplier; the member simply redoes the exchange.
    """
    for _ in range(ENROLL_BUDGET):
        credential = enroll_over_bus(world.bus, world.manager, member, rng)
        if gcd(credential.rho3, world.pub.n) == 1:
            return
    raise GenerationFailed(f"no signable credential for {member.name} within budget")


def build_desk_world(
    rng, member_count: int = 5, params: GroupParams = DESK_PARAMS, enroll: bool = True
) -> DeskWorld:
    bus = MessageBus()
    sc = SystemCenterParty(params)
    manager = ManagerParty(sc, rng)
    members = [MemberParty(f"u{i}", sc, rng) for i in range(1, member_count + 1)]
    recipient = RecipientParty(manager.pub)
    world = DeskWorld(
        params=params, bus=bus, sc=sc, manager=manager,
        members=members, recipient=recipient,
    )
    for member in members:
        member.bind_group(manager.keypair.y)
        if enroll:
            enroll_signable(world, member, rng)
    return world


def run_scenario(name: str, trials: int, seed: int) -> ScenarioReport:
    if name not in SCENARIO_NAMES:
        raise DomainError(f"unknown scenario: {name!r}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    runner = {
        "honest": _run_honest,
        "maul": _run_maul,
        "dlp-forge": _run_dlp_forge,
        "failstop": _run_failstop,
    }[name]
    passes, rates = runner(trials, rng)
    return ScenarioReport(
        scenario=name, trials=trials, passes=passes,
        fails=trials - passes, rates=rates, seed=seed,
    )


def _run_honest(trials: int, rng) -> tuple[int, dict]:
    """Sign/verify both modes; track the literal-mode pass structure.

    Besides the pass rates this measures, per trial, whether literal
    verification agreed with the predicted condition
    r4 = rho3 * r5 (mod p1); disagreements are reported as violations.
    """
    world = build_desk_world(rng)
    p0, p1, n = world.params.p0, world.params.p1, world.params.n
    passes = literal_passes = violations = 0
    for t in range(trials):
        member = world.members[t % len(world.members)]
        m = rng.randrange(n)
        sig = member.sign_message(m, rng)
        member.send_signature(world.bus, world.recipient.name, sig)
        if world.recipient.receive_signature(world.bus):
            passes += 1
        literal = signing.sign(member.credential, member.pub, m, rng,
                               mode=MODE_LITERAL)
        literal_ok = signing.verify(member.pub, literal)
        r5 = pow(world.params.g2, literal.c, p0)
        predicted = (literal.r4 - member.credential.rho3 * r5) % p1 == 0
        literal_passes += literal_ok
        violations += literal_ok != predicted
    rates = {
        "repaired_pass": passes / trials,
        "literal_pass": literal_passes / trials,
        "literal_equivalence_violation": violations / trials,
    }
    return passes, rates


def _run_maul(trials: int, rng) -> tuple[int, dict]:
    """Replay intercepted signatures under fresh messages (no oracle)."""
    world = build_desk_world(rng)
    n = world.params.n
    intercepted: list[Signature] = []

    def wiretap(sender, recipient, msg):
        if msg.tag == "SIG":
            intercepted.append(Signature(**msg.fields))

    world.bus.attach_tap(wiretap)
    forged_ok = origin_found = 0
    for t in range(trials):
        member = world.members[t % len(world.members)]
        sig = member.sign_message(rng.randrange(n), rng)
        member.send_signature(world.bus, world.recipient.name, sig)
        world.recipient.receive_signature(world.bus)
        mauled = forge_reuse(intercepted[-1], rng.randrange(n), world.pub, rng)
        if signing.verify(world.pub, mauled):
            forged_ok += 1
            opened = open_signature(mauled, world.registry,
                                    world.manager.keypair.x, world.pub)
            origin_found += member.name in opened.member_ids()
    rates = {
        "forged_verify": forged_ok / trials,
        "origin_attribution": origin_found / trials,
    }
    return forged_ok, rates


def _run_dlp_forge(trials: int, rng) -> tuple[int, dict]:
    """Oracle-backed forgeries; they verify but never open to a session."""
    world = build_desk_world(rng)
    oracle = BruteForceDlpOracle(world.pub)
    forged_ok = spurious = 0
    for _ in range(trials):
        forged = forge_with_dlp(rng.randrange(world.params.n), world.pub, oracle, rng)
        if signing.verify(world.pub, forged):
            forged_ok += 1
            opened = open_signature(forged, world.registry,
                                    world.manager.keypair.x, world.pub)
            spurious += bool(opened.matches)
    rates = {
        "forged_verify": forged_ok / trials,
        "spurious_attribution": spurious / trials,
    }
    return forged_ok, rates


def _run_failstop(trials: int, rng) -> tuple[int, dict]:
    """Fresh enrollment per trial; dispute either collides or factors n."""
    world = build_desk_world(rng, enroll=False)
    oracle = BruteForceDlpOracle(world.pub)
    p1, q1 = world.params.p1, world.params.q1
    collisions = consistent = 0
    for t in range(trials):
        member = world.members[t % len(world.members)]
        enroll_over_bus(world.bus, world.manager, member, rng)
        trial = run_failstop_trial(member.credential, world.pub, oracle, rng)
        collisions += trial.collided
        if trial.collided:
            consistent += trial.factor is None
        else:
            consistent += trial.factor in (p1, q1)
    rates = {
        "collision": collisions / trials,
        "consistent": consistent / trials,
    }
    return consistent, rates
