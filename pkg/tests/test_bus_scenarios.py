import random

import pytest

from fsgss.bus import (
    TABLE_MANAGER,
    TABLE_MEMBER,
    TABLE_RECIPIENT,
    TABLE_SC,
    MessageBus,
    enroll_over_bus,
)
from fsgss.errors import DomainError, ProtocolError
from fsgss.modmath import gcd
from fsgss.scenarios import (
    DESK_PARAMS,
    MICRO_PARAMS,
    build_desk_world,
    run_scenario,
)
from fsgss.wire import message


class TestBus:
    def test_messages_travel_encoded(self):
        bus = MessageBus()
        seen = []
        bus.attach_tap(lambda sender, recipient, msg: seen.append((sender, msg)))
        bus.send("a", "b", message("R1", r1=122))
        sender, msg = bus.receive("b")
        assert sender == "a" and msg["r1"] == 122
        assert seen == [("a", message("R1", r1=122))]

    def test_receive_without_message(self):
        with pytest.raises(ProtocolError):
            MessageBus().receive("nobody")


class TestDeskWorld:
    def test_fixed_parameter_sets_are_valid(self):
        DESK_PARAMS.validate()
        MICRO_PARAMS.validate()

    def test_enrollment_produces_signable_credentials(self):
        world = build_desk_world(random.Random(61))
        assert len(world.members) == 5
        for member in world.members:
            assert member.credential is not None
            assert gcd(member.credential.rho3, 253) == 1
        assert len(world.registry) >= 5

    def test_roster_reserves_index_zero_for_manager(self):
        world = build_desk_world(random.Random(62))
        assert world.sc.roster.ids()[0] == "u0"

    def test_enrollment_over_bus_matches_manager_record(self):
        world = build_desk_world(random.Random(63), member_count=1, enroll=False)
        member = world.members[0]
        credential = enroll_over_bus(world.bus, world.manager, member, random.Random(64))
        record = world.registry[-1]
        assert record.member_id == member.name
        assert (record.r1, record.r2) == (credential.r1, credential.r2)
        assert (record.a, record.s) == (credential.a, credential.s)


class TestKnowledgeAudit:
    def audited_world(self):
        world = build_desk_world(random.Random(65))
        rng = random.Random(66)
        for t, member in enumerate(world.members):
            sig = member.sign_message(rng.randrange(253), rng)
            member.send_signature(world.bus, world.recipient.name, sig)
            assert world.recipient.receive_signature(world.bus)
        return world

    def test_role_knowledge_matches_table(self):
        world = self.audited_world()
        assert set(world.sc.knowledge) == TABLE_SC
        assert set(world.manager.knowledge) == TABLE_MANAGER
        for member in world.members:
            assert set(member.knowledge) == TABLE_MEMBER
        assert set(world.recipient.knowledge) == TABLE_RECIPIENT

    def test_manager_never_learns_member_secrets(self):
        world = self.audited_world()
        assert not {"b", "b_prime"} & set(world.manager.knowledge)

    def test_recipient_never_learns_session_scalars(self):
        world = self.audited_world()
        assert not {"k", "r1", "r2", "a", "s", "y_i"} & set(world.recipient.knowledge)

    def test_leak_detected(self):
        world = self.audited_world()
        world.recipient.learn(k=1)  # simulated leak
        assert set(world.recipient.knowledge) != TABLE_RECIPIENT


class TestScenarios:
    def test_reports_are_reproducible(self):
        one = run_scenario("honest", 40, 7)
        two = run_scenario("honest", 40, 7)
        assert one == two
        assert one.render() == two.render()

    def test_render_is_stable_text(self):
        report = run_scenario("failstop", 30, 7)
        lines = report.render().splitlines()
        assert lines[0] == "scenario=failstop"
        assert lines[1] == "seed=7"
        assert all("=" in line for line in lines)

    def test_rates_are_rates(self):
        for name in ("honest", "maul", "dlp-forge", "failstop"):
            report = run_scenario(name, 25, 9)
            assert report.passes + report.fails == report.trials
            for value in report.rates.values():
                assert 0.0 <= value <= 1.0

    def test_unknown_scenario(self):
        with pytest.raises(DomainError):
            run_scenario("bogus", 10, 1)

    def test_maul_scenario_forges_successfully(self):
        report = run_scenario("maul", 30, 11)
        assert report.rates["forged_verify"] == 1.0

    def test_failstop_outcomes_consistent(self):
        report = run_scenario("failstop", 200, 12)
        assert report.rates["consistent"] == 1.0
        assert 0.0 <= report.rates["collision"] <= 0.15
