import random

import pytest

from conftest import SequenceRng
from fsgss.errors import DomainError, GenerationFailed, MalformedSignature
from fsgss.handshake import MemberCredential
from fsgss.signing import (
    MODE_LITERAL,
    MODE_REPAIRED,
    Signature,
    draw_signing_nonces,
    sign,
    verify,
)

# frozen from the worked exchange (x0=2, k=1, b'=1, s=3, a=5) with
# nonces c=2, e=1 and message m=10
REPAIRED_VECTOR = Signature(m=10, c=2, e_cap=122, r4=552, r6=0, s1=138, s2=19)
LITERAL_VECTOR = Signature(m=10, c=2, e_cap=122, r4=552, r6=55, s1=82, s2=74)


class TestWorkedVector:
    def test_repaired_sign(self, desk_credential, desk_pub):
        sig = sign(desk_credential, desk_pub, 10, SequenceRng([2, 1]))
        assert sig == REPAIRED_VECTOR

    def test_repaired_verifies(self, desk_pub):
        assert verify(desk_pub, REPAIRED_VECTOR)

    def test_literal_sign(self, desk_credential, desk_pub):
        sig = sign(desk_credential, desk_pub, 10, SequenceRng([2, 1]),
                   mode=MODE_LITERAL)
        assert sig == LITERAL_VECTOR

    def test_literal_vector_fails_verification(self, desk_pub):
        assert not verify(desk_pub, LITERAL_VECTOR)

    def test_zero_message_is_fine(self, desk_credential, desk_pub):
        sig = sign(desk_credential, desk_pub, 0, random.Random(3))
        assert verify(desk_pub, sig)

    def test_message_out_of_range(self, desk_credential, desk_pub):
        with pytest.raises(DomainError):
            sign(desk_credential, desk_pub, 253, random.Random(3))

    def test_unknown_mode(self, desk_credential, desk_pub):
        with pytest.raises(DomainError):
            sign(desk_credential, desk_pub, 1, random.Random(3), mode="fixed")


class TestValidation:
    def test_r4_zero_malformed(self, desk_pub):
        bad = Signature(m=10, c=2, e_cap=122, r4=0, r6=0, s1=138, s2=19)
        with pytest.raises(MalformedSignature):
            verify(desk_pub, bad)

    def test_scalar_field_out_of_range(self, desk_pub):
        bad = Signature(m=10, c=2, e_cap=122, r4=552, r6=253, s1=138, s2=19)
        with pytest.raises(MalformedSignature):
            verify(desk_pub, bad)

    def test_nonce_e_always_invertible(self, desk_pub):
        rng = random.Random(8)
        for _ in range(100):
            nonces = draw_signing_nonces(desk_pub, rng)
            from fsgss.modmath import gcd
            assert gcd(nonces.e, 253) == 1

    def test_non_invertible_rho3_exhausts_budget(self, desk_pub):
        # rho3 = 46 shares a factor with n; repaired signing cannot start
        stuck = MemberCredential(member_id="u9", b_prime=1, b=122, r1=122,
                                 r3=552, rho3=46, r2=2, a=5, s=3)
        with pytest.raises(GenerationFailed):
            sign(stuck, desk_pub, 10, random.Random(3))


def fresh_credential(rng, x0=17):
    """Full seeded exchange against a manager with secret x0."""
    from fsgss.handshake import ManagerState, MemberEnrollment, mgr_begin, \
        member_respond, mgr_issue, member_finalize
    from fsgss.roster import GroupPublicInfo, KeyPair, Roster, register

    pub = GroupPublicInfo(p0=1013, n=253, g2=122, y0=pow(122, x0, 1013))
    roster = Roster()
    register(roster, "u0", pub.y0)
    register(roster, "m", 702)
    state = ManagerState(keypair=KeyPair(x=x0, y=pub.y0), pub=pub, roster=roster)
    while True:
        machine = MemberEnrollment("m", pub)
        machine.request()
        r1 = mgr_begin(state, "m", rng)
        r2 = member_respond(machine.draft, r1, rng)
        issued = mgr_issue(state, "m", r2, rng)
        credential = member_finalize(machine.draft, issued)
        from fsgss.modmath import gcd
        if gcd(credential.rho3, pub.n) == 1:
            return credential, state.records[-1], pub


class TestCompleteness:
    def test_repaired_always_verifies(self):
        rng = random.Random(21)
        credential, _, pub = fresh_credential(rng)
        for _ in range(300):
            m = rng.randrange(253)
            assert verify(pub, sign(credential, pub, m, rng))

    def test_literal_passes_iff_r4_matches_mod_p1(self):
        rng = random.Random(22)
        credential, _, pub = fresh_credential(rng)
        passes = 0
        for _ in range(300):
            m = rng.randrange(253)
            sig = sign(credential, pub, m, rng, mode=MODE_LITERAL)
            r5 = pow(pub.g2, sig.c, pub.p0)
            predicted = (sig.r4 - credential.rho3 * r5) % 11 == 0
            assert verify(pub, sig) == predicted
            passes += predicted
        assert 0 < passes < 300  # both branches exercised

    def test_second_check_holds_in_both_modes(self):
        rng = random.Random(23)
        credential, _, pub = fresh_credential(rng)
        for mode in (MODE_REPAIRED, MODE_LITERAL):
            for _ in range(100):
                sig = sign(credential, pub, rng.randrange(253), rng, mode=mode)
                lhs = pow(pub.g2, (sig.m + sig.r6) % pub.n, pub.p0)
                rhs = (pow(pub.g2, sig.c * sig.e_cap % pub.n, pub.p0)
                       * pow(sig.e_cap, sig.s2, pub.p0) % pub.p0)
                assert lhs == rhs

    def test_exponent_chain_identity_repaired(self):
        # r6 = x0*r4 + (k*b + c)*s1 (mod n), the scalar identity behind
        # the first verification check
        rng = random.Random(24)
        credential, record, pub = fresh_credential(rng, x0=17)
        for _ in range(200):
            sig = sign(credential, pub, rng.randrange(253), rng)
            expected = (17 * sig.r4 + (record.k * credential.b + sig.c) * sig.s1) % pub.n
            assert sig.r6 == expected


class TestAnonymity:
    def test_signature_carries_no_identity(self):
        assert set(REPAIRED_VECTOR.as_dict()) == {
            "m", "c", "e_cap", "r4", "r6", "s1", "s2"
        }


class TestSoundnessSmoke:
    def test_random_field_flips_mostly_fail(self, desk_pub):
        rng = random.Random(25)
        credential, _, pub = fresh_credential(rng)
        fields = ("m", "c", "e_cap", "r4", "r6", "s1", "s2")
        trials = rejected = 0
        for _ in range(40):
            sig = sign(credential, pub, rng.randrange(253), rng)
            assert verify(pub, sig)
            for name in fields:
                original = getattr(sig, name)
                bound = pub.p0 if name in ("e_cap", "r4") else pub.n
                flipped = rng.randrange(1, bound)
                if flipped == original:
                    continue
                mutated = Signature(**{**sig.as_dict(), name: flipped})
                trials += 1
                rejected += not verify(pub, mutated)
        assert rejected / trials >= 1 - 2 / 11
