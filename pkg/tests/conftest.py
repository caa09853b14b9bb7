import pytest

from fsgss.handshake import MemberCredential
from fsgss.roster import GroupPublicInfo


class SequenceRng:
    """Feeds preset values to randrange calls, validating the bounds.

    Lets tests force exact protocol transcripts (worked examples) while
    still going through the production sampling paths.
    """

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, *bounds):
        lo, hi = (0, bounds[0]) if len(bounds) == 1 else bounds[:2]
        if not self.values:
            raise AssertionError("SequenceRng ran out of values")
        value = self.values.pop(0)
        assert lo <= value < hi, f"forced value {value} outside [{lo}, {hi})"
        return value


@pytest.fixture
def desk_pub():
    """Desk-scale group public info with manager exponent x0 = 2."""
    return GroupPublicInfo(p0=1013, n=253, g2=122, y0=702)


@pytest.fixture
def desk_credential():
    """Credential from the worked exchange (x0=2, k=1, b'=1, s=3, a=5)."""
    return MemberCredential(
        member_id="u3", b_prime=1, b=122, r1=122, r3=122, rho3=122,
        r2=1, a=5, s=3,
    )
