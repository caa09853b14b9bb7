import pytest
from hypothesis import given, strategies as st

from fsgss.errors import ParseError
from fsgss.wire import FIELD_ORDER, decode, encode, message, parse_hex, to_hex


class TestHexCanon:
    def test_examples(self):
        assert to_hex(122) == "7a"
        assert to_hex(0) == "0"
        assert parse_hex("7a") == 122
        assert parse_hex("0") == 0

    @pytest.mark.parametrize("bad", ["07a", "", "7A", "0x7a", " 7a", "7a\n", "00"])
    def test_non_canonical_rejected(self, bad):
        with pytest.raises(ParseError):
            parse_hex(bad)

    @given(st.integers(0, 1 << 256))
    def test_round_trip(self, value):
        assert parse_hex(to_hex(value)) == value


class TestEncode:
    def test_r1_example(self):
        assert encode(message("R1", r1=122)) == b"type=R1\nr1=7a\n"

    def test_req_has_no_fields(self):
        assert encode(message("REQ")) == b"type=REQ\n"

    def test_sig_field_order(self):
        data = encode(message("SIG", m=1, c=2, e_cap=3, r4=4, r6=5, s1=6, s2=7))
        assert data == b"type=SIG\nm=1\nc=2\ne_cap=3\nr4=4\nr6=5\ns1=6\ns2=7\n"

    def test_unknown_tag_rejected(self):
        with pytest.raises(ParseError):
            message("NOPE", x=1)

    def test_wrong_fields_rejected(self):
        with pytest.raises(ParseError):
            message("R1", r2=1)


class TestDecode:
    def test_example(self):
        msg = decode(b"type=R1\nr1=7a\n")
        assert msg.tag == "R1" and msg["r1"] == 122

    @pytest.mark.parametrize("data", [
        b"type=R1\nr1=07a\n",        # non-minimal hex
        b"type=R1\nr1=7a",           # missing final newline
        b"type=R1\n",                # missing field
        b"type=R1\nr1=7a\nr2=1\n",   # extra field
        b"type=AS\ns=3\na=5\n",      # wrong order
        b"type=ZZZ\n",               # unknown tag
        b"r1=7a\n",                  # missing type line
        b"type=R1\nr1\n",            # no separator
    ])
    def test_malformed_rejected(self, data):
        with pytest.raises(ParseError):
            decode(data)


@st.composite
def wire_messages(draw):
    tag = draw(st.sampled_from(sorted(FIELD_ORDER)))
    fields = {name: draw(st.integers(0, 1 << 64)) for name in FIELD_ORDER[tag]}
    return message(tag, **fields)


class TestRoundTrip:
    @given(wire_messages())
    def test_decode_encode_identity(self, msg):
        assert decode(encode(msg)) == msg

    @given(wire_messages())
    def test_encode_is_stable(self, msg):
        assert encode(msg) == encode(decode(encode(msg)))
