import pytest
from hypothesis import given
from hypothesis import strategies as st

from adicert.corpus import bundled_names, bundled_text, random_entry
from adicert.instance import Instance, InstanceError, parse_instance, print_instance
from adicert.ring import ZZ

from conftest import F5

MINIMAL = """
ring = "Z"
[modules]
M = [["2"]]
[ideals]
I = ["2"]
"""


def test_minimal_instance():
    inst = parse_instance(MINIMAL)
    assert inst.ring == ZZ
    assert inst.module("M").invariants() == (0, (2,))
    assert inst.ideal("I").reduced == 2


def test_polynomial_instance():
    inst = parse_instance('ring = "F5[t]"\n[modules]\nM = [["t^2"]]\n[ideals]\nI = ["t"]\n')
    t = F5.parse("t")
    assert inst.module().invariants() == (0, (t * t,))


def test_ideal_keeps_generators():
    inst = parse_instance('ring = "Z"\n[ideals]\nI = ["4", 6]\n')
    I = inst.ideal("I")
    assert I.reduced == 2 and I.generators == (4, 6)


@pytest.mark.parametrize("text,fragment", [
    ('ring = "Z"\n[modules]\nM = [["2"]\n', "line 4, column 1"),
    ('ring = "R[x]"\n', "unknown ring"),
    ('ring = "F4[t]"\n', "prime"),
    ('ring = "Z"\n[modules]\nM = [["t"]]\n', "modules.M[0][0]"),
    ('ring = "Z"\n[modules]\nM = [["1"], ["2", "3"]]\n', "different lengths"),
    ('ring = "Z"\n[modules]\nA = [["2"]]\n[ideals]\nA = ["2"]\n', "both"),
    ('ring = "Z"\n[systems]\nx = ["2", "2", "2", "2"]\n', "at most 3"),
    ('[modules]\nM = [["2"]]\n', "missing 'ring'"),
    ('ring = "Z"\nextra = 1\n', "unknown keys"),
])
def test_instance_errors(text, fragment):
    with pytest.raises(InstanceError) as exc:
        parse_instance(text)
    assert fragment in str(exc.value)


def test_missing_entity():
    inst = parse_instance(MINIMAL)
    with pytest.raises(InstanceError, match="missing module"):
        inst.module("N")
    with pytest.raises(InstanceError, match="no system"):
        inst.system()


def test_print_is_fixed_point_after_one_pass():
    messy = 'ring = "GF(5)[t]"\n[modules]\nM = [["t^2 + 7", "0"], ["2*t", "t"]]\n[ideals]\nI = ["3*t^2"]\n'
    once = print_instance(parse_instance(messy))
    assert print_instance(parse_instance(once)) == once
    assert 'ring = "F5[t]"' in once and '"t^2 + 2"' in once


@pytest.mark.parametrize("name", bundled_names())
def test_bundled_round_trip(name):
    inst = parse_instance(bundled_text(name))
    text = print_instance(inst)
    assert print_instance(parse_instance(text)) == text
    assert parse_instance(text).digest() == inst.digest()


@given(st.integers(0, 10**6))
def test_random_round_trip(seed):
    import random
    e = random_entry(random.Random(seed))
    inst = Instance(e.M.ring, {"M": e.M}, {"I": e.I}, {"x": e.system})
    text = print_instance(inst)
    back = parse_instance(text)
    assert back.module("M") == e.M and back.module("M").presentation == e.M.presentation
    assert back.ideal("I") == e.I and back.system("x") == e.system
    assert print_instance(back) == text


def test_at_least_ten_bundled():
    assert len(bundled_names()) >= 10 and "z-mod8-at-2" in bundled_names()
