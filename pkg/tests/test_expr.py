import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicvoa.brackets import apply_h_bracket, bracket_lift
from padicvoa.expr import ParseError, format_state, parse_state
from padicvoa.fock import FockState, basis
from padicvoa.modes import random_state

S = FockState
vac = S.vacuum()
h = lambda *parts: S.monomial(parts)


def random_expression(rng: random.Random) -> str:
    """Noncanonical text: mixed atoms, powers, spacing, signs and scalars."""
    terms = []
    for i in range(rng.randint(1, 4)):
        atoms = []
        for _ in range(rng.randint(0, 3)):
            n = rng.randint(1, 4)
            br = rng.random() < 0.3
            atom = f"h[-{n}]" if br else f"h(-{n})"
            if rng.random() < 0.3:
                atom += f"^{rng.randint(1, 3)}"
            atoms.append(atom)
        coeff = ""
        if rng.random() < 0.6:
            num, den = rng.randint(0, 9), rng.randint(1, 6)
            coeff = f"{num}/{den} * " if rng.random() < 0.5 else f"{num} *"
        sign = rng.choice(["+", "-"]) if i else rng.choice(["", "-"])
        sp = " " * rng.randint(0, 2)
        terms.append(f"{sign}{sp}{coeff}{sp.join(atoms)}{' ' if atoms else ''}vac")
    return " ".join(terms)


def _corpus(n=200):
    out, seed = [], 0
    while len(out) < n:
        text = random_expression(random.Random(seed))
        if text not in out:
            out.append(text)
        seed += 1
    return out


CORPUS = _corpus()


def test_examples():
    assert parse_state("h(-1)^2 vac") == h(1, 1)
    assert parse_state("h[-2] vac") == h(2) + h(1)
    assert parse_state("h[-2] vac") == bracket_lift(h(2))
    assert parse_state("1/2 * h(-1) h(-3) vac - vac") == h(3, 1) * Fraction(1, 2) - vac
    assert parse_state("vac") == vac
    assert parse_state("0 * vac") == S.zero()
    assert parse_state("-vac") == vac * -1


def test_format_examples():
    assert format_state(h(3, 1) * Fraction(1, 2) - vac) == "1/2 * h(-3) h(-1) vac - vac"
    assert format_state(h(2, 2, 1) * -3) == "-3 * h(-2)^2 h(-1) vac"
    assert format_state(S.zero()) == "0 * vac"


def test_bracket_atoms_act_as_operators():
    want = apply_h_bracket(-3, apply_h_bracket(-1, vac))
    assert parse_state("h[-3] h[-1] vac") == want
    # creation modes commute, so the order of atoms does not matter
    assert parse_state("h[-1] h[-3] vac") == want
    assert parse_state("h[-2]^2 vac") == apply_h_bracket(-2, apply_h_bracket(-2, vac))


def test_corpus_roundtrip():
    assert len(set(CORPUS)) == 200
    for text in CORPUS:
        state = parse_state(text)
        canon = format_state(state)
        assert parse_state(canon) == state, text
        assert format_state(parse_state(canon)) == canon, text


def test_canonical_forms_roundtrip():
    rng = random.Random(9)
    for _ in range(200):
        a = random_state(rng, 7, terms=4) * Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        text = format_state(a)
        assert parse_state(text) == a
        assert format_state(parse_state(text)) == text


@given(st.dictionaries(
    st.sampled_from([lam for d in range(6) for lam in basis(d)]),
    st.fractions(max_denominator=20).filter(lambda x: x != 0),
    max_size=5,
))
def test_roundtrip_property(terms):
    a = S(terms)
    assert parse_state(format_state(a)) == a


@pytest.mark.parametrize("text,pos", [
    ("h(-1) vac +", 11),
    ("h(-0) vac", 3),
    ("h(1) vac", 2),
    ("h(-1)", 5),
    ("2 h(-1) vac", 2),
    ("h(-1) # vac", 6),
    ("1/0 * vac", 2),
    ("h(-2)^0 vac", 6),
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_state(text)
    assert exc.value.pos == pos


def test_degree_cap():
    with pytest.raises(ValueError):
        parse_state("h(-10)^4 vac", degree_cap=30)
    assert parse_state("h(-10)^3 vac", degree_cap=30) == h(10, 10, 10)
