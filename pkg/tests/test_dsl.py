from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mfcalc import dsl
from mfcalc.corpus import SCRIPTS
from mfcalc.poly import Polynomial

HEADER = "ring x, y weights 1, 1 degree 2; potential W = x*y;"


def test_four_statement_script():
    s = dsl.parse("ring x,y weights 1,1 degree 2; potential W = x*y; mf E = koszul([x],[y]); print chern(E);")
    assert len(s.statements) == 4
    assert isinstance(s.statements[2].expr, dsl.Koszul)
    assert (s.statements[3].kind, s.statements[3].name, s.statements[3].args) == ("print", "chern", ("E",))


def test_potential_undeclared():
    with pytest.raises(dsl.SemanticError, match="potential undeclared") as err:
        dsl.parse("mf E = koszul([x],[y]);")
    assert err.value.index == 0


def test_undefined_identifier_is_named():
    with pytest.raises(dsl.SemanticError, match="undefined identifier F"):
        dsl.parse(HEADER + " mf E = koszul([x],[y]); print euler(E,F);")


def test_unknown_variable():
    with pytest.raises(dsl.SemanticError, match="undefined identifier z"):
        dsl.parse(HEADER + " mf E = koszul([z],[y]);")


def test_parse_error_position():
    src = "ring x, y;\npotential W = x*y\nmf E = koszul([x], [y]);"
    with pytest.raises(dsl.ParseError) as err:
        dsl.parse(src)
    assert (err.value.line, err.value.col) == (3, 1)
    assert ";" in err.value.expected
    assert str(err.value).startswith("3:1:")


def test_hyphenated_commands_and_minus():
    s = dsl.parse(HEADER + " mf E = koszul([x-y], [x+y]); check exp-equiv(E); check closed(E);")
    cmd = s.statements[3]
    assert cmd.name == "exp-equiv"
    assert dsl.eval_poly(s.statements[2].expr.a[0], ("x", "y")) == Polynomial.var(2, 0) - Polynomial.var(2, 1)


def test_comments_and_rationals():
    s = dsl.parse("# a comment\nring x; # another\npotential W = 1/2*x^2;")
    assert dsl.eval_poly(s.statements[1].poly, ("x",)) == Polynomial.var(1, 0) ** 2 * Polynomial.const(1, 1).scale(Fraction(1, 2))


def test_bad_arity():
    with pytest.raises(dsl.SemanticError, match="takes 2"):
        dsl.parse(HEADER + " mf E = koszul([x],[y]); print euler(E);")


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_round_trip_corpus(name):
    s = dsl.parse(SCRIPTS[name])
    assert dsl.parse(dsl.pretty(s)) == s


atoms = st.one_of(
    st.sampled_from(["x", "y"]),
    st.integers(1, 9).map(str),
    st.tuples(st.integers(1, 9), st.integers(2, 9)).map(lambda t: f"{t[0]}/{t[1]}"),
)


def powers(inner):
    base = st.one_of(atoms, inner.map(lambda s: f"({s})"))
    return st.tuples(base, st.one_of(st.none(), st.integers(0, 3))).map(lambda t: t[0] if t[1] is None else f"{t[0]}^{t[1]}")


def sums(inner):
    prod = st.lists(powers(inner), min_size=1, max_size=3).map("*".join)
    return st.tuples(st.booleans(), st.lists(st.tuples(st.sampled_from(["+", "-"]), prod), min_size=1, max_size=3)).map(
        lambda t: ("-" if t[0] else "") + " ".join(f"{op} {p}" if k else p for k, (op, p) in enumerate(t[1]))
    )


poly_src = st.recursive(atoms, sums, max_leaves=8)


@given(poly_src)
def test_round_trip_random_polynomials(src):
    s = dsl.parse(f"ring x, y; potential W = {src};")
    again = dsl.parse(dsl.pretty(s))
    assert again == s
    names = ("x", "y")
    assert dsl.eval_poly(again.statements[1].poly, names) == dsl.eval_poly(s.statements[1].poly, names)
