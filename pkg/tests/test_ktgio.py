import pytest

from ktgspin.algebra import AlgebraError
from ktgspin.diagram import mirror
from ktgspin.ktgio import CORPUS, ParseError, load_corpus, parse, parse_table, serialize, table_violations

THETA = """ktg v1
name theta
vertex v1 (+a1 +a2 +a3)
vertex v2 (-a3 -a2 -a1)
edge e1 = a1
edge e2 = a2
edge e3 = a3
"""


def test_parse_theta():
    d = parse(THETA)
    assert d.vertices == ("v1", "v2")
    assert len(d.arcs) == 3
    assert d.is_planar
    assert d.name == "theta"


def test_undeclared_arc_reported_with_line():
    text = THETA.replace("vertex v2 (-a3 -a2 -a1)", "vertex v2 (-a3 -a2 -zz)")
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert any(line == 4 and "undeclared arc zz" in msg for line, msg in ei.value.errors)


def test_missing_header():
    with pytest.raises(ParseError, match="header"):
        parse("vertex v1 (+a1 +a2 +a3)\n")


def test_malformed_lines_reported():
    text = THETA + "crossing c1 +2 over(a1 a2)\nbogus line\n"
    with pytest.raises(ParseError) as ei:
        parse(text)
    msgs = [m for _, m in ei.value.errors]
    assert any("malformed crossing" in m for m in msgs)
    assert any("unknown declaration" in m for m in msgs)


def test_validation_errors_surface():
    text = THETA.replace("edge e3 = a3\n", "")
    with pytest.raises(ParseError):
        parse(text)


def test_comments_and_blank_lines():
    text = "# leading comment\n\n" + THETA.replace("edge e1 = a1", "edge e1 = a1   # the first edge")
    assert parse(text).isomorphic(parse(THETA))


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trip(name):
    d = load_corpus(name)
    text = serialize(d)
    assert parse(text).isomorphic(d)
    assert serialize(parse(text)) == text
    assert serialize(d) == text
    assert serialize(mirror(mirror(d))) == text


def test_trefoil_fixture_counts():
    d = load_corpus("trefoil")
    assert d.crossing_count == 3
    assert len(d.edges) == 1


def test_unknown_fixture():
    with pytest.raises(KeyError):
        load_corpus("nope")


def test_parse_quandle_table():
    kind, table = parse_table("quandle 3\n0 2 1\n2 1 0\n1 0 2\n")
    assert kind == "quandle"
    assert table == ((0, 2, 1), (2, 1, 0), (1, 0, 2))
    assert table_violations("quandle 3\n0 2 1\n2 1 0\n1 0 2\n") == []
    assert table_violations("quandle 2\n1 1\n0 0\n")


def test_parse_gfamily_table():
    text = "gfamily 3 2\n0 0 0\n1 1 1\n2 2 2\n0 2 1\n2 1 0\n1 0 2\n"
    kind, gf = parse_table(text)
    assert kind == "gfamily"
    assert gf.group.order == 2
    assert table_violations(text) == []


def test_parse_gfamily_with_group_block():
    rows = ["gfamily 1 3", "group", "0 1 2", "1 2 0", "2 0 1", "0", "0", "0"]
    kind, gf = parse_table("\n".join(rows) + "\n")
    assert gf.group.order == 3
    assert table_violations("\n".join(rows) + "\n") == []


@pytest.mark.parametrize("text", ["", "quandle\n", "quandle 2\n0 1\n", "quandle 2\n0 x\n1 1\n", "quandle 2\n0 1 1\n1 1\n"])
def test_bad_tables(text):
    with pytest.raises(AlgebraError):
        parse_table(text)
