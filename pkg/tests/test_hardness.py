from pathlib import Path

import pytest

from ntss.conditions import classify
from ntss.dp import solve
from ntss.hardness import (
    CnfError,
    RestrictedCnf,
    assignment_to_target,
    check_structure,
    format_dimacs,
    generate,
    parse_dimacs,
    target_to_assignment,
    validate_restricted,
)
from ntss.instance import VertexClass

CNF3_TEXT = "p cnf 3 3\n1 2 3 0\n1 2 3 0\n-1 -2 -3 0\n"
CNF3 = parse_dimacs(CNF3_TEXT)
CORPUS = sorted((Path(__file__).parent / "fixtures" / "cnf").glob("*.cnf"))


def test_parse_fixture():
    assert CNF3.n_vars == 3 and CNF3.clauses == ((1, 2, 3), (1, 2, 3), (-1, -2, -3))
    assert parse_dimacs(format_dimacs(CNF3)) == CNF3


def test_parser_accepts_what_validation_rejects():
    wide = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n")
    assert any("4 literals" in v for v in validate_restricted(wide))
    empty = parse_dimacs("p cnf 2 0\n")
    assert empty.clauses == () and validate_restricted(empty)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1 2 0\n", "before problem line"),
        ("p cnf 2 1\n1 3 0\n", "exceeds declared"),
        ("p cnf 2 1\n1 2\n", "not terminated"),
        ("p cnf 2 2\n1 2 0\n", "declares 2 clauses"),
        ("p cnf 2 1\n1 x 0\n", "non-integer"),
        ("", "missing 'p cnf'"),
    ],
)
def test_dimacs_errors(text, fragment):
    with pytest.raises(CnfError, match=fragment):
        parse_dimacs(text)


def test_validation_examples():
    assert validate_restricted(CNF3) == []
    triple = RestrictedCnf(2, ((1, 2), (1, 2), (1, -2), (-1, 2)))
    assert any("x1 occurs positively in 3" in v for v in validate_restricted(triple))
    clash = RestrictedCnf(2, ((1, -1), (1, 2), (2, -2)))
    assert any("variable and its negation" in v for v in validate_restricted(clash))


def test_generate_rejects_invalid():
    with pytest.raises(CnfError):
        generate(RestrictedCnf(1, ((1,),)), 1)
    with pytest.raises(CnfError):
        generate(CNF3, 0)


@pytest.mark.parametrize("d", [1, 2, 4, 7])
def test_order_formula(d):
    gen = generate(CNF3, d)
    assert gen.instance.n == 5 * 3 + 3 * 3 + 2 * (d // 2) * (9 * 3 + 3 * 3)
    assert check_structure(gen, CNF3) == []


def test_order_examples():
    assert generate(CNF3, 1).instance.n == 24
    assert generate(CNF3, 4).instance.n == 168


def test_degree_audit():
    gen = generate(CNF3, 4)
    g = gen.instance.graph
    for name, vid in gen.labels.items():
        role = gen.roles[name]
        if role in ("literal", "gadget"):
            assert g.degree(vid) == 3, name
        elif role == "subdivision":
            assert g.degree(vid) == 2
        else:
            assert g.degree(vid) <= 3


def test_thresholds_and_classes():
    gen = generate(CNF3, 2)
    inst = gen.instance
    for name, vid in gen.labels.items():
        want = inst.graph.degree(vid) if gen.roles[name] == "literal" else 1
        assert inst.tau[vid] == want
    assert inst.full_edges() == []
    cls = classify(inst)
    assert cls.q_components == () and cls.sentinels == ()
    assert all(len(p.U) >= 2 for p in cls.p_components)
    one = [u for u in inst.graph.vertices if inst.vertex_class(u) is VertexClass.ONE]
    assert sorted(u for p in cls.p_components for u in p.U) == one


def test_assignment_examples():
    gen = generate(CNF3, 1)
    from ntss.simulate import is_target_set

    X = assignment_to_target(gen, {1: True, 2: True, 3: False})
    assert X == {gen.labels["x1"], gen.labels["x2"], gen.labels["~x3"]}
    assert is_target_set(gen.instance, X)
    assert not is_target_set(gen.instance, assignment_to_target(gen, {1: True, 2: True, 3: True}))
    assert target_to_assignment(gen, X, CNF3) == {1: True, 2: True, 3: False}
    assert target_to_assignment(gen, set()) is None
    assert target_to_assignment(gen, set(range(1, 5))) is None


@pytest.mark.parametrize("path", CORPUS, ids=[p.stem for p in CORPUS])
def test_reduction_correspondence(path):
    cnf = parse_dimacs(path.read_text())
    assert validate_restricted(cnf) == []
    gen = generate(cnf, 1)
    res = solve(gen.instance)
    assert cnf.satisfiable() == (res.min_size <= cnf.n_vars)
    if res.min_size <= cnf.n_vars:
        assert cnf.evaluate(target_to_assignment(gen, res.witness, cnf))
