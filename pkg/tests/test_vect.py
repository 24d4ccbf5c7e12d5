import random

import pytest

from closeknit.engine import solve
from closeknit.errors import InvalidAction, StructureMismatch
from closeknit.vect import (SubspaceBasis, VectorInstance, add, codim,
                            intersect, matrix_action, measure_vect)


def span(p, dim, *vectors):
    return SubspaceBasis.from_vectors(p, dim, list(vectors))


def test_codim_examples():
    plane = span(2, 2, (1, 0), (0, 1))
    line = span(2, 2, (1, 0))
    assert codim(line, plane) == 0
    assert codim(plane, line) == 1
    assert codim(span(2, 2, (1, 0)), span(2, 2, (0, 1))) == 1


def test_intersect_and_sum_examples():
    s = span(2, 3, (1, 0, 0), (0, 1, 0))
    t = span(2, 3, (0, 1, 0), (0, 0, 1))
    assert intersect(s, s) == s and add(s, s) == s
    assert intersect(s, t) == span(2, 3, (0, 1, 0))
    l1, l2 = span(2, 2, (1, 0)), span(2, 2, (0, 1))
    assert add(l1, l2).rank == 2


def test_dimension_formula():
    rng = random.Random(2)
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 4)
        s = span(p, dim, *[[rng.randrange(p) for _ in range(dim)]
                           for _ in range(rng.randint(0, dim))])
        t = span(p, dim, *[[rng.randrange(p) for _ in range(dim)]
                           for _ in range(rng.randint(0, dim))])
        assert s.rank + t.rank == intersect(s, t).rank + add(s, t).rank


def test_canonical_equality():
    a = span(3, 2, (1, 1), (0, 1))
    b = span(3, 2, (2, 0), (1, 2))
    assert a.rows == b.rows == ((1, 0), (0, 1))


def test_matrix_action_examples():
    s = span(2, 3, (1, 0, 0), (0, 1, 0))
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert matrix_action(ident, s) == s
    cyc = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]  # e1->e2, e2->e3, e3->e1
    assert matrix_action(cyc, s) == span(2, 3, (0, 1, 0), (0, 0, 1))
    scalar = [[2, 0], [0, 2]]
    line = span(3, 2, (1, 2))
    assert matrix_action(scalar, line) == line


def test_singular_matrix_rejected():
    s = span(2, 2, (1, 0))
    with pytest.raises(InvalidAction):
        matrix_action([[1, 1], [1, 1]], s)


def test_shape_mismatch():
    with pytest.raises(StructureMismatch):
        intersect(span(2, 2, (1, 0)), span(2, 3, (1, 0, 0)))
    with pytest.raises(StructureMismatch):
        span(4, 2, (1, 0))  # 4 is not prime


def test_condition_three_for_sum_exhaustive_f2_3():
    from closeknit.oracle import all_subspaces
    spaces = all_subspaces(2, 3)
    for t in spaces:
        for s in spaces:
            if not t.leq(s):
                continue
            for f in spaces:
                if codim(t, f) == codim(s, f):
                    assert add(t, f) == add(s, f)


def test_equivariance_under_change_of_basis():
    # Transporting the whole instance through an invertible matrix P
    # transports the answer.
    from closeknit.engine import solve as solve_engine
    p_mat = [[1, 1, 0], [0, 1, 0], [1, 0, 1]]  # invertible over F2
    p_inv = [[1, 1, 0], [0, 1, 0], [1, 1, 1]]
    ident = [[1 if i == j else 0 for j in range(3)] for i in range(3)]

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(3)) % 2
                 for j in range(3)] for i in range(3)]

    assert mul(p_mat, p_inv) == ident
    seed = span(2, 3, (1, 0, 0), (0, 1, 0))
    cyc = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    inst = VectorInstance(2, 3, [seed], [cyc])
    transported = VectorInstance(
        2, 3, [matrix_action(p_mat, seed)], [mul(mul(p_mat, cyc), p_inv)])
    n1 = solve_engine(inst).invariant_element
    n2 = solve_engine(transported).invariant_element
    assert matrix_action(p_mat, n1) == n2


def test_solve_vector_worked_example():
    planes = span(2, 3, (1, 0, 0), (0, 1, 0))
    cyc = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    inst = VectorInstance(2, 3, [planes], [cyc])
    assert len(inst.family) == 3
    cert = solve(inst, mode="both")
    assert cert.invariant_element.rank == 0
    assert cert.mode_agreement is True
    assert all(m["forward"] == 0 and m["backward"] == 2 for m in cert.measures)
    assert measure_vect(cert.invariant_element, inst.family[0]) == (0, 2)
