from fractions import Fraction
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from consensus_faces import RationalMatrix, validate_system
from consensus_faces.decide import decide_problem1, decide_problem2, verify_cycle_witness, verify_steering
from consensus_faces.exactnum import consensus_seminorm, dobrushin_seminorm, format_rational, parse_rational
from consensus_faces.faces import FaceId, canonical, classify_point, enumerate_faces, representative_point
from consensus_faces.facegraph import build_face_graph, map_face

from conftest import active_set_face, vertex_seminorm

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(fractions)
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


@given(st.lists(fractions, min_size=1, max_size=6), fractions, st.fractions(min_value=-5, max_value=5))
def test_seminorm_shift_and_scale(x, c, t):
    shifted = [a + c for a in x]
    assert consensus_seminorm(shifted) == consensus_seminorm(x)
    assert consensus_seminorm([t * a for a in x]) == abs(t) * consensus_seminorm(x)


@st.composite
def fixed_vector_matrices(draw, max_n=4):
    n = draw(st.integers(2, max_n))
    rows = []
    for _ in range(n):
        head = draw(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=6), min_size=n - 1, max_size=n - 1))
        rows.append(head + [1 - sum(head, Fraction(0))])
    return RationalMatrix.from_rows(rows)


@given(fixed_vector_matrices())
def test_dobrushin_matches_vertex_oracle(A):
    assert dobrushin_seminorm(A) == vertex_seminorm(A)


@st.composite
def points_in_p(draw):
    n = draw(st.integers(2, 6))
    x = draw(st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=4), min_size=n, max_size=n))
    c = draw(fractions)
    return tuple(a + c for a in x)


@given(points_in_p())
def test_classify_matches_active_set(x):
    v = active_set_face(x)
    if v is None:
        assert classify_point(x).is_interior
    else:
        assert classify_point(x) == FaceId(canonical(v))


@given(st.integers(2, 6).flatmap(lambda n: st.sampled_from(enumerate_faces(n)[0])))
def test_representative_roundtrip(f):
    assert classify_point(representative_point(f)) == f
    assert classify_point(tuple(-c for c in representative_point(f))) == f


@st.composite
def stochastic_systems(draw, max_n=4, max_m=3):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, max_m))
    mats = []
    for _ in range(m):
        rows = []
        for _ in range(n):
            w = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n).filter(any))
            rows.append([Fraction(a, sum(w)) for a in w])
        mats.append(RationalMatrix.from_rows(rows))
    return validate_system(mats)


@settings(max_examples=60, deadline=None)
@given(stochastic_systems())
def test_graph_edges_follow_map_face(s):
    g = build_face_graph(s)
    for u, v, k in g.edges:
        if u:
            assert g.nodes[v] == map_face(s.matrices[k], g.nodes[u])


@settings(max_examples=60, deadline=None)
@given(stochastic_systems())
def test_verdict_certificates_replay(s):
    g = build_face_graph(s)
    p1, p2 = decide_problem1(g), decide_problem2(g)
    if p1.answer:
        assert p2.answer
    else:
        assert verify_cycle_witness(s, p1.witness)
    if p2.answer:
        N = g.num_pairs
        assert len(p2.witness.universal_word) <= N * N
        for f, w in p2.witness.per_face_words.items():
            assert len(w) <= N and verify_steering(s, f, w)
            assert verify_steering(s, f, p2.witness.universal_word)
    else:
        for f in p2.stuck:
            # short words never steer a stuck face into the interior
            assert all(not verify_steering(s, f, w) for w in product(range(s.m), repeat=min(g.num_pairs, 3)))
