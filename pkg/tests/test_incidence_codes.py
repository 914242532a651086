import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from unitgraph.errors import DomainError
from unitgraph.gf_linalg import GfMatrix, null_space_basis, rank, row_basis
from unitgraph.incidence_codes import (
    BUDGET_ENV,
    DEFAULT_DISTANCE_BUDGET,
    UNDEFINED,
    UNKNOWN,
    CodeParams,
    LinearCode,
    code_from_incidence,
    decode_trials,
    default_budget,
    dual_code,
    error_capabilities,
    incidence_matrix,
    min_weight_dependency,
    min_weight_exhaustive,
    syndrome_decode_single,
)
from unitgraph.ring_core import RingSpec
from unitgraph.unit_graph import build_unit_graph, girth

from .strategies import moduli_lists


def z(n):
    return build_unit_graph(RingSpec([n]))


def brute_min_weight(gen):
    """Minimum nonzero weight over the row space by plain itertools enumeration."""
    q = gen.q
    rows = [list(map(int, r)) for r in gen.data]
    best = None
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        if not any(coeffs):
            continue
        word = [sum(c * r[i] for c, r in zip(coeffs, rows)) % q for i in range(gen.cols)]
        w = sum(1 for x in word if x)
        if w and (best is None or w < best):
            best = w
    return UNDEFINED if best is None else best


def brute_min_dependency(parity):
    """Smallest support of a nonzero kernel vector, by scanning all of F_q^n."""
    q, n = parity.q, parity.cols
    h = parity.data.astype(np.int64)
    best = None
    for x in itertools.product(range(q), repeat=n):
        w = sum(1 for v in x if v)
        if w and (best is None or w < best) and not (h @ np.array(x) % q).any():
            best = w
    return best


@st.composite
def full_rank_generators(draw, qs=(2, 3, 5), max_k=5, max_n=9):
    q = draw(st.sampled_from(qs))
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, min(max_k, n)))
    flat = draw(st.lists(st.integers(0, q - 1), min_size=k * n, max_size=k * n))
    g = row_basis(GfMatrix(q, np.array(flat).reshape(k, n)))
    return g


# incidence matrices


def test_incidence_examples():
    assert incidence_matrix(z(2), 3) == GfMatrix(3, [[1], [1]])
    h = incidence_matrix(z(6), 3)
    assert h.shape == (6, 6)
    assert (h.data.sum(axis=0) == 2).all() and (h.data.sum(axis=1) == 2).all()


def test_incidence_z5_row_weights_are_degrees():
    g = z(5)
    h = incidence_matrix(g, 2)
    assert h.shape == (5, 8)
    assert h.data.sum(axis=1).tolist() == g.degrees.tolist() == [4, 3, 3, 3, 3]


@given(moduli_lists(max_size=60), st.sampled_from([2, 3, 5]))
def test_incidence_structure(moduli, q):
    g = build_unit_graph(RingSpec(moduli))
    h = incidence_matrix(g, q)
    assert h.shape == (g.num_vertices, g.num_edges)
    if g.num_edges:
        assert (h.data.sum(axis=0) == 2).all()
        for e, (i, j) in enumerate(g.edges.tolist()):
            assert h.data[i, e] == h.data[j, e] == 1
    assert h.data.sum(axis=1).tolist() == g.degrees.tolist()


# codes


@pytest.mark.parametrize(
    "n, q, expected",
    [(15, 2, [56, 14, 7]), (12, 3, [24, 11, 4]), (2, 3, [1, 1, 1]), (9, 2, [24, 8, 5])],
)
def test_code_examples(n, q, expected):
    c = code_from_incidence(z(n), q)
    assert c.params.triple() == expected
    assert rank(c.generator) == c.k
    assert rank(GfMatrix(q, c.generator.data[:, ::-1])) == c.k


def test_code_string_form():
    assert str(code_from_incidence(z(15), 2)) == "[56, 14, 7]_2"


@pytest.mark.parametrize(
    "n, q, expected",
    [(15, 2, [56, 42, 3]), (3, 2, [2, 0, UNDEFINED]), (6, 3, [6, 1, 6])],
)
def test_dual_examples(n, q, expected):
    c = code_from_incidence(z(n), q)
    assert dual_code(c).params.triple() == expected


def test_incidence_rows_are_codewords():
    for n, q in [(15, 2), (12, 3), (10, 3)]:
        g = z(n)
        c = code_from_incidence(g, q)
        dual = dual_code(c)
        h = incidence_matrix(g, q).data.astype(np.int64)
        # every row of H is orthogonal to the dual, hence in the code
        assert not (h @ dual.generator.data.T.astype(np.int64) % q).any()
        assert h.sum(axis=1).tolist() == g.degrees.tolist()


@given(moduli_lists(max_size=80), st.sampled_from([2, 3, 5]))
@settings(max_examples=40)
def test_code_and_dual_are_orthogonal_complements(moduli, q):
    g = build_unit_graph(RingSpec(moduli))
    if g.num_edges == 0:
        return
    c = code_from_incidence(g, q, 0)
    dual = dual_code(c, 0)
    assert c.k + dual.k == c.length
    if dual.k:
        assert not (c.generator @ dual.generator.transpose()).data.any()


@pytest.mark.parametrize("n", [5, 7, 9, 15, 21, 25, 27, 33, 35])
def test_binary_rank_for_connected_nonbipartite(n):
    assert code_from_incidence(z(n), 2, 0).k == n - 1


@pytest.mark.parametrize("n", [4, 6, 10, 12, 18, 20, 30, 36])
@pytest.mark.parametrize("q", [3, 5])
def test_odd_q_rank_for_connected_bipartite(n, q):
    assert code_from_incidence(z(n), q, 0).k == n - 1


# minimum weight


def test_min_weight_examples():
    assert min_weight_exhaustive(GfMatrix(2, [[1, 0, 1], [0, 1, 1]])) == 2
    assert min_weight_exhaustive(code_from_incidence(z(9), 2, 0).generator) == 5
    assert min_weight_exhaustive(code_from_incidence(z(10), 3, 0).generator) == 4


def test_min_weight_rejects_dependent_rows():
    with pytest.raises(DomainError):
        min_weight_exhaustive(GfMatrix(3, [[1, 1], [2, 2]]))


def test_min_weight_empty_code():
    assert min_weight_exhaustive(GfMatrix.zeros(2, 0, 4)) == UNDEFINED


@given(full_rank_generators())
def test_min_weight_matches_brute_force(gen):
    assert min_weight_exhaustive(gen) == brute_min_weight(gen)


@given(full_rank_generators(max_k=4, max_n=7), st.randoms())
def test_min_weight_permutation_invariant(gen, rnd):
    cols = list(range(gen.cols))
    rnd.shuffle(cols)
    rows = list(range(gen.rows))
    rnd.shuffle(rows)
    shuffled = GfMatrix(gen.q, gen.data[rows][:, cols])
    assert min_weight_exhaustive(shuffled) == min_weight_exhaustive(gen)


@pytest.mark.parametrize("n, q", [(9, 2), (15, 2), (10, 3), (12, 3)])
def test_min_weight_permutation_invariant_on_incidence_codes(n, q):
    gen = code_from_incidence(z(n), q, 0).generator
    rng = np.random.default_rng(n)
    perm = rng.permutation(gen.cols)
    rows = rng.permutation(gen.rows)
    # reordering rows changes the message enumeration order; columns move weights around
    shuffled = GfMatrix(q, gen.data[rows][:, perm])
    assert min_weight_exhaustive(shuffled) == min_weight_exhaustive(gen)


@given(full_rank_generators(qs=(2, 3, 5), max_k=4, max_n=7))
@settings(max_examples=80)
def test_dependency_search_matches_brute_force(parity):
    expected = brute_min_dependency(parity)
    got = min_weight_dependency(parity)
    assert got == (UNDEFINED if expected is None else expected)


@given(full_rank_generators(qs=(2, 3, 5, 7), max_k=8, max_n=16))
@settings(max_examples=80)
def test_dependency_search_matches_dual_enumeration(parity):
    dual = null_space_basis(parity)
    assume(parity.q**dual.rows <= 2**16)
    expected = min_weight_exhaustive(dual) if dual.rows else UNDEFINED
    assert min_weight_dependency(parity) == expected


@pytest.mark.parametrize("n, q", [(7, 2), (9, 2), (10, 3), (12, 3), (8, 5), (6, 7), (4, 5)])
def test_dependency_search_matches_enumeration_on_duals(n, q):
    c = code_from_incidence(z(n), q, 0)
    dual = c.parity_check
    via_enum = min_weight_exhaustive(dual, 2**24)
    assert isinstance(via_enum, int)
    assert min_weight_dependency(c.generator) == via_enum


def test_dual_distance_equals_girth():
    checked = 0
    for n in range(2, 61):
        q = 2 if n % 2 else 3
        g = z(n)
        dual = dual_code(code_from_incidence(g, q, 0))
        if dual.k == 0:
            continue
        assert isinstance(dual.d, int), n
        assert dual.d == girth(g), n
        checked += 1
    assert checked > 50


def test_budget_exceeded_is_unknown():
    c = code_from_incidence(z(15), 2, 2**14 - 2)
    assert c.d == UNKNOWN and c.d_method is None
    assert code_from_incidence(z(15), 2, 2**14 - 1).d == 7
    assert min_weight_dependency(code_from_incidence(z(15), 2, 0).generator, 1) == UNKNOWN


def test_budget_from_environment(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    assert default_budget() == DEFAULT_DISTANCE_BUDGET
    monkeypatch.setenv(BUDGET_ENV, "100")
    assert default_budget() == 100
    assert code_from_incidence(z(15), 2).d == UNKNOWN
    monkeypatch.setenv(BUDGET_ENV, "lots")
    with pytest.raises(DomainError):
        default_budget()


# capabilities and decoding


@pytest.mark.parametrize("d, expected", [(3, (2, 1)), (4, (3, 1)), (1, (0, 0)), (7, (6, 3))])
def test_error_capabilities(d, expected):
    params = CodeParams(10, 2, d)
    assert error_capabilities(params) == expected
    assert (params.detect_capability, params.correct_capability) == expected


@pytest.mark.parametrize("d", [UNKNOWN, UNDEFINED])
def test_error_capabilities_need_exact_distance(d):
    params = CodeParams(10, 2, d)
    assert params.detect_capability is None and params.correct_capability is None
    with pytest.raises(DomainError):
        error_capabilities(params)


@pytest.fixture(scope="module")
def dual15():
    return dual_code(code_from_incidence(z(15), 2))


def test_decoder_clean_and_corrected(dual15):
    rng = np.random.default_rng(1)
    for _ in range(50):
        word = dual15.encode(rng.integers(0, 2, size=dual15.k))
        assert syndrome_decode_single(dual15, word)[1] == "clean"
        pos = rng.integers(dual15.length)
        noisy = word.copy()
        noisy[pos] ^= 1
        decoded, flag = syndrome_decode_single(dual15, noisy)
        assert flag == "corrected" and np.array_equal(decoded, word)


def test_decoder_two_errors_never_clean(dual15):
    word = dual15.encode(np.zeros(dual15.k, dtype=int))
    for i, j in itertools.combinations(range(dual15.length), 2):
        noisy = word.copy()
        noisy[[i, j]] ^= 1
        _, flag = syndrome_decode_single(dual15, noisy)
        assert flag != "clean"


def test_decoder_ternary_corrects_every_single_error():
    c = dual_code(code_from_incidence(z(12), 3))
    assert c.d == 4
    word = c.encode(np.arange(c.k) % 3)
    for pos in range(c.length):
        for a in (1, 2):
            noisy = word.copy()
            noisy[pos] = (noisy[pos] + a) % 3
            decoded, flag = syndrome_decode_single(c, noisy)
            assert flag == "corrected" and np.array_equal(decoded, word)


def test_decoder_refuses_low_distance_codes():
    # the 4-cycle code over F_3 has d = 2
    low = code_from_incidence(z(4), 3)
    assert low.d == 2
    with pytest.raises(DomainError):
        low.decoder
    with pytest.raises(DomainError):
        syndrome_decode_single(dual_code(code_from_incidence(z(15), 2)), [0, 1])


def test_decode_trials_are_seeded(dual15):
    a = decode_trials(dual15, 1, 200, seed=7)
    assert a == decode_trials(dual15, 1, 200, seed=7)
    assert a["recovered"] == a["corrected"] == 200
    b = decode_trials(dual15, 2, 200, seed=7)
    assert b["clean"] == 0
    assert b["uncorrectable"] + b["miscorrected"] == 200 - b["recovered"]


def test_linear_code_encode_is_in_code():
    c = code_from_incidence(z(10), 3)
    word = c.encode([1] * c.k)
    assert not (c.parity_check.data.astype(np.int64) @ word % 3).any()
    assert isinstance(c, LinearCode)
