from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ratsurf import linalg
from ratsurf.distance import (
    CapExceeded,
    encode,
    information_sets,
    merge_brackets,
    min_distance_exhaustive,
    min_distance_isd,
    random_codeword_weights,
    reachable_lower_bound,
    weight,
)
from ratsurf.field import field_of_order


def cyclic_generator(g, n):
    k = n - (len(g) - 1)
    G = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        G[i, i : i + len(g)] = g
    return G


def reed_solomon(q, k):
    F = field_of_order(q)
    xs = np.arange(q)
    return np.array([F.vpow(xs, j) if j else np.ones(q, dtype=np.int64) for j in range(k)])


def brute_force_distance(G, F):
    k, _ = G.shape
    best = None
    for m in product(range(F.order), repeat=k):
        if any(m):
            w = weight(encode(np.array(m), G, F))
            best = w if best is None else min(best, w)
    return best


HAMMING = np.array([[1, 0, 0, 0, 1, 1, 0], [0, 1, 0, 0, 1, 0, 1], [0, 0, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]])
# hexacode over F_4 (w = 2, w^2 = 3 in the integer encoding)
HEXACODE = np.array([[1, 0, 0, 1, 3, 2], [0, 1, 0, 1, 2, 3], [0, 0, 1, 1, 1, 1]])
GOLAY2 = cyclic_generator([1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1], 23)
GOLAY3 = cyclic_generator([2, 0, 1, 2, 1, 1], 11)

KNOWN = [
    ("hamming", 2, HAMMING, 3),
    ("hexacode", 4, HEXACODE, 4),
    ("golay23", 2, GOLAY2, 7),
    ("golay11", 3, GOLAY3, 5),
    ("rs7", 7, reed_solomon(7, 4), 4),
    ("rs8", 8, reed_solomon(8, 3), 6),
    ("rs9", 9, reed_solomon(9, 5), 5),
]


@pytest.mark.parametrize("name,q,G,d", KNOWN, ids=[k[0] for k in KNOWN])
def test_known_codes_exhaustive(name, q, G, d):
    res = min_distance_exhaustive(G, field_of_order(q))
    assert res.d == d
    assert weight(res.codeword) == d
    assert res.histogram.sum() == res.classes


@pytest.mark.parametrize("name,q,G,d", KNOWN, ids=[k[0] for k in KNOWN])
def test_known_codes_isd(name, q, G, d):
    res = min_distance_isd(G, field_of_order(q))
    assert res.exact == d
    assert weight(res.codeword) == d
    assert linalg.in_row_space(res.codeword, G, field_of_order(q))


def test_hamming_weight_distribution():
    res = min_distance_exhaustive(HAMMING, field_of_order(2))
    # A_0..A_7 of the [7,4] Hamming code: 1, 0, 0, 7, 7, 0, 0, 1
    assert list(res.histogram) == [0, 0, 0, 7, 7, 0, 0, 1]


def test_golay23_weight_distribution():
    res = min_distance_exhaustive(GOLAY2, field_of_order(2))
    assert res.histogram[7] == 253 and res.histogram[8] == 506 and res.histogram[23] == 1


@st.composite
def random_codes(draw):
    q = draw(st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
    k = draw(st.integers(1, 4 if q > 5 else 5))
    n = draw(st.integers(k, k + 8))
    seed = draw(st.integers(0, 2**32 - 1))
    G = np.random.default_rng(seed).integers(0, q, size=(k, n))
    F = field_of_order(q)
    if linalg.rank(G, F) < k:
        G = linalg.dedupe_rows(G, F)
    assume(G.shape[0] > 0)
    return q, G


@given(random_codes())
@settings(max_examples=60, deadline=None)
def test_engines_agree_with_brute_force(data):
    q, G = data
    F = field_of_order(q)
    d = brute_force_distance(G, F)
    assert min_distance_exhaustive(G, F).d == d
    res = min_distance_isd(G, F)
    assert res.exact == d and res.d_lower <= res.d_upper


@given(random_codes(), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_weight_invariant_under_scaling(data, seed):
    q, G = data
    F = field_of_order(q)
    rng = np.random.default_rng(seed)
    m = rng.integers(0, q, size=G.shape[0])
    c = int(rng.integers(1, q))
    assert weight(encode(m, G, F)) == weight(encode(F.vmul(m, c), G, F))


def test_histogram_counts_projective_classes():
    F = field_of_order(3)
    G = reed_solomon(3, 2)
    res = min_distance_exhaustive(G, F)
    assert res.classes == (3**2 - 1) // 2
    assert res.histogram.sum() == res.classes


def test_identity_extended_first_round_bound():
    q, F = 5, field_of_order(5)
    rng = np.random.default_rng(3)
    A = rng.integers(0, q, size=(4, 6))
    G = np.hstack([np.eye(4, dtype=np.int64), A])
    seen = []
    min_distance_isd(G, F, progress=lambda w, j, r: seen.append((w, j, r.d_upper)))
    w, j, upper = seen[0]
    assert (w, j) == (1, 0)
    assert upper <= 1 + min(weight(r) for r in A)


def test_information_sets_are_disjoint_and_systematic():
    F = field_of_order(4)
    G = reed_solomon(4, 2)
    G = np.hstack([G, G, G[:, :1]])
    sets = information_sets(G, F)
    cols = [c for s in sets for c in s.columns]
    assert len(cols) == len(set(cols))
    for s in sets:
        sub = s.systematic[: s.rank][:, s.columns]
        assert np.array_equal(sub, np.eye(s.rank, dtype=np.int64))


def test_isd_is_deterministic():
    F = field_of_order(3)
    a = min_distance_isd(GOLAY3, F)
    b = min_distance_isd(GOLAY3, F)
    assert np.array_equal(a.codeword, b.codeword) and a.enumerated == b.enumerated


def test_target_bracket_stops_early():
    F = field_of_order(2)
    res = min_distance_isd(GOLAY2, F, target=7)
    assert res.d_upper <= 7 <= res.d_lower


def test_isd_cap_leaves_a_sound_bracket():
    F = field_of_order(2)
    res = min_distance_isd(GOLAY2, F, cap=30)
    assert not res.complete
    assert res.d_lower <= 7 <= res.d_upper
    assert reachable_lower_bound(GOLAY2, F, cap=30) == res.d_lower


def test_zero_code_is_rejected():
    with pytest.raises(ValueError):
        min_distance_exhaustive(np.zeros((0, 4), dtype=np.int64), field_of_order(2))


def test_caps_and_rank_errors():
    F = field_of_order(9)
    with pytest.raises(CapExceeded):
        min_distance_exhaustive(reed_solomon(9, 9), F, cap=1000)
    with pytest.raises(CapExceeded):
        min_distance_isd(np.eye(25, dtype=np.int64), field_of_order(2))
    with pytest.raises(ValueError):
        min_distance_exhaustive(np.array([[1, 1], [1, 1]]), field_of_order(2))
    with pytest.raises(ValueError):
        min_distance_isd(np.array([[1, 1], [1, 1]]), field_of_order(2))


def test_workers_do_not_change_results():
    F = field_of_order(2)
    a = min_distance_exhaustive(GOLAY2, F, workers=1)
    b = min_distance_exhaustive(GOLAY2, F, workers=3)
    assert a.d == b.d and np.array_equal(a.histogram, b.histogram)
    assert np.array_equal(a.message, b.message)
    c = min_distance_isd(GOLAY2, F, workers=3)
    assert c.exact == 7


def test_merge_brackets():
    assert merge_brackets([(3, 9), (5, 11), (4, 8)]) == (5, 8)


def test_random_weights_respect_distance():
    F = field_of_order(2)
    w, (best, msg) = random_codeword_weights(GOLAY2, F, 5000, seed=1)
    assert w.min() >= 7 and best == w.min()
    assert weight(encode(msg, GOLAY2, F)) == best
