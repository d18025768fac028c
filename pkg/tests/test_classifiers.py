import numpy as np
import pytest

from tensortopo import (COMPLEX, REAL, Hypermatrix, SplitMix64,
                        SymRankDecomposition, ToleranceError,
                        UnsupportedStratumError, hyperdet222, mode_multiply,
                        parse_stratum, random_invertible, sample_rank_r,
                        sample_sym_rank_r, sym_power)
from tensortopo.classifiers import (ComponentLabel, classify,
                                    classify_brank3_222, det_sign_mrank,
                                    mrank_saturation, orientation_area,
                                    sign_label, sign_triple_label,
                                    square_mode, sym_sign_rank1,
                                    sym_signature)

ALL_TRIPLES = {"sign-triple:+++", "sign-triple:+--",
               "sign-triple:-+-", "sign-triple:--+"}


def _conj_pair_example():
    a = np.zeros((2, 2, 2))
    a[0, 0, 0] = 1.0
    a[1, 1, 0] = 1.0
    a[0, 1, 1] = -1.0
    a[1, 0, 1] = 1.0
    return Hypermatrix(a, REAL)


def test_component_label_strings():
    assert str(ComponentLabel("single")) == "single"
    assert str(ComponentLabel("sign", "+")) == "sign:+"
    assert str(ComponentLabel("signature", 2)) == "signature:2"
    assert ComponentLabel("sign", "+").to_json() == {"kind": "sign", "value": "+"}
    assert ComponentLabel("single").to_json() == {"kind": "single", "value": None}


def test_sign_label():
    assert str(sign_label(3.5)) == "sign:+"
    assert str(sign_label(-0.1)) == "sign:-"


def test_sign_triple_label_product_is_positive():
    assert str(sign_triple_label(1.0, -2.0, -3.0)) == "sign-triple:+--"
    assert str(sign_triple_label(1.0, 1.0, 1.0)) == "sign-triple:+++"


def test_orientation_area():
    x = np.array([1.0 + 0j, 1j])
    assert orientation_area(x) == pytest.approx(1.0)
    assert orientation_area(np.conj(x)) == pytest.approx(-1.0)


def test_conj_pair_example_label():
    assert str(classify_brank3_222(_conj_pair_example())) == "sign-triple:--+"


def test_sign_triple_labels_cover_four_values():
    rng = SplitMix64(81)
    seen = set()
    for _ in range(300):
        T = Hypermatrix(rng.normals((2, 2, 2)), REAL)
        if hyperdet222(T) >= 0:
            continue
        try:
            seen.add(str(classify_brank3_222(T)))
        except ToleranceError:
            continue
        if seen == ALL_TRIPLES:
            break
    assert seen == ALL_TRIPLES


def test_classify_brank3_rejects_positive_hyperdet():
    diag = np.zeros((2, 2, 2))
    diag[0, 0, 0] = 1.0
    diag[1, 1, 1] = 1.0
    with pytest.raises(ToleranceError):
        classify_brank3_222(Hypermatrix(diag, REAL))


def test_hyperdet_relative_invariance():
    """Det scales by the product of squared determinants under the group."""
    rng = SplitMix64(82)
    for _ in range(25):
        T = Hypermatrix(rng.normals((2, 2, 2)), REAL)
        gs = [random_invertible(2, rng, REAL) for _ in range(3)]
        moved = Hypermatrix(mode_multiply(T.data, gs), REAL)
        factor = float(np.prod([np.linalg.det(g) ** 2 for g in gs]))
        assert hyperdet222(moved) == pytest.approx(factor * hyperdet222(T),
                                                   rel=1e-8)


def test_sign_triple_invariant_under_positive_group():
    rng = SplitMix64(83)
    done = 0
    while done < 25:
        T = Hypermatrix(rng.normals((2, 2, 2)), REAL)
        if hyperdet222(T) > -1e-3 * T.norm() ** 4:
            continue
        before = str(classify_brank3_222(T))
        gs = [random_invertible(2, rng, REAL, det_sign=1) for _ in range(3)]
        moved = Hypermatrix(mode_multiply(T.data, gs), REAL)
        assert str(classify_brank3_222(moved)) == before
        done += 1


def test_sym_sign_rank1():
    v = np.array([1.0, 2.0, -1.0])
    assert str(sym_sign_rank1(sym_power(v, 4, 2.0))) == "sign:+"
    assert str(sym_sign_rank1(sym_power(v, 4, -2.0))) == "sign:-"
    with pytest.raises(UnsupportedStratumError):
        sym_sign_rank1(sym_power(v, 3))


def test_sym_signature_from_decomposition():
    rng = SplitMix64(84)
    _, dec = sample_sym_rank_r(4, 4, 2, signature=1, rng=rng)
    assert str(sym_signature(dec)) == "signature:1"


def test_det_sign_mrank():
    rng = SplitMix64(85)
    M = random_invertible(3, rng, REAL, det_sign=-1)
    A = Hypermatrix(M, REAL)
    assert str(det_sign_mrank(A, 1)) == "sign:-"
    assert str(det_sign_mrank(A, 2)) == "sign:-"
    with pytest.raises(UnsupportedStratumError):
        det_sign_mrank(Hypermatrix(rng.normals((2, 3)), REAL), 1)
    with pytest.raises(ToleranceError):
        det_sign_mrank(Hypermatrix(np.diag([1.0, 1e-14]), REAL), 1)


SATURATION_CASES = [
    ("mrank:r=2,2,2;shape=3,3,3;field=real", "none"),
    ("mrank:r=4,2,2;shape=4,2,2;field=real", "saturated-square"),
    # the saturated mode itself has ambient room: connected, no invariant
    ("mrank:r=4,2,2;shape=5,2,2;field=real", "none"),
    # saturated mode pinned at n = r, other modes roomy: open case
    ("mrank:r=4,2,2;shape=4,3,3;field=real", "mixed"),
    ("mrank:r=2,2;shape=2,2;field=real", "saturated-square"),
    ("mrank:r=2,2;shape=3,3;field=real", "none"),
]


@pytest.mark.parametrize("text,expected", SATURATION_CASES)
def test_mrank_saturation(text, expected):
    assert mrank_saturation(parse_stratum(text)) == expected


def test_square_mode_is_one_based():
    assert square_mode(parse_stratum("mrank:r=4,2,2;shape=4,2,2;field=real")) == 1
    assert square_mode(parse_stratum("mrank:r=2,2;shape=2,2;field=real")) == 1
    assert square_mode(parse_stratum("mrank:r=2,2,2;shape=3,3,3;field=real")) is None


def test_classify_complex_is_single():
    rng = SplitMix64(86)
    T, _ = sample_rank_r((2, 2, 2), 2, COMPLEX, rng)
    label = classify(parse_stratum("rank:r=2;shape=2,2,2;field=complex"), T)
    assert str(label) == "single"


def test_classify_dispatch():
    rng = SplitMix64(87)

    T, _ = sample_rank_r((3, 4, 5), 1, REAL, rng)
    assert str(classify(parse_stratum("rank:r=1;shape=3,4,5;field=real"), T)) \
        == "single"

    label = classify(parse_stratum("brank:r=3;shape=2,2,2;field=real"),
                     _conj_pair_example())
    assert str(label) == "sign-triple:--+"

    S, dec = sample_sym_rank_r(4, 4, 2, signature=0, rng=rng)
    st = parse_stratum("sym-rank:d=4;n=4;r=2;field=real")
    assert str(classify(st, dec)) == "signature:0"
    assert str(classify(st, S)) == "signature:0"

    odd, _ = sample_sym_rank_r(4, 3, 2, rng=rng)
    assert str(classify(parse_stratum("sym-rank:d=3;n=4;r=2;field=real"), odd)) \
        == "single"


def test_classify_unsupported_cases():
    rng = SplitMix64(88)
    T, _ = sample_rank_r((3, 3, 3), 2, REAL, rng)
    with pytest.raises(UnsupportedStratumError):
        classify(parse_stratum("rank:r=2;shape=3,3,3;field=real"), T)
    with pytest.raises(UnsupportedStratumError):
        classify(parse_stratum("mrank:r=4,2,2;shape=4,3,3;field=real"), T)
