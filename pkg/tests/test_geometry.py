import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsurf.field import extension, field_of_order
from ratsurf.geometry import (
    ClosedPoint,
    HomogeneousForm,
    PlaneCurve,
    ProjectivePoint,
    closed_point,
    collinear,
    count_curve_points,
    enumerate_points,
    evaluate,
    find_closed_point,
    format_form,
    is_union_of_rational_lines,
    monomials,
    num_monomials,
    parse_form_file,
    rational_linear_factors,
)

K_TEXT = "x^4+y^4+z^4+x^2*y^2+y^2*z^2+z^2*x^2+x^2*y*z+x*y^2*z+x*y*z^2"
QUINTIC_TEXT = (
    "x*(x^4+2*x^3*y+3*x^3*z+3*x^2*y^2+4*x^2*y*z+3*x^2*z^2+2*x*y^3+4*x*y^2*z+x*y*z^2"
    "+3*x*z^3+2*y^4+4*y^3*z+2*y^2*z^2+4*y*z^3+2*z^4)"
)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_point_counts_of_projective_spaces(q):
    F = field_of_order(q)
    assert len(enumerate_points(F, "P2")) == q * q + q + 1
    assert len(enumerate_points(F, "P3")) == q**3 + q * q + q + 1


def test_points_are_normalised_and_in_lex_order():
    F = field_of_order(3)
    pts = [p.coords for p in enumerate_points(F, "P2")]
    assert pts[0] == (0, 0, 1)
    assert pts == sorted(pts)
    for c in pts:
        assert next(x for x in c if x) == 1


def test_monomial_order_is_graded_lex():
    assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert num_monomials(4, 3) == 20 == len(monomials(4, 3))


def test_k_has_fourteen_points_over_f4_and_none_over_f2():
    K = HomogeneousForm.parse(K_TEXT, field_of_order(2))
    assert count_curve_points(K, field_of_order(4)) == 14
    assert count_curve_points(K) == 0


def test_explicit_quintic_over_f5():
    f = HomogeneousForm.parse(QUINTIC_TEXT, field_of_order(5))
    assert f.degree == 5
    assert count_curve_points(f) == 22


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_lines_and_conics(q):
    F = field_of_order(q)
    assert count_curve_points(HomogeneousForm.parse("z", F)) == q + 1
    assert count_curve_points(HomogeneousForm.parse("x*z - y^2", F)) == q + 1
    assert count_curve_points(HomogeneousForm.parse("x*y*z", F)) == 3 * q


def test_parser_handles_products_and_coefficients():
    F = field_of_order(7)
    a = HomogeneousForm.parse("(x+y)*(x-y)", F)
    b = HomogeneousForm.parse("x^2 - y^2", F)
    assert a.coeffs == b.coeffs
    c = HomogeneousForm.parse("3*x*y + 9*z^2", F)
    assert c.terms() == {(1, 1, 0): 3, (0, 0, 2): 2}


def test_parser_rejects_inhomogeneous_input():
    with pytest.raises(ValueError):
        HomogeneousForm.parse("x^2 + y", field_of_order(3))


def test_plane_curve_rejects_zero_form():
    F = field_of_order(3)
    with pytest.raises(ValueError):
        PlaneCurve(F, 3, 2, (0,) * 6)


def test_curve_file_round_trip():
    F = field_of_order(9)
    f = HomogeneousForm.parse("x^3 + 4*y*z^2 + 7*x*y*z", F)
    text = format_form(f)
    assert text.splitlines()[0] == "q=9 nvars=3 deg=3"
    g = parse_form_file(text)
    assert g.coeffs == f.coeffs and g.field.order == 9


@st.composite
def forms(draw):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    deg = draw(st.integers(1, 3))
    n = num_monomials(3, deg)
    coeffs = draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    return HomogeneousForm(field_of_order(q), 3, deg, tuple(coeffs))


@given(forms(), forms())
@settings(max_examples=60, deadline=None)
def test_zero_set_of_a_product_is_the_union(f, g):
    if f.field.order != g.field.order or f.is_zero() or g.is_zero():
        return
    F = f.field
    h = f * g
    for p in enumerate_points(F, "P2"):
        assert (evaluate(h, p) == 0) == (evaluate(f, p) == 0 or evaluate(g, p) == 0)


@given(forms(), st.integers(1, 10**6))
@settings(max_examples=40, deadline=None)
def test_point_count_is_scale_invariant(f, c):
    if f.is_zero():
        return
    c = 1 + c % (f.field.order - 1)
    assert count_curve_points(f.scale(c)) == count_curve_points(f)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_degree_three_point_with_spanning_conjugates(q):
    F = field_of_order(q)
    P = find_closed_point(F, 3, "noncollinear")
    assert P.degree == 3
    assert not collinear(P.orbit)
    assert P.field.order == q**3
    # conjugates are Frobenius images of each other
    assert P.orbit[1] == P.orbit[0].frobenius(F)


def test_closed_point_validation():
    F = field_of_order(2)
    E = extension(F, 2)
    seed = next(ProjectivePoint(E, c) for c in [(1, 2, 0), (1, 3, 0)])
    cp = closed_point(seed, F)
    assert cp.degree == 2
    with pytest.raises(ValueError):
        ClosedPoint(F, (seed,))  # not closed under Frobenius


def test_point_on_curve_lies_on_it():
    F = field_of_order(3)
    D = HomogeneousForm.parse("x^2 + y^2", F)  # two conjugate lines through (0:0:1)
    R = find_closed_point(F, 4, "on_curve", D)
    assert R.degree == 4
    assert all(evaluate(D, p) == 0 for p in R.orbit)


def test_union_of_lines_detection():
    F = field_of_order(5)
    assert is_union_of_rational_lines(HomogeneousForm.parse("x*y*(x+y+z)", F))
    assert not is_union_of_rational_lines(HomogeneousForm.parse("x*(x*z - y^2)", F))
    lines, rest = rational_linear_factors(HomogeneousForm.parse("x*(x*z - y^2)", F))
    assert len(lines) == 1 and rest.degree == 2


def test_concurrent_lines():
    # d rational lines through one point cover dq + 1 points
    F = field_of_order(4)
    f = HomogeneousForm.parse("x*y*(x+y)", F)
    assert count_curve_points(f) == 3 * 4 + 1
