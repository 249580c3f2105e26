"""Tests for test modules: spans, minors, products, closure, separation runs."""

import random

import pytest

from seplab import (
    Ambient,
    InfeasibleError,
    MinorsOfMeasure,
    Poly,
    RATIONALS,
    dim_partials,
    elementary_symmetric,
    evaluate_module,
    expand,
    explicit_product,
    explicit_span,
    group_closure,
    in_span,
    minors_explicit,
    module_product,
    monomials_upto,
    multiply,
    partial_deriv_matrix,
    poly_det,
    poly_matrix_minors,
    prime_field,
    run_separation,
    sampler_from_spec,
    symbolic_partial_deriv_matrix,
    vanishes_on,
    variable,
    zero,
)
from seplab.poly import evaluate


def rand_poly(n, d, rng, field=RATIONALS, sparsity=0.6):
    terms = {}
    for e in monomials_upto(n, d):
        if rng.random() < sparsity:
            c = rng.randint(-4, 4) if field.p is None else rng.randrange(field.p)
            terms[e] = c
    return Poly(n, field, terms)


# the three coefficient slots of a binary quadratic form a*x^2 + b*xy + c*y^2,
# grlex order: index 0 reads off y^2, index 1 reads off xy, index 2 reads x^2
QUADRATIC_FORMS = Ambient(2, 2, RATIONALS, homogeneous=True)
DISCRIMINANT = Poly(3, RATIONALS, {(0, 2, 0): 1, (1, 0, 1): -4})


def test_ambient_coefficient_indexing():
    amb = QUADRATIC_FORMS
    assert amb.coeff_exponents() == [(0, 2), (1, 1), (2, 0)]
    assert amb.N == 3
    f = Poly(2, RATIONALS, {(2, 0): 5, (1, 1): 7, (0, 2): -1})
    assert amb.coeff_vector(f) == [-1, 7, 5]
    assert amb.coeff_variable((1, 1)) == variable(1, 3)
    full = Ambient(2, 2, RATIONALS)
    assert full.N == 6
    assert full.coeff_vector(zero(2)) == [0] * 6


def test_ambient_membership_checks():
    amb = QUADRATIC_FORMS
    assert amb.accepts(zero(2))
    assert not amb.accepts(Poly(2, RATIONALS, {(1, 0): 1}))  # inhomogeneous slice
    assert not amb.accepts(Poly(3, RATIONALS, {(1, 1, 1): 1}))
    with pytest.raises(ValueError):
        amb.require(Poly(2, RATIONALS, {(2, 1): 1}))
    assert Ambient(2, 2, RATIONALS).accepts(Poly(2, RATIONALS, {(1, 0): 1}))


def test_discriminant_span_vanishes_exactly_on_squares():
    """b^2 - 4ac is zero at (x+y)^2 but not at xy."""
    t = explicit_span(QUADRATIC_FORMS, [DISCRIMINANT])
    square = Poly(2, RATIONALS, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert vanishes_on(t, square)
    xy = Poly(2, RATIONALS, {(1, 1): 1})
    outcome = evaluate_module(t, xy)
    assert not outcome.vanishes
    assert outcome.value == 1
    assert outcome.detail["first_nonzero_index"] == 0


def test_explicit_span_reduces_to_a_basis():
    amb = Ambient(2, 1, RATIONALS)
    a0, a1, a2 = (variable(i, 3) for i in range(3))
    span = explicit_span(amb, [a0, a0, Poly(3, RATIONALS, {(2, 0, 0): 0})])
    assert span.dim == 1
    bigger = explicit_span(
        amb, [a0, multiply(a0, a0), Poly(3, RATIONALS, {(1, 0, 0): 2})]
    )
    assert bigger.dim == 2  # a0 and a0^2 are independent, 2*a0 is not new
    assert in_span(bigger, a0)
    assert not in_span(bigger, a1)
    assert in_span(bigger, zero(3))
    assert span.describe() == "span[dim=1]"


def test_explicit_span_rejects_wrong_ring():
    amb = Ambient(2, 1, RATIONALS)
    with pytest.raises(ValueError):
        explicit_span(amb, [variable(0, 2)])
    with pytest.raises(ValueError):
        explicit_span(amb, [variable(0, 3, prime_field(5))])


def test_minors_module_thresholds_dim_partials():
    amb = Ambient(2, 2, RATIONALS)
    t = MinorsOfMeasure(amb, "dim_partials", 3)
    assert t.describe() == "minors:dim_partials:3"
    x_sq = Poly(2, RATIONALS, {(2, 0): 1})
    xy = Poly(2, RATIONALS, {(1, 1): 1})
    assert dim_partials(x_sq) == 3 and dim_partials(xy) == 4
    assert vanishes_on(t, x_sq)
    out = evaluate_module(t, xy)
    assert not out.vanishes and out.value == 4 and out.threshold == 3
    with pytest.raises(ValueError):
        evaluate_module(t, elementary_symmetric(2, 3, RATIONALS))  # wrong arity
    with pytest.raises(ValueError):
        MinorsOfMeasure(amb, "no_such_measure", 1)
    with pytest.raises(ValueError):
        MinorsOfMeasure(amb, "dim_partials", -1)


def test_product_module_vanishes_when_either_factor_does():
    rng = random.Random(71)
    amb = Ambient(2, 2, RATIONALS)
    for _ in range(50):
        left = MinorsOfMeasure(amb, "dim_partials", rng.choice((2, 3, 4)))
        right = explicit_span(
            amb, [rand_poly(amb.N, 1, rng) for _ in range(rng.choice((1, 2)))]
        )
        prod = module_product(left, right)
        f = rand_poly(2, 2, rng)
        want = vanishes_on(left, f) or vanishes_on(right, f)
        out = evaluate_module(prod, f)
        assert out.vanishes == want
        assert out.value == (0 if want else 1)
        assert set(out.detail) == {"left", "right"}


def test_product_module_requires_matching_ambients():
    a = explicit_span(Ambient(2, 1, RATIONALS), [])
    b = explicit_span(Ambient(2, 2, RATIONALS), [])
    with pytest.raises(ValueError):
        module_product(a, b)


def test_explicit_product_multiplies_bases():
    """span{a0} * span{a1} is exactly span{a0*a1}."""
    amb = Ambient(2, 1, RATIONALS)
    left = explicit_span(amb, [variable(0, 3)])
    right = explicit_span(amb, [variable(1, 3)])
    prod = explicit_product(left, right)
    assert prod.dim == 1
    assert in_span(prod, Poly(3, RATIONALS, {(1, 1, 0): 1}))
    f_zero_left = Poly(2, RATIONALS, {(1, 0): 2})  # a0 slot empty
    assert evaluate(left.basis[0], amb.coeff_vector(f_zero_left)) == 0
    assert vanishes_on(prod, f_zero_left)


def test_poly_det_generic_two_by_two():
    """det [[a, b], [c, d]] = ad - bc."""
    a, b, c, d = (variable(i, 4) for i in range(4))
    det = poly_det([[a, b], [c, d]])
    assert det == Poly(4, RATIONALS, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
    with pytest.raises(ValueError):
        poly_det([[a, b]])


def test_poly_matrix_minors_enumeration():
    a, b, c, d = (variable(i, 4) for i in range(4))
    m = [[a, b], [c, d]]
    assert len(poly_matrix_minors(m, 1)) == 4
    dets = poly_matrix_minors(m, 2)
    assert len(dets) == 1 and dets[0] == poly_det(m)
    assert poly_matrix_minors(m, 3) == []
    assert poly_matrix_minors(m, 0) == []
    big = [[a] * 7 for _ in range(7)]
    with pytest.raises(InfeasibleError):
        poly_matrix_minors(big, 2)


def test_minors_explicit_of_generic_matrix():
    host = Ambient(3, 1, RATIONALS)  # a 4-slot coefficient space
    assert host.N == 4
    a, b, c, d = (variable(i, 4) for i in range(4))
    span = minors_explicit([[a, b], [c, d]], 1, host)
    assert span.dim == 1
    assert in_span(span, poly_det([[a, b], [c, d]]))
    empty = minors_explicit([[a, b], [c, d]], 2, host)
    assert empty.dim == 0
    assert vanishes_on(empty, rand_poly(3, 1, random.Random(1)))
    assert not vanishes_on(span, Poly(3, RATIONALS, {(1, 0, 0): 1, (0, 0, 0): 1}))


def test_symbolic_derivative_matrix_instantiates_to_the_numeric_one():
    """Plugging a polynomial's coefficients into the generic matrix recovers
    its derivative matrix entry by entry."""
    rng = random.Random(81)
    for n, d in ((1, 2), (2, 2)):
        amb = Ambient(n, d, RATIONALS)
        sym = symbolic_partial_deriv_matrix(amb)
        for _ in range(6):
            f = rand_poly(n, d, rng)
            while f.is_zero or f.degree != d:
                f = rand_poly(n, d, rng)
            vec = amb.coeff_vector(f)
            numeric = partial_deriv_matrix(f)
            assert sym.row_labels == numeric.row_labels
            assert sym.col_labels == numeric.col_labels
            for i in range(len(sym.row_labels)):
                for j in range(len(sym.col_labels)):
                    assert evaluate(sym.entries[i][j], vec) == numeric.entries[i][j]


def test_explicit_minors_agree_with_rank_thresholding():
    """All (r+1)-minors vanish at f exactly when the measure rank is <= r."""
    rng = random.Random(82)
    amb = Ambient(1, 2, RATIONALS)
    sym = symbolic_partial_deriv_matrix(amb)
    for r in (0, 1, 2):
        by_minors = minors_explicit(sym, r, amb)
        by_rank = MinorsOfMeasure(amb, "dim_partials", r)
        for _ in range(12):
            f = rand_poly(1, 2, rng, sparsity=0.5)
            assert vanishes_on(by_minors, f) == vanishes_on(by_rank, f)


def test_group_closure_symmetric_orbit_of_one_slot():
    """Closing one coefficient slot of a linear form under S_2 yields both slots."""
    amb = Ambient(2, 1, RATIONALS, homogeneous=True)
    slot = explicit_span(amb, [amb.coeff_variable((1, 0))])
    report = group_closure(slot, "sym")
    assert report.mode == "exhaustive" and report.samples == 2
    assert report.dim == 2
    assert in_span(report.module, amb.coeff_variable((0, 1)))
    assert report.to_json() == {
        "group": "sym",
        "mode": "exhaustive",
        "samples": 2,
        "dim": 2,
    }


def test_group_closure_discriminant_line_is_stable():
    """The discriminant spans a line preserved (up to scale) by every substitution."""
    span = explicit_span(QUADRATIC_FORMS, [DISCRIMINANT])
    report = group_closure(span, "gl", rng=random.Random(5))
    assert report.dim == 1
    assert report.mode == "sampled"
    assert in_span(report.module, DISCRIMINANT)


def test_group_closure_full_dual_basis_is_already_closed():
    amb = Ambient(2, 1, RATIONALS)
    full = explicit_span(amb, [variable(i, amb.N) for i in range(amb.N)])
    report = group_closure(full, "sym")
    assert report.dim == amb.N
    with pytest.raises(ValueError):
        group_closure(full, "gl")  # sampled closure without a generator
    with pytest.raises(ValueError):
        group_closure(full, "so3")


def test_run_separation_positive_case():
    """A rank threshold above the easy class but below e_2 separates them."""
    amb = Ambient(4, 2, RATIONALS)
    module = MinorsOfMeasure(amb, "dim_partials", 4)
    sampler = sampler_from_spec("depth3:4,2,1")
    hard = elementary_symmetric(2, 4, RATIONALS)
    report = run_separation(module, sampler, hard, trials=5, seed=3)
    assert report.trials == 5
    assert report.easy_vanish_count == 5
    assert report.hard_nonvanish and report.hard_value == 6
    assert report.separating
    assert report.note == ""
    assert [row.index for row in report.rows] == list(range(5))
    again = run_separation(module, sampler, hard, trials=5, seed=3)
    assert again == report
    csv = report.csv_rows()
    assert csv[0] == ["trial", "seed", "rank", "bound", "vanished"]
    assert len(csv) == 6 and all(v[4] == 1 for v in csv[1:])
    data = report.to_json()
    assert data["separating"] is True
    assert len(data["rows"]) == 5


def test_run_separation_rejects_hard_candidate_from_the_easy_class():
    """A candidate sampled from the easy class itself must never separate."""
    amb = Ambient(4, 2, RATIONALS)
    module = MinorsOfMeasure(amb, "dim_partials", 4)
    sampler = sampler_from_spec("depth3:4,2,1")
    fake_hard = expand(sampler.sample(random.Random(99)))
    report = run_separation(module, sampler, fake_hard, trials=5, seed=3)
    assert not report.hard_nonvanish
    assert not report.separating


def test_run_separation_zero_trials_is_inconclusive():
    amb = Ambient(4, 2, RATIONALS)
    module = MinorsOfMeasure(amb, "dim_partials", 4)
    sampler = sampler_from_spec("depth3:4,2,1")
    hard = elementary_symmetric(2, 4, RATIONALS)
    report = run_separation(module, sampler, hard, trials=0)
    assert report.hard_nonvanish  # the hard side still got evaluated
    assert not report.separating
    assert "insufficient evidence" in report.note
    with pytest.raises(ValueError):
        run_separation(module, sampler, hard, trials=-1)
