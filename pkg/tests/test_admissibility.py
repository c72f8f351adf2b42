import math
import random
from fractions import Fraction

import pytest

from fporbits.admissibility import (
    composed_family,
    count_joint_coset_hits,
    is_admissible,
    thm_params,
    verify_lemma_admissible_compositions,
    vyugin_constants,
)
from fporbits.errors import BudgetExceeded, ContextMismatch
from fporbits.fields import PrimeFieldCtx
from fporbits.poly import (
    Polynomial,
    is_irreducible,
    lift_poly,
    poly_gcd,
    roots_in_extensions,
    squarefree_part,
)
from fporbits.subgroups import SubgroupDescriptor


def P(ctx, *coeffs):
    return Polynomial(ctx, coeffs)


# -- admissibility ------------------------------------------------------------


def test_admissible_disjoint_linear():
    ctx = PrimeFieldCtx(7)
    wit = is_admissible([P(ctx, 0, 1), P(ctx, -1, 1)])
    assert wit.admissible
    assert wit.witnesses == (P(ctx, 0, 1), P(ctx, -1, 1))
    assert wit.failing_indices == ()


def test_inadmissible_shared_root():
    ctx = PrimeFieldCtx(7)
    g1 = P(ctx, 0, 1)  # X
    g2 = P(ctx, 0, -1, 1)  # X(X-1)
    wit = is_admissible([g1, g2])
    assert not wit.admissible
    assert wit.failing_indices == (0,)  # the only root of X is shared
    assert wit.witnesses[0] is None
    assert wit.witnesses[1] == P(ctx, -1, 1)


def test_admissible_after_radicals():
    ctx = PrimeFieldCtx(5)
    g1 = P(ctx, 0, 0, 1)  # X^2
    g2 = P(ctx, 1, -2, 1)  # (X-1)^2
    wit = is_admissible([g1, g2])
    assert wit.admissible
    assert wit.witnesses == (P(ctx, 0, 1), P(ctx, -1, 1))


def test_admissible_single_poly():
    ctx = PrimeFieldCtx(7)
    wit = is_admissible([P(ctx, 1, 0, 1)])
    assert wit.admissible  # any nonconstant polynomial has a root somewhere


def test_admissible_duplicates_fail():
    ctx = PrimeFieldCtx(7)
    g = P(ctx, 1, 1)
    wit = is_admissible([g, g])
    assert not wit.admissible
    assert wit.failing_indices == (0, 1)


def test_admissible_rejects_constants():
    ctx = PrimeFieldCtx(7)
    with pytest.raises(ValueError):
        is_admissible([P(ctx, 3)])
    with pytest.raises(ValueError):
        is_admissible([])
    with pytest.raises(ContextMismatch):
        is_admissible([P(PrimeFieldCtx(5), 0, 1), P(ctx, 0, 1)])


def test_witness_invariants_on_random_families():
    rng = random.Random(7)
    for _ in range(25):
        p = rng.choice([5, 7, 11, 97])
        ctx = PrimeFieldCtx(p)
        k = rng.randint(1, 3)
        gs = []
        for _ in range(k):
            deg = rng.randint(1, 4)
            coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
            gs.append(Polynomial(ctx, coeffs))
        wit = is_admissible(gs)
        for i, w in enumerate(wit.witnesses):
            if w is None:
                continue
            assert is_irreducible(w)
            assert (squarefree_part(gs[i]) % w).is_zero
            for j, other in enumerate(gs):
                if j != i:
                    assert poly_gcd(w, other).degree == 0


def _root_oracle_admissible(gs):
    """Exists-a-root check done with explicit extension-field roots."""
    for i, g in enumerate(gs):
        found = False
        for rec in roots_in_extensions(g, g.degree):
            others = [
                gs[j] if rec.degree == 1 else lift_poly(gs[j], rec.field, rec.field.embed_base)
                for j in range(len(gs))
                if j != i
            ]
            if all(not rec.field.is_zero(o.eval(rec.value)) for o in others):
                found = True
                break
        if not found:
            return False
    return True


def test_gcd_route_matches_root_oracle():
    rng = random.Random(11)
    for _ in range(20):
        p = rng.choice([5, 7, 11, 13])
        ctx = PrimeFieldCtx(p)
        k = rng.randint(2, 3)
        gs = []
        for _ in range(k):
            deg = rng.randint(1, 4)
            coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
            gs.append(Polynomial(ctx, coeffs))
        assert is_admissible(gs).admissible == _root_oracle_admissible(gs)


def test_admissibility_invariances():
    ctx = PrimeFieldCtx(11)
    gs = [P(ctx, 3, 1, 1), P(ctx, 0, 1), P(ctx, 5, 0, 1)]
    base = is_admissible(gs).admissible
    assert is_admissible(list(reversed(gs))).admissible == base
    scaled = [g.scale(c) for g, c in zip(gs, (2, 5, 10))]
    assert is_admissible(scaled).admissible == base


# -- composed families --------------------------------------------------------


def test_composed_family_frozen_pair():
    ctx = PrimeFieldCtx(7)
    fam = composed_family([P(ctx, 0, 0, 1), P(ctx, 1, 1)], 2)
    words = [w.labels for w, _ in fam]
    polys = [g for _, g in fam]
    assert words == [(1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert polys == [
        P(ctx, 0, 0, 1),  # X^2
        P(ctx, 1, 1),  # X + 1
        P(ctx, 0, 0, 0, 0, 1),  # X^4
        P(ctx, 1, 2, 1),  # (X+1)^2
        P(ctx, 1, 0, 1),  # X^2 + 1
        P(ctx, 2, 1),  # X + 2
    ]


def test_composed_family_iterates():
    ctx = PrimeFieldCtx(7)
    fam = composed_family([P(ctx, 0, 0, 1)], 3)
    assert [g.degree for _, g in fam] == [2, 4, 8]
    fam1 = composed_family([P(ctx, 1, 1)], 1)
    assert [g for _, g in fam1] == [P(ctx, 1, 1)]


def test_composed_family_word_acts_rightmost_first():
    ctx = PrimeFieldCtx(7)
    f1, f2 = P(ctx, 0, 0, 1), P(ctx, 1, 1)
    fam = dict((w.labels, g) for w, g in composed_family([f1, f2], 2))
    # (1,2) means f1 o f2: square after shifting
    assert fam[(1, 2)] == P(ctx, 1, 2, 1)
    assert fam[(1, 2)].eval(3) == f1.eval(f2.eval(3))


def test_composed_family_degree_cap():
    ctx = PrimeFieldCtx(7)
    with pytest.raises(BudgetExceeded):
        composed_family([P(ctx, 0, 0, 1)], 7, max_degree=100)


def test_composed_family_validation():
    ctx = PrimeFieldCtx(7)
    with pytest.raises(ValueError):
        composed_family([P(ctx, 1, 1)], 0)


# -- lemma pipeline ------------------------------------------------------------


def test_lemma_pipeline_pass_quadratic():
    ctx = PrimeFieldCtx(5)
    rep = verify_lemma_admissible_compositions([P(ctx, 1, 0, 1)], 1)
    assert rep.status == "PASS"
    assert rep.certified_c0_floor == 3
    assert rep.family_size == 1


def test_lemma_pipeline_skip_on_loop():
    ctx = PrimeFieldCtx(7)
    rep = verify_lemma_admissible_compositions([P(ctx, 0, 0, 1)], 1)
    assert rep.status == "SKIPPED"
    assert rep.certified_c0_floor == 1
    # {X^2, X+1} has a loop at 0 from X^2, so C0 = 1 and h=2 cannot qualify
    rep2 = verify_lemma_admissible_compositions([P(ctx, 0, 0, 1), P(ctx, 1, 1)], 2)
    assert rep2.status == "SKIPPED"
    assert rep2.cycle.exact and rep2.cycle.length == 1


def test_lemma_pipeline_skip_on_two_cycle():
    ctx = PrimeFieldCtx(7)
    rep = verify_lemma_admissible_compositions([P(ctx, 1, 1), P(ctx, 1, 1)], 1)
    assert rep.status == "SKIPPED"
    assert rep.certified_c0_floor == 2


def test_lemma_pipeline_pass_two_shifts():
    # {X+1, X+2} over F_7: cycle 0 ->f1 1 <-f2 6 ->f1 0 gives C0 = 3
    ctx = PrimeFieldCtx(7)
    rep = verify_lemma_admissible_compositions([P(ctx, 1, 1), P(ctx, 2, 1)], 1)
    assert rep.status == "PASS"
    assert rep.certified_c0_floor == 3
    assert rep.family_size == 2
    assert rep.severity == "info"


# -- window constants ----------------------------------------------------------


def test_vyugin_frozen_constants():
    vc = vyugin_constants((2, 2), 2)
    assert vc.c1 == 4096
    assert vc.c3_exact == 96
    vc2 = vyugin_constants((1, 1, 1), 3)
    assert vc2.c1 == 64
    assert vc2.c3_exact == 48


def test_vyugin_validation():
    with pytest.raises(ValueError):
        vyugin_constants((3, 2), 2)
    with pytest.raises(ValueError):
        vyugin_constants((2,), 1)
    with pytest.raises(ValueError):
        vyugin_constants((2, 2), 3)
    with pytest.raises(ValueError):
        vyugin_constants((0, 2), 2)


def test_c2_expression_is_evaluable():
    vc = vyugin_constants((2, 3), 2)
    val = eval(vc.c2_expression)
    assert math.isclose(val, float(vc.c2_decimal(30)), rel_tol=1e-12)
    assert vc.c3_exact is None  # 6^(1/2) is irrational
    assert math.isclose(float(vc.c3_decimal(30)), 4 * 3 * 5 * math.sqrt(6), rel_tol=1e-12)


def test_window_exact_and_directed_agree():
    vc = vyugin_constants((2, 2), 2, p=999983)
    # C2 * p^(4/5) is roughly 15036 here
    assert vc.in_window(5000)
    assert not vc.in_window(20000)
    assert not vc.in_window(4096)  # lower endpoint is strict
    assert vc.window_status(5000) == "PASS"
    assert vc.window_status(20000) == "FAIL"
    assert vc.window_status(4000) == "FAIL"
    for g in range(4097, 20000, 377):
        status = vc.window_status(g)
        if status != "INDETERMINATE":
            assert (status == "PASS") == vc.in_window(g)


def test_window_requires_p():
    vc = vyugin_constants((2, 2), 2)
    with pytest.raises(ValueError):
        vc.in_window(5000)
    assert vc.in_window(5000, p=999983)


def test_conclusion_exact_boundary():
    vc = vyugin_constants((2, 2), 2)
    # with group order 1 the bound is exactly C3 = 96
    assert vc.conclusion_holds(96, 1)
    assert not vc.conclusion_holds(97, 1)
    assert vc.conclusion_holds(0, 1)
    with pytest.raises(ValueError):
        vc.conclusion_holds(-1, 1)


# -- joint coset hits ----------------------------------------------------------


def test_coset_hits_frozen_examples():
    ctx = PrimeFieldCtx(13)
    G3 = SubgroupDescriptor(ctx, 3)  # {1, 3, 9}
    x = P(ctx, 0, 1)
    x2 = P(ctx, 0, 0, 1)
    assert count_joint_coset_hits([x, x2], G3, [1, 1]) == 3
    full = SubgroupDescriptor(ctx, 12)
    assert count_joint_coset_hits([x, P(ctx, 1, 1)], full, [1, 1]) == 11  # p - 2
    assert count_joint_coset_hits([x, x], G3, [2, 2]) == 3  # one coset, twice


def test_coset_hits_match_bruteforce():
    rng = random.Random(3)
    ctx = PrimeFieldCtx(13)
    for _ in range(10):
        order = rng.choice([2, 3, 4, 6, 12])
        G = SubgroupDescriptor(ctx, order)
        k = rng.randint(1, 3)
        gs, reps = [], []
        for _ in range(k):
            deg = rng.randint(1, 3)
            coeffs = [rng.randrange(13) for _ in range(deg)] + [rng.randrange(1, 13)]
            gs.append(Polynomial(ctx, coeffs))
            reps.append(rng.randrange(1, 13))
        member = set(G.elements())
        expected = sum(
            1
            for x in range(13)
            if all(g.eval(x) in {(r * m) % 13 for m in member} for g, r in zip(gs, reps))
        )
        assert count_joint_coset_hits(gs, G, reps) == expected


def test_coset_hits_validation():
    ctx = PrimeFieldCtx(13)
    G = SubgroupDescriptor(ctx, 3)
    x = P(ctx, 0, 1)
    with pytest.raises(ValueError):
        count_joint_coset_hits([x], G, [1, 2])
    with pytest.raises(ValueError):
        count_joint_coset_hits([x], G, [0])
    with pytest.raises(BudgetExceeded):
        count_joint_coset_hits([x], G, [1], max_p=7)
    with pytest.raises(ContextMismatch):
        count_joint_coset_hits([P(PrimeFieldCtx(7), 0, 1)], G, [1])


# -- theorem parameters ---------------------------------------------------------


def test_thm1_params_frozen():
    tp = thm_params("THM1", 0.3, 1, 2)
    assert tp.h == 2 and tp.beta == 2
    assert tp.subgroup_threshold == 2**4 * 2**16 == 1048576
    tp1 = thm_params("THM1", 1, 1, 3)
    assert tp1.h == 1 and tp1.beta == 1
    assert tp1.subgroup_threshold == 4 * 3**4


def test_thm1_smallest_h_property():
    for eps in (Fraction(1, 10), Fraction(1, 4), Fraction(9, 10)):
        for k in (1, 2, 3):
            tp = thm_params("THM1", eps, k, 2)
            from fporbits.graphmetrics import tree_size_B

            assert Fraction(1, 2 * tree_size_B(k, tp.h)) < eps
            if tp.h > 1:
                assert not Fraction(1, 2 * tree_size_B(k, tp.h - 1)) < eps


def test_thm2_params_frozen():
    tp = thm_params("THM2", 1, 2, 2, group_order=10**6)
    assert tp.ell == 3
    assert tp.h == 0 and tp.beta == 0
    assert tp.exponent == Fraction(-1, 6)
    assert 0 < tp.delta0 < 0.5
    tp2 = thm_params("THM2", 0.25, 2, 2, group_order=10**6)
    assert tp2.ell == 15
    assert tp2.exponent == Fraction(-1, 120)


def test_thm2_h_positive_for_large_group():
    tp = thm_params("THM2", 1, 2, 2, group_order=10**30)
    assert tp.h == 2
    assert tp.beta == 3  # B(2, 2)


def test_thm2_assumption_threshold():
    tp = thm_params("THM2", 1, 2, 2, group_order=10**6)
    thr = tp.assumption_threshold(10**4)
    manual = 6 * 3 * (1 + math.log(2)) / (1.0 * tp.delta0 * math.log(10**4))
    assert math.isclose(thr, manual, rel_tol=1e-12)
    tp1 = thm_params("THM1", 0.5, 1, 2)
    with pytest.raises(ValueError):
        tp1.assumption_threshold(100)


def test_thm_params_validation():
    with pytest.raises(ValueError):
        thm_params("THM3", 0.5, 1, 2)
    with pytest.raises(ValueError):
        thm_params("THM1", 0, 1, 2)
    with pytest.raises(ValueError):
        thm_params("THM1", 1.5, 1, 2)
    with pytest.raises(ValueError):
        thm_params("THM1", 0.5, 0, 2)
    with pytest.raises(ValueError):
        thm_params("THM1", 0.5, 1, 1)
    with pytest.raises(ValueError):
        thm_params("THM2", 0.5, 1, 2)  # missing group order
    assert thm_params("thm1", 0.5, 1, 2).context == "THM1"
