"""Acceptance gate: one test per numbered criterion.

Each test prints a single summary line (visible under pytest -rA or on
failure) and then asserts the criterion exactly as stated.  Producers
are memoized so the determinism criterion can reuse the first run and
compare a genuine second run against it.

Criterion 7 is expected to fail: its layer-growth clause
V(N) <= B(k, h) * V(N - h) is false as stated.  B(k, 1) = 1, so the
h = 1 instance demands V(N) <= V(N - 1), which any still-growing orbit
violates; counting words of length strictly less than h undercounts the
compositions that map depth N - h onto depth N (that needs words of
length up to h, B(k, h + 1) many).  The clause is asserted verbatim and
the failure is the finding; see the README note.
"""

import json
import math
import random
import tempfile
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from fporbits.admissibility import (
    thm_params,
    verify_lemma_admissible_compositions,
    vyugin_constants,
)
from fporbits.dynamics import semigroup_orbit
from fporbits.fields import (
    PrimeFieldCtx,
    divisors_from_factorization,
    factor_integer,
    is_prime,
    mul_order,
)
from fporbits.graphmetrics import shortest_cycle_through_zero, tree_size_B
from fporbits.harness import (
    FAIL,
    PASS,
    ExperimentSpec,
    run_batch,
    subgroup_oracle_suite,
    trajectory_oracle_suite,
    validate_report,
    verify_lemma_dense,
    verify_vyugin,
)
from fporbits.poly import Polynomial
from fporbits.subgroups import SubgroupDescriptor, membership_stats, subgroup_from_orbit

SEED = 20260814


def test_criterion_1_subgroup_oracle_equivalence():
    t0 = time.perf_counter()
    cases, mismatches = subgroup_oracle_suite(200)
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 60.0
    print(f"criterion 1: {'PASS' if ok else 'FAIL'} ({cases} subset cases, {dt:.1f}s)")
    assert mismatches == []
    assert dt < 60.0


def test_criterion_2_trajectory_oracle_equivalence():
    t0 = time.perf_counter()
    cases, mismatches = trajectory_oracle_suite(1000)
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 30.0
    print(f"criterion 2: {'PASS' if ok else 'FAIL'} ({cases} trajectories, {dt:.1f}s)")
    assert mismatches == []
    assert dt < 30.0


def test_criterion_3_worked_examples():
    ctx7 = PrimeFieldCtx(7)
    assert mul_order(ctx7, 2) == 3
    assert mul_order(ctx7, 3) == 6

    fs = (Polynomial(ctx7, [0, 0, 1]), Polynomial(ctx7, [1, 1]))
    orbit = semigroup_orbit(fs, 1, 2)
    assert len(orbit.elements) == 4
    assert subgroup_from_orbit(orbit).order == 6
    stats = membership_stats(orbit, SubgroupDescriptor(ctx7, 3))
    assert stats.T == 3 and stats.rho == Fraction(3, 4)

    ctx5 = PrimeFieldCtx(5)
    res = shortest_cycle_through_zero([Polynomial(ctx5, [1, 0, 1])])
    assert res.exact and res.length == 3
    res = shortest_cycle_through_zero([Polynomial(ctx5, [0, 0, 1])])
    assert res.exact and res.length == 1

    assert tree_size_B(2, 3) == 7
    vc = vyugin_constants((2, 2), 2)
    assert vc.c1 == 4096 and vc.c3_exact == 96
    assert thm_params("THM2", 1, 2, 2, group_order=10**6).ell == 3
    print("criterion 3: PASS (all worked examples exact)")


@lru_cache(maxsize=None)
def _dense_report(tag: str):
    return verify_lemma_dense(ExperimentSpec(kind="dense", trials=320, seed=SEED))


def test_criterion_4_dense_words_bound_suite():
    t0 = time.perf_counter()
    rep = _dense_report("first")
    dt = time.perf_counter() - t0
    met = rep.stats["hypothesis_met"]
    fails = [c for c in rep.checks if c.status == FAIL]
    recounts = [c for c in rep.checks if c.name.startswith("independent-recount")]
    ok = met >= 200 and not fails and all(c.status == PASS for c in recounts) and dt < 300
    print(
        f"criterion 4: {'PASS' if ok else 'FAIL'} "
        f"({met} hypothesis-met of 320, {len(fails)} failures, {dt:.1f}s)"
    )
    assert met >= 200
    assert fails == []
    assert len(recounts) == 320 and all(c.status == PASS for c in recounts)
    assert dt < 300.0


def _lemma22_draw(t: int):
    rng = random.Random(f"lemma22:{SEED}:{t}")
    mode = rng.random()
    if mode < 0.35:
        p = rng.choice((5, 7))
        ctx = PrimeFieldCtx(p)
        return [Polynomial(ctx, [rng.randrange(1, p), 1])], rng.choice((1, 2)), 6, 10
    if mode < 0.65:
        p = rng.choice((5, 7, 11, 13))
        ctx = PrimeFieldCtx(p)
        a = rng.randrange(1, p)
        b = rng.randrange(1, p)
        while b == a:
            b = rng.randrange(1, p)
        return [Polynomial(ctx, [a, 1]), Polynomial(ctx, [b, 1])], 1, 6, 8
    if mode < 0.9:
        p = rng.choice((5, 7, 11, 13))
        ctx = PrimeFieldCtx(p)
        return [Polynomial(ctx, [rng.randrange(1, p), rng.randrange(p), 1])], rng.choice((1, 2)), 8, 4
    p = rng.choice((5, 7, 11))
    ctx = PrimeFieldCtx(p)
    k = rng.choice((1, 2))
    fs = [
        Polynomial(ctx, [rng.randrange(p) for _ in range(rng.choice((1, 2)))] + [1])
        for _ in range(k)
    ]
    return fs, rng.choice((1, 2)), 6, 6


def test_criterion_5_composed_family_pipeline():
    t0 = time.perf_counter()
    statuses = {"PASS": 0, "SKIPPED": 0, "FAIL": 0}
    failures = []
    total = 110
    for t in range(total):
        fs, h, degree_cap, length_cap = _lemma22_draw(t)
        rep = verify_lemma_admissible_compositions(fs, h, degree_cap=degree_cap, length_cap=length_cap)
        statuses[rep.status] += 1
        if rep.status == "FAIL":
            failures.append((t, [list(f.coeffs) for f in fs], h, rep.reason))
    dt = time.perf_counter() - t0
    skipped_fraction = Fraction(statuses["SKIPPED"], total)
    ok = statuses["FAIL"] == 0 and dt < 300
    print(
        f"criterion 5: {'PASS' if ok else 'FAIL'} "
        f"({total} instances, {statuses['PASS']} certified, skipped fraction {skipped_fraction}, {dt:.1f}s)"
    )
    assert failures == []
    assert total >= 100
    assert dt < 300.0


@lru_cache(maxsize=None)
def _vyugin_window_primes(want: int = 20):
    found = []
    p = 999001
    while len(found) < want:
        if is_prime(p):
            vc = vyugin_constants((2, 2), 2, p)
            divs = divisors_from_factorization(factor_integer(p - 1))
            if any(vc.in_window(d) for d in divs):
                found.append(p)
        p += 2
    return tuple(found)


def test_criterion_6_coset_hit_bound_near_million():
    t0 = time.perf_counter()
    primes = _vyugin_window_primes(20)
    in_window_cases = 0
    failures = []
    for i, p in enumerate(primes):
        rep = verify_vyugin(ExperimentSpec(kind="vyugin", p=p, degrees=(2, 2), trials=1, seed=SEED + i))
        check = rep.checks[0]
        if check.hypothesis_held:
            in_window_cases += 1
        if check.status == FAIL:
            failures.append((p, check.detail))
        assert check.status in (PASS, FAIL)  # window is nonempty by construction
    dt = time.perf_counter() - t0
    ok = in_window_cases >= 20 and not failures
    print(
        f"criterion 6: {'PASS' if ok else 'FAIL'} "
        f"({in_window_cases} in-window cases at p near 10^6, {len(failures)} failures, {dt:.1f}s)"
    )
    assert in_window_cases >= 20
    assert failures == []


def _primes_below(n: int):
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(q) for q in np.nonzero(sieve)[0] if q >= 3]


def test_criterion_7_trivial_bound_battery():
    # The layer-growth clause is false as stated: B(k, 1) = 1 turns the
    # h = 1 instance into V(N) <= V(N - 1).  Minimal counterexample:
    # f = X + 1, u = 0, N = 1 gives V(1) = 2 > 1 * V(0) = 1.  The valid
    # count of words mapping depth N - h onto depth N is B(k, h + 1).
    primes = _primes_below(100001)
    t0 = time.perf_counter()
    trivial_violations = []
    layer_violations = []
    for i in range(500):
        rng = random.Random(f"trivial:{SEED}:{i}")
        p = rng.choice(primes)
        ctx = PrimeFieldCtx(p)
        k = rng.randint(1, 2)
        fs = [
            Polynomial(ctx, [rng.randrange(p) for _ in range(rng.randint(1, 3))] + [rng.randrange(1, p)])
            for _ in range(k)
        ]
        u = rng.randrange(p)
        N = rng.randint(1, 50)
        orbit = semigroup_orbit(fs, u, N)
        V = len(orbit.elements)
        G = subgroup_from_orbit(orbit).order
        nonzero = V - (1 if 0 in orbit.elements else 0)
        if G < nonzero:
            trivial_violations.append({"p": p, "generators": [list(f.coeffs) for f in fs], "u": u, "N": N})
        prof = orbit.v_profile
        for h in range(1, min(N, 5) + 1):
            if prof[N] > tree_size_B(k, h) * prof[N - h]:
                layer_violations.append(
                    {
                        "p": p,
                        "generators": [list(f.coeffs) for f in fs],
                        "u": u,
                        "N": N,
                        "h": h,
                        "V_N": prof[N],
                        "B": tree_size_B(k, h),
                        "V_N_minus_h": prof[N - h],
                    }
                )
                break
    dt = time.perf_counter() - t0
    ok = not trivial_violations and not layer_violations and dt < 300
    print(
        f"criterion 7: {'PASS' if ok else 'FAIL'} "
        f"({len(trivial_violations)} trivial-bound violations, "
        f"{len(layer_violations)} layer-growth violations of 500, {dt:.1f}s)"
    )
    assert dt < 300.0
    assert trivial_violations == []
    assert layer_violations == [], (
        "the layer-growth clause fails as stated; first violation: "
        f"{layer_violations[0]}"
    )


def _trend_config() -> dict:
    specs = []
    for p in (10007, 100003, 999983):
        for eps in ("1/4", "1/2"):
            for kind in ("thm1", "thm2"):
                specs.append({"kind": kind, "p": p, "eps": eps, "repetitions": 50, "seed": 814})
    return {"specs": specs}


@lru_cache(maxsize=None)
def _trend_stream(tag: str):
    out = Path(tempfile.mkdtemp()) / "trend.jsonl"
    code = run_batch(_trend_config(), out=str(out), preflight=True)
    return code, out.read_bytes()


def test_criterion_8_trend_reports():
    t0 = time.perf_counter()
    code, stream = _trend_stream("first")
    dt = time.perf_counter() - t0
    lines = stream.decode().splitlines()
    for line in lines:
        validate_report(json.loads(line))
    ratios = sum(len(json.loads(l)["cases"]) for l in lines if json.loads(l)["kind"] == "thm1")
    ok = code == 0 and len(lines) == 12
    print(
        f"criterion 8: {'PASS' if ok else 'FAIL'} "
        f"(12 reports, {ratios} growth-ratio samples, schema valid, exit {code}, {dt:.1f}s)"
    )
    assert code == 0
    assert len(lines) == 12
    assert ratios == 300  # 3 primes x 2 eps x 50 draws


def test_criterion_9_byte_identical_reruns():
    t0 = time.perf_counter()
    code_a, stream_a = _trend_stream("first")  # memoized first run
    code_b, stream_b = _trend_stream("second")  # genuine re-run
    dense_again = verify_lemma_dense(ExperimentSpec(kind="dense", trials=320, seed=SEED))
    same_dense = dense_again.to_obj() == _dense_report("first").to_obj()
    dt = time.perf_counter() - t0
    ok = stream_a == stream_b and code_a == code_b == 0 and same_dense
    print(f"criterion 9: {'PASS' if ok else 'FAIL'} (trend stream and dense report re-runs identical, {dt:.1f}s)")
    assert stream_a == stream_b
    assert code_a == code_b == 0
    assert same_dense
