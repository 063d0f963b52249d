"""Acceptance criteria, each at its stated tolerance (exact) and time limit."""

import itertools
import math
import time

from acceptance_log import record
from flowcoh.exactla import IntMatrix, snf
from flowcoh.fgab import FgAbGroup
from flowcoh.flowcalc import (
    FlowDescriptor,
    Solenoid,
    SolenoidSubgroupKm,
    all_sections_realizable_torus,
    analyze,
    cohomology_circle,
    free_extension_shapes,
    full_torsion,
    realizable_finite_section_torus,
    solenoid_section_catalog,
    torsion_subgroup,
    zd_in_solenoid,
)
from flowcoh.homological import cocycle_zk, ext, hom, tensor, tor, twisted_product
from flowcoh.sections import (
    CoveringEndo,
    LoopMatrix,
    random_instance,
    section_additivity,
    section_via_cohomotopy,
    section_via_monodromy,
)
from flowcoh.structexpr import StructureExpr, torsion_of
from oracles import (
    abelian_groups_up_to,
    det_fraction,
    embeds_in_torus,
    functors_by_enumeration,
    invariant_factors_by_minors,
    random_unimodular,
    rng_from_env,
    surjection_exists,
    table_invariants,
    torus_section_by_lifting,
)


def _instances(seed_rng, count=200):
    return [random_instance(seed_rng, max_g=3, max_t=3, bound=5, max_det=12) for _ in range(count)]


def test_criterion_01_worked_example():
    t = time.perf_counter()
    fd = FlowDescriptor(2, IntMatrix.from_columns([(0, 1)], 2), topologically_free=True)
    rep = analyze(fd)
    b_in_z, _ = free_extension_shapes(fd)
    ok = (
        (rep.n, rep.m, rep.divisors) == (1, 1, (1,))
        and cohomology_circle(fd) == StructureExpr.of("R", "Q/Z")
        and cohomology_circle(fd).render() == "R ⊕ Q/Z"
        and b_in_z.render() == "0 ⊕ R ⊕ Z ⊕ Z ⊆ R ⊕ R ⊕ Q ⊕ Z"
    )
    assert record(1, "worked example n=1, m=1, d=(1), shapes", ok, time.perf_counter() - t, 1)


def test_criterion_02_snf_suite():
    r = rng_from_env()
    mats = []
    for _ in range(500):
        rows, cols = r.randint(1, 5), r.randint(1, 5)
        mats.append([[r.randint(-20, 20) for _ in range(cols)] for _ in range(rows)])
    t = time.perf_counter()
    failures = 0
    for rows in mats:
        a = IntMatrix.from_rows(rows)
        res = snf(a)
        nz = [d for d in res.diagonal if d]
        good = (
            res.U @ a @ res.V == res.D
            and abs(det_fraction(res.U.tolist())) == 1
            and abs(det_fraction(res.V.tolist())) == 1
            and all(res.D[i, j] == 0 for i in range(a.rows) for j in range(a.cols) if i != j)
            and all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
            and res.invariant_factors == invariant_factors_by_minors(rows)
        )
        failures += not good
    assert record(2, f"SNF on 500 random matrices, {failures} failures", failures == 0, time.perf_counter() - t, 10)


def test_criterion_03_functor_oracle():
    r = rng_from_env()
    groups = abelian_groups_up_to(16)
    t = time.perf_counter()
    mismatches = []
    for a, b in itertools.product(groups, repeat=2):
        o = functors_by_enumeration(a, b, r)
        A, B = FgAbGroup.from_cyclic(a), FgAbGroup.from_cyclic(b)
        for name, fn in (("hom", hom), ("ext", ext), ("tor", tor), ("tensor", tensor)):
            got = fn(A, B)
            if got.free_rank or got.torsion != o[name]:
                mismatches.append((name, a, b))
    n = len(groups) ** 2
    ok = not mismatches
    assert record(3, f"hom/ext/tor/tensor vs enumeration on {n} pairs, {len(mismatches)} mismatches", ok, time.perf_counter() - t, 60), mismatches[:5]


def test_criterion_04_flagship_cross_check():
    insts = _instances(rng_from_env())
    t = time.perf_counter()
    disagree = lifted = 0
    for c, xi in insts:
        mono = section_via_monodromy(c, xi)
        if mono != section_via_cohomotopy(c, xi):
            disagree += 1
        if abs(c.A.det()) <= 8:
            lifted += 1
            brute, _ = torus_section_by_lifting(c.A.tolist(), xi.M.columns())
            if set(mono.elements()) != brute:
                disagree += 1
    title = f"monodromy = cohomotopy on 200 instances, path lifting on {lifted}, {disagree} disagreements"
    assert record(4, title, disagree == 0, time.perf_counter() - t, 30)


def test_criterion_05_monodromy_size_law():
    insts = _instances(rng_from_env())
    t = time.perf_counter()
    violations = 0
    for c, xi in insts:
        rows = c.A.tolist()
        g = c.g
        spanning = [row_a + row_m for row_a, row_m in zip(rows, xi.M.tolist())]
        # [Q + A Z^g : Z^g] is the gcd of the maximal minors of [A | M]
        gm = 0
        for cols in itertools.combinations(range(len(spanning[0])), g):
            gm = math.gcd(gm, det_fraction([[row[j] for j in cols] for row in spanning]))
        expected = abs(det_fraction(rows)) // gm
        violations += section_via_monodromy(c, xi).order() != expected
    assert record(5, f"|E_K(Q)| = [Q + A Z^g : A Z^g], {violations} violations", violations == 0, time.perf_counter() - t, 30)


def _random_descriptor(r):
    if r.random() < 0.3:
        x = r.randint(1, 3)
        return FlowDescriptor(x, IntMatrix.zeros(x, 0), simply_connected=True)
    n, m = r.randint(0, 4), r.randint(1, 3)
    chain, d = [], 1
    for _ in range(n):
        d *= r.choice([f for f in (1, 1, 2, 3, 5) if d * f <= 30])
        chain.append(d)
    u = IntMatrix.from_rows(random_unimodular(r, n + m))
    gens = u @ IntMatrix.diag(chain, rows=n + m, cols=n)
    fd = FlowDescriptor(n + m, gens, topologically_free=True)
    assert fd.divisors == tuple(chain)
    return fd


def test_criterion_06_torsion_consistency():
    r = rng_from_env()
    descs = [_random_descriptor(r) for _ in range(100)]
    t = time.perf_counter()
    mismatches = 0
    for fd in descs:
        h, tors = cohomology_circle(fd), full_torsion(fd)
        for k in range(1, 61):
            direct = torsion_subgroup(fd, k)
            formula = FgAbGroup.from_cyclic([math.gcd(d, k) for d in fd.divisors] + [k] * fd.m)
            if not (direct == torsion_of(h, k) == torsion_of(tors, k) == formula):
                mismatches += 1
    assert record(6, f"torsion via three routes, 100 descriptors x 60 k, {mismatches} mismatches", mismatches == 0, time.perf_counter() - t, 60)


def test_criterion_07_realizability_boundary():
    t = time.perf_counter()
    flips_ok = True
    for k in range(0, 5):
        for m in range(0, 5):
            fd = FlowDescriptor.from_divisors([2], m, topologically_free=True)
            flips_ok &= all_sections_realizable_torus(fd, k) == (m >= k)
    sources = [((2,), 1), ((2, 6), 2)]
    groups = [g for g in abelian_groups_up_to(32) if g]
    mismatches = []
    for divs, m in sources:
        fd = FlowDescriptor.from_divisors(divs, m, topologically_free=True)
        for K in groups:
            for k in (1, 2, 3):
                lib = realizable_finite_section_torus(fd, k, FgAbGroup.from_cyclic(K))
                brute = embeds_in_torus(K, k) and surjection_exists(K, divs, m)
                if lib != brute:
                    mismatches.append((divs, K, k))
    ok = flips_ok and not mismatches
    title = f"flip at m = k on [0,4]^2, {len(groups)} groups x 2 sources x 3 tori, {len(mismatches)} mismatches"
    assert record(7, title, ok, time.perf_counter() - t, 60), mismatches[:5]


def test_criterion_08_solenoid():
    t = time.perf_counter()
    dyadic = Solenoid.parse(";2")
    ok = zd_in_solenoid(dyadic, 3) and not zd_in_solenoid(dyadic, 2)
    for m in range(0, 5):
        fd = FlowDescriptor.from_divisors([3], m, topologically_free=True)
        queries = [SolenoidSubgroupKm.whole()] + [SolenoidSubgroupKm(mm, kk) for mm in (1, 2, 3) for kk in (2, 3, 4)]
        ok &= all(solenoid_section_catalog(fd, q) == (m >= 1) for q in queries)
    assert record(8, "dyadic solenoid Z_3 yes / Z_2 no, catalog iff m >= 1", ok, time.perf_counter() - t, 5)


def _coprime_pairs(r, count):
    dets = [6, 10, 12, 14, 15]
    out = []
    while len(out) < count:
        c, _ = random_instance(r, max_det=15)
        delta = abs(c.A.det())
        if delta not in dets:
            continue
        p = min(f for f in range(2, delta + 1) if delta % f == 0)
        part = 1
        while delta % (part * p) == 0:
            part *= p
        other = delta // part
        t = r.randint(1, 3)
        base1 = [[r.randint(-5, 5) for _ in range(t)] for _ in range(c.g)]
        base2 = [[r.randint(-5, 5) for _ in range(t)] for _ in range(c.g)]
        # other * M kills everything but the part-torsion, and vice versa
        m1 = IntMatrix.from_rows(base1).scale(other)
        m2 = IntMatrix.from_rows(base2).scale(part)
        out.append((c, LoopMatrix(m1), LoopMatrix(m2)))
    return out


def test_criterion_09_additivity():
    pairs = _coprime_pairs(rng_from_env(), 50)
    t = time.perf_counter()
    violations = sum(not section_additivity(c, x1, x2) for c, x1, x2 in pairs)
    assert record(9, f"section of sum = sum of sections on 50 coprime pairs, {violations} violations", violations == 0, time.perf_counter() - t, 30)


def test_criterion_10_twisted_products():
    t = time.perf_counter()
    bad = []
    for k in range(2, 9):
        for j in range(2, 9):
            phi = cocycle_zk(k, j)

            def add(x, y, k=k, j=j, phi=phi):
                return ((x[0] + y[0]) % k, (x[1] + y[1] + phi((x[0],), (y[0],))[0]) % j)

            table = table_invariants([(a, b) for a in range(k) for b in range(j)], add, (0, 0))
            lib = twisted_product(FgAbGroup.cyclic(k), FgAbGroup.cyclic(j), phi)
            if not (table == (k * j,) and lib == FgAbGroup.cyclic(k * j)):
                bad.append((k, j))
    assert record(10, f"Z_k twisted by the carry cocycle mod j is Z_kj, {len(bad)} failures", not bad, time.perf_counter() - t, 30), bad
