"""Acceptance criteria, one test per criterion, each printing a pass/fail line."""

import json
import os
import subprocess
import sys
import time
from fractions import Fraction

from homopoly import chain, families, harness
from homopoly.circuits import build_loop_case_circuit
from homopoly.graphs import enumerate_graphs, find_homomorphism, make_family, neighborhood_union
from homopoly.polynomials import (SparsePolynomial, aux, comparable_pair, hereditary_closure, is_pure, monomial_set)
from homopoly.reductions import Oracle, extract_homogeneous, extract_homogeneous_symbolic
from homopoly.seeding import stream


def test_criterion_1_easy_cases(acceptance_line):
    t0 = time.perf_counter()
    loop = make_family("single_looped_vertex")
    problems = []
    depths = set()
    for n in (2, 3, 4):
        c = build_loop_case_circuit(n)
        if c.expand() != families.hom_poly(loop, n):
            problems.append(f"expansion differs at n={n}")
        size, depth = c.metrics()
        depths.add(depth)
        if size != n * (n - 1) // 2 + 1:
            problems.append(f"size {size} at n={n}")
    if len(depths) != 1:
        problems.append(f"depths {sorted(depths)}")
    for n in (1, 2, 3, 4):
        for k in (1, 2, 4):
            if families.hom_poly(make_family("edgeless", k), n) != SparsePolynomial.constant(1):
                problems.append(f"edgeless({k}) at n={n}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 5:
        problems.append(f"runtime {elapsed:.2f}s")
    ok = not problems
    acceptance_line(1, "easy cases (loop circuit, edgeless)", ok,
                    "; ".join(problems) or f"depth {depths.pop()}, {elapsed:.2f}s")
    assert ok, problems


def test_criterion_2_compo_homo(acceptance_line):
    t0 = time.perf_counter()
    rng = stream(7, "acceptance/compo_homo")
    mismatches = bad_calls = compared = 0
    for _ in range(100):
        p, variables = harness.random_polynomial(rng)
        assert len(variables) <= 4 and p.degree() <= 6
        subset = [v for v in variables if rng.random() < 0.5] or None
        d = p.degree(subset)
        o = Oracle.from_polynomial(p, p.degree(), universe=variables)
        for k in range(d + 2):
            pt = {v: Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for v in variables}
            value, t = extract_homogeneous(o, k, pt, subset, d)
            compared += 1
            if value != extract_homogeneous_symbolic(p, k, subset).evaluate(pt):
                mismatches += 1
            if t.call_count != d + 1:
                bad_calls += 1
    x = aux("x")
    value, t = extract_homogeneous(Oracle.from_polynomial(SparsePolynomial.parse("1 + 3*x + x^2")), 4, {x: 5})
    above_ok = value == 0 and t.call_count == 3
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and bad_calls == 0 and above_ok and elapsed < 10
    acceptance_line(2, "homogeneous-component extraction", ok,
                    f"{compared} comparisons, {mismatches} mismatches, {bad_calls} bad call counts, {elapsed:.2f}s")
    assert ok


def test_criterion_3_neighbor_reduction(acceptance_line):
    t0 = time.perf_counter()
    failures = []
    for name, make in harness.GRAPH_ZOO.items():
        H = make()
        for n in (2, 3) + ((4,) if name == "K3" else ()):
            step = chain.neighbor_step(H, n)
            expected = families.hom_poly(neighborhood_union(H), n)
            if not step.passed or step.constructed != expected:
                failures.append(f"{name} n={n}")
        seq = chain.iterate_neighbor(H).max_degrees
        if not all(a > b for a, b in zip(seq, seq[1:])):
            failures.append(f"{name} max degrees {seq}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.2f}s")
    ok = not failures
    acceptance_line(3, "neighbourhood reduction over the graph zoo", ok, "; ".join(failures) or f"{elapsed:.2f}s")
    assert ok, failures


def test_criterion_4_hereditary(acceptance_line):
    problems = []
    edge = make_family("edge")
    for n in (2, 3, 4):
        fmap = monomial_set(families.hom_poly(edge, n))
        if hereditary_closure(families.F_poly(n)) != fmap:
            problems.append(f"closure(F_{n})")
        if hereditary_closure(families.G_poly(n)) != fmap:
            problems.append(f"closure(G_{n})")
    witnesses = {}
    for n in (3, 4):
        if not is_pure(families.G_poly(n)):
            problems.append(f"G_{n} not pure")
        pair = comparable_pair(families.F_poly(n))
        if pair is None or not pair[0] < pair[1]:
            problems.append(f"F_{n} has no comparable pair")
        else:
            witnesses[n] = [sorted(map(str, s)) for s in pair]
    ok = not problems
    acceptance_line(4, "hereditary closures and purity", ok, "; ".join(problems) or f"F witnesses {witnesses}")
    assert ok, problems


def test_criterion_5_chain_identities(acceptance_line):
    t0 = time.perf_counter()
    cal = harness.calibrate(use_cache=False)
    conv = chain.Conventions.from_json(cal["chosen"])
    failed = []
    for name in chain.STEP_NAMES[1:]:
        for n in (2, 3):
            step = chain.run_step(name, n, conv, seed=1)
            if not step.passed:
                failed.append(f"{name} n={n}")
    unique = len(cal["satisfying"]) == 1
    elapsed = time.perf_counter() - t0
    ok = not failed and unique and elapsed < 120
    detail = (f"failing: {', '.join(failed) or 'none'}; {len(cal['satisfying'])} satisfying convention "
              f"combinations of {cal['combinations_tried']}; {elapsed:.2f}s")
    acceptance_line(5, "chain identities under one calibrated convention set", ok, detail)
    assert not failed, detail
    assert unique, detail
    assert elapsed < 120


def test_criterion_6_counting(acceptance_line):
    edge = make_family("edge")
    got = {}
    for n, expected in ((2, 2), (3, 7), (4, 41)):
        by_poly = families.hom_poly(edge, n).evaluate({v: 1 for v in families.edge_variables(n)})
        direct = sum(1 for G in enumerate_graphs(n) if find_homomorphism(G, edge) is not None)
        got[n] = (int(by_poly), direct)
    ok = got == {2: (2, 2), 3: (7, 7), 4: (41, 41)}
    acceptance_line(6, "bipartite counts 2, 7, 41 by two paths", ok, f"{got}")
    assert ok


def _verify(tmp_path, tag):
    out = tmp_path / f"report_{tag}.json"
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "homopoly", "verify", "--all", "--max-n", "3", "--seed", "42",
                           "--format", "json", "--out", str(out)], env=env, capture_output=True, text=True)
    return proc.returncode, json.loads(out.read_text())


def test_criterion_7_determinism(acceptance_line, tmp_path):
    code1, r1 = _verify(tmp_path, "a")
    code2, r2 = _verify(tmp_path, "b")
    same = harness.strip_timing(r1) == harness.strip_timing(r2)
    ok = same and code1 == 0 and code2 == 0
    acceptance_line(7, "verify --all twice: identical reports and exit 0", ok,
                    f"identical={same}, exit codes {code1}, {code2}, failed checks {r1['summary']['failed_checks']}")
    assert same
    assert code1 == 0 and code2 == 0, r1["summary"]["failed_checks"]
