"""Acceptance criteria, one PASS/FAIL line each.

The corpus is every connected multigraph on at most six vertices with edge
multiplicity at most three (up to isomorphism), paired with k = 0..6.
"""

import gc
import time

import numpy as np
import pytest

from fvskernel.audit import (
    SEEDS,
    EndToEndAudit,
    audit_corpus_end_to_end,
    audit_loop_rule,
    audit_planted_end_to_end,
    audit_rules,
    planted_cases,
    roundtrip_ok,
    seeded_instance,
)
from fvskernel.engine import MODES, kernelize
from fvskernel.generators import gen_grid, gen_planted_planar, gen_tight, grid_for_size
from fvskernel.multigraph import Instance
from fvskernel.oracle import min_fvs
from fvskernel.rules import reject_bound

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def emit(criterion: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nCRITERION {criterion} {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


@pytest.fixture(scope="module")
def corpus_audit() -> EndToEndAudit:
    return audit_corpus_end_to_end()


@pytest.fixture(scope="module")
def planted_audit() -> EndToEndAudit:
    return audit_planted_end_to_end(planted_cases(1000, max_vertices=18, seed=0))


def test_criterion_1_rule_soundness(report):
    audits = audit_rules(max_n=6, max_mult=3, ks=range(7))
    loop = audit_loop_rule()
    failures = sum(len(a.failures) for a in audits.values()) + len(loop.failures)
    fired = {r.name: a.fired for r, a in audits.items() if a.fired}
    report(1, failures == 0, f"fired={fired} loop_augmented={loop.fired} failures={failures}")
    assert failures == 0, {r.name: a.failures[:3] for r, a in audits.items() if a.failures}


def test_criterion_2_oracle_equivalence(report, corpus_audit, planted_audit):
    bad = corpus_audit.oracle_mismatches + planted_audit.oracle_mismatches
    report(
        2,
        not bad,
        f"corpus pairs={corpus_audit.pairs} planted pairs={planted_audit.pairs} "
        f"open={corpus_audit.open_kernels + planted_audit.open_kernels} mismatches={len(bad)}",
    )
    assert not bad, bad[:5]


def test_criterion_3_kernel_bound(report):
    rng = np.random.default_rng(0)
    cases = [(int(rng.integers(3, 41)), float(rng.uniform(1.0, 12.0)), seed) for seed in range(400)]
    cases += [(k, f, s) for k, f, s in planted_cases(1000) if k >= 3]
    insts = [gen_planted_planar(k, f, s) for k, f, s in cases]
    insts += [gen_tight(m) for m in (4, 5, 13, 26, 52)]
    worst, bad = {5: 0.0, 6: 0.0}, []
    for inst in insts:
        for ell in (5, 6):
            out = kernelize(inst, ell=ell)
            bound = reject_bound(ell, inst.k)
            n = out.instance.graph.num_vertices()
            if out.is_no or n > bound:
                bad.append((ell, inst.k, "NO" if out.is_no else n))
            else:
                worst[ell] = max(worst[ell], n / bound)
    report(3, not bad, f"instances={len(insts)} worst n/bound: l5={worst[5]:.3f} l6={worst[6]:.3f} violations={len(bad)}")
    assert not bad, bad[:5]


def test_criterion_4_tight_family(report):
    fixed = {}
    for m in (13, 26, 52):
        inst = gen_tight(m)
        fixed[m] = all(
            (o := kernelize(inst, mode=mode)).status == "kernel" and len(o.trace) == 0 and o.instance == inst
            for mode in MODES
        )
    ratio = gen_tight(52).graph.num_vertices() / 52
    small = min_fvs(gen_tight(4).graph, max_n=24).size
    ok = all(fixed.values()) and ratio >= 12.0 and small == 4
    report(4, ok, f"fixed points={fixed} |V|/m at 52={ratio:.3f} min FVS at m=4: {small}")
    assert ok


def debug_inputs() -> list[Instance]:
    """60 configuration-seeded graphs and 40 planted instances."""
    rng = np.random.default_rng(3)
    out = []
    names = sorted(SEEDS)
    while len(out) < 60:
        g = seeded_instance(names[len(out) % len(names)], rng)
        if g is not None:
            out.append(Instance(g, int(rng.integers(0, 6))))
    out += [gen_planted_planar(2 + i % 5, 3.0, i) for i in range(40)]
    return out


def test_criterion_5_driver_parity(report, corpus_audit, planted_audit):
    parity = corpus_audit.parity_mismatches + planted_audit.parity_mismatches
    inputs = debug_inputs()
    violations = []
    for inst in inputs:
        try:
            kernelize(inst, mode="incremental", debug=True)
        except AssertionError as e:
            violations.append(str(e))
    runs = len(inputs)
    ok = not parity and not violations
    report(5, ok, f"parity mismatches={len(parity)} debug runs={runs} invariant violations={len(violations)}")
    assert ok, (parity[:3], violations[:3])


def _timed(n: int, repeat: int = 3) -> float:
    inst = grid_for_size(n)
    best = float("inf")
    for _ in range(repeat):
        gc.collect()
        gc.disable()
        try:
            t0 = time.perf_counter()
            kernelize(inst, mode="incremental")
            best = min(best, time.perf_counter() - t0)
        finally:
            gc.enable()
    return best


def test_criterion_6_scaling(report):
    n = 50_000
    small, large = _timed(n), _timed(4 * n)
    ratio = large / small
    report(6, ratio <= 6, f"grid n={n}: {small:.2f}s, 4n: {large:.2f}s, ratio={ratio:.2f}")
    assert ratio <= 6


def test_criterion_7_idempotence_round_trip(report, corpus_audit, planted_audit):
    idem = corpus_audit.idempotence_failures + planted_audit.idempotence_failures
    trips = corpus_audit.roundtrip_failures + planted_audit.roundtrip_failures
    extra = [gen_tight(m) for m in (4, 13, 52)] + [gen_grid(7, 9), grid_for_size(1000)]
    trips += [f"extra {i}" for i, inst in enumerate(extra) if not roundtrip_ok(inst)]
    ok = not idem and not trips
    report(7, ok, f"idempotence failures={len(idem)} round-trip failures={len(trips)}")
    assert ok, (idem[:3], trips[:3])
