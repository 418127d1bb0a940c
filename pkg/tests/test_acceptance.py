"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The lines are written through the capture barrier so they appear in any
pytest run; every tolerance and budget is pinned here.
"""

import subprocess
import sys
import time

from doctrinelab import catalog, constructions as cons
from doctrinelab import ioformat, logic, theorems

import conftest
from oracles import direct_image, forall_image, parse_arrow


def criterion(number, description, ok, seconds, limit=None):
    status = "PASS" if ok else "FAIL"
    bound = f" [{seconds:.1f}s < {limit}s]" if limit else f" [{seconds:.1f}s]"
    line = f"ACCEPTANCE {number}: {status} - {description}{bound}"
    print(line, flush=True)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_oracle_equivalence(ps20):
    """Adjoints along all projections equal the set-theoretic image oracles."""
    start = time.perf_counter()
    checked = mismatches = 0
    for row in ps20.base.first_level_rows:
        for proj in (row.proj1, row.proj2):
            _, cod_size, images = parse_arrow(proj)
            sigma = ps20.sigma(proj)
            pi = ps20.pi(proj)
            for e in ps20.fibers[row.obj].elements:
                mask = int(e[1:])
                checked += 1
                if sigma.table[e] != f"e{direct_image(images, mask)}":
                    mismatches += 1
                if pi.table[e] != f"e{forall_image(images, cod_size, mask)}":
                    mismatches += 1
    elapsed = time.perf_counter() - start
    criterion(1, f"least/greatest-solution adjoints vs set oracles on "
                 f"{checked} fiber elements, {mismatches} mismatches",
              mismatches == 0 and checked > 0 and elapsed < 10.0,
              elapsed, 10)


def test_criterion_2_derived_sigma_law(ps20):
    """The equality-predicate formula computes every left adjoint."""
    start = time.perf_counter()
    discrepancies = checked = 0
    for f in ps20.base.window_arrows:
        adj = ps20.sigma(f)
        for alpha in ps20.fibers[ps20.base.dom(f)].elements:
            checked += 1
            if cons.derived_sigma(ps20, f, alpha) != adj.table[alpha]:
                discrepancies += 1
    elapsed = time.perf_counter() - start
    criterion(2, f"derived sigma equals adjoint sigma on {checked} "
                 f"(arrow, element) pairs, {discrepancies} discrepancies",
              discrepancies == 0 and checked > 0, elapsed)


def test_criterion_3_implication_lemma_suite(ps20, ps11, sier, triv, sl3):
    """Wherever the implication lemma's hypotheses hold, the derived
    operation passes the axioms; on powerset instances it is Boolean."""
    start = time.perf_counter()
    violations = 0
    applicable = 0
    for d in (ps20, ps11, sier, triv, sl3):
        r = theorems.check_theorem("bingo", d)
        if r.hypotheses_hold:
            applicable += 1
            if not r.conclusion:
                violations += 1
    boolean_agrees = True
    for d in (ps20, ps11):
        tables = cons.derived_implication_tables(d)
        for obj in d.base.window:
            heyting = d.fibers[obj].ops.heyting_implication
            for key, value in tables[obj].items():
                if heyting[key] != value:
                    boolean_agrees = False
    elapsed = time.perf_counter() - start
    criterion(3, f"derived implication passes the axioms on {applicable} "
                 f"applicable instances and matches Boolean implication on PS",
              violations == 0 and applicable >= 3 and boolean_agrees, elapsed)


def test_criterion_4_biconditionals_by_enumeration():
    """No enumerated thin instance violates fullness<->implication or
    full co-comprehension<->classical; budget 10^5 candidates."""
    start = time.perf_counter()
    stats: dict = {}
    examined = violations = 0
    hyp_hits = {"bingo": 0, "bingo_converse": 0, "negation_iii": 0}
    for d in theorems.enumerate_doctrines(max_base=3, max_fiber=3,
                                          budget=100_000, stats=stats):
        examined += 1
        for tid in ("bingo", "bingo_converse", "negation_iii"):
            r = theorems.check_theorem(tid, d)
            if r.hypotheses_hold:
                hyp_hits[tid] += 1
                if r.conclusion.is_refuted:
                    violations += 1
    elapsed = time.perf_counter() - start
    nonvacuous = all(v > 0 for v in hyp_hits.values())
    criterion(4, f"{examined} enumerated doctrines "
                 f"({stats['candidates']} candidates), biconditional "
                 f"violations: {violations}, hypothesis hits: {hyp_hits}",
              violations == 0 and nonvacuous and elapsed < 300.0,
              elapsed, 300)


def test_criterion_5_open_set_reproduction(sier):
    """The open-set instance has full comprehension and co-comprehension but
    no natural negation, with a concrete counterexample map."""
    start = time.perf_counter()
    comp = logic.is_full_comprehension(sier)
    cocomp = logic.is_full_cocomprehension(sier)
    neg = logic.has_negation(sier)
    concrete = (neg.is_refuted
                and neg.counterexample["kind"] == "negation_not_natural"
                and neg.counterexample["arrow"] in sier.base.arrows)
    elapsed = time.perf_counter() - start
    criterion(5, "SIER: full comprehension and co-comprehension hold, "
                 f"negation refuted at map {neg.counterexample.get('arrow')}",
              bool(comp) and bool(cocomp) and concrete, elapsed)


def test_criterion_6_choice_suite(ps20):
    """Witnesses for every relation, the domination inequality, and the
    choice-implies-quantification propositions."""
    start = time.perf_counter()
    ac, eps = logic.ac_check(ps20)
    initials = set(ps20.base.stable_initials)
    complete = True
    for a in ps20.base.window:
        if a in initials:
            continue
        for gamma in ps20.base.window:
            row = ps20.base.products[(gamma, a)]
            for psi in ps20.fibers[row.obj].elements:
                if eps.get(gamma, a, psi) is None:
                    complete = False
    bc = theorems.check_theorem("bc_lemma", ps20)
    n0 = theorems.check_theorem("nonne0", ps20)
    n1 = theorems.check_theorem("nonne1", ps20)
    ok = (bool(ac) and complete
          and bc.hypotheses_hold and bool(bc.conclusion)
          and n0.hypotheses_hold and bool(n0.conclusion)
          and n1.hypotheses_hold and bool(n1.conclusion))
    elapsed = time.perf_counter() - start
    criterion(6, f"choice witnesses for all {len(eps.entries)} relations, "
                 "domination and quantification propositions verified",
              ok and elapsed < 30.0, elapsed, 30)


def test_criterion_7_heaco_pipeline(ps11, triv):
    """Both heaco instances dualize to triposes recognized by both checkers,
    and the five structure propositions hold."""
    start = time.perf_counter()
    ok = True
    for d in (ps11, triv):
        if not cons.is_heaco(d):
            ok = False
        dual, verdict = cons.heaco_to_tripos(d)
        if not (verdict and logic.is_tripos(dual)
                and logic.is_tripos_via_characterization(dual)):
            ok = False
        for tid in ("checazzo2", "baggins", "frodo", "finite_joins",
                    "caratterino"):
            r = theorems.check_theorem(tid, d)
            if not (r.hypotheses_hold and bool(r.conclusion)):
                ok = False
    elapsed = time.perf_counter() - start
    criterion(7, "heaco checklist, dual tripos agreement and the five "
                 "structure propositions on PS(1,1) and TRIV",
              ok and elapsed < 120.0, elapsed, 120)


def test_criterion_8_registry_global_invariant(ps20, ps11, sier, triv, sl3):
    """No theorem report anywhere has satisfied hypotheses and a refuted
    conclusion: catalog instances plus 10^4 enumerated doctrines."""
    start = time.perf_counter()
    violations = []
    for d in (ps20, ps11, sier, triv, sl3):
        for r in theorems.check_all(d):
            if r.is_violation:
                violations.append((d.name, r.theorem))
    # chains up to 4 objects: the <=3-chain space holds 9986 instances,
    # one short of the demanded ten thousand
    enumerated = 0
    for d in theorems.enumerate_doctrines(max_base=4, max_fiber=3,
                                          budget=500_000, max_emit=10_000):
        enumerated += 1
        for r in theorems.check_all(d):
            if r.is_violation:
                violations.append((d.name, r.theorem))
    elapsed = time.perf_counter() - start
    criterion(8, f"catalog plus {enumerated} enumerated instances, "
                 f"{len(violations)} hypothesis-satisfied refutations "
                 f"{violations[:3]}",
              not violations and enumerated == 10_000, elapsed)


def test_criterion_9_roundtrip_and_determinism(tmp_path):
    """serialize-parse fixpoint on the catalog; classify runs byte-identical."""
    start = time.perf_counter()
    fixpoint = True
    for cid in catalog.catalog_ids():
        d = catalog.instance(cid)
        text = ioformat.serialize(d)
        if ioformat.serialize(ioformat.parse(text)) != text:
            fixpoint = False
    outs = []
    for i in range(2):
        out = tmp_path / f"c{i}.json"
        subprocess.run([sys.executable, "-m", "doctrinelab.cli", "classify",
                        "PS(1,1)", "--json", str(out)],
                       capture_output=True, check=True)
        outs.append(out.read_bytes())
    elapsed = time.perf_counter() - start
    criterion(9, "serialize-parse fixpoint on all catalog instances and "
                 "byte-identical consecutive classify reports",
              fixpoint and outs[0] == outs[1], elapsed)
