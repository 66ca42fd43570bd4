"""Acceptance criteria, one test each; every test prints a single
``ACCEPTANCE <n> ... PASS|FAIL`` line (run with ``-s`` or read the tee'd log)."""
import time

import pytest

from chowfilt.checks import run_check
from chowfilt.genus2 import genus2_example
from chowfilt.scenario import bundled_path, load_scenario


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {title}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def _timed_check(scenario, params, index=0):
    sc = load_scenario(bundled_path(scenario))
    t0 = time.perf_counter()
    rec = run_check(sc, params, index, sc.seed)
    return rec, time.perf_counter() - t0


GRID = {"d": [1, 2, 3], "r": [1, 2, 3, 4], "cases": 200}


def test_1_round_trip_factorial(report):
    rec, dt = _timed_check("roundtrip_random", {"check": "roundtrip_random", **GRID})
    ok = rec["status"] == "pass" and rec["cases"] == 2400 and dt <= 60
    report(1, "round trip Phi_r o Psi'_r = r! q, Phi_t o Psi'_r = 0",
           ok, f"({rec['cases']} data, {dt:.1f}s <= 60s) {rec.get('witness', '')}")


def test_2_path_equivalence(report):
    rec, dt = _timed_check("roundtrip_random", {"check": "path_equivalence_random", **GRID}, 1)
    ok = rec["status"] == "pass" and rec["cases"] == 2400 and dt <= 30
    report(2, "closed formula == product construction",
           ok, f"({rec['cases']} data, {dt:.1f}s <= 30s) {rec.get('witness', '')}")


def test_3_example_two_rows_one_curve(report):
    rec, _ = _timed_check("psi2_one_curve", {"check": "psi2_one_curve", "levels": [1, 2, 3, 6], "cases": 25})
    # also the fixed symbolic inputs bundled with the scenario
    sc = load_scenario(bundled_path("psi2_one_curve"))
    fixed = [run_check(sc, c, k, sc.seed)["status"] for k, c in enumerate(sc.checks)]
    ok = rec["status"] == "pass" and all(s == "pass" for s in fixed)
    report(3, "Psi'_2 on one curve = pure-A line + two mixed lines",
           ok, f"({rec['cases']} random data, {len(fixed)} fixed checks) {rec.get('witness', '')}")


def test_4_multilinearity_and_projection_formula(report):
    p = {"d": [1, 2], "r": [1, 2, 3], "cases": 17, "levels": [1, 2, 3, 4, 6]}
    ml, _ = _timed_check("identities", {"check": "multilinearity_random", **p})
    pf, _ = _timed_check("identities", {"check": "projection_formula_random", **p}, 1)
    towers = pf.get("proper_towers", [])
    ok = (ml["status"] == pf["status"] == "pass" and ml["cases"] >= 100 and pf["cases"] >= 100
          and any(l // e >= 2 for e, l in towers))
    report(4, "partial multilinearity and projection formula",
           ok, f"({ml['cases']} + {pf['cases']} data, towers {towers}) "
               f"{ml.get('witness', '')}{pf.get('witness', '')}")


def test_5_functor_laws(report):
    rec, _ = _timed_check("identities", {"check": "functor_laws", "cases": 10})
    ok = rec["status"] == "pass" and rec["symbol_sums_checked"]
    report(5, "Tr o res = [L:E] on A, Pic^0, cycles, symbols",
           ok, f"({len(rec.get('pairs', []))} level pairs) {rec.get('witness', '')}")


def test_6_subset_count_lemma(report):
    rec, dt = _timed_check("identities", {"check": "binomial_lemma", "r_max": 6})
    ok = rec["status"] == "pass" and dt <= 5
    report(6, "M(h, j) = C(r-|h|, j-|h|), alternating sums",
           ok, f"({rec.get('evaluated')} counts, {dt:.2f}s <= 5s) {rec.get('witness', '')}")


def test_7_albanese(report):
    rec, _ = _timed_check("identities", {"check": "albanese_random", "d": [1, 2], "cases": 25})
    ok = rec["status"] == "pass" and rec["cases"] >= 50
    report(7, "(deg, alb) == (Phi_0, Tr o Phi_1)", ok, f"({rec['cases']} cycles) {rec.get('witness', '')}")


def test_8_genus_two(report):
    t0 = time.perf_counter()
    rep = genus2_example()
    dt = time.perf_counter() - t0
    a, b, c, d = rep["steps"]
    ok = (rep["status"] == "pass" and all(s["status"] == "pass" for s in rep["steps"])
          and a["terms"] == 8
          and c["wr_after_rewrite"] == "2" + c["target"]
          and d["diagonal_phi2"] == "2{y1_J1, y1_A}@1"
          and all(w["factors"] >= 3 for w in b["witnesses"])
          and dt <= 10)
    report(8, "genus-2 example, four steps", ok, f"({dt:.2f}s <= 10s)")


def test_9_elliptic_vanishing(report):
    sc = load_scenario(bundled_path("elliptic_vanishing"))
    recs = [run_check(sc, c, k, sc.seed) for k, c in enumerate(sc.checks)]
    ok = (sc.variety.d == 1 and sc.ab.model_dimension == 1
          and all(r["status"] == "pass" and r["counts"]["unclassified"] == 0 for r in recs)
          and all(sc.checks[k].get("g") == 1 for k in range(len(recs))))
    counts = [r.get("counts") for r in recs]
    report(9, "d = 1, g = 1, r = 3: every Psi'_3 block classified", ok, f"{counts}")
