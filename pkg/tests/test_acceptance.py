"""Acceptance criteria, one test each, with the stated time limits."""
import subprocess
import sys
import time
from fractions import Fraction as F
from itertools import product
from pathlib import Path

from scgclosure.fileformat import parse_problem
from scgclosure.ratpoly import dot
from scgclosure.sets import conv_generators
from scgclosure.suites import SUITES, run_suite
from scgclosure.transforms import apply_tau, normalize_pointed_form

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def cli(*args):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "scgclosure", *map(str, args)],
                          capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout, time.perf_counter() - t0


def suite_verdict(report, label, name, limit, trials=None):
    rep = run_suite(name, trials)
    ok = rep.ok and rep.seconds < limit
    report(label, ok, f"{rep.summary()} in {rep.seconds:.2f}s (limit {limit}s)")
    return ok, rep


def test_tilted_cone_normalization(report):
    code, out, secs = cli("transform", "normalize", FIX / "tilted_cone.txt")
    _, S = parse_problem(FIX / "tilted_cone.txt")
    nf = normalize_pointed_form(S)
    V, R, _ = conv_generators(S)
    image = {nf.tau(v) for v in V}
    # the generators in (x1 + 6 - x2, x2) coordinates; the apex (-5, 0) goes to (1, 0)
    ref = lambda p: (p[0] - p[1] + 6, p[1])
    want_v = {ref(v) for v in V}
    out_v, out_r, _ = conv_generators(apply_tau(nf.tau, S))
    ok = (code == 0 and "tau: (x1, x2) -> (x1 - x2 + 6, x2)" in out and secs < 1.0
          and image == want_v and set(out_v) == want_v and nf.tau((-5, 0)) == (1, 0)
          and set(out_r) == {(0, 1)} and set(V) == {(-5, 0), (-5, 1), (-3, 1)} and R == ((1, 1),))
    report("1 tilted-cone normalization", ok, f"tau=(x1-x2+6, x2), vertices {sorted(image)}, {secs:.2f}s")
    assert ok


def test_strengthening_beats_cg(report):
    code, out, secs = cli("strengthen", "--alpha", "2,3", FIX / "strengthen.txt")
    # four-point scan of {0,1}^2 below the line 2x1 + 3x2 = 9/2
    scan = max(dot((2, 3), z) for z in product((0, 1), repeat=2) if dot((2, 3), z) <= F(9, 2))
    lines = dict(l.split(": ", 1) for l in out.splitlines() if ": " in l)
    ok = (code == 0 and lines.get("beta") == "9/2" and lines.get("classical_floor") == "4"
          and lines.get("beta_strengthened") == str(scan) == "3" and lines.get("witness") == "(0, 1)"
          and secs < 1.0)
    report("2 strengthened cut", ok, f"beta=9/2 classical=4 strengthened={lines.get('beta_strengthened')} "
           f"witness={lines.get('witness')} {secs:.2f}s")
    assert ok


def test_classical_consistency(report):
    assert suite_verdict(report, "3 classical consistency", "classical", 5)[0]


def test_dirichlet(report):
    assert suite_verdict(report, "4 simultaneous approximation", "dirichlet", 10)[0]


def test_commutation(report):
    assert suite_verdict(report, "5 unimodular commutation", "commutation", 120)[0]


def test_reduction(report):
    a, _ = suite_verdict(report, "6a covering reduction", "covering", 300)
    b, _ = suite_verdict(report, "6b packing reduction", "packing", 300)
    assert a and b


def test_partition(report):
    assert suite_verdict(report, "7 sign partition", "partition", 300)[0]


def test_projection_identity(report):
    assert suite_verdict(report, "8 mixed projection identity", "projection", 180)[0]


def test_monotone_and_sound(report):
    assert suite_verdict(report, "9 monotone and sound", "monotone", 300)[0]


def test_determinism(report):
    diffs = []
    for name in SUITES:
        a = run_suite(name, seed=5).text()
        b = run_suite(name, seed=5).text()
        c = run_suite(name, seed=5, threads=2).text()
        if not a == b == c:
            diffs.append(name)
    _, o1, _ = cli("closure", "--K", "2", FIX / "strengthen.txt")
    _, o2, _ = cli("--threads", "3", "closure", "--K", "2", FIX / "strengthen.txt")
    ok = not diffs and o1 == o2
    report("determinism", ok, f"{len(SUITES)} suites x 3 runs identical" if ok else f"differs: {diffs}")
    assert ok
