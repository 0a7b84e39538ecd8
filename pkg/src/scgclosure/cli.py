"""Command-line front end: ``scgclosure <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import ratpoly
from .dominance import COVERING, PACKING, PointedContext, reduce_to_bounded
from .errors import BoxTooLarge, DimensionCap, EmptySet, ParseError, SCGError
from .fileformat import parse_problem, write_block, write_problem, write_set
from .mip import direct_mixed_closure, mixed_closure_round
from .ratpoly import GE, LE, Polyhedron, UnimodularMap, as_fraction, fmt, fmt_vec, is_integral
from .scg import EMPTY_SIDE, bounded_closure, certify, scg_cut
from .sets import SSpec, conv_generators
from .suites import ALIASES, SUITES, run_suite
from .transforms import apply_tau, check_normal_form, lineality_split, normalize_pointed_form

EXIT_OK, EXIT_PARSE, EXIT_EMPTY, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4, 5


class _Out:
    """Collects text lines and a JSON payload; prints one of them at the end."""

    def __init__(self, fmt_name: str):
        self.json = fmt_name == "json"
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, s: str = "") -> None:
        self.lines.append(s)

    def put(self, key: str, value) -> None:
        self.data[key] = value

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.json:
            stream.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        else:
            stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _j(x):
    """JSON-friendly exact value."""
    if x is EMPTY_SIDE:
        return "empty_side"
    if x is None:
        return None
    if isinstance(x, (list, tuple)):
        return [_j(v) for v in x]
    return fmt(x)


def _parse_vec(text: str, what: str) -> list[Fraction]:
    try:
        return [as_fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {what} {text!r}: {exc}", 0, 0) from exc


def affine_text(tau: UnimodularMap) -> str:
    names = [f"x{i + 1}" for i in range(tau.n)]
    comps = []
    for row, c in zip(tau.U, tau.v):
        terms = []
        for coef, name in zip(row, names):
            if coef == 0:
                continue
            mag = "" if abs(coef) == 1 else f"{abs(coef)}*"
            sign = "-" if coef < 0 else "+"
            terms.append((sign, mag + name))
        if c:
            terms.append(("-" if c < 0 else "+", str(abs(c))))
        if not terms:
            comps.append("0")
            continue
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            s += f" {sign} {t}"
        comps.append(s)
    return f"({', '.join(names)}) -> ({', '.join(comps)})"


def _tau_out(out: _Out, tau: UnimodularMap) -> None:
    out.line(f"tau: {affine_text(tau)}")
    out.line("U: " + " ; ".join(" ".join(str(x) for x in r) for r in tau.U))
    out.line("v: " + " ".join(str(x) for x in tau.v))
    out.put("tau", {"U": [list(r) for r in tau.U], "v": list(tau.v), "text": affine_text(tau)})


def _gen_out(out: _Out, S: SSpec, key: str) -> None:
    V, R, L = conv_generators(S)
    out.line(f"{key} vertices: " + " ".join(fmt_vec(v) for v in V))
    out.line(f"{key} rays: " + " ".join(fmt_vec(r) for r in R))
    if L:
        out.line(f"{key} lineality: " + " ".join(fmt_vec(l) for l in L))
    out.put(key, {"vertices": _j(V), "rays": _j(R), "lineality": _j(L)})


# ---------------------------------------------------------------------------
# commands


def cmd_strengthen(args, out: _Out) -> int:
    P, S = parse_problem(args.file, args.max_enum)
    alpha = _parse_vec(args.alpha, "alpha")
    if len(alpha) != P.n:
        raise ParseError(f"alpha has {len(alpha)} entries, expected {P.n}", 0, 0)
    cut = scg_cut(P, S, alpha, check_hull=not args.no_hull_check)
    cert = certify(P, cut)
    if cut.is_empty_side and not any(cut.alpha):
        out.line("P is empty")
        out.line("cut: " + cut.describe())
        out.line("farkas: " + fmt_vec(cert.lam))
        out.put("empty", True)
        out.put("farkas", _j(cert.lam))
        return EXIT_EMPTY
    out.line(f"beta: {fmt(cut.beta)}")
    out.line(f"classical_floor: {fmt(cut.classical)}")
    bs = "empty_side" if cut.is_empty_side else fmt(cut.beta_strengthened)
    out.line(f"beta_strengthened: {bs}")
    out.line("witness: " + (fmt_vec(cut.witness) if cut.witness is not None else "none"))
    out.line("lambda: " + fmt_vec(cert.lam))
    out.line("cut: " + cut.describe())
    out.put("alpha", _j(cut.alpha))
    out.put("beta", _j(cut.beta))
    out.put("classical_floor", _j(cut.classical))
    out.put("beta_strengthened", _j(cut.beta_strengthened))
    out.put("witness", _j(cut.witness))
    out.put("lambda", _j(cert.lam))
    return EXIT_EMPTY if cut.is_empty_side else EXIT_OK


def cmd_closure(args, out: _Out) -> int:
    P, S = parse_problem(args.file, args.max_enum)
    if S.kind == "mixed":
        Q = P
        cuts_all = []
        for _ in range(args.rounds):
            nxt = mixed_closure_round(Q, S, args.K, threads=args.threads)
            cuts = [c for c in direct_mixed_closure(Q, S, args.K).cuts
                    if c.is_empty_side or c.beta_strengthened < c.beta]
            cuts_all.extend((Q, c) for c in cuts)
            stable = nxt == Q
            Q = nxt
            if stable or Q.is_empty:
                break
        result = Q
        certs = [certify(base, c) for base, c in cuts_all]
    else:
        res = bounded_closure(P, S, args.K, rounds=args.rounds, with_certificates=True, threads=args.threads)
        result, certs = res.polyhedron, list(res.certificates)
    out.line("closure")
    out.lines.extend(write_block(result))
    out.line(f"cuts: {len(certs)}")
    for c in certs:
        cut = c.cut
        bs = "empty_side" if cut.is_empty_side else fmt(cut.beta_strengthened)
        wit = fmt_vec(cut.witness) if cut.witness is not None else "none"
        out.line(f"cut {fmt_vec(cut.alpha)} beta={fmt(cut.beta)} -> {bs} witness={wit} lambda={fmt_vec(c.lam)}")
    out.put("closure", {"dim": result.n, "rows": [[_j(a), rel, _j(b)] for a, rel, b in result.rows()]})
    out.put("certificates", [{
        "alpha": _j(c.cut.alpha), "beta": _j(c.cut.beta),
        "beta_strengthened": _j(c.cut.beta_strengthened), "witness": _j(c.cut.witness),
        "lambda": _j(c.lam)} for c in certs])
    if result.is_empty:
        out.line("closure is empty")
        out.put("empty", True)
        return EXIT_EMPTY
    return EXIT_OK


def _context_from(P: Polyhedron, S: SSpec) -> PointedContext:
    rels = set(P.rels)
    if rels == {GE}:
        orientation = COVERING
    elif rels == {LE}:
        orientation = PACKING
    else:
        raise ParseError("dominate needs all rows '>=' (covering) or all '<=' (packing)", 0, 0)
    if not all(is_integral(a) for a in P.A) or not is_integral(P.b):
        raise ParseError("dominate needs integral A and b", 0, 0)
    V, rays, L = conv_generators(S)
    if L:
        raise ParseError("conv(S) must be pointed", 0, 0)
    n2 = ratpoly.rank(rays) if rays else 0
    n1 = P.n - n2
    if not check_normal_form(S, n1):
        raise ParseError("S is not in normal form; run 'transform normalize' first", 0, 0)
    return PointedContext(P.A, P.b, n1, tuple(tuple(int(x) for x in r) for r in rays), orientation)


def cmd_dominate(args, out: _Out) -> int:
    P, S = parse_problem(args.file, args.max_enum)
    ctx = _context_from(P, S)
    lam = _parse_vec(args.lam, "lambda")
    if len(lam) != ctx.m:
        raise ParseError(f"lambda has {len(lam)} entries, expected {ctx.m}", 0, 0)
    red = reduce_to_bounded(lam, ctx, S)
    c = red.constants
    out.line(f"orientation: {ctx.orientation}")
    out.line(f"constants: B={c.B} D={c.D} M_i={fmt_vec(c.M_list)} M={c.M} M*={c.Mstar}")
    out.lines.extend(red.trace())
    out.line("mu_hat: " + fmt_vec(red.mu_hat))
    if red.steps:
        out.line("final cut: " + red.steps[-1].cut_new.describe())
        out.line("initial cut: " + red.steps[0].cut_old.describe())
    out.line(f"steps: {len(red.steps)}")
    out.put("orientation", ctx.orientation)
    out.put("constants", {"B": c.B, "D": c.D, "M_list": list(c.M_list), "M": c.M, "Mstar": c.Mstar})
    out.put("trace", red.trace())
    out.put("mu_hat", _j(red.mu_hat))
    out.put("steps", len(red.steps))
    return EXIT_OK


def cmd_transform(args, out: _Out) -> int:
    P, S = parse_problem(args.file, args.max_enum)
    if args.mode == "normalize":
        nf = normalize_pointed_form(S)
        _tau_out(out, nf.tau)
        out.line(f"n1: {nf.n1} n2: {nf.n2}")
        _gen_out(out, S, "input")
        _gen_out(out, nf.S, "output")
        out.line(f"normal_form: {'yes' if check_normal_form(nf.S, nf.n1) else 'no'}")
        out.line("# transformed problem")
        out.lines.extend(write_problem(apply_tau(nf.tau, P), nf.S).rstrip("\n").split("\n"))
        out.put("n1", nf.n1)
        out.put("n2", nf.n2)
        out.put("problem", write_problem(apply_tau(nf.tau, P), nf.S))
        return EXIT_OK
    sp = lineality_split(P, S)
    _tau_out(out, sp.tau)
    out.line(f"n1: {sp.n1} n2: {sp.n2}")
    out.line("lineality: " + " ".join(fmt_vec(l) for l in sp.lineality))
    out.line("# S0 (cylinder relaxation)")
    out.lines.extend(write_set(sp.s0))
    out.line("# projected pointed part: Q_hat and T_C")
    out.line("polyhedron")
    out.lines.extend(write_block(sp.Q_hat))
    out.line("set")
    out.lines.extend(write_set(sp.T_C))
    out.put("n1", sp.n1)
    out.put("n2", sp.n2)
    out.put("lineality", _j(sp.lineality))
    out.put("s0", "\n".join(write_set(sp.s0)))
    out.put("projected", "\n".join(["polyhedron"] + write_block(sp.Q_hat) + ["set"] + write_set(sp.T_C)))
    return EXIT_OK


def cmd_verify(args, out: _Out) -> int:
    rep = run_suite(args.suite, args.trials, args.seed, args.threads)
    out.lines.extend(rep.lines)
    out.line(rep.summary())
    out.put("suite", rep.name)
    out.put("trials", rep.trials)
    out.put("passed", rep.passed)
    out.put("failed", rep.failed)
    out.put("lines", rep.lines)
    return EXIT_OK if rep.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)  # noqa: E731
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--max-dim", type=int, default=d(ratpoly.DEFAULT_MAX_DIM),
                   help="largest dimension for vertex enumeration")
    g.add_argument("--max-enum", type=int, default=d(10**6), help="largest lattice box to scan")
    g.add_argument("--threads", type=int, default=d(1), help="worker threads for cut generation")
    g.add_argument("--format", choices=["text", "json"], default=d("text"))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    ap = argparse.ArgumentParser(prog="scgclosure", description="Strengthened CG cuts and closures.",
                                 parents=[_global_flags(suppress=False)])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strengthen", parents=[common], help="one strengthened cut")
    p.add_argument("--alpha", required=True, help='comma separated, e.g. "2,3"')
    p.add_argument("--no-hull-check", action="store_true", help="skip the P ⊆ conv(S) check")
    p.add_argument("file")
    p.set_defaults(fn=cmd_strengthen)

    p = sub.add_parser("closure", parents=[common], help="bounded closure rounds")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("file")
    p.set_defaults(fn=cmd_closure)

    p = sub.add_parser("dominate", parents=[common], help="multiplier reduction trace")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("file")
    p.set_defaults(fn=cmd_dominate)

    p = sub.add_parser("transform", parents=[common], help="normal form or lineality split")
    p.add_argument("mode", choices=["normalize", "split"])
    p.add_argument("file")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="randomized property suites")
    p.add_argument("suite", choices=sorted(SUITES) + sorted(ALIASES), metavar="SUITE",
                   help="one of: " + ", ".join(SUITES))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ratpoly.set_max_dim(args.max_dim)
    out = _Out(args.format)
    try:
        code = args.fn(args, out)
    except ParseError as exc:
        code = EXIT_PARSE
        out.line(f"parse error: {exc}")
        out.put("error", str(exc))
    except FileNotFoundError as exc:
        code = EXIT_PARSE
        out.line(f"error: {exc}")
        out.put("error", str(exc))
    except EmptySet as exc:
        code = EXIT_EMPTY
        out.line(f"empty: {exc}")
        out.put("error", str(exc))
    except (DimensionCap, BoxTooLarge) as exc:
        code = EXIT_CAP
        out.line(f"cap exceeded: {exc}")
        out.put("error", str(exc))
    except SCGError as exc:
        code = EXIT_VERIFY
        out.line(f"{type(exc).__name__}: {exc}")
        out.put("error", f"{type(exc).__name__}: {exc}")
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
