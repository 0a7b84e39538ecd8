"""Normalize the shipped tilted-cone fixture and cut it with a few closure rounds."""
from pathlib import Path

from scgclosure.cli import affine_text
from scgclosure.fileformat import parse_problem, write_block
from scgclosure.ratpoly import Polyhedron, fmt, fmt_vec
from scgclosure.scg import bounded_closure
from scgclosure.sets import conv_generators
from scgclosure.transforms import apply_tau, normalize_pointed_form

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "tilted_cone.txt"


def main() -> None:
    _, S = parse_problem(FIXTURE)
    nf = normalize_pointed_form(S)
    print("tau:", affine_text(nf.tau))
    for label, T in (("before", S), ("after", nf.S)):
        V, R, _ = conv_generators(T)
        print(f"{label:7s} vertices {sorted(V)} rays {list(R)}")
    # a fractional slab through the normalized cone
    P = Polyhedron.from_rows([((1, 0), ">=", 0), ((1, 0), "<=", "5/2"), ((0, 1), ">=", "1/3"),
                              ((1, -2), "<=", "1/2")], 2)
    for K in (1, 2, 3):
        C = bounded_closure(P, nf.S, K).polyhedron
        print(f"K={K}:")
        print("\n".join("  " + l for l in write_block(C)))
        back = apply_tau(nf.tau.inverse(), C)
        print("  in original coordinates:", "; ".join(f"{fmt_vec(a)} x {r} {fmt(b)}" for a, r, b in back.rows()))


if __name__ == "__main__":
    main()
