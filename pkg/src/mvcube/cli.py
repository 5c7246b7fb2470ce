"""Command-line interface.

Every subcommand prints one JSON document to stdout.  Exit codes: 0 when
the computation succeeds and any checked property holds, 1 when a checked
property is violated (the output carries a witness), 2 on usage errors.
All exact values are serialized as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from .rationals import q, qstr
from . import pwl, terms, homeo, measures, dynamics, ellgroup


def _parse_state(text):
    """lebesgue | farey:D | mix:D | inline JSON."""
    if text.startswith("{"):
        return measures.state_from_json(json.loads(text))
    if text == "lebesgue":
        return measures.lebesgue()
    if text.startswith("farey:"):
        return measures.farey(int(text.split(":", 1)[1]))
    if text.startswith("mix:"):
        return measures.mix_state(int(text.split(":", 1)[1]))
    raise ValueError("unrecognized state spec %r" % text)


def _emit(args, payload):
    indent = args.json_indent if args.json_indent else None
    sys.stdout.write(json.dumps(payload, indent=indent) + "\n")


def _cmd_integrate(args):
    spec = _parse_state(args.state)
    t = terms.parse_term(args.term, args.n)
    f = terms.term_to_pwl(t, args.n)
    _emit(args, {"value": qstr(measures.state_eval(spec, f))})
    return 0


def _cmd_farey(args):
    pts = measures.farey_points(args.n, args.d)
    _emit(args, {
        "count": len(pts),
        "points": [[qstr(c) for c in p] for p in pts],
    })
    return 0


def _cmd_validate_map(args):
    with open(args.map) as fh:
        m = homeo.PwlMap.from_json(json.load(fh))
    report = homeo.validate(m)
    _emit(args, {
        "passed": report.passed,
        "det_sign": report.det_sign,
        "failures": [[kind, repr(detail)] for kind, detail in
                     report.failures[:10]],
    })
    return 0 if report.passed else 1


_GEN_KINDS = ("id", "flip", "perm", "Rprime", "R", "Sprime", "S")


def _make_map(kind, k, n=2):
    if kind == "id":
        return homeo.as_map(homeo.identity_map(n))
    if kind == "flip":
        return homeo.as_map(homeo.gen_symmetry(2, (1, 2), (1,)))
    if kind == "perm":
        return homeo.as_map(homeo.gen_symmetry(2, (2, 1)))
    if kind == "Rprime":
        return homeo.as_map(homeo.gen_R_prime(k))
    if kind == "R":
        return homeo.as_map(homeo.gen_R(k))
    if kind == "Sprime":
        return homeo.gen_S_prime(k)
    return homeo.as_map(homeo.gen_S(k))


def _cmd_gen_map(args):
    m = _make_map(args.kind, args.k, args.n)
    doc = m.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh)
        _emit(args, {"written": args.out, "pieces": len(m.matrices)})
    else:
        _emit(args, doc)
    return 0


def _cmd_invariance(args):
    word = homeo.random_word(args.n, args.seed, args.word_len)
    import random
    rng = random.Random(args.seed)
    fs = [terms.term_to_pwl(terms.random_term(args.n, 6, rng), args.n)
          for _ in range(args.terms)]
    report = measures.invariance_check(_parse_state(args.state), word, fs)
    _emit(args, {
        "all_equal": report.all_equal,
        "pieces": len(word.matrices),
        "values": [[qstr(a), qstr(b)] for a, b in report.values],
    })
    return 0 if report.all_equal else 1


def _cmd_coherence(args):
    f = terms.term_to_pwl(terms.parse_term(args.term, args.n), args.n)
    rep = measures.coherence_check(args.d, f, use_lebesgue=args.lebesgue)
    _emit(args, {
        "value_n": qstr(rep.value_n),
        "value_n_plus_1": qstr(rep.value_n_plus_1),
        "coherent": rep.coherent,
    })
    return 0 if rep.coherent else 1


def _cmd_conjugacy(args):
    kind = dynamics.SQUARE_M if args.kind == "R" else dynamics.RHOMBUS_N
    rep = dynamics.conjugation_check(kind, args.k, args.samples)
    doc = {"all_equal": rep.all_equal, "checked": rep.checked}
    if rep.first_failure is not None:
        p, lhs, rhs = rep.first_failure
        doc["witness"] = {
            "r": qstr(p.r), "s": qstr(p.s),
            "map_image": [qstr(c) for c in lhs],
            "chart_image": [qstr(c) for c in rhs],
        }
    _emit(args, doc)
    return 0 if rep.all_equal else 1


def _cmd_birkhoff(args):
    alpha = dynamics.GOLDEN if args.alpha == "golden" else float(args.alpha)
    dev = dynamics.birkhoff_equidistribution(args.k, alpha, args.iters,
                                             args.bins)
    _emit(args, {"sup_deviation": dev})
    return 0


def _cmd_orbit(args):
    orb = ellgroup.orbit(q(args.t0), args.iters)
    _emit(args, {"orbit": [qstr(t) for t in orb]})
    return 0


def _cmd_boxcheck(args):
    rep = dynamics.box_density_check(_parse_state(args.state),
                                     max_depth=args.depth)
    _emit(args, {
        "constant": rep.constant,
        "estimates": [
            [depth, [qstr(c) for c in corner], qstr(ratio)]
            for depth, corner, ratio in rep.estimates
        ],
    })
    return 0 if rep.constant else 1


def _cmd_report(args):
    """Figures plus delimited data for the headline experiments."""
    import os
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(args.out_dir, exist_ok=True)
    written = []

    orb = ellgroup.orbit(q(9, 10), 100)
    path = os.path.join(args.out_dir, "orbit.csv")
    with open(path, "w") as fh:
        fh.write("step,value\n")
        for i, t in enumerate(orb):
            fh.write("%d,%s\n" % (i, qstr(t)))
    written.append(path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(range(len(orb)), [float(t) for t in orb], lw=1)
    ax.set_xlabel("step")
    ax.set_ylabel("t")
    ax.set_title("interval-map orbit from 9/10")
    fig.tight_layout()
    path = os.path.join(args.out_dir, "orbit.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    import numpy
    alpha = dynamics.GOLDEN
    iters, bins = 10 ** 5, 16
    n = numpy.arange(iters)
    s = (2.0 * alpha * n) % 2.0
    idx = numpy.minimum((s / 2.0 * bins).astype(int), bins - 1)
    freq = numpy.bincount(idx, minlength=bins) / iters
    path = os.path.join(args.out_dir, "birkhoff.csv")
    with open(path, "w") as fh:
        fh.write("bin,frequency\n")
        for i, v in enumerate(freq):
            fh.write("%d,%.8f\n" % (i, v))
    written.append(path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(range(bins), freq, width=0.9)
    ax.axhline(1.0 / bins, color="k", lw=0.8, ls="--")
    ax.set_xlabel("arc bin")
    ax.set_ylabel("orbit frequency")
    ax.set_title("golden-rotation equidistribution")
    fig.tight_layout()
    path = os.path.join(args.out_dir, "birkhoff.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    rows = []
    for kk in range(3):
        rr = q(1, 200)
        vals = []
        step = q(1, 100)
        r = rr
        while r <= 1:
            vals.append((r, dynamics.twist_param(dynamics.SQUARE_M, kk, r)))
            r += step
        rows.append(vals)
    path = os.path.join(args.out_dir, "twist_params.csv")
    with open(path, "w") as fh:
        fh.write("k,r,t_k\n")
        for kk, vals in enumerate(rows):
            for r, t in vals:
                fh.write("%d,%s,%s\n" % (kk, qstr(r), qstr(t)))
    written.append(path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for kk, vals in enumerate(rows):
        ax.plot([float(r) for r, _ in vals], [float(t) for _, t in vals],
                label="k=%d" % kk)
    ax.set_xlabel("r")
    ax.set_ylabel("twist fraction")
    ax.legend()
    ax.set_title("square-ring twist profiles")
    fig.tight_layout()
    path = os.path.join(args.out_dir, "twist_params.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    _emit(args, {"written": written})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mvcube")
    ap.add_argument("--json-indent", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--state", default="lebesgue")
    p.set_defaults(fn=_cmd_integrate)

    p = sub.add_parser("farey")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(fn=_cmd_farey)

    p = sub.add_parser("validate-map")
    p.add_argument("--map", required=True)
    p.set_defaults(fn=_cmd_validate_map)

    p = sub.add_parser("gen-map")
    p.add_argument("--kind", choices=_GEN_KINDS, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_gen_map)

    p = sub.add_parser("invariance")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--word-len", type=int, default=4)
    p.add_argument("--state", default="lebesgue")
    p.set_defaults(fn=_cmd_invariance)

    p = sub.add_parser("coherence")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--lebesgue", action="store_true")
    p.set_defaults(fn=_cmd_coherence)

    p = sub.add_parser("conjugacy")
    p.add_argument("--kind", choices=("R", "S"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(fn=_cmd_conjugacy)

    p = sub.add_parser("birkhoff")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--alpha", default="golden")
    p.add_argument("--iters", type=int, default=10 ** 5)
    p.add_argument("--bins", type=int, default=16)
    p.set_defaults(fn=_cmd_birkhoff)

    p = sub.add_parser("orbit")
    p.add_argument("--t0", required=True)
    p.add_argument("--iters", type=int, default=100)
    p.set_defaults(fn=_cmd_orbit)

    p = sub.add_parser("boxcheck")
    p.add_argument("--state", default="lebesgue")
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(fn=_cmd_boxcheck)

    p = sub.add_parser("report")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_report)

    return ap


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except (ValueError, OSError, terms.ParseError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
