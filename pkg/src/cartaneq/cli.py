"""Command line front end.

Each subcommand runs one concrete problem: flatness checks for scalar
equations, pairs of second order equations and elliptic systems, the
invariant coframe of y'' = f with its structure equations and syzygies,
the transformation to y'' = 6y^2 + x and its inverse pullback, and the
third order prolongation swell demo.

Charts are fixed per subcommand, so expression flags parse against a
known variable list.  Output formats: text (default), json (stable key
order, byte identical for identical inputs), latex.  Exit codes: 0 when
the computation ran (verdicts live in the payload), 2 on parse errors,
3 on domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CartanError, NotEquivalent, NotInClass, ParseError
from .ode2 import (
    check_flat_ode2,
    ode2_chart,
    painleve_map,
    pullback_ode2,
    run_equivalence_ode2,
    syzygies_ode2,
)
from .ode3 import contact_prolongation_ode3
from .parser import parse_expression, render_latex, render_text
from .systems import (
    check_flat_ode_system,
    check_flat_pde_system,
    odesys_chart,
    pdesys_chart,
)


def _renderer(fmt):
    return render_latex if fmt == "latex" else render_text


def _parse_flag(parser, text, chart, flag):
    if text is None:
        parser.error(f"{flag} is required here")
    return parse_expression(text, chart)


def _cmd_check_flat(parser, args, fmt):
    if args.problem == "ode2":
        f = _parse_flag(parser, args.f, ode2_chart(), "--f")
        rep = check_flat_ode2(f)
    elif args.problem == "odesys":
        ch = odesys_chart()
        rep = check_flat_ode_system(
            _parse_flag(parser, args.F1, ch, "--F1"),
            _parse_flag(parser, args.F2, ch, "--F2"),
        )
    else:
        ch = pdesys_chart()
        rep = check_flat_pde_system(
            _parse_flag(parser, args.f11, ch, "--f11"),
            _parse_flag(parser, args.f12, ch, "--f12"),
            _parse_flag(parser, args.f22, ch, "--f22"),
        )
    render = _renderer(fmt)
    payload = {
        "problem": rep.problem,
        "flat": rep.flat,
        "residuals": [render_text(r) for r in rep.residuals],
    }
    lines = ["flat: " + ("yes" if rep.flat else "no")]
    lines += [f"r{i} = {render(r)}" for i, r in enumerate(rep.residuals, 1)]
    return payload, lines


def _cmd_invariants(parser, args, fmt):
    f = None if args.f is None else parse_expression(args.f, ode2_chart())
    rep = run_equivalence_ode2(f, max_prolong=args.max_prolong)
    render = _renderer(fmt)
    payload = {
        "problem": "ode2",
        "invariants": {
            f"I{m}": render_text(v)
            for m, v in zip((1, 2, 3), rep.invariants)
        },
    }
    if fmt == "latex":
        lines = [
            f"I_{{{m}}} = {render(v)}"
            for m, v in zip((1, 2, 3), rep.invariants)
        ]
    else:
        lines = [
            f"I{m} = {render(v)}" for m, v in zip((1, 2, 3), rep.invariants)
        ]
    return payload, lines


def _structure_latex(rep):
    lines = []
    for alpha in range(4):
        pieces = [
            (j, k, c)
            for (a, j, k), c in sorted(rep.structure.T.items())
            if a == alpha and not c.is_zero
        ]
        lhs = f"d\\theta^{{{alpha + 1}}}"
        if not pieces:
            lines.append(f"{lhs} = 0")
            continue
        body = " + ".join(
            f"\\left({render_latex(c)}\\right)"
            f"\\theta^{{{j + 1}}}\\wedge\\theta^{{{k + 1}}}"
            for j, k, c in pieces
        )
        lines.append(f"{lhs} = {body}")
    return lines


def _cmd_structure(parser, args, fmt):
    f = None if args.f is None else parse_expression(args.f, ode2_chart())
    rep = run_equivalence_ode2(f, max_prolong=args.max_prolong)
    payload = {
        "problem": "ode2",
        "structure": rep.structure_lines(render_text),
    }
    if fmt == "latex":
        lines = _structure_latex(rep)
    else:
        lines = rep.structure_lines(render_text)
    return payload, lines


def _cmd_syzygies(parser, args, fmt):
    f = None if args.f is None else parse_expression(args.f, ode2_chart())
    rep = syzygies_ode2(f)
    render = _renderer(fmt)
    payload = {
        "problem": "ode2",
        "syzygies": [render_text(r) for r in rep.relations],
    }
    lines = [f"{render(r)} = 0" for r in rep.relations]
    return payload, lines


def _cmd_painleve(parser, args, fmt):
    f = _parse_flag(parser, args.f, ode2_chart(), "--f")
    if args.max_prolong is not None:
        run_equivalence_ode2(None, max_prolong=args.max_prolong)
    render = _renderer(fmt)
    try:
        eta, C = painleve_map(f)
    except NotInClass as e:
        payload = {
            "problem": "ode2",
            "equivalent": False,
            "residuals": [e.value],
        }
        lines = ["equivalent: no", f"not in class: {e.invariant} = {e.value}"]
        return payload, lines
    except NotEquivalent as e:
        names = sorted(e.failures)
        payload = {
            "problem": "ode2",
            "equivalent": False,
            "residuals": [e.failures[n] for n in names],
        }
        lines = ["equivalent: no"]
        lines += [f"{n}: {e.failures[n]}" for n in names]
        return payload, lines
    payload = {
        "problem": "ode2",
        "equivalent": True,
        "eta": render_text(eta),
        "C": render_text(C),
    }
    lines = ["equivalent: yes", f"eta = {render(eta)}", f"C = {render(C)}"]
    return payload, lines


def _cmd_pullback(parser, args, fmt):
    ch = ode2_chart()
    eta = _parse_flag(parser, args.eta, ch, "--eta")
    C = _parse_flag(parser, args.C, ch, "--C")
    fbar = _parse_flag(parser, args.target, ch, "--target")
    f = pullback_ode2(eta, C, fbar)
    render = _renderer(fmt)
    payload = {"problem": "ode2", "f": render_text(f)}
    return payload, [f"f = {render(f)}"]


def _cmd_swell_demo(parser, args, fmt):
    res = contact_prolongation_ode3()
    m = res.monomials
    payload = {"problem": "ode3", "swell": {"monomials_rbar": m[2]}}
    lines = [
        f"pbar monomials: {m[0]}",
        f"qbar monomials: {m[1]}",
        f"rbar monomials: {m[2]}",
    ]
    return payload, lines


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartaneq",
        description="equivalence-method calculations for ODE and PDE classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, handler):
        p.add_argument(
            "--format", choices=("text", "json", "latex"), default="text"
        )
        p.set_defaults(handler=handler)

    p = sub.add_parser("check-flat", help="test equivalence to the flat model")
    p.add_argument("problem", choices=("ode2", "odesys", "pdesys"))
    p.add_argument("--f", help="right-hand side of y'' = f(x, y, p)")
    p.add_argument("--F1", help="right-hand side of x1'' (odesys)")
    p.add_argument("--F2", help="right-hand side of x2'' (odesys)")
    p.add_argument("--f11", help="u_11 = f11(x1, x2, u, u1, u2) (pdesys)")
    p.add_argument("--f12", help="u_12 = f12(...) (pdesys)")
    p.add_argument("--f22", help="u_22 = f22(...) (pdesys)")
    common(p, _cmd_check_flat)

    p = sub.add_parser(
        "invariants", help="fundamental invariants I1, I2, I3 of y'' = f"
    )
    p.add_argument("--f", help="right-hand side; omit for the symbolic class")
    p.add_argument(
        "--max-prolong", type=int, default=None,
        help="bound on prolongation steps (this class needs none)",
    )
    common(p, _cmd_invariants)

    p = sub.add_parser(
        "structure", help="structure equations of the invariant coframe"
    )
    p.add_argument("--f", help="right-hand side; omit for the symbolic class")
    p.add_argument("--max-prolong", type=int, default=None)
    common(p, _cmd_structure)

    p = sub.add_parser(
        "syzygies", help="relations among the invariant derivatives"
    )
    p.add_argument("--f", help="right-hand side; omit for the symbolic class")
    p.add_argument("--max-prolong", type=int, default=None)
    common(p, _cmd_syzygies)

    p = sub.add_parser(
        "painleve", help="map y'' = f to y'' = 6y^2 + x when possible"
    )
    p.add_argument("--f", help="right-hand side of y'' = f(x, y, p)")
    p.add_argument("--max-prolong", type=int, default=None)
    common(p, _cmd_painleve)

    p = sub.add_parser(
        "pullback", help="pull a target equation back along x + C, eta(x, y)"
    )
    p.add_argument("--eta", help="new y as a function of x, y")
    p.add_argument("--C", help="constant shift in x")
    p.add_argument("--target", help="right-hand side of the target equation")
    common(p, _cmd_pullback)

    p = sub.add_parser(
        "swell-demo",
        help="third order prolongation with opaque coefficients: term counts",
    )
    common(p, _cmd_swell_demo)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, lines = args.handler(parser, args, args.format)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except CartanError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
