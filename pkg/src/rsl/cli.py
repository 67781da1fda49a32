"""Command-line front end: ``rsl <subcommand> [options]``.

Machine-readable results (JSON or CSV) go to ``--out`` when given, otherwise
to stdout.  With ``--out`` a run manifest is written next to it as
``<out>.manifest.json``.

Exit codes: 0 success, 1 usage error, 2 precondition violation, 3 budget
exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import BudgetExceeded, PreconditionError, RslError

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int | None
    versions: dict = field(default_factory=dict)
    checksum: str = ""
    threads: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _versions() -> dict:
    return {"rsl": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def thread_cap() -> int:
    """RSL_THREADS as a positive int (default 1); computations here are single threaded."""
    raw = os.environ.get("RSL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise PreconditionError(f"RSL_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise PreconditionError("RSL_THREADS must be >= 1")
    return n


def _json(obj) -> str:
    def default(o):
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        raise TypeError(f"not serialisable: {type(o).__name__}")
    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"


def _floats(text: str, n: int | None = None) -> list:
    vals = [Fraction(v) if "/" in v else float(v) for v in text.split(",")]
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _exact(text: str, n: int) -> list:
    """Comma-separated decimals or fractions as exact Fractions."""
    vals = [Fraction(v.strip()) for v in text.split(",")]
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _read_ints(path: str) -> list[int]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise PreconditionError(f"expected integers, one per line: {exc}") from exc


# --------------------------------------------------------------------------
# subcommands; each returns (human text or None, machine text)

def cmd_colour(a):
    from .colouring import Colouring, count_mono_mod_p, dyadic_colouring, find_mono_solutions
    if a.modp:
        cols = [int(c) for c in a.modp_colours.split(",")] if a.modp_colours else [0] * a.modp
        if len(cols) != a.modp:
            raise PreconditionError("need one colour per residue")
        cnt = count_mono_mod_p(np.array(cols))
        return f"{cnt} monochromatic solutions mod {a.modp}", _json({"p": a.modp, "count": cnt})
    if a.input:
        c = Colouring.from_text(Path(a.input).read_text())
    elif a.dyadic:
        if a.n is None:
            raise UsageError("--n is required with --dyadic")
        c = dyadic_colouring(a.n)
    else:
        raise UsageError("give --dyadic, --input or --modp")
    if not a.verify:
        return None, c.to_text()
    sols = find_mono_solutions(c, include_trivial=True)
    nontrivial = [s for s in sols if s.triple != (2, 2, 2)]
    trivial = len(sols) - len(nontrivial)
    report = {"lo": c.lo, "hi": c.hi, "k": c.k, "nontrivial": len(nontrivial), "trivial": trivial,
              "first": [list(s.triple) for s in nontrivial[:10]]}
    return f"{len(nontrivial)} nontrivial monochromatic solutions", _json(report)


def cmd_search(a):
    from .colouring import search_2colouring, threshold_2colouring
    if a.threshold:
        t = threshold_2colouring(a.budget)
        return f"threshold {t}", _json({"threshold": t})
    if a.n is None:
        raise UsageError("give --n or --threshold")
    c = search_2colouring(a.n, a.budget)
    if c is None:
        return f"no valid 2-colouring of [1, {a.n}]", _json({"n": a.n, "found": False})
    return f"valid 2-colouring of [1, {a.n}] found", c.to_text()


def cmd_twosq(a):
    from .numtheory import Progression
    from .twosquares import approx_balanced, approx_constrained, approx_simple
    ns = _read_ints(a.batch) if a.batch else ([a.n] if a.n is not None else [])
    if not ns:
        raise UsageError("give --n or --batch")
    if a.constrained:
        if a.scale is None or a.box is None or a.gammas is None:
            raise UsageError("--constrained needs --scale, --box and --gammas")
        a1, b1, a2, b2 = _exact(a.box, 4)
        P1 = Progression(a1, b1, a.scale, a.q)
        P2 = Progression(a2, b2, a.scale, a.q)
        g = _floats(a.gammas, 2)
        fn = lambda n: approx_constrained(n, P1, P2, g)  # noqa: E731
    else:
        fn = approx_balanced if a.balanced else approx_simple
    rows = ["n,n1,n2,error,k"] if a.header else []
    for n in ns:
        rows.append(",".join(map(str, fn(n).as_row())))
    text = "\n".join(rows) + "\n"
    return None, text


def cmd_weyl(a):
    from .expsums import PolynomialPhase, weyl_check, weyl_sum
    from .numtheory import TorusVector
    if a.theta is not None:
        if a.r is None:
            raise UsageError("--theta needs --r")
        theta = TorusVector(_floats(a.theta))
        r = [int(v) for v in a.r.split(",")]
        rep = weyl_check(theta, r, a.k, (a.lo, a.hi))
        out = {"length": rep.length, "delta": rep.delta, "q": rep.q, "distance": rep.distance}
        return None, _json(out)
    if a.coeffs is None:
        raise UsageError("give --coeffs or --theta")
    s = weyl_sum(PolynomialPhase(tuple(_floats(a.coeffs))), (a.lo, a.hi))
    return None, _json({"real": s.real, "imag": s.imag, "abs": abs(s), "length": a.hi - a.lo + 1})


def cmd_moment(a):
    from .expsums import moment_report, squares_upto
    if a.squares is not None:
        S = squares_upto(a.squares)
    elif a.set:
        S = _read_ints(a.set)
    else:
        raise UsageError("give --set or --squares")
    rep = moment_report(S, tuple(a.p))
    return None, _json(rep)


def cmd_losqr(a):
    from .sumsetqr import los_table_csv, verify_los
    rows = verify_los(a.qmax, q_limit=max(36, a.qmax), budget=a.budget)
    ok = all(r.ok for r in rows)
    return f"{'all ok' if ok else 'VIOLATION'} for q <= {a.qmax}", los_table_csv(rows)


def cmd_bohr(a):
    from . import bohr
    spec = bohr.parse_spec(Path(a.config).read_text())
    out = {"spec": spec.to_dict()}
    if a.report == "elements":
        Y = bohr.bohr_elements(spec, a.budget)
        out.update(size=int(Y.size), expected=spec.expected_size(), elements=Y[: a.limit].tolist())
    elif a.report == "zsets":
        out["zsets"] = [bohr.z_size_report(spec, r).to_dict() for r in bohr.square_roots_mod(spec.b, spec.q)]
    elif a.report == "coverage":
        out["coverage"] = bohr.prop51_check(spec, corrected=not a.centre_2x, budget=a.budget).to_dict()
    elif a.report == "representations":
        out["representations"] = bohr.representation_report(spec, c=Fraction(a.c), corrected=not a.centre_2x,
                                             budget=a.budget).to_dict()
    return None, _json(out)


def cmd_cutoff(a):
    from . import smoothcut as sc
    if a.kind in ("smooth", "trapezoid", "sharp"):
        res = {}
        for N in a.N:
            psi = sc.indicator_cutoff(N, 2 * N) if a.kind == "sharp" else sc.interval_majorant(N, a.kind)
            res[str(N)] = sc.l1_fourier_norm(psi, a.grid)
        return None, _json({"kind": a.kind, "l1_fourier_norm": res})
    if a.kind in ("majorant", "minorant"):
        make = sc.torus_majorant if a.kind == "majorant" else sc.torus_minorant
        psi = make(a.eps, a.d)
        table, rep = sc.torus_fourier_decay(psi, a.radius)
        summary = {"kind": a.kind, "eps": a.eps, "d": a.d, "integral": psi.integral(),
                   "normalised_integral": psi.integral() / (2 * a.eps) ** a.d, **asdict(rep)}
        if a.table:
            return _json(summary), table.to_csv()
        return None, _json(summary)
    if a.kind == "chi":
        from .numtheory import TorusVector, certify_irrational
        theta = TorusVector(_floats(a.theta)) if a.theta else TorusVector()
        z = TorusVector(_floats(a.z)) if a.z else TorusVector([0.0] * theta.dim)
        cert = certify_irrational(theta, a.A, a.N[0]) if theta.dim else None
        chi = sc.chi_cutoff(a.N[0], a.q, a.u, a.x, a.eps, a.eps_prime, theta, z, cert)
        mass = chi.mass()
        out = {"sandwich": asdict(chi.report), "mass": mass, "bound": sc.chi_mass_bound(chi),
               "mass_ok": mass >= sc.chi_mass_bound(chi)}
        return None, _json(out)
    raise UsageError(f"unknown cutoff kind {a.kind!r}")


def cmd_bootstrap(a):
    from . import bootstrap as bs
    from .colouring import Colouring, search_2colouring
    from .numtheory import Progression
    if a.lemma == "subprog":
        Q = Progression(a.lo, a.hi, 1, a.q)
        elems = Q.elements()
        rng = np.random.default_rng(a.seed)
        drop = rng.choice(elems, size=min(a.drop, elems.size), replace=False) if a.drop else []
        S = np.setdiff1d(elems, drop)
        P = bs.sumset_subprogression(Q, S)
        return None, _json({"Q": [int(elems[0]), int(elems[-1]), a.q], "dropped": sorted(int(v) for v in drop),
                            "subprogression": [P.first, P.last, P.modulus], "length": len(P)})
    if a.lemma == "squares":
        if a.sweep:
            rows = bs.squares_sweep(a.sweep, a.q, _exact(a.p1, 2), _exact(a.p2, 2), _floats(a.gammas, 2))
            text = "N,walk_failures,genuine_failures\n" + "".join(f"{n},{w},{g}\n" for n, w, g in rows)
            return None, text
        P1 = Progression(*_exact(a.p1, 2), a.N, a.q)
        P2 = Progression(*_exact(a.p2, 2), a.N, a.q)
        rep = bs.lemma64_verify(P1, P2, _floats(a.gammas, 2))
        return f"{'ok' if rep.ok else 'FAILED'}: {len(rep.failures)} walk failures of {rep.checked}", _json(rep.to_dict())
    if a.lemma == "chain":
        if a.input:
            c = Colouring.from_text(Path(a.input).read_text())
        else:
            c = search_2colouring(a.n, a.budget)
            if c is None:
                raise PreconditionError(f"no valid 2-colouring of [1, {a.n}]")
        rep = bs.chain_check(c)
        out = {"colouring_id": rep.colouring_id, "n_max": rep.n_max, "ranges": rep.ranges,
               "flags": rep.flags, "counterexample": rep.counterexample}
        return None, _json(out)
    raise UsageError(f"unknown lemma {a.lemma!r}")


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the machine-readable result here (plus a manifest)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised choices")
    common.add_argument("--budget", type=int, default=10**7, help="work budget (nodes, elements or assignments)")

    p = _Parser(prog="rsl", description="Constructions and checks around x + y = z^2.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser, metavar="SUBCOMMAND")
    sub.required = True

    s = sub.add_parser("colour", parents=[common], help="dyadic 3-colouring and solution checks",
                       description="Build the dyadic 3-colouring of [1, n] (constant on each [2^i, 2^(i+1))) "
                                   "and count monochromatic solutions of x + y = z^2; or count solutions mod p.")
    s.add_argument("--dyadic", action="store_true")
    s.add_argument("--n", type=int)
    s.add_argument("--input", help="colouring text file to check")
    s.add_argument("--verify", action="store_true", help="count monochromatic solutions")
    s.add_argument("--modp", type=int, help="count monochromatic solutions in Z/pZ")
    s.add_argument("--modp-colours", help="comma-separated colours of 0..p-1 (default: constant)")
    s.set_defaults(fn=cmd_colour)

    s = sub.add_parser("search", parents=[common], help="2-colouring backtracking search",
                       description="Search for a 2-colouring of [1, n] without nontrivial monochromatic "
                                   "solutions, or find the least n where none exists.")
    s.add_argument("--n", type=int)
    s.add_argument("--threshold", action="store_true")
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("twosq", parents=[common], help="sums of two squares near n (CSV)",
                       description="Approximate n by n1^2 + n2^2: greedy (--simple, default), balanced walk "
                                   "(--balanced) or inside two progressions of modulus q (--constrained). "
                                   "Emits CSV rows n,n1,n2,error,k.")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--simple", action="store_true")
    g.add_argument("--balanced", action="store_true")
    g.add_argument("--constrained", action="store_true")
    s.add_argument("--n", type=int)
    s.add_argument("--batch", help="file of n values, one per line ('-' for stdin)")
    s.add_argument("--scale", type=int, help="progression scale N")
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--box", help="a1,b1,a2,b2")
    s.add_argument("--gammas", help="g1,g2 with g1 <= n/N^2 <= g2")
    s.add_argument("--header", action="store_true")
    s.set_defaults(fn=cmd_twosq)

    s = sub.add_parser("weyl", parents=[common], help="Weyl sums and rational fits",
                       description="Evaluate sum e(g(n)) over [lo, hi] for a polynomial phase (--coeffs, "
                                   "leading first, fractions allowed), or the normalised sum for r.theta n^k "
                                   "with the best rational approximation of r.theta.")
    s.add_argument("--coeffs")
    s.add_argument("--theta")
    s.add_argument("--r")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--lo", type=int, default=0)
    s.add_argument("--hi", type=int, required=True)
    s.set_defaults(fn=cmd_weyl)

    s = sub.add_parser("moment", parents=[common], help="sixth moment of a set (JSON)",
                       description="Exact sum_x r_3(x)^2 for a set of nonnegative integers, with its ratio to N^2.")
    s.add_argument("--set", help="file of integers, one per line ('-' for stdin)")
    s.add_argument("--squares", type=int, help="use the squares up to N")
    s.add_argument("--p", type=int, nargs="*", default=[6], help="extra moments (e.g. 5)")
    s.set_defaults(fn=cmd_moment)

    s = sub.add_parser("losqr", aliases=["sumsetqr"], parents=[common], help="largest S with S + S avoiding squares mod q (CSV)",
                       description="Exact branch and bound for q = 1..qmax, compared with 11q/32.")
    s.add_argument("--qmax", type=int, default=36)
    s.set_defaults(fn=cmd_losqr, budget=5 * 10**6)

    s = sub.add_parser("bohr", parents=[common], help="Bohr-set statistics (JSON)",
                       description="Read a key = value spec (N, q, b, x, eps, d, theta_i, z_i) and report "
                                   "elements, Z-set sizes, sumset coverage of Q^2 or representation counts.")
    s.add_argument("--config", required=True)
    s.add_argument("--report", choices=["elements", "zsets", "coverage", "representations"], default="elements")
    s.add_argument("--limit", type=int, default=100, help="elements listed in the report")
    s.add_argument("--c", default="1/8", help="calibration constant for representation counts")
    s.add_argument("--centre-2x", action="store_true", help="centre Q at (2x)^(1/4) instead of (4x)^(1/4)")
    s.set_defaults(fn=cmd_bohr)

    s = sub.add_parser("cutoff", parents=[common], help="smooth cutoffs and Fourier data",
                       description="Interval majorants (smooth, trapezoid, sharp) with their Fourier l1 norms; "
                                   "torus majorant/minorant coefficient tables and decay fits; the Bohr cutoff chi "
                                   "with its sandwich and mass checks.")
    s.add_argument("kind", choices=["smooth", "trapezoid", "sharp", "majorant", "minorant", "chi"])
    s.add_argument("--N", type=int, nargs="+", default=[64, 256, 1024, 4096])
    s.add_argument("--grid", type=int, default=1 << 16)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--eps-prime", type=float, default=0.01)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--radius", type=int, default=2048)
    s.add_argument("--table", action="store_true", help="emit the coefficient table as CSV")
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--u", type=int, default=0)
    s.add_argument("--x", type=float, default=1.5)
    s.add_argument("--theta")
    s.add_argument("--z")
    s.add_argument("--A", type=float, default=10.0, help="irrationality parameter for chi")
    s.set_defaults(fn=cmd_cutoff)

    s = sub.add_parser("bootstrap", parents=[common], help="progression bootstrap lemmas (JSON/CSV)",
                       description="Sumset subprogressions, squares from two progressions, and the "
                                   "inclusion chain of a good 2-colouring.")
    s.add_argument("lemma", choices=["subprog", "squares", "chain"])
    s.add_argument("--lo", type=int, default=1)
    s.add_argument("--hi", type=int, default=100)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--drop", type=int, default=0, help="random elements removed from Q")
    s.add_argument("--N", type=int, default=200)
    s.add_argument("--p1", default="1,2")
    s.add_argument("--p2", default="1,2")
    s.add_argument("--gammas", default="1.5,2.5")
    s.add_argument("--sweep", type=int, nargs="*")
    s.add_argument("--n", type=int, default=31)
    s.add_argument("--input")
    s.set_defaults(fn=cmd_bootstrap)
    return p


def _params(a) -> dict:
    skip = {"fn", "out", "seed", "cmd"}
    return {k: v for k, v in sorted(vars(a).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        threads = thread_cap()
        human, machine = a.fn(a)
    except UsageError as exc:
        print(f"rsl {a.cmd}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionError, RslError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"rsl {a.cmd}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if a.out:
        out = Path(a.out)
        out.write_text(machine, encoding="utf-8", newline="\n")
        man = RunManifest(a.cmd, _params(a), a.seed, _versions(),
                          hashlib.sha256(machine.encode()).hexdigest(), threads)
        Path(str(out) + ".manifest.json").write_text(_json(asdict(man)), encoding="utf-8", newline="\n")
        if human:
            print(human.rstrip(chr(10)))
    else:
        if human:
            print(human.rstrip(chr(10)))
        if machine and a.cmd != "colour":
            sys.stdout.write(machine)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
