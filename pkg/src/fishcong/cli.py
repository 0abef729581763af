"""Command-line front end.

Exit codes: 0 all checks passed, 1 a refutation or failed hypothesis was
found, 2 usage error, 3 corrupt cache file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .congruence import (SERIES_LIMIT, CongruenceFamily, PDividesR,
                         ResourceGuard, Status, crt_closure,
                         fishburn_families, lemma_checks, predict,
                         predict_p_divides_r, residue_report, search, verify,
                         verify_many, verify_p_divides_r)
from .dissect import (DegreeGuard, check_lemma_alpha, check_lemma_alpha24,
                      check_qq_conjecture, dissection)
from .fishburn import (CorruptCache, RequestMismatch, XiRequest,
                       cached_xi_table)
from .padic import DenominatorDivisibleByP, expand, is_prime, valuation
from .series import CoefficientRing

EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_CACHE = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")
TABULAR = {"xi", "search"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    cache_path: str | None = None
    series_limit: int = SERIES_LIMIT
    jobs: int = os.cpu_count() or 1
    output_format: str = "text"

    def __post_init__(self):
        if self.series_limit < 64:
            raise UsageError("series_limit must be at least 64")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")
        if self.output_format not in FORMATS:
            raise UsageError(f"output_format must be one of {', '.join(FORMATS)}")


def load_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        value = value.strip('"\'')
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in ("series_limit", "jobs"):
            try:
                out[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        else:
            out[key] = value
    return out


def build_config(args) -> RunConfig:
    settings = load_config(args.config) if args.config else {}
    for key in ("series_limit", "jobs", "output_format"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    cache = getattr(args, "cache", None)
    if cache is not None:
        settings["cache_path"] = cache
    if os.environ.get("FISHBURN_CACHE"):
        settings["cache_path"] = os.environ["FISHBURN_CACHE"]
    return RunConfig(**settings)


def _prime(text: str) -> int:
    p = int(text)
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def _fmt_set(xs) -> str:
    return "{" + ",".join(str(x) for x in xs) + "}"


def _bool(b) -> str:
    return "null" if b is None else str(b).lower()


# Each command returns (params, results, text_lines, csv_rows, exit_code).

def cmd_xi(args, cfg: RunConfig):
    if args.r == 0:
        raise UsageError("r must be nonzero")
    ring = CoefficientRing(args.mod)
    req = XiRequest(args.r, args.s, args.n_max, ring)
    table = cached_xi_table(req, cfg.cache_path)
    params = {"r": args.r, "s": args.s, "n_max": args.n_max, "mod": args.mod}
    rows = [(n, v) for n, v in enumerate(table.values)]
    results = [{"n": n, "value": str(v)} for n, v in rows]
    return params, results, [f"{n} {v}" for n, v in rows], [("n", "value")] + rows, EXIT_OK


def cmd_sets(args, cfg):
    rep = residue_report(args.p, args.r, args.s, literal_i0=args.literal_i0)
    params = {"p": args.p, "r": args.r, "s": args.s, "literal_i0": args.literal_i0}
    line = f"S={_fmt_set(rep.S)}"
    if rep.S_star is not None:
        line += f" S*={_fmt_set(rep.S_star)} i0={rep.i0} digit_ok={_bool(rep.digit_ok)}"
    return params, rep.to_dict(), [line], None, EXIT_OK


def cmd_predict(args, cfg):
    params = {"p": args.p, "r": args.r, "s": args.s, "lambda": args.lam}
    if args.r % args.p == 0:
        if args.s != 0:
            raise UsageError("families with p | r are only available for s = 0")
        lam = int(valuation(args.r, args.p))
        fam = predict_p_divides_r(args.p, args.r // args.p ** lam, lam)
        d = fam.to_dict()
        text = [f"xi_{fam.r}({fam.p}m - j) = 0 mod {fam.modulus} for j in {_fmt_set(fam.js)} [LEM_PR]"]
        return params, [d], text, None, EXIT_OK
    fams = predict(args.p, args.r, args.s, args.lam)
    text = [f"j in {_fmt_set(f.j for f in fams)}"]
    text += [f"  j={f.j} mod {f.modulus} [{f.guaranteed_by.value}]" for f in fams]
    return params, [f.to_dict() for f in fams], text, None, EXIT_OK


def cmd_verify(args, cfg):
    params = {"p": args.p, "r": args.r, "s": args.s, "lambda": args.lam,
              "j": args.j, "m_max": args.m_max}
    if args.r % args.p == 0:
        raise PDividesR(f"p={args.p} divides r={args.r}")
    if args.j is not None:
        fams = [CongruenceFamily(args.p, args.r, args.s, args.lam, args.j)]
        predicted = {f.j: f for f in predict(args.p, args.r, args.s, args.lam)}
        if args.j in predicted:
            fams = [predicted[args.j]]
    else:
        fams = predict(args.p, args.r, args.s, args.lam)
    results = verify_many(fams, args.m_max, limit=cfg.series_limit, jobs=1)
    text = []
    for res in results:
        f = res.family
        line = f"p={f.p} r={f.r} s={f.s} lambda={f.lam} j={f.j} {res.status.value}"
        if res.witness:
            line += f" m={res.witness[0]} residue={res.witness[1]}"
        text.append(line)
    code = EXIT_FOUND if any(r.status is Status.REFUTED for r in results) else EXIT_OK
    return params, [r.to_dict() for r in results], text, None, code


def cmd_search(args, cfg):
    params = {"alpha_max": args.alpha_max, "rho_max": args.rho_max, "n_max": args.n_max}
    hits = search(args.alpha_max, args.rho_max, args.n_max, jobs=cfg.jobs)
    closure = crt_closure(fishburn_families(args.alpha_max, args.rho_max),
                          args.alpha_max, args.rho_max)
    results, text, rows = [], [], [("alpha", "beta", "rho", "implied")]
    for h in hits:
        implied = h.key in closure
        d = h.to_dict()
        d["implied"] = implied
        results.append(d)
        text.append(f"{h.alpha} {h.beta} {h.rho} {'implied' if implied else 'UNEXPLAINED'}")
        rows.append((h.alpha, h.beta, h.rho, str(implied).lower()))
    unexplained = sum(not d["implied"] for d in results)
    missing = len(closure - {h.key for h in hits})
    text.append(f"# {len(hits)} hits, {unexplained} unexplained, {missing} predicted but not found")
    code = EXIT_FOUND if unexplained or missing else EXIT_OK
    return params, results, text, rows, code


def cmd_dissect(args, cfg):
    params = {"p": args.p, "n": args.n, "N": args.N, "force": args.force}
    if (args.n is None) == (args.N is None):
        raise UsageError("give exactly one of --n (checks at N = pn - 1) or --N")
    if args.N is not None:
        rep = dissection(args.p, args.N, force=args.force)
        return params, rep.to_dict(), _dissection_text(rep), None, EXIT_OK
    rep = dissection(args.p, args.p * args.n - 1, force=args.force)
    rep.checks["lemma_alpha"] = check_lemma_alpha(args.p, args.n, args.force)
    rep.checks["hypothesis_qq"] = check_qq_conjecture(args.p, args.n, args.force)
    if args.p >= 5:
        rep.checks["lemma_alpha24"] = [check_lemma_alpha24(args.p, args.n, args.force)]
    text = _dissection_text(rep)
    failed = False
    for name, outcomes in rep.checks.items():
        for o in outcomes:
            if name == "lemma_alpha24":
                text.append(f"{name}: i0={o.i0} reading={o.reading} ok={_bool(o.ok)}")
            else:
                text.append(f"{name}: i={o.i} ok={_bool(o.ok)}")
            failed |= not o.ok
    return params, rep.to_dict(), text, None, EXIT_FOUND if failed else EXIT_OK


def _dissection_text(rep) -> list[str]:
    return [f"A_{rep.p}({rep.N},{i},q) = [{', '.join(str(c) for c in part.coeffs)}]"
            for i, part in enumerate(rep.parts)]


def cmd_digits(args, cfg):
    params = {"num": args.num, "den": args.den, "p": args.p, "count": args.count}
    if args.den == 0:
        raise UsageError("denominator must be nonzero")
    exp = expand((args.num, args.den), args.p, args.count)
    v = exp.valuation if exp.valuation != float("inf") else "inf"
    results = {"p": exp.p, "valuation": v, "digits": list(exp.digits)}
    text = [f"valuation={v} digits=[{', '.join(str(d) for d in exp.digits)}]"]
    return params, results, text, None, EXIT_OK


def cmd_lemmas(args, cfg):
    params = {"p": args.p, "r": args.r, "s": args.s, "lambda": args.lam, "budget": args.budget}
    outcomes = lemma_checks(args.p, args.r, args.s, args.lam, args.budget, cfg.series_limit)
    text = [f"{o.name}: ok={_bool(o.ok)} samples={o.samples}"
            + (f" witness={json.dumps(o.witness)}" if o.witness else "") for o in outcomes]
    code = EXIT_OK if all(o.ok for o in outcomes) else EXIT_FOUND
    return params, [o.to_dict() for o in outcomes], text, None, code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fishburn", description="Fishburn-number congruence toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS)
    common.add_argument("--config", help="key = value file with RunConfig fields")
    common.add_argument("--series-limit", dest="series_limit", type=int)
    common.add_argument("--jobs", type=_positive)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xi", parents=[common], help="tabulate xi_{r,s}(n)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--n-max", dest="n_max", type=_nonneg, required=True)
    p.add_argument("--mod", type=int)
    p.add_argument("--cache")
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("sets", parents=[common], help="residue sets and digit condition")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--literal-i0", action="store_true",
                   help="take i0 in 1..p-1 (nothing removed when the residue is 0)")
    p.set_defaults(func=cmd_sets)

    for name, func, hlp in (("predict", cmd_predict, "list proven congruence families"),
                            ("verify", cmd_verify, "check families numerically")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--p", type=_prime, required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--s", type=int, default=0)
        p.add_argument("--lambda", dest="lam", type=_positive, default=1)
        if name == "verify":
            p.add_argument("--j", type=_positive)
            p.add_argument("--m-max", dest="m_max", type=_positive, default=3)
        p.set_defaults(func=func)

    p = sub.add_parser("search", parents=[common], help="exhaustive progression search for xi")
    p.add_argument("--alpha-max", dest="alpha_max", type=_positive, required=True)
    p.add_argument("--rho-max", dest="rho_max", type=_positive, required=True)
    p.add_argument("--n-max", dest="n_max", type=_positive, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dissect", parents=[common], help="p-dissection of F(q, N) and its checks")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--n", type=_positive)
    p.add_argument("--N", type=_nonneg)
    p.add_argument("--force", action="store_true", help="ignore the degree guard")
    p.set_defaults(func=cmd_dissect)

    p = sub.add_parser("digits", parents=[common], help="p-adic digits of num/den")
    p.add_argument("--num", type=int, required=True)
    p.add_argument("--den", type=int, default=1)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--count", type=_positive, default=2)
    p.set_defaults(func=cmd_digits)

    p = sub.add_parser("lemmas", parents=[common], help="binomial and valuation lemma checks")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=_positive, default=2)
    p.add_argument("--budget", type=_positive, default=3)
    p.set_defaults(func=cmd_lemmas)
    return parser


def render(command: str, params, results, text, rows, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, "params": params, "results": results, "version": __version__}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return "\n".join(text) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if cfg.output_format == "csv" and args.command not in TABULAR:
            raise UsageError(f"csv output is only available for {', '.join(sorted(TABULAR))}")
        params, results, text, rows, code = args.func(args, cfg)
    except (UsageError, PDividesR, DenominatorDivisibleByP, ResourceGuard,
            DegreeGuard, RequestMismatch, ValueError) as exc:
        if isinstance(exc, CorruptCache):
            print(f"error: CorruptCache: {exc}", file=sys.stderr)
            return EXIT_CACHE
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(args.command, params, results, text, rows, cfg.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
