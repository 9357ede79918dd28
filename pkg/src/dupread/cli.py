"""``dupread`` command line.

Exit status: 0 success, 1 verification or decoding failure, 2 usage error,
3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys

from . import bounded, rates, render, unbounded, verify
from .channel import DuplicationEvent, duplicate, random_duplications
from .derivative import decompose, delta_k
from .errors import DecodingError, SizeGuardError
from .seqcore import Params, check_sequence, read_vector

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
REPS_MAX_N = 16
RATE_COLUMNS = ["k", "ell", "q", "lower", "upper", "exact", "method_lower", "method_upper"]


class UsageError(Exception):
    pass


def int_list(text: str) -> list:
    """``"5,9"``, ``"1..9"`` or a mix such as ``"1..3,7"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise argparse.ArgumentTypeError(f"empty item in {text!r}")
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def sequence_arg(text: str) -> tuple:
    if not text.strip():
        raise argparse.ArgumentTypeError("sequence must not be empty")
    try:
        return tuple(int(a) for a in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sequence {text!r}") from None


def seed_arg(text: str) -> int:
    s = int(text)
    if not 0 <= s < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _params(args, n=None, t=None) -> Params:
    return Params(args.q, args.ell, args.k, args.n if n is None else n, t)


# ---- read / derive / nucleus ------------------------------------------------


def _received(args) -> tuple:
    x = check_sequence(args.x, args.q)
    z = read_vector(x, args.ell, args.q)
    if args.dup:
        if args.k is None:
            raise UsageError("--dup needs --k")
        for pos in args.dup:
            z = duplicate(z, DuplicationEvent(pos, args.k))
    return z


def cmd_read(args) -> int:
    z = _received(args)
    if args.format == "json":
        _emit(args, json.dumps([list(e) for e in z]) + "\n")
    else:
        _emit(args, render.format_vector(z) + "\n")
    return EXIT_OK


def cmd_derive(args) -> int:
    d = delta_k(_received(args), args.k)
    mu, sigma = decompose(d, args.k)
    if args.format == "json":
        doc = {"derivative": [list(e) for e in d], "mu": [list(e) for e in mu], "sigma": list(sigma)}
        _emit(args, json.dumps(doc) + "\n")
    else:
        lines = [render.format_vector(d), "mu: " + render.format_vector(mu), "sigma: " + render.format_ints(sigma)]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_nucleus(args) -> int:
    d = delta_k(_received(args), args.k)
    mu, sigma = decompose(d, args.k)
    if args.format == "json":
        _emit(args, json.dumps({"nucleus": [list(e) for e in mu], "depth": sum(sigma)}) + "\n")
    else:
        _emit(args, f"{render.format_vector(mu)}\ndepth: {sum(sigma)}\n")
    return EXIT_OK


# ---- unbounded code ---------------------------------------------------------


def cmd_enumerate(args) -> int:
    rows, reps = [], {}
    for n in args.n:
        p = _params(args, n)
        code = unbounded.build_nucleus_code(p, guard=args.size_guard)
        for depth, count in unbounded.depth_partition(code):
            rows.append([n, p.q, p.k, p.ell, len(code), depth, count])
        if n <= REPS_MAX_N:
            reps[str(n)] = [list(r) for r in code.representatives]
    _emit(args, _csv_text(["n", "q", "k", "ell", "total_classes", "depth", "count"], rows))
    if args.reps_out:
        with open(args.reps_out, "w") as fh:
            json.dump({"q": args.q, "k": args.k, "ell": args.ell, "representatives": reps}, fh)
            fh.write("\n")
    return EXIT_OK


def cmd_fine_count(args) -> int:
    rows = []
    for n in args.n:
        p = _params(args, n)
        brute = "" if args.fast_only else unbounded.count_fine_bruteforce(p, n, guard=args.size_guard)
        rows.append([n, p.q, p.k, p.ell, brute, unbounded.count_fine_fast(p, n), unbounded.count_rll_naive(p, n)])
    _emit(args, _csv_text(["n", "q", "k", "ell", "bruteforce", "fast", "rll_naive"], rows))
    return EXIT_OK


# ---- bounded code -----------------------------------------------------------


def cmd_sidon(args) -> int:
    s = bounded.greedy_sidon(args.r, args.t, args.m_start)
    _emit(args, s.to_json() + "\n")
    return EXIT_OK


def _load_sidon(args, p: Params) -> bounded.SidonSet:
    if args.sidon:
        with open(args.sidon) as fh:
            return bounded.SidonSet.from_json(fh.read())
    return bounded.sidon_for(p)


def _code(args) -> bounded.SidonCode:
    p = _params(args, t=args.t)
    sidon = _load_sidon(args, p)
    g = args.g
    if g is None:
        g, _ = bounded.best_coset(p, sidon, guard=args.size_guard)
    return bounded.SidonCode(p, sidon, g)


def cmd_encode(args) -> int:
    code = _code(args)
    members = code.members(guard=args.size_guard)
    p = code.params
    redundancy = p.n - math.log(len(members), p.q) if members else float("inf")
    print(f"coset g={code.g} of Z_{code.sidon.m}: {len(members)} codewords, redundancy {redundancy:.4f}", file=sys.stderr)
    if args.index is None:
        out = [list(x) for x in members]
    else:
        if not 0 <= args.index < len(members):
            raise UsageError(f"--index must lie in [0, {len(members) - 1}]")
        x = members[args.index]
        out = [list(e) for e in read_vector(x, code.params.ell, code.params.q)] if args.read else list(x)
    _emit(args, json.dumps(out) + "\n")
    return EXIT_OK


def cmd_decode(args) -> int:
    code = _code(args)
    if args.input == "-":
        z = json.load(sys.stdin)
    else:
        with open(args.input) as fh:
            z = json.load(fh)
    z = tuple(tuple(int(a) for a in e) for e in z)
    try:
        x = code.decode(z)
    except DecodingError as exc:
        print(f"decoding failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(args, json.dumps(list(x)) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = _code(args)
    p = code.params
    members = code.members(guard=args.size_guard)
    rng = random.Random(args.seed)
    rows, ok_count = [], 0
    for trial in range(args.trials):
        x = members[rng.randrange(len(members))]
        e = rng.randint(0, p.t)
        z, events = random_duplications(read_vector(x, p.ell, p.q), p.k, e, rng.getrandbits(64))
        try:
            ok = code.decode(z) == x
        except DecodingError:
            ok = False
        ok_count += ok
        rows.append([trial, e, ";".join(str(ev.pos) for ev in events), int(ok)])
    rate = ok_count / args.trials if args.trials else 1.0
    rows.append(["summary", "", "", repr(rate)])
    _emit(args, _csv_text(["trial", "errors", "positions", "success"], rows))
    return EXIT_OK if ok_count == args.trials else EXIT_FAIL


# ---- rates ------------------------------------------------------------------


def rate_rows(ks, ells, q) -> list:
    return [
        [b.k, b.ell, b.q, repr(b.lower), repr(b.upper), "" if b.exact is None else repr(b.exact), b.method_lower, b.method_upper]
        for b in rates.table(ks, ells, q)
    ]


def rates_csv(rows) -> str:
    return _csv_text(RATE_COLUMNS, rows)


def parse_rates_csv(text: str) -> list:
    """Rows of a rates CSV as typed records (floats, None for an empty exact)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append(
            {
                "k": int(rec["k"]),
                "ell": int(rec["ell"]),
                "q": int(rec["q"]),
                "lower": float(rec["lower"]),
                "upper": float(rec["upper"]),
                "exact": float(rec["exact"]) if rec["exact"] else None,
                "method_lower": rec["method_lower"],
                "method_upper": rec["method_upper"],
            }
        )
    return out


def records_to_rows(records) -> list:
    return [
        [r["k"], r["ell"], r["q"], repr(r["lower"]), repr(r["upper"]), "" if r["exact"] is None else repr(r["exact"]), r["method_lower"], r["method_upper"]]
        for r in records
    ]


def cmd_rates(args) -> int:
    rows = rate_rows(args.k, args.ell, args.q)
    if args.format == "csv":
        text = rates_csv(rows)
    elif args.format == "json":
        text = json.dumps(parse_rates_csv(rates_csv(rows)), indent=1) + "\n"
    else:
        lines = ["| k | ell | lower | upper | exact |", "|---|---|---|---|---|"]
        for r in parse_rates_csv(rates_csv(rows)):
            ex = "yes" if r["exact"] is not None else ""
            lines.append(f"| {r['k']} | {r['ell']} | {r['lower']:.6f} | {r['upper']:.6f} | {ex} |")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run(args.suite)
    for res in results:
        print(res.line())
        for f in res.failures[:5]:
            print(f"    {f}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ---- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dupread", description="Duplication-correcting codes for l-read vectors.")
    ap.add_argument("--size-guard", type=int, default=None, help="max sequences to enumerate (default 2^24 or $DUPREAD_SIZE_GUARD)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def seq_opts(sp, need_k):
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--ell", type=int, required=True)
        sp.add_argument("--k", type=int, required=need_k)
        sp.add_argument("--x", type=sequence_arg, required=True, help="comma-separated symbols")
        sp.add_argument("--dup", type=int, action="append", metavar="POS", help="duplicate k entries after POS (repeatable)")
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.add_argument("--out")

    seq_opts(add("read", cmd_read, "print the l-read vector"), False)
    seq_opts(add("derive", cmd_derive, "print the k-step derivative with mu and sigma"), True)
    seq_opts(add("nucleus", cmd_nucleus, "print the nucleus and depth"), True)

    def code_opts(sp, n_list=False):
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--ell", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--n", type=int_list if n_list else int, required=True)
        sp.add_argument("--out")

    sp = add("enumerate", cmd_enumerate, "nucleus-class inventory as CSV")
    code_opts(sp, n_list=True)
    sp.add_argument("--reps-out", help=f"write representatives (n <= {REPS_MAX_N}) as JSON")

    sp = add("fine-count", cmd_fine_count, "count fine sequences three ways")
    code_opts(sp, n_list=True)
    sp.add_argument("--fast-only", action="store_true")

    sp = add("sidon", cmd_sidon, "greedy Sidon set as JSON")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--m-start", type=int)
    sp.add_argument("--out")

    def bounded_opts(sp):
        code_opts(sp)
        sp.add_argument("--t", type=int, required=True)
        sp.add_argument("--g", type=int, help="coset (default: the largest)")
        sp.add_argument("--sidon", help="Sidon set JSON file")

    sp = add("encode", cmd_encode, "list codewords of a syndrome coset")
    bounded_opts(sp)
    sp.add_argument("--index", type=int, help="emit only this codeword")
    sp.add_argument("--read", action="store_true", help="with --index, emit the codeword's read vector")

    sp = add("decode", cmd_decode, "decode a received read vector")
    bounded_opts(sp)
    sp.add_argument("--input", required=True, help="JSON read vector file, or - for stdin")

    sp = add("simulate", cmd_simulate, "random duplication trials through the decoder")
    bounded_opts(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=seed_arg, default=0)

    sp = add("rates", cmd_rates, "asymptotic rate table")
    sp.add_argument("--q", type=int, default=4)
    sp.add_argument("--ell", type=int_list, default=[5, 9])
    sp.add_argument("--k", type=int_list, default=list(range(1, 10)))
    sp.add_argument("--format", choices=["csv", "json", "markdown"], default="csv")
    sp.add_argument("--out")

    sp = add("verify", cmd_verify, "run an invariant suite")
    sp.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SizeGuardError as exc:
        print(f"dupread: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ValueError, IndexError) as exc:
        ap.print_usage(sys.stderr)
        print(f"dupread: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
