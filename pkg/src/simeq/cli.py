"""Command-line interface.

Exit codes are a stable contract: 0 = Equivalent (or a passing verify),
1 = Distinguished (or a failing verify), 2 = Inconclusive,
3 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine, fileio
from .engine import EngineConfig, KINDS
from .errors import SimeqError
from .fingerprint import make_fingerprint, gram_alphabet

EXIT_EQUIVALENT = 0
EXIT_DISTINGUISHED = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3

_VERDICT_EXIT = {"equivalent": EXIT_EQUIVALENT,
                 "distinguished": EXIT_DISTINGUISHED,
                 "inconclusive": EXIT_INCONCLUSIVE}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; the contract says 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fmt_complex(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    sign = "+" if im >= 0 else "-"
    return f"{re!r} {sign} {abs(im)!r}i"


def _print_json(doc):
    sys.stdout.write(json.dumps(doc, indent=2, allow_nan=False) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simeq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", parents=[], help="decide one of the six "
                       "similarity/equivalence kinds for two matrix-set files")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--left", required=True, metavar="A.json")
    p.add_argument("--right", required=True, metavar="B.json")
    p.add_argument("--max-word-len", type=int, default=None, metavar="L")
    p.add_argument("--rtol", type=float, default=None, metavar="R")
    p.add_argument("--atol", type=float, default=None, metavar="A")
    p.add_argument("--trials", type=int, default=None, metavar="T")
    p.add_argument("--seed", type=int, default=None, metavar="S")
    p.add_argument("--strict-closure", action="store_true",
                   help="error out on non-closed inputs instead of augmenting")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--cert-out", metavar="cert.json",
                   help="write the certificate here on an equivalent verdict")

    p = sub.add_parser("fingerprint", help="print the trace fingerprint of "
                       "one matrix-set file")
    p.add_argument("--input", required=True, metavar="A.json")
    p.add_argument("--kind", required=True,
                   choices=("plain", "gram-star", "gram-transpose"))
    p.add_argument("--max-word-len", type=int, required=True, metavar="L")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("generate", help="generate a random instance pair")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--rows", type=int, required=True, metavar="M")
    p.add_argument("--cols", type=int, required=True, metavar="N")
    p.add_argument("--count", type=int, required=True, metavar="K")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.add_argument("--perturb", type=float, default=0.0, metavar="EPS")
    p.add_argument("--out-left", required=True, metavar="A.json")
    p.add_argument("--out-right", required=True, metavar="B.json")

    p = sub.add_parser("verify", help="re-verify a certificate against the "
                       "two matrix-set files")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--cert", required=True, metavar="cert.json")
    p.add_argument("--left", required=True, metavar="A.json")
    p.add_argument("--right", required=True, metavar="B.json")
    p.add_argument("--json", action="store_true", dest="as_json")

    return parser


def _cmd_decide(args) -> int:
    a = fileio.load_matrix_set(args.left)
    b = fileio.load_matrix_set(args.right)
    overrides = {}
    if args.max_word_len is not None:
        overrides["max_word_len"] = args.max_word_len
    if args.rtol is not None:
        overrides["rtol"] = args.rtol
    if args.atol is not None:
        overrides["atol"] = args.atol
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.strict_closure:
        overrides["augment_closure"] = False
    config = EngineConfig(**overrides)
    decision = engine.decide(args.kind, a, b, config)
    if args.cert_out and decision.certificate is not None:
        fileio.save_certificate(decision.certificate, args.cert_out)
    if args.as_json:
        _print_json(fileio.decision_to_json(decision))
    else:
        _print_decision(decision)
    return _VERDICT_EXIT[decision.verdict]


def _print_decision(d):
    print(f"kind: {d.kind}")
    print(f"verdict: {d.verdict}")
    print(f"word cap: {d.word_cap_used} (sufficiency bound {d.bound})")
    if d.verdict == "equivalent":
        print(f"residual: {d.certificate.residual:.6e}")
    elif d.verdict == "distinguished":
        print(f"word: {d.word_label}")
        print(f"trace left:  {_fmt_complex(d.trace_left)}")
        print(f"trace right: {_fmt_complex(d.trace_right)}")
    else:
        print(f"reason: {d.reason}")


def _cmd_fingerprint(args) -> int:
    s = fileio.load_matrix_set(args.input)
    if args.kind == "gram-star":
        s = gram_alphabet(s, "conjugate-transpose")
    elif args.kind == "gram-transpose":
        s = gram_alphabet(s, "transpose")
    fp = make_fingerprint(s, args.max_word_len)
    if args.as_json:
        _print_json(fileio.fingerprint_to_json(fp))
    else:
        for w, t in fp.entries.items():
            print(f"{fp.word_label(w)}: {_fmt_complex(t)}")
    return 0


def _cmd_generate(args) -> int:
    a, b, truth = engine.generate_instance(args.kind, args.rows, args.cols,
                                           args.count, args.seed,
                                           perturb_eps=args.perturb)
    fileio.save_matrix_set(a, args.out_left)
    fileio.save_matrix_set(b, args.out_right)
    print(f"wrote {args.out_left} and {args.out_right} (truth: {truth})")
    return 0


def _cmd_verify(args) -> int:
    cert = fileio.load_certificate(args.cert)
    a = fileio.load_matrix_set(args.left)
    b = fileio.load_matrix_set(args.right)
    report = engine.verify_certificate(args.kind, cert, a, b)
    if args.as_json:
        _print_json(fileio.verify_report_to_json(args.kind, report))
    else:
        print(f"kind: {args.kind}")
        print(f"isometry defect left:  {report.isometry_defect_left:.6e}")
        if report.isometry_defect_right is not None:
            print(f"isometry defect right: {report.isometry_defect_right:.6e}")
        print(f"intertwining residual: {report.intertwining_residual:.6e}")
        print(f"pass: {report.passed}")
    return EXIT_EQUIVALENT if report.passed else EXIT_DISTINGUISHED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"decide": _cmd_decide, "fingerprint": _cmd_fingerprint,
                "generate": _cmd_generate, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except SimeqError as err:
        print(f"simeq: error: {err}", file=sys.stderr)
        return EXIT_ERROR


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
