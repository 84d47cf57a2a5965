"""Command-line front end.

Exit codes: 0 success (CERTIFIED / HOLDS), 2 a negative mathematical result
(UNCERTIFIED, VIOLATED, gap above tolerance), 3 invalid invocation or
parameters outside a statement's hypotheses.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import auxiliary, certify, dual, probe, report, statements
from . import weights as W
from .errors import HardyError

log = logging.getLogger("hardycert")

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID = 0, 2, 3
COMMANDS = ("certify", "search-beta", "probe", "n-sweep", "check-weights", "carleman",
            "dual-check", "aux-check", "constants")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def read_config(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _floats(text):
    return [float(x) for x in str(text).replace(",", " ").split()]


def _ints(text):
    return [int(float(x)) for x in str(text).replace(",", " ").split()]


def _statement_params(ns):
    if not ns.statement:
        raise UsageError("--statement is required")
    sid = ns.statement.upper()
    if sid not in statements.PARAMS:
        raise UsageError(f"unknown statement {ns.statement!r}; known: {', '.join(statements.STATEMENT_IDS)}")
    params = {}
    for name in statements.PARAMS[sid]:
        v = getattr(ns, name, None)
        if v is None:
            raise UsageError(f"statement {sid} needs --{name}")
        params[name] = v
    return statements.StatementId(sid, params)


def _family(ns):
    kind = ns.family.lower()
    if kind in ("pdr", "power-diff-remainder"):
        return W.PowerDiffRemainder(ns.param)
    if kind in ("head", "head-power-diff"):
        return W.HeadPowerDiff(ns.param)
    if kind in ("power", "pure-power"):
        return W.PurePower(ns.param)
    if kind == "tabulated":
        if not ns.file:
            raise UsageError("--family tabulated needs --file")
        return W.load_tabulated(ns.file)
    raise UsageError(f"unknown family {ns.family!r}")


# ---------------------------------------------------------------------------
# command handlers: each returns (result, exit_code)
# ---------------------------------------------------------------------------


def cmd_certify(ns):
    cert = certify.certify_constant(ns.p, ns.r, ns.beta, ns.kmax, ns.method)
    return cert, EXIT_OK if cert.certified else EXIT_NEGATIVE


def cmd_search_beta(ns):
    return certify.beta_search(ns.p, ns.r), EXIT_OK


def cmd_constants(ns):
    st = _statement_params(ns)
    c = statements.closed_constant(st)
    return {"statement": st.as_dict(), "constant": c, "direction": statements.direction(st)}, EXIT_OK


def cmd_probe(ns):
    st = _statement_params(ns)
    statements.require_valid(st)
    if ns.mode == "optimize":
        op = statements.statement_operator(st, ns.N)
        res = probe.optimize_ratio(op, statements.statement_exponent(st), tol=ns.tol,
                                   max_iter=ns.max_iter, statement=st)
        return res, EXIT_OK if res.diagnostics.converged else EXIT_NEGATIVE
    res = probe.extremal_sweep(st, _floats(ns.eps), threads=ns.threads)
    return res, EXIT_OK


def cmd_n_sweep(ns):
    st = _statement_params(ns)
    statements.require_valid(st)
    Ns = _ints(ns.N_list)
    op = statements.statement_operator(st, max(Ns))
    res = probe.n_sweep(op, statements.statement_exponent(st), Ns, tol=ns.tol, max_iter=ns.max_iter,
                        reference=ns.reference, statement=st, threads=ns.threads)
    return res, EXIT_OK if res.monotone_trend and res.diagnostics.converged else EXIT_NEGATIVE


def cmd_check_weights(ns):
    rep = W.check_l_condition(_family(ns), ns.condition, ns.L, ns.p, ns.n_max)
    return rep, EXIT_OK if rep.holds else EXIT_NEGATIVE


def cmd_carleman(ns):
    rep = W.carleman_m(_family(ns), ns.variant, ns.n_max, ns.inner_cutoff)
    return rep, EXIT_OK


def cmd_dual_check(ns):
    if ns.norm_check:
        chk = dual.transpose_norm_check(ns.N, ns.p, ns.trials, seed=ns.seed)
        ok = chk.max_relative_gap <= ns.tol and chk.all_converged
        return chk, EXIT_OK if ok else EXIT_NEGATIVE
    st = _statement_params(ns)
    d = dual.dualize_statement(st, recast=ns.recast)
    return d, EXIT_OK


def cmd_aux_check(ns):
    which = ns.which.upper()
    if which not in auxiliary.PARAMS:
        raise UsageError(f"unknown auxiliary check {ns.which!r}; known: {', '.join(auxiliary.AUX_CHECKS)}")
    params = {}
    for name in auxiliary.PARAMS[which]:
        v = getattr(ns, name, None)
        if v is None:
            raise UsageError(f"{which} needs --{name}")
        params[name] = v
    res = auxiliary.auxiliary_check(which, params, ns.n_max)
    out = {
        "which": which,
        "params": params,
        "n_max": ns.n_max,
        "min_slack": res.min_slack,
        "min_relative_slack": res.min_rel_slack,
        "rows": [{"n": int(n), "lhs": float(a), "rhs": float(b), "slack": float(s)}
                 for n, a, b, s in zip(res.n, res.lhs, res.rhs, res.slack)],
    }
    return out, EXIT_OK if res.min_rel_slack >= -1e-12 else EXIT_NEGATIVE


HANDLERS = {
    "certify": cmd_certify,
    "search-beta": cmd_search_beta,
    "probe": cmd_probe,
    "n-sweep": cmd_n_sweep,
    "check-weights": cmd_check_weights,
    "carleman": cmd_carleman,
    "dual-check": cmd_dual_check,
    "aux-check": cmd_aux_check,
    "constants": cmd_constants,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", default="TEXT", type=str.upper, choices=report.FORMATS)
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (default: $HARDY_THREADS, else 1)")
    p.add_argument("--config", default=None, help="key = value file; flags override it")
    p.add_argument("-v", "--verbose", action="store_true")


def _stmt_args(p, required=True):
    p.add_argument("--statement", required=required)
    p.add_argument("--p", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)


def _family_args(p):
    p.add_argument("--family", required=True, help="pdr, head, power or tabulated")
    p.add_argument("--param", type=float, default=0.0, help="r or alpha of the family")
    p.add_argument("--file", default=None, help="two-column file for --family tabulated")
    p.add_argument("--n-max", dest="n_max", type=int, default=10**4)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardycert", description="Certify and probe best constants of Hardy-type inequalities.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("certify", help="certificate for the weighted remainder inequality")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--kmax", type=int, default=certify.DEFAULT_K)
    p.add_argument("--method", choices=[m.value for m in certify.Method if m.value != "CLOSED_FORM"])

    p = sub.add_parser("search-beta", help="beta where s_1 meets the limit value")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)

    p = sub.add_parser("probe", help="extremal sweep or truncated optimization")
    _stmt_args(p)
    p.add_argument("--mode", choices=("sweep", "optimize"), default="sweep")
    p.add_argument("--eps", default="0.1,0.05,0.02,0.01")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=20000)

    p = sub.add_parser("n-sweep", help="optimized ratio for a list of truncations")
    _stmt_args(p)
    p.add_argument("--N-list", dest="N_list", default="100,500,2000")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=20000)
    p.add_argument("--reference", type=float, default=None)

    p = sub.add_parser("check-weights", help="tail-ratio conditions on a weight family")
    _family_args(p)
    p.add_argument("--condition", type=str.upper, choices=W.L_CONDITIONS, default="EQ66")
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--p", type=float, default=None)

    p = sub.add_parser("carleman", help="M functionals and E = e^M of a weight family")
    _family_args(p)
    p.add_argument("--variant", type=str.upper, choices=W.M_VARIANTS, default="M_DIFF")
    p.add_argument("--inner-cutoff", dest="inner_cutoff", type=int, default=10**5)

    p = sub.add_parser("dual-check", help="dual statement or transpose norm check")
    _stmt_args(p, required=False)
    p.add_argument("--recast", action="store_true")
    p.add_argument("--norm-check", dest="norm_check", action="store_true")
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("aux-check", help="pointwise auxiliary inequality")
    p.add_argument("--which", required=True)
    for name in ("r", "gamma", "p", "alpha", "beta"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n-max", dest="n_max", type=int, default=10**4)

    p = sub.add_parser("constants", help="closed-form constant of a statement")
    _stmt_args(p)

    for sp in sub.choices.values():
        _common(sp)
    return parser


def _apply_config(parser, argv):
    """Load --config before the real parse so its values become defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    cfg = read_config(known.config)
    command = cfg.pop("command", None)
    if command and not any(a in COMMANDS for a in argv):
        argv = [command] + list(argv)
    cmd = next((a for a in argv if a in COMMANDS), None)
    if cmd is None:
        return argv
    sp = parser._subparsers._group_actions[0].choices[cmd]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for k, v in cfg.items():
        if k not in actions:
            raise UsageError(f"config key {k!r} is not an option of {cmd}")
        act = actions[k]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[k] = v.lower() in ("1", "true", "yes", "on")
        else:
            val = act.type(v) if act.type else v
            if act.choices is not None and val not in act.choices:
                raise UsageError(f"config {k} = {v!r} not in {sorted(act.choices)}")
            defaults[k] = val
        act.required = False
    sp.set_defaults(**defaults)
    return argv


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError(parser.format_usage())
    except UsageError as exc:
        stderr.write(str(exc).rstrip() + "\n")
        return EXIT_INVALID
    except OSError as exc:
        stderr.write(f"hardycert: {exc}\n")
        return EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, stream=stderr,
                        format="%(levelname)s %(message)s")
    if ns.threads is None:
        env = os.environ.get("HARDY_THREADS")
        ns.threads = int(env) if env and env.isdigit() else 1
    np.random.seed(ns.seed)
    try:
        result, code = HANDLERS[ns.command](ns)
    except UsageError as exc:
        stderr.write(str(exc).rstrip() + "\n")
        return EXIT_INVALID
    except (HardyError, ValueError) as exc:
        stderr.write(f"hardycert {ns.command}: {exc}\n")
        return EXIT_INVALID
    try:
        report.emit_report(result, ns.format, ns.output, stream=stdout)
    except BrokenPipeError:
        return code
    except OSError as exc:
        stderr.write(f"hardycert: cannot write report: {exc}\n")
        return EXIT_INVALID
    log.debug("exit code %d", code)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
