"""Command line front end: ``adic <cmd> -i <instance> [options]``.

Reports are JSON with sorted keys and no floats, so identical inputs give
byte-identical output.  Exit codes: 0 pass, 2 verdict inconsistency,
1 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .adic import PreconditionError, complete, derived_completion, is_separated, verify_quotient_identity
from .cech import (CechComplex, FlatTestModule, h0_via_koszul, koszul_homology, local_cohomology,
                   torsion_by_kernels)
from .certifier import (DEFAULT_SAMPLES, certify_equivalence, certify_single, verify_flat_vanishing,
                        verify_torsion_transfer)
from .corpus import bundled_names, bundled_text
from .fpmod import (FPModule, ModuleMapError, ext1, ext1_via_resolution, hom, hom_via_resolution, tensor,
                    tensor_via_presentation, tor1, tor1_via_resolution)
from .instance import Instance, InstanceError, parse_instance
from .matrix import smith_normal_form
from .ring import ElementParseError, RingMismatchError
from .towers import (DEFAULT_DEPTH, CompletionTower, MultiplicationTower, SymbolicLocalization,
                     check_completion_ext_limits, check_localization_routes, limits_closed_form, ml_certificate,
                     oracle_crosscheck)

EXIT_PASS, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="adic", description="Completeness certificates for modules over Euclidean domains.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("-i", "--instance", help="instance file, or the name of a bundled instance")
    p.add_argument("--module", action="append", default=[],
                   help="module name; two-module commands take --module X --module M")
    p.add_argument("--ideal")
    p.add_argument("--system")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="include wall time (makes output nondeterministic)")
    return p


def load_instance(ref: str) -> Instance:
    path = Path(ref)
    if path.is_file():
        return parse_instance(path.read_text())
    try:
        return parse_instance(bundled_text(ref))
    except KeyError:
        raise InstanceError(f"no instance file or bundled instance named {ref!r}") from None


def _one_module(inst: Instance, opts) -> FPModule:
    return inst.module(opts.module[0] if opts.module else None)


def _two_modules(inst: Instance, opts) -> tuple[FPModule, FPModule]:
    if len(opts.module) != 2:
        raise UsageError("this command needs --module X --module M")
    return inst.module(opts.module[0]), inst.module(opts.module[1])


def _system(inst: Instance, opts):
    if opts.system is None and not inst.systems:
        from .cech import ElementSystem
        I = inst.ideal(opts.ideal)
        return ElementSystem(I.ring, (I.reduced,))
    return inst.system(opts.system)


# -- commands: each returns (verdicts, certificates, passed) ---------------------------

def cmd_snf(inst, opts):
    M = _one_module(inst, opts)
    snf = smith_normal_form(M.presentation)
    fmt = M.ring.format
    mat = lambda A: [[fmt(a) for a in row] for row in A.tolist()]
    ok = snf.U @ M.presentation @ snf.V == snf.S
    return ({"S": mat(snf.S), "diagonal": [fmt(d) for d in snf.diagonal], "rank": snf.rank},
            {"U": mat(snf.U), "V": mat(snf.V), "U_times_A_times_V_equals_S": ok}, ok)


def cmd_invariants(inst, opts):
    M = _one_module(inst, opts)
    return {"module": M.to_json(), "describe": M.describe()}, {}, True


def cmd_ext(inst, opts):
    X, M = _two_modules(inst, opts)
    h, e = hom(X, M), ext1(X, M)
    hr, er = hom_via_resolution(X, M), ext1_via_resolution(X, M)
    ok = h == hr and e == er
    return ({"hom": h.to_json(), "ext1": e.to_json()},
            {"resolution_route": {"hom": hr.to_json(), "ext1": er.to_json()}, "routes_agree": ok}, ok)


def cmd_tensor(inst, opts):
    X, M = _two_modules(inst, opts)
    t, tr = tensor(X, M), tor1(X, M)
    tp, trp = tensor_via_presentation(X, M), tor1_via_resolution(X, M)
    ok = t == tp and tr == trp
    return ({"tensor": t.to_json(), "tor1": tr.to_json()},
            {"presentation_route": {"tensor": tp.to_json(), "tor1": trp.to_json()}, "routes_agree": ok}, ok)


def cmd_complete(inst, opts):
    M, I = _one_module(inst, opts), inst.ideal(opts.ideal)
    separated, kernel = is_separated(M, I)
    hat, tau = complete(M, I)
    lam0, lam1 = derived_completion(M, I)
    quotients = {str(a): verify_quotient_identity(M, I, a) for a in range(1, opts.depth + 1)}
    ok = all(quotients.values()) and lam0 == hat and lam1.is_zero()
    return ({"separated": separated, "kernel": kernel.to_json(), "completion": hat.to_json(),
             "tau": tau.to_json(), "derived_completion": {"lambda0": lam0.to_json(), "lambda1": lam1.to_json()}},
            {"quotient_identity": quotients, "lambda0_equals_completion": lam0 == hat}, ok)


def cmd_certify(inst, opts):
    M, I = _one_module(inst, opts), inst.ideal(opts.ideal)
    r = certify_equivalence(M, I, _system(inst, opts), opts.samples, opts.seed)
    data = r.to_json()
    certs = {k: data.pop(k) for k in ("cond_ii", "cond_iii", "cond_iv", "monotonicity")}
    certs["samples"] = opts.samples
    certs["seed"] = opts.seed
    return data, certs, r.consistent


def cmd_certify_single(inst, opts):
    M = _one_module(inst, opts)
    reports = [certify_single(M, x) for x in _system(inst, opts).elements]
    return {"elements": [r.to_json() for r in reports]}, {}, all(r.consistent for r in reports)


def cmd_lim(inst, opts):
    M, I = _one_module(inst, opts), inst.ideal(opts.ideal)
    towers = []
    for x in _system(inst, opts).elements:
        T = MultiplicationTower(M, x)
        towers.append({"tower": {"multiplication_by": M.ring.format(x)}, **limits_closed_form(T).to_json(),
                       "certificate": ml_certificate(T).to_json()})
    T = CompletionTower(M, I)
    towers.append({"tower": {"completion_at": M.ring.format(I.reduced)}, **limits_closed_form(T).to_json(),
                   "certificate": ml_certificate(T).to_json()})
    return {"towers": towers}, {}, True


def cmd_local_cohomology(inst, opts):
    M = _one_module(inst, opts)
    system = _system(inst, opts)
    verdict = local_cohomology(M, system)
    koszul = [H.to_json() for H in koszul_homology(system, [1] * system.r, M)]
    h0_k = h0_via_koszul(M, system)
    h0_t = torsion_by_kernels(M, system.reduced)
    cech = CechComplex(system).structural_checks()
    ok = h0_k == verdict.H0 and h0_t == verdict.H0 and all(v for k, v in cech.items() if k != "term_sizes")
    return (verdict.to_json(),
            {"koszul_homology_n1": koszul, "h0_via_koszul": h0_k.to_json(), "h0_via_kernels": h0_t.to_json(),
             "cech": cech}, ok)


def cmd_check_lemma_4_1(inst, opts):
    M = _one_module(inst, opts)
    reports = [check_localization_routes(x, M) for x in _system(inst, opts).elements]
    return {"checks": [r.to_json() for r in reports]}, {}, all(r.passed for r in reports)


def cmd_check_lemma_4_2(inst, opts):
    if len(opts.module) == 2:
        X, M = _two_modules(inst, opts)
        sources = [X]
    else:
        M = _one_module(inst, opts)
        sources = [FPModule.free(M.ring, 1)]
    I = inst.ideal(opts.ideal)
    sources += [SymbolicLocalization(M.ring, x) for x in _system(inst, opts).elements]
    reports = [check_completion_ext_limits(X, CompletionTower(M, I), opts.depth) for X in sources]
    return {"checks": [r.to_json() for r in reports]}, {"depth": opts.depth}, all(r.passed for r in reports)


def cmd_verify_3_1(inst, opts):
    M, I = _one_module(inst, opts), inst.ideal(opts.ideal)
    F = FlatTestModule.from_system(_system(inst, opts))
    r = verify_flat_vanishing(M, I, F, opts.depth)
    return {"flat_module": F.describe(), **r.to_json()}, {"depth": opts.depth}, r.passed


def cmd_verify_3_3(inst, opts):
    X, M = _two_modules(inst, opts)
    r = verify_torsion_transfer(X, M, inst.ideal(opts.ideal), opts.depth)
    return r, {}, r["passed"]


def cmd_oracle_crosscheck(inst, opts):
    M, I = _one_module(inst, opts), inst.ideal(opts.ideal)
    fmt = M.ring.format
    checks = []
    for x in _system(inst, opts).elements:
        checks.append({"tower": {"multiplication_by": fmt(x)}, **oracle_crosscheck(MultiplicationTower(M, x), opts.depth)})
    checks.append({"tower": {"completion_at": fmt(I.reduced)}, **oracle_crosscheck(CompletionTower(M, I), opts.depth)})
    return {"checks": checks}, {"depth": opts.depth}, all(c["agree"] for c in checks)


COMMANDS = {
    "snf": cmd_snf,
    "invariants": cmd_invariants,
    "ext": cmd_ext,
    "tensor": cmd_tensor,
    "complete": cmd_complete,
    "certify": cmd_certify,
    "certify-single": cmd_certify_single,
    "lim": cmd_lim,
    "local-cohomology": cmd_local_cohomology,
    "check-lemma-4-1": cmd_check_lemma_4_1,
    "check-lemma-4-2": cmd_check_lemma_4_2,
    "verify-3-1": cmd_verify_3_1,
    "verify-3-3": cmd_verify_3_3,
    "oracle-crosscheck": cmd_oracle_crosscheck,
}

INPUT_ERRORS = (InstanceError, UsageError, PreconditionError, ElementParseError, RingMismatchError,
                ModuleMapError, ValueError)


def run_command(cmd: str, inst: Instance | None, opts) -> tuple[dict, int]:
    """Run one command and return (report, exit code)."""
    report = {"command": cmd, "version": __version__, "truncation_depth": opts.depth, "timing": None,
              "instance_digest": inst.digest() if inst is not None else None}
    start = time.perf_counter()
    try:
        if cmd not in COMMANDS:
            raise UsageError(f"unknown command {cmd!r}")
        if inst is None:
            raise UsageError("an instance is required (-i)")
        if opts.depth < 2:
            raise UsageError("--depth must be at least 2")
        verdicts, certificates, passed = COMMANDS[cmd](inst, opts)
    except INPUT_ERRORS as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        report["status"] = "error"
        return report, EXIT_INPUT
    report.update(verdicts=verdicts, certificates=certificates, status="pass" if passed else "inconsistent")
    if getattr(opts, "timing", False):
        report["timing"] = {"milliseconds": int((time.perf_counter() - start) * 1000)}
    return report, EXIT_PASS if passed else EXIT_INCONSISTENT


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = []

    def walk(node, prefix):
        if isinstance(node, dict):
            for k in sorted(node):
                walk(node[k], f"{prefix}.{k}" if prefix else k)
        elif isinstance(node, list) and any(isinstance(v, (dict, list)) for v in node):
            for i, v in enumerate(node):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"{prefix}: {json.dumps(node, ensure_ascii=False)}")

    walk(report, "")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
    except UsageError as exc:
        print(f"adic: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if opts.command == "list-corpus":
        print("\n".join(bundled_names()))
        return EXIT_PASS
    inst = None
    if opts.instance and opts.command in COMMANDS:
        try:
            inst = load_instance(opts.instance)
        except InstanceError as exc:
            report = {"command": opts.command, "error": {"kind": "InstanceError", "message": str(exc)},
                      "status": "error", "version": __version__}
            _emit(report, opts)
            return EXIT_INPUT
    report, code = run_command(opts.command, inst, opts)
    _emit(report, opts)
    if code == EXIT_INPUT:
        print(f"adic: {report['error']['message']}", file=sys.stderr)
    return code


def _emit(report: dict, opts) -> None:
    text = render_json(report) if opts.format == "json" else render_text(report)
    if opts.out:
        Path(opts.out).write_text(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
