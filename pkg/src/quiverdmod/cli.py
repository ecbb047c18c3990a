"""Command-line front end.  Reports are JSON on stdout, diagnostics on stderr.

Exit codes: 0 computed and every asserted check passed, 1 a mathematical
check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from .arrangement import Arrangement, key_str, parse_key
from .dmod import (build_sections_model, check_d_squared, check_weyl_relations, expected_dims,
                   gr_model, koszul_differential, theta_spectrum)
from .jsonio import (InputError, arrangement_from_json, arrangement_to_json, dumps,
                     flag_bases_to_json, load_file, rep_from_json, rep_to_json, weights_from_json)
from .quiver import Rep, check_relations, dualize
from .specialize import specialize_along_flag
from .verma import FormulaReadingViolated, build_verma_at, flag_bases, verma_with_flags
from .weights import in_category, is_nonresonant, lambda_of_stratum

SCHEMA = "1"


class Failed(Exception):
    """A mathematical check failed; carries the report."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


def parse_chain(text: str) -> list[tuple[int, ...]]:
    """``"[0],[0,1]"`` -> ``[(0,), (0, 1)]``."""
    parts = re.findall(r"\[[^\]]*\]", text)
    if not parts or re.sub(r"\[[^\]]*\]|,|\s", "", text):
        raise InputError(f"cannot parse flat list {text!r}")
    return [parse_key(p) for p in parts]


def _flat(arr: Arrangement, text: str):
    try:
        k = parse_key(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if k not in arr.graph:
        raise InputError(f"unknown flat key {key_str(k)}")
    return k


class Job:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.arr = arrangement_from_json(load_file(args.arrangement))
        self._weights = None

    @property
    def weights(self):
        if self._weights is None:
            if not self.args.weights:
                raise InputError(f"{self.args.command} needs --weights")
            self._weights = weights_from_json(load_file(self.args.weights), self.arr)
        return self._weights

    def rep(self) -> Rep:
        """The rep given with --rep, or the Verma quiver of --weights."""
        if getattr(self.args, "rep", None):
            return rep_from_json(load_file(self.args.rep), self.arr.graph)
        if self.args.weights:
            return verma_with_flags(self.arr, self.weights)[0]
        raise InputError(f"{self.args.command} needs --rep or --weights")


def _poset(job: Job) -> dict:
    g = job.arr.graph
    return {"vertices": [{"key": list(v), "codim": g.codim[v], "dim": g.flat(v).dim} for v in g.vertices],
            "arrows": [[list(a), list(b)] for a, b in g.arrows]}


def _verma(job: Job) -> dict:
    if job.args.at:
        rep = build_verma_at(job.arr, job.weights, _flat(job.arr, job.args.at))
        out = {"rep": rep_to_json(rep)}
    else:
        rep, spaces = verma_with_flags(job.arr, job.weights)
        out = {"rep": rep_to_json(rep), **flag_bases_to_json(flag_bases(spaces))}
    out["dims"] = {key_str(v): d for v, d in rep.dims.items()}
    return out


def _check(job: Job) -> dict:
    rep = job.rep()
    report = check_relations(rep).to_json()
    if not report["passed"]:
        raise Failed(report)
    return report


def _dual(job: Job) -> dict:
    rep = job.rep()
    dual = dualize(rep)
    out = {"rep": rep_to_json(dual), "involution": dualize(dual) == rep,
           "relations": check_relations(dual).to_json()}
    out["passed"] = out["involution"] and out["relations"]["passed"] == check_relations(rep).passed
    if not out["passed"]:
        raise Failed(out)
    return out


def _nonres(job: Job) -> dict:
    ok, witnesses = is_nonresonant(job.arr, job.weights, strict=job.args.strict)
    out = {"passed": ok, "witnesses": witnesses}
    if not ok:
        raise Failed(out)
    return out


def _incat(job: Job) -> dict:
    rep = job.rep()
    rel = check_relations(rep)
    if not rel.passed:
        raise Failed({"passed": False, "relations": rel.to_json()})
    ok = in_category(rep, job.arr, job.weights)
    out = {"passed": ok}
    if not ok:
        raise Failed(out)
    return out


def _specialize(job: Job) -> dict:
    chain = parse_chain(job.args.flat)
    for k in chain:
        _flat(job.arr, key_str(k))
    rep = job.rep()
    try:
        res = specialize_along_flag(rep, job.arr, chain)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rel = check_relations(res.rep).to_json()
    out = {"arrangement": arrangement_to_json(res.t_arrangement), "rep": rep_to_json(res.rep),
           "block_map": {key_str(v): [{"source": list(b), "offset": off} for b, off in blocks]
                         for v, blocks in res.block_map.items()},
           "relations": rel}
    if not rel["passed"] and check_relations(rep).passed:
        raise Failed(out)
    return out


def _koszul(job: Job) -> dict:
    rep = job.rep()
    cx = koszul_differential(rep, job.arr)
    report = check_d_squared(cx).to_json()
    report["generators"] = {str(k): len(v) for k, v in cx.gens.items()}
    report["max_order"] = cx.max_order()
    if not report["passed"]:
        raise Failed(report)
    return report


def _model(job: Job) -> dict:
    rep = job.rep()
    rel = check_relations(rep)
    if not rel.passed:
        raise Failed({"passed": False, "relations": rel.to_json()})
    model = build_sections_model(rep, job.arr, job.args.cutoff)
    weyl = check_weyl_relations(model).to_json()
    dims = model.dims()
    expected = expected_dims(rep, job.arr.dim, job.args.cutoff)
    out = {"cutoff": job.args.cutoff, "checked_up_to": max(job.args.cutoff - 2, 0),
           "dims": {str(k): v for k, v in dims.items()},
           "expected_dims": {str(k): v for k, v in expected.items()},
           "weyl_relations": weyl}
    out["passed"] = weyl["passed"] and dims == expected
    if not out["passed"]:
        raise Failed(out)
    return out


def _charts_report(gr) -> list:
    out = []
    for centre, res in gr.charts:
        out.append({"centre": None if centre is None else list(centre),
                    "slices": [{"k": k, "degree": p, "dim": n} for (k, p), n in res.slice_dims().items()],
                    "good_filtration": res.good.to_json(),
                    "comparison": res.comparison.to_json()})
    return out


def _grcheck(job: Job) -> dict:
    alpha = _flat(job.arr, job.args.flat)
    rep = job.rep()
    gr = gr_model(rep, job.arr, alpha, job.args.cutoff)
    out = {"flat": list(alpha), "cutoff": job.args.cutoff, "charts": _charts_report(gr), "passed": gr.passed}
    if not gr.passed:
        raise Failed(out)
    return out


def _theta(job: Job) -> dict:
    alpha = _flat(job.arr, job.args.flat)
    rep = job.rep()
    gr = gr_model(rep, job.arr, alpha, job.args.cutoff)
    lam = lambda_of_stratum(job.arr, job.weights, alpha) if job.args.weights else None
    slices, ok = [], True
    for s in theta_spectrum(gr, kmax=job.args.kmax):
        entry = {"centre": None if s.centre is None else list(s.centre), "k": s.k, "dim": s.dim,
                 "eigenvalue": s.eigenvalue, "nilpotent": s.nilpotent, "invariant": s.invariant}
        good = s.passed
        if lam is not None:
            entry["expected"] = lam + s.k
            good = good and s.eigenvalue == lam + s.k
        entry["passed"] = good
        ok = ok and good
        slices.append(entry)
    out = {"flat": list(alpha), "cutoff": job.args.cutoff, "lambda_alpha": lam, "slices": slices, "passed": ok}
    if not ok:
        raise Failed(out)
    return out


COMMANDS = {
    "poset": _poset, "verma": _verma, "check": _check, "dual": _dual, "nonres": _nonres,
    "incat": _incat, "specialize": _specialize, "koszul": _koszul, "model": _model,
    "grcheck": _grcheck, "theta": _theta,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiverdmod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--arrangement", "-a", required=True, help="arrangement JSON file")
        s.add_argument("--weights", "-w", help="weights JSON file")
        if name not in ("poset", "verma", "nonres"):
            s.add_argument("--rep", "-r", help="rep JSON file (default: Verma quiver of --weights)")
        if name == "verma":
            s.add_argument("--at", help="flat key, e.g. [0,2]")
        if name == "nonres":
            s.add_argument("--strict", action="store_true", help="forbid equal arrow weights too")
        if name == "specialize":
            s.add_argument("--flat", required=True, help="flat key or nested list, e.g. [0],[0,1]")
        if name in ("model", "grcheck", "theta"):
            s.add_argument("--cutoff", type=int, default=6)
        if name in ("grcheck", "theta"):
            s.add_argument("--flat", required=True)
        if name == "theta":
            s.add_argument("--kmax", type=int, default=4)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    header = {"schema": SCHEMA, "command": args.command}
    try:
        if getattr(args, "cutoff", 6) < 0:
            raise InputError("cutoff must be non-negative")
        job = Job(args)
        report = COMMANDS[args.command](job)
        code = 0
    except Failed as exc:
        report, code = exc.report, 1
    except FormulaReadingViolated as exc:
        report, code = {"passed": False, "error": str(exc)}, 1
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps({**header, **report}) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
