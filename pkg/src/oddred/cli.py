"""Command-line interface: one binary, JSON reports on stdout, a summary on stderr.

Exit codes: 0 success, 1 certification failure, 2 no odd-red perfect
matching, 3 no perfect matching, 64 usage error, 65 bad input data.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import serialize as ser
from .errors import CertificationError, InputError, SizeLimitError, ValidityError
from .graphs import RedBlueGraph, complete_graph, norm_edge

EXIT_OK = 0
EXIT_CERT = 1
EXIT_NO_ODD_RED = 2
EXIT_NO_PM = 3
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandReport:
    command: str
    inputs_digest: str
    outcome: str
    payload: dict = field(default_factory=dict)
    seed: Optional[int] = None
    wall_time: float = 0.0

    def to_json(self) -> dict:
        # wall time stays out so identical inputs give byte-identical reports
        out = {"command": self.command, "inputs_digest": self.inputs_digest,
               "outcome": self.outcome, "payload": self.payload}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@dataclass
class _Result:
    outcome: str
    payload: dict
    code: int = EXIT_OK
    artifact: Optional[dict] = None
    seed: Optional[int] = None


# ---------------------------------------------------------------- inputs

def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _unwrap(data, key):
    if isinstance(data, dict) and key in data and isinstance(data[key], dict):
        return data[key]
    return data


def _load_graph(path: str):
    return ser.graph_from_json(_unwrap(_read_json(path), "graph"))


def _load_redblue(path: str) -> RedBlueGraph:
    g = _load_graph(path)
    if not isinstance(g, RedBlueGraph):
        raise InputError("this command needs a bipartite red-blue graph (with a bipartition)")
    return g


def _spec(args):
    from .oddcycle import CInducedSpec

    if args.n is None:
        raise UsageError("--n is required")
    if args.cycle is None:
        return CInducedSpec.standard(args.n)
    try:
        cyc = tuple(int(v) for v in args.cycle.split(","))
    except ValueError as exc:
        raise UsageError(f"--cycle must be comma-separated integers, got {args.cycle!r}") from exc
    return CInducedSpec(args.n, cyc)


def _load_constraint(path: str):
    return ser.constraint_from_json(_unwrap(_read_json(path), "constraint"))


# ---------------------------------------------------------------- handlers

def _facet_build(args) -> _Result:
    from .oddcycle import build_c_induced

    spec = _spec(args)
    c = build_c_induced(spec)
    cj = ser.constraint_to_json(c)
    payload = {"n": spec.n, "k": spec.k, "cycle": list(spec.cycle), "s": spec.s, "t": spec.t,
               "constraint": cj, "distinct_coefficients": [ser.q_str(a) for a in sorted(set(c.coeffs))]}
    return _Result("built", payload, artifact=cj)


def _facet_certify(args) -> _Result:
    from .oddcycle import build_c_induced, certify_dominant_facet

    spec = _spec(args)
    c = _load_constraint(args.constraint) if args.constraint else build_c_induced(spec)
    try:
        cert = certify_dominant_facet(spec, c)
    except ValidityError as exc:
        return _Result("invalid", {"error": str(exc), "witness": ser.to_jsonable(exc.witness)}, EXIT_CERT)
    except CertificationError as exc:
        return _Result("not_facet", {"error": str(exc), "polytope_dim": exc.polytope_dim,
                                     "face_dim": exc.face_dim, "rank": exc.rank}, EXIT_CERT)
    cj = ser.certificate_to_json(cert)
    return _Result("certified", {"n": spec.n, "cycle": list(spec.cycle), "certificate": cj}, artifact=cj)


def _source_and_transform(args):
    """(spec or None, base constraint or None, transformed constraint, context)."""
    from .oddcycle import build_c_induced
    from .transfer import TransferContext, canonical_transform

    spec = _spec(args) if args.n is not None else None
    if args.constraint:
        c = _load_constraint(args.constraint)
        n = spec.n if spec else max(max(e) for e in c.edges) + 1
        base = complete_graph(n)
        if set(c.edges) == set(base.edges):
            ctx = TransferContext(base)
            return spec, c, canonical_transform(c, ctx), ctx
        if n % 2 == 0:
            ctx = TransferContext(complete_graph(n // 2))
            if set(c.edges) == set(ctx.doubled.edges):
                return spec, None, c, ctx
        raise InputError("constraint is over neither K_n nor its double")
    if spec is None:
        raise UsageError("give --n (and optionally --cycle) or --constraint")
    ctx = TransferContext(complete_graph(spec.n))
    c = build_c_induced(spec)
    return spec, c, canonical_transform(c, ctx), ctx


def _transfer_canonical(args) -> _Result:
    spec, c, t, ctx = _source_and_transform(args)
    if c is None:
        raise InputError("canonical needs a constraint over K_n")
    tj = ser.constraint_to_json(t)
    return _Result("transformed", {"n": ctx.n, "source": ser.constraint_to_json(c), "transform": tj}, artifact=tj)


def _transfer_certify(args) -> _Result:
    from .transfer import certify_matching_facet, check_hypotheses, expected_dimension

    spec, c, t, ctx = _source_and_transform(args)
    hyp = None
    if c is not None and spec is not None:
        hyp = check_hypotheses(ctx.base, c, ctx.base.delta([spec.s]))
    payload = {"n": ctx.n, "expected_dim": expected_dimension(ctx.doubled)}
    if hyp is not None:
        payload["hypotheses"] = {"seed": ser.to_jsonable(hyp.seed), "expressing": hyp.expressing,
                                 "slack_witness": ser.to_jsonable(hyp.slack_witness), "hold": hyp.hold}
    try:
        cert = certify_matching_facet(ctx, t, source=c)
    except ValidityError as exc:
        payload.update(error=str(exc), witness=ser.to_jsonable(exc.witness))
        return _Result("invalid", payload, EXIT_CERT)
    except CertificationError as exc:
        payload.update(error=str(exc), polytope_dim=exc.polytope_dim, face_dim=exc.face_dim)
        return _Result("not_facet", payload, EXIT_CERT)
    payload["certificate"] = ser.certificate_to_json(cert)
    return _Result("certified", payload, artifact=payload["certificate"])


def _complexity_check(args) -> _Result:
    from .complexity import bounds_hold, check_complexity_bounds, random_integral_image, to_matrix

    spec, _, t, ctx = _source_and_transform(args)
    m = to_matrix(t, ctx)
    n = ctx.n
    report = check_complexity_bounds(m, n)
    payload = {"n": n, "matrix": report.as_dict()}
    code = EXIT_OK if report.lower_bounds_ok else EXIT_CERT
    if args.samples:
        rng = np.random.default_rng(args.seed)
        a = m.as_int_array()
        violations = 0
        for _ in range(args.samples):
            img = random_integral_image(a, rng, spread=n)
            ok_max, ok_d = bounds_hold(int(np.abs(img).max()), len(np.unique(img)), n)
            violations += not (ok_max and ok_d)
        payload["samples"] = {"count": args.samples, "violations": violations}
        if violations:
            code = EXIT_CERT
    return _Result("ok" if code == EXIT_OK else "bound_violated", payload, code, seed=args.seed)


def _complexity_reduce(args) -> _Result:
    from .complexity import (apply_mu_lambda, apply_to_constraint, bound_expression, build_low_complexity_lambda,
                             count_distinct, matrix_to_csv, root_parameters, same_face_check, to_matrix)

    spec, c, t, ctx = _source_and_transform(args)
    if spec is None:
        raise UsageError("reduce needs --n and optionally --cycle")
    tl = build_low_complexity_lambda(spec.n, spec)
    m = apply_mu_lambda(to_matrix(t, ctx), tl)
    reduced = apply_to_constraint(t, tl, ctx)
    bound = bound_expression(spec.n)
    count = count_distinct(m)
    m1, m2 = root_parameters(spec.n)
    payload = {"n": spec.n, "m1": m1, "m2": m2, "mu": ser.q_str(tl.mu), "lambda": [ser.q_str(v) for v in tl.lam],
               "distinct": count, "distinct_off_diagonal": count_distinct(m, False),
               "original_distinct": count_distinct(to_matrix(t, ctx)), "bound": ser.q_str(bound),
               "within_bound": count <= bound, "matrix_csv": matrix_to_csv(m)}
    if spec.n <= args.face_check_max:
        payload["same_face"] = same_face_check(t, reduced, ctx)
    ok = payload["within_bound"] and payload.get("same_face", True)
    return _Result("ok" if ok else "bound_violated", payload, EXIT_OK if ok else EXIT_CERT,
                   artifact=ser.constraint_to_json(reduced))


def _complexity_search(args) -> _Result:
    from .complexity import search, to_matrix

    _, _, t, ctx = _source_and_transform(args)
    res = search(to_matrix(t, ctx), bound=args.bound, iterations=args.iterations, seed=args.seed)
    res["note"] = "exploratory heuristic; the minimum found carries no optimality claim"
    return _Result("searched", ser.to_jsonable(res), seed=args.seed)


def _membership_payload(res) -> tuple[str, dict]:
    from .labels import DegreeViolation, Inside, LabelViolation, NegativeEntry

    if isinstance(res, Inside):
        return "inside", {"min_label_value": ser.q_str(res.min_label_value),
                          "argmin_labeling": res.argmin.bits if res.argmin else None}
    if isinstance(res, LabelViolation):
        return "label_violation", {"labeling": res.labeling.bits, "value": ser.q_str(res.value)}
    if isinstance(res, DegreeViolation):
        return "degree_violation", {"vertex": res.vertex, "value": ser.q_str(res.value)}
    if isinstance(res, NegativeEntry):
        return "negative_entry", {"edge": list(res.edge), "value": ser.q_str(res.value)}
    raise TypeError(res)


def _label_membership(args) -> _Result:
    from .labels import q_membership

    h = _load_redblue(args.graph)
    x = ser.point_from_json(_unwrap(_read_json(args.point), "point"), h.edges)
    outcome, payload = _membership_payload(q_membership(h, x, threads=args.threads))
    return _Result(outcome, payload)


def _label_counterexample(args) -> _Result:
    from .graphs import enumerate_odd_red_perfect_matchings
    from .labels import build_counterexample, q_membership
    from .polyhedra import Inside, conv_membership

    h, y = build_counterexample()
    payload = {"graph": ser.graph_to_json(h), "point": ser.point_to_json(h.edges, y)}
    artifact = dict(payload)
    if not args.verify:
        return _Result("built", payload, artifact=artifact)
    outcome, mem = _membership_payload(q_membership(h, y, threads=args.threads))
    pms = enumerate_odd_red_perfect_matchings(h)
    res = conv_membership([m.incidence(h.graph) for m in pms], y, h.edges)
    e = norm_edge(2, 6)
    payload.update({
        "labelings": 1 << (h.n - 1),
        "y_in_Q": outcome == "inside",
        "q_membership": mem,
        "odd_red_matchings": len(pms),
        "y_in_P": isinstance(res, Inside),
        "separator": None if isinstance(res, Inside) else ser.constraint_to_json(res.separator),
        "edge_v3_v7_in_some_odd_red_pm": any(e in m.edges for m in pms),
    })
    ok = payload["y_in_Q"] and not payload["y_in_P"] and not payload["edge_v3_v7_in_some_odd_red_pm"]
    return _Result("verified" if ok else "mismatch", payload, EXIT_OK if ok else EXIT_CERT, artifact=artifact)


def _reduce_maxcut(args) -> _Result:
    from .labels import brute_force_max_cut, q_membership, reduce_maxcut_to_separation

    g = _load_graph(args.graph)
    if isinstance(g, RedBlueGraph):
        g = g.graph
    if args.k is None:
        raise UsageError("--k is required")
    inst = reduce_maxcut_to_separation(g, args.k)
    artifact = {"graph": ser.graph_to_json(inst.graph), "point": ser.point_to_json(inst.graph.edges, inst.x),
                "alpha": ser.q_str(inst.alpha), "k": inst.k}
    payload = dict(artifact)
    if not args.verify:
        return _Result("reduced", payload, artifact=artifact)
    outcome, mem = _membership_payload(q_membership(inst.graph, inst.x, threads=args.threads))
    mc = brute_force_max_cut(g)
    agree = (outcome == "label_violation") == (mc >= args.k)
    payload.update(membership=outcome, membership_detail=mem, max_cut=mc, agree=agree)
    return _Result("agree" if agree else "mismatch", payload, EXIT_OK if agree else EXIT_CERT, artifact=artifact)


def _bimodular_build(args) -> _Result:
    from .bimodular import build_bimodular_system

    s = build_bimodular_system(_load_redblue(args.graph))
    sj = s.to_json()
    return _Result("built", {"shape": list(s.shape), "system": sj}, artifact=sj)


def _bimodular_check(args) -> _Result:
    from .bimodular import BimodularSystem, build_bimodular_system, check_bimodularity

    if args.system:
        s = BimodularSystem.from_json(_unwrap(_read_json(args.system), "system"))
    elif args.graph:
        s = build_bimodular_system(_load_redblue(args.graph))
    else:
        raise UsageError("give --graph or --system")
    rep = check_bimodularity(s, args.cap)
    return _Result("bimodular" if rep.ok else "violations", rep.as_dict(), EXIT_OK if rep.ok else EXIT_CERT)


def _bimodular_translate(args) -> _Result:
    from .bimodular import translate_facet

    h = _load_redblue(args.graph)
    a = ser.point_from_json(_unwrap(_read_json(args.coeffs), "point"), h.edges)
    t = translate_facet(a, ser.q_parse(args.c), ser.q_parse(args.b), h)
    tj = ser.constraint_to_json(t)
    return _Result("translated", {"constraint": tj}, artifact=tj)


def _solve(args) -> _Result:
    from .solver import FOUND, NO_ODD_RED_PM, solve_odd_red_pm

    h = _load_redblue(args.graph)
    res = solve_odd_red_pm(h)
    payload = {"iterations": res.iterations,
               "matching": [list(e) for e in res.matching.edges] if res.matching else None,
               "red_count": res.matching.red_count(h) if res.matching else None}
    code = {FOUND: EXIT_OK, NO_ODD_RED_PM: EXIT_NO_ODD_RED}.get(res.outcome, EXIT_NO_PM)
    return _Result(res.outcome, payload, code, artifact=payload if res.matching else None)


# ---------------------------------------------------------------- parser

def _add_common(p, *, n=False, graph=False, seed=False):
    if n:
        p.add_argument("--n", type=int)
        p.add_argument("--cycle", help="comma-separated (n-2)-cycle, default 0,1,...,n-3")
        p.add_argument("--constraint", help="constraint JSON file")
    if graph:
        p.add_argument("--graph", required=True, help="graph JSON file")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="also write the command's artifact JSON here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oddred", description="Odd-red matching polytopes: exact certificates.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    facet = top.add_parser("facet").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = facet.add_parser("build-c-induced")
    _add_common(p, n=True)
    p.set_defaults(func=_facet_build)
    p = facet.add_parser("certify-dominant")
    _add_common(p, n=True)
    p.set_defaults(func=_facet_certify)

    transfer = top.add_parser("transfer").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = transfer.add_parser("canonical")
    _add_common(p, n=True)
    p.set_defaults(func=_transfer_canonical)
    p = transfer.add_parser("certify")
    _add_common(p, n=True)
    p.set_defaults(func=_transfer_certify)

    cx = top.add_parser("complexity").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = cx.add_parser("check")
    _add_common(p, n=True, seed=True)
    p.add_argument("--samples", type=int, default=0, help="random integral images to test")
    p.set_defaults(func=_complexity_check)
    p = cx.add_parser("reduce")
    _add_common(p, n=True)
    p.add_argument("--face-check-max", type=int, default=7, help="largest n for the same-face enumeration")
    p.set_defaults(func=_complexity_reduce)
    p = cx.add_parser("search")
    _add_common(p, n=True, seed=True)
    p.add_argument("--iterations", type=int, default=2000)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=_complexity_search)

    label = top.add_parser("label").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = label.add_parser("membership")
    _add_common(p, graph=True)
    p.add_argument("--point", required=True, help="point JSON file")
    p.set_defaults(func=_label_membership)
    p = label.add_parser("counterexample")
    _add_common(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=_label_counterexample)

    red = top.add_parser("reduce").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = red.add_parser("maxcut")
    _add_common(p, graph=True)
    p.add_argument("--k", type=int)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=_reduce_maxcut)

    bim = top.add_parser("bimodular").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = bim.add_parser("build")
    _add_common(p, graph=True)
    p.set_defaults(func=_bimodular_build)
    p = bim.add_parser("check")
    p.add_argument("--graph")
    p.add_argument("--system")
    p.add_argument("--cap", type=int, default=20)
    _add_common(p)
    p.set_defaults(func=_bimodular_check)
    p = bim.add_parser("translate")
    _add_common(p, graph=True)
    p.add_argument("--coeffs", required=True, help="point JSON file holding the edge coefficients")
    p.add_argument("--c", default="0")
    p.add_argument("--b", default="0")
    p.set_defaults(func=_bimodular_translate)

    p = top.add_parser("solve")
    _add_common(p, graph=True)
    p.set_defaults(func=_solve)
    return parser


def _digest(args, argv) -> str:
    skip = {"func", "threads", "out"}
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    for key in ("graph", "point", "constraint", "system", "coeffs"):
        path = inputs.get(key)
        if isinstance(path, str):
            try:
                inputs[key] = _read_json(path)
            except InputError:
                pass
    blob = json.dumps(inputs, sort_keys=True, default=str).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def run(argv) -> tuple[CommandReport, int]:
    argv = list(argv)
    start = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return CommandReport(" ".join(argv[:2]), "", "usage_error", {"error": str(exc)}), EXIT_USAGE
    except SystemExit as exc:  # --help
        return CommandReport("help", "", "help", {}), int(exc.code or 0)
    name = args.group if args.group == "solve" else f"{args.group} {args.action}"
    digest = _digest(args, argv)
    try:
        res = args.func(args)
    except UsageError as exc:
        res = _Result("usage_error", {"error": str(exc)}, EXIT_USAGE)
    except (InputError, SizeLimitError) as exc:
        res = _Result("data_error", {"error": str(exc)}, EXIT_DATA)
    except (ValidityError, CertificationError) as exc:
        res = _Result("certification_failed", {"error": str(exc)}, EXIT_CERT)
    if res.artifact is not None and getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(ser.dumps(res.artifact) + "\n")
        except OSError as exc:
            res = _Result("data_error", {"error": f"cannot write {args.out}: {exc.strerror}"}, EXIT_DATA)
    report = CommandReport(name, digest, res.outcome, ser.to_jsonable(res.payload), res.seed,
                           time.perf_counter() - start)
    return report, res.code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    if report.outcome == "help":
        return code
    sys.stdout.write(ser.dumps(report.to_json()) + "\n")
    sys.stderr.write(f"oddred {report.command}: {report.outcome} (exit {code}) in {report.wall_time:.2f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
