"""Command-line interface.

Subcommands: fixedpoint, bound, simulate, couple, influence, verify,
demo, init.  Every stochastic subcommand requires --seed and produces
byte-identical CSV for identical configuration.  Exit codes: 0 success
(including inconclusive-with-warning), 1 usage or configuration error,
2 bound violation, 3 hypothesis failure.

CSV goes to --output, or to <subcommand>.csv under $GIBBSBOUND_OUTDIR
(default: the working directory); the human-readable summary goes to
stdout.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bounds import edge_density, hom_density
from .dynamics import (
    ChainState,
    CouplingPair,
    burn_in_default,
    glauber_step,
    greedy_coupled_step,
    influence_matrix,
)
from .errors import CapacityError, HypothesisFailure, NoContractionError
from .graphs import parse_motif
from .harness import florentine_demo, resolve_report, verify_bound
from .meanfield import PhiPoly, finite_n_fixed_points, solve_fixed_points
from .models import ErgmModel, IsingModel
from .modelspec import TEMPLATES, load_model, template_text

__all__ = ["main", "dispatch"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_HYPOTHESIS = 3


def _out_path(args, default_name):
    if args.output:
        return args.output
    base = os.environ.get("GIBBSBOUND_OUTDIR", ".")
    return os.path.join(base, default_name)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


class UsageError(Exception):
    """Configuration or argument problem; maps to exit code 1."""


def _load(args):
    try:
        return load_model(args.model)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load model file {args.model!r}: {exc}")


def _pick_root(roots, args):
    if len(roots) == 1:
        return roots[0]
    idx = getattr(args, "root", None)
    if idx is None:
        raise UsageError(
            f"{len(roots)} fixed points found; pass --root INDEX to choose one")
    if not 0 <= idx < len(roots):
        raise UsageError(f"--root {idx} out of range [0, {len(roots)})")
    return roots[idx]


def _test_function(model, name):
    if name in (None, "edge", "edge_density"):
        return edge_density(model.size)
    if name.startswith("csv:"):
        from .bounds import linear_from_csv
        try:
            return linear_from_csv(name[4:], model.size)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot load test function {name!r}: {exc}")
    if isinstance(model, IsingModel):
        raise UsageError("Ising models take the coordinate density or csv:PATH")
    try:
        motif = parse_motif(name)
    except ValueError as exc:
        raise UsageError(f"unknown test function {name!r}: {exc}")
    return hom_density(motif, model.n)


def _initial_bits(model, kind, rng):
    N = model.size
    if kind == "empty":
        return np.zeros(N, dtype=np.uint8)
    if kind == "complete":
        return np.ones(N, dtype=np.uint8)
    if kind == "random":
        return (rng.random(N) < 0.5).astype(np.uint8)
    raise UsageError(f"unknown initial state {kind!r}")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_fixedpoint(args):
    model = _load(args)
    if isinstance(model, IsingModel):
        raise UsageError("fixedpoint operates on ergm model files")
    roots = solve_fixed_points(PhiPoly.from_model(model), grid=args.grid,
                               tol=args.tol)
    rows = [(k, fp.a_star, fp.phi_prime, int(fp.stable), int(fp.marginal),
             int(fp.unique)) for k, fp in enumerate(roots)]
    path = _write_csv(_out_path(args, "fixedpoint.csv"),
                      ["root", "a_star", "phi_prime", "stable", "marginal",
                       "unique"], rows)
    for k, fp in enumerate(roots):
        flag = "stable" if fp.stable else ("marginal" if fp.marginal else "unstable")
        print(f"root {k}: a* = {fp.a_star:.12g} phi' = {fp.phi_prime:.12g} [{flag}]")
    print(f"wrote {path}")
    return EXIT_OK


def _ergm_root(model, args):
    if getattr(args, "finite_n_root", False):
        roots = finite_n_fixed_points(model)
    else:
        roots = solve_fixed_points(PhiPoly.from_model(model))
    return _pick_root(roots, args)


def _cmd_bound(args):
    model = _load(args)
    h = _test_function(model, args.test_function)
    fp = None
    if isinstance(model, ErgmModel):
        fp = _ergm_root(model, args)
    report = resolve_report(model, fp, h, args.theorem, seed=args.seed)
    total = report.value if report.constants.get("includes_test_function") \
        else report.value * h.delta_norm
    rows = [(args.theorem, int(report.hypotheses_ok), report.value,
             h.label or h.kind, h.delta_norm, total,
             ";".join(f"{k}={v:.12g}" for k, v in sorted(report.constants.items())
                      if isinstance(v, (int, float)) and not isinstance(v, bool)))]
    path = _write_csv(_out_path(args, "bound.csv"),
                      ["theorem", "hypotheses_ok", "value", "test_function",
                       "delta_norm", "value_times_delta_norm", "constants"], rows)
    print(f"theorem {args.theorem}: hypotheses "
          f"{'PASS' if report.hypotheses_ok else 'FAIL'}")
    for k, v in sorted(report.constants.items()):
        print(f"  {k} = {v}")
    for note in report.notes:
        print(f"  note: {note}")
    if report.hypotheses_ok:
        print(f"bound / ||Delta h|| = {report.value:.12g}")
        print(f"bound for {h.label or h.kind} = {total:.12g}")
    else:
        print("bound = not applicable")
    print(f"wrote {path}")
    return EXIT_OK if report.hypotheses_ok else EXIT_HYPOTHESIS


def _cmd_simulate(args):
    model = _load(args)
    rng = np.random.default_rng(args.seed)
    state = ChainState.start(model, x0=_initial_bits(model, args.init, rng),
                             rng=rng)
    burn = args.burn_in if args.burn_in is not None else burn_in_default(model)
    thin = args.thin if args.thin is not None else model.size
    for _ in range(burn):
        glauber_step(model, state)
    motif_cols = []
    if isinstance(model, ErgmModel):
        motif_cols = [(str(m) or f"motif{k}", hom_density(m, model.n))
                      for k, (m, _b) in enumerate(model.terms)]
    rows = []
    for k in range(args.steps):
        for _ in range(thin):
            glauber_step(model, state)
        row = [k, float(state.x.mean())]
        row += [h(state.x) for _name, h in motif_cols]
        rows.append(row)
    header = ["sample", "density"] + [name for name, _h in motif_cols]
    path = _write_csv(_out_path(args, "simulate.csv"), header, rows)
    dens = np.array([r[1] for r in rows])
    print(f"{args.steps} samples after {burn} burn-in steps, thinning {thin}")
    print(f"mean density {dens.mean():.6f} (sd {dens.std(ddof=1):.6f})")
    print(f"wrote {path}")
    return EXIT_OK


def _run_coupling(model, bits, coord, steps, seed):
    pair = CouplingPair.adjacent(model, bits, coord, seed=seed)
    out = [(0, pair.hamming())]
    for k in range(1, steps + 1):
        greedy_coupled_step(model, pair)
        out.append((k, pair.hamming()))
    return out


def _cmd_couple(args):
    model = _load(args)
    rng = np.random.default_rng(args.seed)
    base = _initial_bits(model, args.init, rng)
    coord = int(rng.integers(model.size))
    seeds = np.random.SeedSequence(args.seed).spawn(args.replicas)
    def one(k):
        srng = np.random.default_rng(seeds[k])
        bits = base if args.replicas == 1 else \
            (srng.random(model.size) < 0.5).astype(np.uint8)
        c = coord if args.replicas == 1 else int(srng.integers(model.size))
        return _run_coupling(model, bits, c, args.steps, seeds[k].spawn(1)[0])
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        results = list(pool.map(one, range(args.replicas)))
    rows = [(rep, step, d) for rep, series in enumerate(results)
            for step, d in series]
    path = _write_csv(_out_path(args, "couple.csv"),
                      ["replica", "step", "hamming"], rows)
    finals = [series[-1][1] for series in results]
    coalesced = sum(1 for d in finals if d == 0)
    print(f"{args.replicas} coupling(s), {args.steps} steps each; "
          f"{coalesced} coalesced; mean final distance "
          f"{float(np.mean(finals)):.4f}")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_influence(args):
    model = _load(args)
    mat = influence_matrix(model, kind=args.kind)
    rows = [(r, s, float(mat.entries[r, s]))
            for r in range(model.size) for s in range(model.size)
            if mat.entries[r, s] != 0.0]
    path = _write_csv(_out_path(args, "influence.csv"),
                      ["row", "col", "value"], rows)
    print(f"influence matrix ({mat.kind}), N = {model.size}")
    for p in (1, 2, math.inf):
        norm = mat.norm(p)
        label = {1: "1", 2: "2", math.inf: "inf"}[p]
        status = "contraction" if norm < 1 else "no contraction"
        print(f"  ||R||_{label} = {norm:.8f}  ({status})")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_verify(args):
    model = _load(args)
    h = _test_function(model, args.test_function)
    fp = None
    if isinstance(model, ErgmModel):
        fp = _ergm_root(model, args)
    run = verify_bound(model, fp, h, args.theorem, budget=args.budget,
                       seed=args.seed)
    rows = [(run.theorem, run.h_label, run.bound_value, run.gap,
             run.half_width, int(run.exact), run.verdict,
             run.details["E_h_model"], run.details["E_h_reference"])]
    path = _write_csv(_out_path(args, "verify.csv"),
                      ["theorem", "test_function", "bound", "gap",
                       "half_width", "exact", "verdict", "E_h_model",
                       "E_h_reference"], rows)
    mode = "exact enumeration" if run.exact else "MCMC/iid estimation"
    print(f"theorem {run.theorem} on {run.h_label} via {mode}")
    print(f"  |E h(X) - E h(Z)| = {run.gap:.6g} (99% half-width {run.half_width:.3g})")
    print(f"  bound             = {run.bound_value:.6g}")
    print(f"  verdict: {run.verdict}")
    if run.verdict == "inconclusive":
        print("  warning: estimate within noise of the bound; raise --budget")
    print(f"wrote {path}")
    if run.verdict == "bound_violated_within_ci":
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_demo(args):
    if args.what != "florentine":
        raise UsageError(f"unknown demo {args.what!r}")
    print(florentine_demo())
    return EXIT_OK


def _cmd_init(args):
    text = template_text(args.kind)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote template {args.kind!r} to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gibbsbound",
        description="Wasserstein bounds between Gibbs measures and product "
                    "laws, with Glauber-dynamics verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed_required=False):
        p.add_argument("--model", required=True, help="model file (TOML)")
        p.add_argument("--output", help="CSV output path")
        p.add_argument("--seed", type=int, required=seed_required,
                       help="RNG seed (required for stochastic subcommands)")
        p.add_argument("--threads", type=int, default=os.cpu_count(),
                       help="worker threads (results do not depend on this)")

    p = sub.add_parser("fixedpoint", help="roots of phi(a) = a with stability")
    add_common(p)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(handler=_cmd_fixedpoint)

    p = sub.add_parser("bound", help="evaluate a bound and its hypotheses")
    add_common(p)
    p.add_argument("--theorem", required=True,
                   choices=["key1", "ising_cwbd", "smallbetas", "negbetas",
                            "twostar", "triangle", "key_pnorm"])
    p.add_argument("--test-function", dest="test_function",
                   help="edge | twostar | triangle | 'v=..; edges=..' | csv:PATH")
    p.add_argument("--root", type=int, help="fixed-point index when several exist")
    p.add_argument("--finite-n-root", dest="finite_n_root", action="store_true",
                   help="use the finite-size update-map fixed point "
                        "(exact matching at this n) instead of the limit one")
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("simulate", help="run the Glauber chain, emit statistics")
    add_common(p, seed_required=True)
    p.add_argument("--steps", type=int, required=True, help="recorded samples")
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--thin", type=int)
    p.add_argument("--init", default="empty", choices=["empty", "complete", "random"])
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("couple", help="greedy coupled chains, Hamming trajectory")
    add_common(p, seed_required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--init", default="random", choices=["empty", "complete", "random"])
    p.set_defaults(handler=_cmd_couple)

    p = sub.add_parser("influence", help="influence matrix and its norms")
    add_common(p)
    p.add_argument("--kind", default="analytic", choices=["analytic", "exact"])
    p.set_defaults(handler=_cmd_influence)

    p = sub.add_parser("verify", help="compare a bound against both expectations")
    add_common(p, seed_required=True)
    p.add_argument("--theorem", required=True,
                   choices=["key1", "ising_cwbd", "smallbetas", "negbetas",
                            "twostar", "triangle", "key_pnorm"])
    p.add_argument("--test-function", dest="test_function")
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--root", type=int)
    p.add_argument("--finite-n-root", dest="finite_n_root", action="store_true",
                   help="use the finite-size update-map fixed point "
                        "(exact matching at this n) instead of the limit one")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("demo", help="worked examples")
    p.add_argument("what", choices=["florentine"])
    p.set_defaults(handler=_cmd_demo)

    p = sub.add_parser("init", help="write a template model file")
    p.add_argument("--kind", required=True, choices=sorted(TEMPLATES))
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_init)
    return parser


def dispatch(argv):
    """Parse argv (list of strings, no program name) and run; returns exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisFailure as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NoContractionError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


def main(argv=None):
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
