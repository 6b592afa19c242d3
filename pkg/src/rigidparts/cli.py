"""Command line front end: ``rigidparts analyze|lines|hypercube|bipartite``.

Reports go to stdout as JSON (default) or as plain ``key value`` records.
Exit status: 0 success, 2 bad input, 3 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .bipartite import K3mKind, GuaranteeViolation, classify_k3m
from .exactgeom import format_rational, rational
from .fileio import FrameworkFileError, dumps_framework, read_framework
from .flexengine import (
    EXHAUSTIVE_LIMIT,
    MAX_STEPS,
    STEP,
    TOL_EDGE,
    TOL_PROJ,
    TOL_SEP,
    certify,
    find_rigid_subframeworks,
    write_flex_path,
)
from .hypercube import CounterexampleFailure, ProjectionSamplingError, embed, sample_projection, verify_counterexample
from .incidence import (
    DEFAULT_SIZE_LIMIT,
    bucket_edges,
    check_gk_bounds,
    plane_statistics,
    regulus_statistics,
    rich_points,
)
from .motionlines import perturbation_lines
from .rigidity import Framework, equivalence_violations, framework_rank, generically_rigid, laman_check

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 2, 3


class InputError(ValueError):
    pass


@dataclass
class Settings:
    seed: int = 0
    tol_proj: float = TOL_PROJ
    tol_sep: float = TOL_SEP
    tol_edge: float = TOL_EDGE
    step: float = STEP
    max_steps: int = MAX_STEPS
    exhaustive_limit: int = EXHAUSTIVE_LIMIT
    size_limit: int = DEFAULT_SIZE_LIMIT
    size_limit_override: bool = False

    def tolerances(self) -> dict:
        return {
            "tol_proj": self.tol_proj,
            "tol_sep": self.tol_sep,
            "tol_edge": self.tol_edge,
            "step": self.step,
            "max_steps": self.max_steps,
            "exhaustive_limit": self.exhaustive_limit,
            "size_limit": self.size_limit,
            "size_limit_override": self.size_limit_override,
        }


def _report(command: str, argv: Sequence[str], inputs: list[dict], settings: Settings, results: dict, verdict) -> dict:
    return {
        "command": command,
        "argv": list(argv),
        "inputs": inputs,
        "seed": settings.seed,
        "tolerances": settings.tolerances(),
        "results": results,
        "verdict": verdict,
    }


def _load(path: str) -> tuple[Framework, dict, dict]:
    fw, doc, digest = read_framework(path)
    return fw, doc, {"path": path, "sha256": digest}


def _sets(items) -> list[list[int]]:
    return [list(s) for s in items]


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(path: str, settings: Settings, argv: Sequence[str] = (), flex_path: Optional[str] = None) -> dict:
    fw, _, info = _load(path)
    n, g = fw.n, fw.graph
    r = framework_rank(fw)
    results: dict[str, Any] = {
        "n": n,
        "m": g.m,
        "laman": laman_check(g) if n >= 2 else None,
        "generically_rigid": generically_rigid(g) if n >= 2 else None,
        "rank": r,
        "full_rank": max(2 * n - 3, 0),
        "infinitesimally_rigid": n >= 2 and r == 2 * n - 3,
    }
    cert = None
    if n >= 3:
        cert = certify(
            fw,
            tol_proj=settings.tol_proj,
            tol_sep=settings.tol_sep,
            tol_edge=settings.tol_edge,
            step=settings.step,
            max_steps=settings.max_steps,
        )
        entry = {
            "verdict": cert.verdict.value,
            "rank": cert.rank,
            "nullity": cert.nullity,
            "pair": list(cert.pair) if cert.pair else None,
            "delta": cert.delta,
            "edge_residual": cert.edge_residual,
        }
        if cert.path is not None:
            entry["path_status"] = cert.path.status
            entry["path_states"] = len(cert.path)
            entry["path_max_residual"] = cert.path.max_residual
            if flex_path:
                with open(flex_path, "w", encoding="utf-8") as fh:
                    write_flex_path(cert.path, fh)
                entry["path_file"] = flex_path
        results["certificate"] = entry
    else:
        results["certificate"] = None
    subs = find_rigid_subframeworks(fw, exhaustive_limit=settings.exhaustive_limit) if n >= 3 else []
    results["rigid_subframeworks"] = _sets(S for S, _ in subs)
    if subs:
        results["conclusion"] = f"{len(subs)} vertex sets induce infinitesimally rigid subframeworks"
    else:
        results["conclusion"] = "no vertex set of size >= 3 induces an infinitesimally rigid subframework"
    verdict = cert.verdict.value if cert else ("rigid" if results["infinitesimally_rigid"] else "inconclusive")
    return _report("analyze", argv, [info], settings, results, verdict)


def cmd_lines(path_p: str, path_q: str, settings: Settings, c: Fraction, argv: Sequence[str] = ()) -> dict:
    fw, _, info_p = _load(path_p)
    fq, _, info_q = _load(path_q)
    if fw.n != fq.n or set(fw.graph.edges) != set(fq.graph.edges):
        raise InputError("the two files must describe the same graph")
    bad = equivalence_violations(fw.graph, fw.positions, fq.positions)
    if bad:
        lines = [f"edge {list(e)}: squared lengths {format_rational(a)} and {format_rational(b)}" for e, a, b in bad]
        raise InputError("embeddings are not equivalent:\n  " + "\n  ".join(lines))
    if fw.positions == fq.positions:
        raise InputError("the two embeddings coincide; every line degenerates")
    try:
        lines = perturbation_lines(fw.positions, fq.positions)
        rm = rich_points(lines)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    planes = plane_statistics(lines)
    try:
        reg = regulus_statistics(lines, settings.size_limit, settings.size_limit_override)
        bound = check_gk_bounds(lines, c, settings.size_limit, settings.size_limit_override)
    except ValueError as exc:
        raise InputError(f"{exc}; pass --size-limit-override to sweep anyway") from None
    buckets = bucket_edges(fw, fq.positions)
    results = {
        "m": len(lines),
        "rich_point_histogram": {str(k): v for k, v in rm.histogram().items()},
        "intersection_weight": bound.intersection_weight,
        "plane_max_lines": planes.max_lines,
        "regulus": {
            "applicable": reg.applicable,
            "max_lines": reg.max_lines,
            "max_intersecting_pairs": reg.max_intersecting_pairs,
            "quadrics_examined": reg.quadrics_examined,
        },
        "edge_buckets": {str(t): len(es) for t, es in buckets.buckets.items()},
        "translation_edges": len(buckets.parallel),
        "bound": {
            "c": format_rational(bound.c),
            "value": bound.bound,
            "within_bound": bound.within_bound,
            "failed_hypotheses": bound.failed_hypotheses,
            "rich_profile": {str(k): v for k, v in bound.rich_profile.items()},
        },
    }
    if bound.hypotheses_hold and not bound.within_bound:
        raise GuaranteeViolation(
            f"I(L) = {bound.intersection_weight} exceeds the incidence bound {bound.bound:.6g} under its hypotheses"
        )
    verdict = "within-bound" if bound.within_bound else "above-bound"
    return _report("lines", argv, [info_p, info_q], settings, results, verdict)


def cmd_hypercube(d: int, settings: Settings, out: str, subset_budget: int, argv: Sequence[str] = ()) -> dict:
    if not 2 <= d <= 12:
        raise InputError("d must lie in [2, 12]")
    try:
        proj = sample_projection(d, settings.seed)
    except ProjectionSamplingError as exc:
        raise InputError(str(exc)) from None
    rep = verify_counterexample(d, seed=settings.seed, subset_budget=subset_budget, proj=proj)
    fw = embed(d, proj)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"hypercube_d{d}_seed{settings.seed}"
    text = dumps_framework(fw)
    fw_path = outdir / f"{stem}.json"
    fw_path.write_text(text, encoding="utf-8")
    results = {
        "d": d,
        "n": rep.n,
        "m": rep.m,
        "projection": rep.projection,
        "collinear_free": rep.collinear_free,
        "conic_free": rep.conic_free,
        "conic_sextuples_tested": rep.conic_sextuples_tested,
        "conic_exhaustive": rep.conic_exhaustive,
        "subsets_checked": rep.sweep.checked,
        "subsets_by_count": rep.sweep.by_count,
        "subsets_by_rank": rep.sweep.by_rank,
        "subset_sweep_exhaustive": rep.sweep.exhaustive,
        "flex_s": rep.flex_s,
        "flex_edges_preserved": rep.flex_edges_preserved,
        "flex_changed_pair": list(rep.flex_changed_pair) if rep.flex_changed_pair else None,
        "flex_changed_sqdist": list(rep.flex_changed_sqdist) if rep.flex_changed_sqdist else None,
        "notes": rep.notes,
        "framework_file": str(fw_path),
    }
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    report = _report("hypercube", argv, [{"path": str(fw_path), "sha256": digest}], settings, results, "counterexample")
    cert_path = outdir / f"{stem}.cert.json"
    cert_path.write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    results["certificate_file"] = str(cert_path)
    return report


def _bipartition(fw: Framework, doc: dict) -> tuple[list[int], list[int]]:
    if "bipartition" in doc:
        parts = doc["bipartition"]
        if not (isinstance(parts, list) and len(parts) == 2 and all(isinstance(s, list) for s in parts)):
            raise InputError("'bipartition' must be a pair of vertex lists")
        small, large = parts
    else:
        small, large = list(range(3)), list(range(3, fw.n))
    if len(small) != 3:
        raise InputError(f"the small side has {len(small)} vertices; exactly 3 are needed")
    if len(large) < 5:
        raise InputError(f"the large side has {len(large)} vertices; at least 5 are needed")
    if sorted(small + large) != list(range(fw.n)):
        raise InputError("the bipartition must cover every vertex exactly once")
    want = {(min(a, b), max(a, b)) for a in small for b in large}
    if set(fw.graph.edges) != want:
        raise InputError("the edges are not those of the complete bipartite graph on the given sides")
    return small, large


def cmd_bipartite(path: str, settings: Settings, argv: Sequence[str] = ()) -> dict:
    fw, doc, info = _load(path)
    small, large = _bipartition(fw, doc)
    cls = classify_k3m([fw.positions[i] for i in small], [fw.positions[j] for j in large])
    r = framework_rank(fw)
    if r != cls.rank:
        raise GuaranteeViolation(f"rank {r} of the file differs from the rank {cls.rank} of the relabelled framework")
    results: dict[str, Any] = {
        "small_side": small,
        "large_side": large,
        "kind": cls.kind.value,
        "rank": cls.rank,
        "full_rank": cls.full_rank,
        "infinitesimally_rigid": cls.rank == cls.full_rank,
        "rank_consistent": (cls.kind is K3mKind.INFINITESIMALLY_RIGID) == (cls.rank == cls.full_rank),
    }
    if cls.lines is not None:
        results["lines"] = [[format_rational(x) for x in (ln.a, ln.b, ln.c)] for ln in cls.lines]
    if cls.conic is not None:
        results["conic"] = [format_rational(x) for x in cls.conic.coefficients]
    return _report("bipartite", argv, [info], settings, results, cls.kind.value)


# ---------------------------------------------------------------------------
# output


def to_text(report: dict) -> str:
    """Flat ``key value`` lines; histogram-like maps become ``k count`` lines under a ``# key`` header."""
    out: list[str] = []

    def emit(prefix: str, value: Any):
        if isinstance(value, dict):
            if value and all(k.isdigit() for k in value):
                out.append(f"# {prefix}")
                out.extend(f"{k} {v}" for k, v in value.items())
                return
            for k, v in value.items():
                emit(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list):
            out.append(f"{prefix} {json.dumps(value)}")
        else:
            out.append(f"{prefix} {json.dumps(value) if not isinstance(value, str) else value}")

    emit("", report)
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--tol-proj", type=float, default=TOL_PROJ, help="corrector convergence tolerance")
    common.add_argument("--tol-sep", type=float, default=TOL_SEP, help="non-edge drift needed to call a path flexible")
    common.add_argument("--tol-edge", type=float, default=TOL_EDGE, help="largest relative edge residual of an admissible state")
    common.add_argument("--step", type=float, default=STEP, help="continuation step length")
    common.add_argument("--max-steps", type=int, default=MAX_STEPS, help="continuation steps")
    common.add_argument("--exhaustive-limit", type=int, default=EXHAUSTIVE_LIMIT, help="test every vertex subset up to this many vertices")
    common.add_argument("--size-limit", type=int, default=DEFAULT_SIZE_LIMIT, help="most lines for the regulus sweep")
    common.add_argument("--size-limit-override", action="store_true", help="run the regulus sweep past the size limit")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="rigidparts", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common], help="rigidity report for one framework file")
    p.add_argument("file")
    p.add_argument("--flex-path", help="write the followed flex path as CSV")
    p = sub.add_parser("lines", parents=[common], help="incidence report for two equivalent embeddings")
    p.add_argument("file_p")
    p.add_argument("file_q")
    p.add_argument("--c", default="2", help="rational constant of the incidence hypotheses")
    p = sub.add_parser("hypercube", parents=[common], help="build and verify the hypercube counterexample")
    p.add_argument("--d", type=int, required=True, help="cube dimension, 2 to 12")
    p.add_argument("--out", default=".", help="directory for the framework and certificate files")
    p.add_argument("--subset-budget", type=int, default=5000, help="random subsets checked when d > 3")
    p = sub.add_parser("bipartite", parents=[common], help="classify an embedding of K(3,m)")
    p.add_argument("file")
    return parser


def _settings(args) -> Settings:
    return Settings(
        seed=args.seed,
        tol_proj=args.tol_proj,
        tol_sep=args.tol_sep,
        tol_edge=args.tol_edge,
        step=args.step,
        max_steps=args.max_steps,
        exhaustive_limit=args.exhaustive_limit,
        size_limit=args.size_limit,
        size_limit_override=args.size_limit_override,
    )


def run(args: argparse.Namespace, argv: Sequence[str] = ()) -> dict:
    st = _settings(args)
    if args.command == "analyze":
        return cmd_analyze(args.file, st, argv, args.flex_path)
    if args.command == "lines":
        try:
            c = rational(args.c)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"--c: {exc}") from None
        return cmd_lines(args.file_p, args.file_q, st, c, argv)
    if args.command == "hypercube":
        return cmd_hypercube(args.d, st, args.out, args.subset_budget, argv)
    return cmd_bipartite(args.file, st, argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        report = run(args, argv)
    except (FrameworkFileError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GuaranteeViolation, CounterexampleFailure) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    sys.stdout.write(to_text(report) if args.format == "text" else json.dumps(report, indent=1) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
