"""Command line entry point.

Every command prints a JSON run report. Exit status: 0 for an accepting or
positive outcome, 1 for a rejecting or negative one, 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Optional

from .certification import (
    LabelKind,
    canonical_labelings,
    certificate_bits,
    compute_distance_labeling,
    compute_mod3_labeling,
    get_ruleset,
    parse_labeling,
    run_local_verifier,
)
from .election import ElectionStatus, build_oriented_graph, elect_leader, to_dot
from .errors import GuardExceeded, MeshcertError
from .generators import generate
from .graph import Graph, parse_edge_list
from .oracles import ClassId, is_class
from .recognition import recognize

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


def load_graph(descriptor: str) -> Graph:
    """A family descriptor such as ``"grid:3,3"``, or a path to an edge-list file."""
    if os.path.isfile(descriptor):
        with open(descriptor) as fh:
            return parse_edge_list(fh.read())
    return generate(descriptor)


def load_labels(arg: str, n: int) -> tuple[int, ...]:
    """Labels from a ``"v label"`` file or an inline comma list ``"0,1,2"``."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            return parse_labeling(fh.read(), n)
    try:
        return tuple(int(t) for t in arg.replace("[", "").replace("]", "").split(","))
    except ValueError:
        raise MeshcertError(f"labels must be a file or a comma list, got {arg!r}") from None


def _class_list(values) -> list[ClassId]:
    if not values or values == ["all"]:
        return list(ClassId)
    try:
        return [ClassId(v) for v in values]
    except ValueError as exc:
        raise MeshcertError(str(exc)) from None


def cmd_oracle(args) -> tuple[dict, int]:
    g = load_graph(args.input)
    results = {}
    positive = True
    for c in _class_list(args.cls):
        try:
            res = is_class(g, c)
            results[c.value] = {"member": res.holds, "witness": _jsonable(res.witness)}
            positive &= res.holds
        except GuardExceeded as exc:
            results[c.value] = {"member": "undecided", "reason": str(exc)}
            positive = False
    return {"classes": results, "n": g.n, "m": g.m}, EXIT_OK if positive else EXIT_NEGATIVE


def _default_ruleset(mode: str) -> str:
    return "MESHED_mod3" if mode == "mod3" else "MESHED_dist"


def cmd_certify(args) -> tuple[dict, int]:
    g = load_graph(args.input)
    rs = get_ruleset(args.ruleset or _default_ruleset(args.mode))
    if rs.kind.value != args.mode:
        raise MeshcertError(f"rule set {rs.name} is for {rs.kind.value} labels, not {args.mode}")
    labels = (compute_mod3_labeling if args.mode == "mod3" else compute_distance_labeling)(g, args.root)
    verdict = run_local_verifier(g, labels, rs, args.seed)
    payload = {
        "verdict": verdict.to_dict(),
        "ruleset": rs.name,
        "radius": rs.radius,
        "certificate": list(labels),
        "label_bits": certificate_bits(labels, rs.kind),
        "diameter": g.diameter(),
    }
    return payload, EXIT_OK if verdict.accepted else EXIT_NEGATIVE


def cmd_elect(args) -> tuple[dict, int]:
    g = load_graph(args.input)
    rs = get_ruleset(args.ruleset or "MESHED_mod3")
    if args.labels is not None:
        labels = load_labels(args.labels, g.n)
    else:
        labels = compute_mod3_labeling(g, args.root)
    outcome = elect_leader(g, labels, rs, args.seed, flagged=args.flagged)
    payload = outcome.to_dict()
    payload["ruleset"] = rs.name
    payload["labels"] = list(labels)
    return payload, EXIT_OK if outcome.status is ElectionStatus.ELECTED else EXIT_NEGATIVE


def cmd_recognize(args) -> tuple[dict, int]:
    g = load_graph(args.input)
    if not args.cls or len(args.cls) != 1:
        raise MeshcertError("recognize needs exactly one --class")
    out = recognize(g, args.cls[0], root=args.root, seed=args.seed)
    return out.to_dict(), EXIT_OK if out.decision is True else EXIT_NEGATIVE


def cmd_fuzz(args) -> tuple[dict, int]:
    """Random and perturbed canonical labelings; any non-canonical acceptance is spurious."""
    g = load_graph(args.input)
    rs = get_ruleset(args.ruleset or "MESHED_dist")
    canon = sorted(canonical_labelings(g, rs.kind))
    rng = random.Random(args.seed)
    top = 2 if rs.kind is LabelKind.MOD3 else g.n
    spurious = []
    accepted_canonical = 0
    for t in range(args.trials):
        if t % 2 == 0:
            labels = [rng.randint(0, top) for _ in range(g.n)]
        else:
            labels = list(rng.choice(canon))
            for _ in range(rng.randint(1, 3)):
                v = rng.randrange(g.n)
                labels[v] = min(top, max(0, labels[v] + rng.choice((-1, 1))))
        labels = tuple(labels)
        if run_local_verifier(g, labels, rs, args.seed + t).accepted:
            if labels in canon:
                accepted_canonical += 1
            else:
                spurious.append(list(labels))
    payload = {
        "ruleset": rs.name,
        "trials": args.trials,
        "spurious_acceptances": len(spurious),
        "accepted_canonical": accepted_canonical,
        "examples": spurious[:5],
    }
    return payload, EXIT_OK if not spurious else EXIT_NEGATIVE


def cmd_export_dot(args) -> tuple[dict, int]:
    g = load_graph(args.input)
    labels = load_labels(args.labels, g.n) if args.labels is not None else compute_mod3_labeling(g, args.root)
    return {"dot": to_dot(build_oriented_graph(g, labels))}, EXIT_OK


COMMANDS = {
    "oracle": cmd_oracle,
    "certify": cmd_certify,
    "elect": cmd_elect,
    "recognize": cmd_recognize,
    "fuzz": cmd_fuzz,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meshcert", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--input", required=True, help='family descriptor (e.g. "kinggrid:3,3") or edge-list file')
    ap.add_argument("--root", type=int, default=0)
    ap.add_argument("--mode", choices=["distance", "mod3"], default="distance")
    ap.add_argument("--ruleset")
    ap.add_argument("--class", dest="cls", action="append", help="class name; repeatable")
    ap.add_argument("--labels", help='labeling file ("v label" lines) or inline list "0,1,2"')
    ap.add_argument("--flagged", type=int, help="elect: the vertex claiming to be leader")
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", dest="json_path", help="also write the report to this file")
    return ap


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def run(argv: Optional[list[str]] = None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "input", "json_path")}
    t0 = time.perf_counter()
    try:
        payload, code = COMMANDS[args.command](args)
    except (MeshcertError, ValueError, OSError) as exc:
        payload, code = {"error": str(exc)}, EXIT_INPUT
    report = {
        "command": args.command,
        "input": args.input,
        "parameters": params,
        "seed": args.seed,
        "outcome": _jsonable(payload),
        "wall_time": round(time.perf_counter() - t0, 6),
    }
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return report, code


def main(argv: Optional[list[str]] = None) -> int:
    report, code = run(argv)
    if report["command"] == "export-dot" and "dot" in report["outcome"]:
        sys.stdout.write(report["outcome"]["dot"])
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
