"""Command-line front end: ``analyze``, ``oracle``, ``simulate`` and ``census``.

System files are JSON with exact rationals written as strings::

    {"n": 2,
     "matrices": [[["0", "1"], ["1", "0"]], [["1/2", "1/2"], ["1/2", "1/2"]]],
     "names": ["P", "avg"]}

An optional ``custom_polyhedron`` block (2D constraints plus one point per
proper face) switches ``analyze`` to a user polygon instead of ``P``.
Switching words are lists of 0-based matrix indices everywhere.

Exit codes: 0 analysis completed (whatever the verdict), 1 internal error,
2 bad input (unreadable, unparsable, failed validation, size guard),
3 oracle/graph disagreement under ``oracle --compare``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from consensus_faces import __version__, oracle
from consensus_faces.decide import (
    CycleWitness,
    SequenceWitness,
    SteeringWitness,
    Verdict,
    decide_problem1,
    decide_problem2,
    verify_cycle_witness,
    verify_steering,
)
from consensus_faces.errors import (
    CapacityError,
    ConsensusError,
    InvarianceError,
    InvariantViolation,
    PreconditionError,
    ValidationError,
)
from consensus_faces.exactnum import (
    RationalMatrix,
    SwitchedSystem,
    check_fixed_vector,
    dobrushin_seminorm,
    parse_vector,
    validate_system,
)
from consensus_faces.facegraph import (
    CustomPolyhedron2D,
    CustomSystem,
    FaceGraph,
    build_custom_face_graph,
    build_face_graph,
    to_dot,
)
from consensus_faces.faces import DEFAULT_MAX_N, face_census
from consensus_faces.fastpair import decide_two_undirected, is_undirected_stochastic, power_converges_to_consensus

log = logging.getLogger("consensus_faces")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(ConsensusError):
    """Unreadable or malformed system file."""


@dataclass(frozen=True)
class SystemFile:
    n: int
    matrices: list[RationalMatrix]
    names: list[str] | None
    custom: CustomPolyhedron2D | None


def load_system_file(path: str | Path) -> SystemFile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data or "matrices" not in data:
        raise InputError(f"{path}: expected an object with 'n' and 'matrices'")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError(f"{path}: 'n' must be a positive integer")
    mats = []
    for i, rows in enumerate(data["matrices"]):
        if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows
        ):
            raise InputError(f"{path}: matrix {i} is not {n}x{n}")
        mats.append(RationalMatrix.from_rows(rows))
    names = data.get("names")
    if names is not None and len(names) != len(mats):
        raise InputError(f"{path}: {len(names)} names for {len(mats)} matrices")
    custom = None
    if "custom_polyhedron" in data:
        block = data["custom_polyhedron"]
        try:
            constraints = [(c["a"], c["b"]) for c in block["constraints"]]
            custom = CustomPolyhedron2D.from_strings(constraints, block["face_reps"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"{path}: malformed custom_polyhedron block ({exc})") from exc
        if n != 2:
            raise InputError(f"{path}: custom polyhedra need n = 2")
    return SystemFile(n, mats, names, custom)


def _word(w: Sequence[int]) -> list[int]:
    return [int(k) for k in w]


def _verdict_json(v: Verdict | None, method: str) -> dict[str, Any] | None:
    if v is None:
        return None
    out: dict[str, Any] = {"answer": v.answer, "method": method, "witness": None}
    w = v.witness
    if isinstance(w, CycleWitness):
        out["witness"] = {"kind": "cycle", "face": w.face.text, "word": _word(w.word)}
    elif isinstance(w, SequenceWitness):
        out["witness"] = {"kind": "sequence", "sequence": w.sequence, "word": _word(w.word)}
    elif isinstance(w, SteeringWitness):
        out["witness"] = {
            "kind": "steering",
            "per_face_words": {f.text: _word(word) for f, word in w.per_face_words.items()},
            "universal_word": _word(w.universal_word),
        }
    if v.stuck:
        out["stuck_faces"] = [f.text for f in v.stuck]
    return out


def _check_witnesses(system: SwitchedSystem | CustomSystem, verdicts: Sequence[Verdict | None]) -> None:
    """Replay every certificate from the matrices before it is reported."""
    for v in verdicts:
        if v is None:
            continue
        w = v.witness
        if isinstance(w, CycleWitness) and not verify_cycle_witness(system, w):
            raise InvariantViolation(f"cycle witness {w} failed replay")
        if isinstance(w, SequenceWitness):
            A = system.matrices[w.word[0]]
            for k in w.word[1:]:
                A = system.matrices[k] @ A
            if power_converges_to_consensus(A):
                raise InvariantViolation(f"sequence witness {w.sequence} converges")
        if isinstance(w, SteeringWitness):
            for f, word in w.per_face_words.items():
                if not verify_steering(system, f, word):
                    raise InvariantViolation(f"steering word for {f.text} failed replay")
            for f in w.per_face_words:
                if not verify_steering(system, f, w.universal_word):
                    raise InvariantViolation(f"universal word failed replay from {f.text}")


def _graph_json(g: FaceGraph | None, seconds: float | None) -> dict[str, Any] | None:
    if g is None:
        return None
    return {"nodes": len(g.nodes), "face_pairs": g.num_pairs, "edges": g.edge_count}


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _labels(sf: SystemFile) -> list[str]:
    return sf.names or [f"A{i}" for i in range(len(sf.matrices))]


def analyze(sf: SystemFile, force_general: bool = False, max_n: int = DEFAULT_MAX_N) -> tuple[dict, FaceGraph | None]:
    """Run the full analysis and return ``(report, graph)``."""
    labels = _labels(sf)
    report: dict[str, Any] = {"tool": {"name": "consensus-faces", "version": __version__}}
    if sf.custom is not None:
        t0 = time.perf_counter()
        g = build_custom_face_graph(sf.custom, sf.matrices, labels)
        build = time.perf_counter() - t0
        system: SwitchedSystem | CustomSystem = CustomSystem(sf.custom, tuple(sf.matrices), tuple(labels))
        p1, p2 = decide_problem1(g), decide_problem2(g)
        report["system"] = {
            "mode": "custom_polyhedron",
            "n": sf.n,
            "m": len(sf.matrices),
            "labels": labels,
            "validation": {"invariant_polyhedron": True},
        }
        fast = False
        p1_method = "face_graph"
    else:
        system = validate_system(sf.matrices, labels)
        report["system"] = {
            "mode": "consensus",
            "n": system.n,
            "m": system.m,
            "labels": labels,
            "validation": {"fixed_vector": True, "assumption_1": True},
            "dobrushin_seminorms": [str(dobrushin_seminorm(A)) for A in system.matrices],
        }
        fast = (
            not force_general
            and system.m == 2
            and all(is_undirected_stochastic(A) for A in system.matrices)
        )
        g, build, p2 = None, None, None
        if fast:
            p1 = decide_two_undirected(*system.matrices)
            p1_method = "fast_path"
            if system.n <= max_n:
                t0 = time.perf_counter()
                g = build_face_graph(system, max_n)
                build = time.perf_counter() - t0
                p2 = decide_problem2(g)
                # the graph is here anyway: prefer its face-level cycle certificate
                g1 = decide_problem1(g)
                if g1.answer != p1.answer:
                    raise InvariantViolation("fast path and face graph disagree on Problem 1")
                if not p1.answer:
                    report["fast_path_sequence"] = p1.witness.sequence
                    p1 = g1
        else:
            t0 = time.perf_counter()
            g = build_face_graph(system, max_n)
            build = time.perf_counter() - t0
            p1, p2 = decide_problem1(g), decide_problem2(g)
            p1_method = "face_graph"
    _check_witnesses(system, [p1, p2])
    report["fast_path"] = fast
    report["graph"] = _graph_json(g, build)
    report["problem1"] = _verdict_json(p1, p1_method)
    report["problem2"] = _verdict_json(p2, "face_graph")
    if p2 is None:
        report["problem2_note"] = f"face graph not built: n={sf.n} exceeds the guard n <= {max_n}"
    report["run"] = {
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "graph_build_seconds": None if build is None else round(build, 6),
    }
    return report, g


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _summary(report: dict) -> str:
    lines = [f"n={report['system']['n']} m={report['system']['m']} fast_path={report['fast_path']}"]
    if report.get("graph"):
        gr = report["graph"]
        lines.append(f"graph: {gr['nodes']} nodes, {gr['edges']} edges")
    for key, title in (("problem1", "asymptotic stability"), ("problem2", "reachability of consensus")):
        v = report.get(key)
        lines.append(f"{title}: {'undecided' if v is None else ('yes' if v['answer'] else 'no')}")
    return "\n".join(lines)


def _witness_text(report: dict) -> str:
    lines = []
    w1 = report["problem1"] and report["problem1"]["witness"]
    if w1 and w1["kind"] == "cycle":
        lines.append(f"non-convergence: start in face {w1['face']}, repeat word {w1['word']}")
    elif w1:
        lines.append(f"non-convergence: periodic sequence {w1['sequence']} = {w1['word']}")
    w2 = report["problem2"] and report["problem2"]["witness"]
    if w2:
        lines.append(f"universal steering word ({len(w2['universal_word'])} letters): {w2['universal_word']}")
        for face, word in w2["per_face_words"].items():
            lines.append(f"  {face}: {word}")
    elif report["problem2"] and report["problem2"].get("stuck_faces"):
        lines.append(f"faces that never reach the interior: {', '.join(report['problem2']['stuck_faces'])}")
    return "\n".join(lines)


def cmd_analyze(args: argparse.Namespace) -> int:
    sf = load_system_file(args.file)
    report, g = analyze(sf, force_general=args.force_general, max_n=args.max_n)
    _write(args.report, _dump(report))
    if args.dot:
        if g is None:
            raise CapacityError("no face graph was built, cannot write DOT")
        _write(args.dot, to_dot(g))
    print(_summary(report))
    if args.witness:
        print(_witness_text(report))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    sf = load_system_file(args.file)
    if sf.custom is not None:
        raise InputError("the word oracle works on consensus systems only")
    system = validate_system(sf.matrices, _labels(sf))
    max_n = args.max_n if args.max_n is not None else oracle.DEFAULT_ORACLE_MAX_N
    b1 = oracle.brute_force_problem1(system, args.max_states, max_n)
    b2 = oracle.brute_force_problem2(system, args.max_states, max_n)
    report: dict[str, Any] = {
        "tool": {"name": "consensus-faces", "version": __version__},
        "system": {"n": system.n, "m": system.m, "labels": list(system.labels)},
        "problem1": _verdict_json(b1, "word_enumeration"),
        "problem2": {"answer": b2.answer, "method": "word_enumeration",
                     "stuck_faces": [f.text for f in b2.stuck]},
    }
    if b2.answer:
        report["problem2"]["steering_words"] = {f.text: _word(w) for f, w in b2.witness.per_face_words.items()}
    code = EXIT_OK
    if args.compare:
        g = build_face_graph(system)
        p1, p2 = decide_problem1(g), decide_problem2(g)
        agree = p1.answer == b1.answer and p2.answer == b2.answer
        report["compare"] = {"agreement": agree, "graph_problem1": p1.answer, "graph_problem2": p2.answer}
        if not agree:
            code = EXIT_DISAGREE
    _write(args.report, _dump(report))
    print(f"oracle: asymptotic stability {'yes' if b1.answer else 'no'}, "
          f"reachability {'yes' if b2.answer else 'no'}")
    if isinstance(b1.witness, CycleWitness):
        print(f"witness: face {b1.witness.face.text}, word {_word(b1.witness.word)}")
    if args.compare:
        print("agreement" if code == EXIT_OK else "DISAGREEMENT between oracle and face graph")
    return code


def cmd_simulate(args: argparse.Namespace) -> int:
    sf = load_system_file(args.file)
    if sf.custom is not None:
        raise InputError("simulate works on consensus systems only")
    system = validate_system(sf.matrices, _labels(sf))
    x0 = parse_vector(args.x0)
    try:
        word = [int(k) for k in args.word.split(",")]
    except ValueError:
        raise InputError(f"malformed word {args.word!r}; expected e.g. '0,1,1'") from None
    trace = oracle.simulate(system, x0, word, args.periods)
    csv_text = trace.to_csv()
    if args.csv:
        _write(args.csv, csv_text)
        print(f"final seminorm: {trace.seminorms[-1]}")
    else:
        sys.stdout.write(csv_text)
        print(f"final seminorm: {trace.seminorms[-1]}", file=sys.stderr)
    return EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    rows = [face_census(n) for n in args.n]
    if args.json:
        print(json.dumps([{"n": c.n, "total_faces": c.total_faces, "proper_pairs": c.proper_pairs} for c in rows]))
    else:
        for c in rows:
            print(f"n={c.n} total_faces={c.total_faces} proper_pairs={c.proper_pairs}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="consensus-faces", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decide both convergence problems")
    p.add_argument("file")
    p.add_argument("--report", metavar="PATH", help="write the JSON report here")
    p.add_argument("--dot", metavar="PATH", help="write the face graph in Graphviz DOT")
    p.add_argument("--witness", action="store_true", help="print the certificates")
    p.add_argument("--force-general", action="store_true", help="never use the two-matrix fast path")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="dimension guard for the face graph")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle", help="brute-force word enumeration")
    p.add_argument("file")
    p.add_argument("--compare", action="store_true", help="also run the face graph; exit 3 on disagreement")
    p.add_argument("--report", metavar="PATH")
    p.add_argument("--max-n", type=int, default=None, help="dimension guard (default 6)")
    p.add_argument("--max-states", type=int, default=oracle.DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="exact trajectory under a periodic word")
    p.add_argument("file")
    p.add_argument("--x0", required=True, help="initial state, e.g. '1,-1/2,0'")
    p.add_argument("--word", required=True, help="0-based matrix indices, e.g. '0,1'")
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="write the trace here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("census", help="face counts of P")
    p.add_argument("n", type=int, nargs="+")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValidationError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, InvarianceError, CapacityError, PreconditionError, ConsensusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        log.debug("unexpected failure", exc_info=True)
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
