"""Command line interface.

Exit codes: 0 success, 2 usage or parse error, 3 analysis inapplicable,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .crnfile import ParsedFile, format_network, parse
from .errors import InapplicableError, NetworkParseError, NumericFailure
from .kinetics import (
    PowerLawKinetics,
    classify,
    homogeneous_pl_quotient,
    mak_kinetics,
    sf_pairs,
)
from .network import (
    Complex,
    Network,
    Reaction,
    complex_matrix,
    incidence_matrix,
    stoich_basis,
    stoichiometric_matrix,
    structural_report,
)
from .rankone import (
    AcrStatus,
    acr_analysis,
    acr_candidate_species,
    acr_upper_bound,
    multistationarity_probe,
    stable_acr_criterion,
)
from .variation import (
    AcrCensus,
    Provenance,
    acr_lift,
    equilibria_variation,
    is_independent,
    subnetwork_variation,
    variation_bounds,
)

EXIT_OK, EXIT_USAGE, EXIT_INAPPLICABLE, EXIT_NUMERIC = 0, 2, 3, 4

# JSON Schema of the --json envelope; command results are free-form objects
ENVELOPE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "version", "file"],
    "properties": {
        "command": {"enum": ["structure", "kinetics", "acr criterion", "acr roots", "acr necessary",
                             "probe", "variation", "quotient"]},
        "version": {"type": "string"},
        "file": {"type": "string"},
        "result": {"type": "object"},
        "error": {
            "type": "object",
            "required": ["kind", "message"],
            "properties": {
                "kind": {"enum": ["usage", "parse", "inapplicable", "numeric"]},
                "message": {"type": "string"},
                "diagnostics": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["line", "column", "message"],
                        "properties": {
                            "line": {"type": "integer", "minimum": 1},
                            "column": {"type": "integer", "minimum": 1},
                            "message": {"type": "string"},
                        },
                    },
                },
            },
        },
    },
    "oneOf": [{"required": ["result"]}, {"required": ["error"]}],
    "additionalProperties": False,
}


class UsageError(Exception):
    pass


def to_plain(obj: Any) -> Any:
    """Convert a report tree into JSON-compatible values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(to_plain(v) for v in obj)
    return obj


def render_json(report: dict) -> str:
    return json.dumps(to_plain(report), sort_keys=True, indent=2) + "\n"


def render_text(report: Any, indent: int = 0) -> str:
    pad = "  " * indent
    plain = to_plain(report)
    lines: list[str] = []
    if isinstance(plain, dict):
        for k, v in plain.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1).rstrip("\n"))
            elif isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}: |")
                lines.extend(f"{pad}  {line}" for line in v.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(plain, list):
        for v in plain:
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(plain)}")
    return "\n".join(lines) + "\n"


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _csv_floats(text: str, what: str) -> list[float]:
    try:
        return [float(Fraction(x.strip())) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be a comma-separated list of numbers, got {text!r}") from None


def _load(path: str) -> ParsedFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _kinetics(pf: ParsedFile) -> tuple[PowerLawKinetics, str]:
    if pf.kinetics is None:
        return mak_kinetics(pf.network), "mass action, unit rates (none given)"
    return pf.kinetics, "from file"


def _species_list(net: Network, name: str | None) -> list[str]:
    if name is None:
        return list(net.species_names)
    if name not in net.species_names:
        raise UsageError(f"unknown species {name!r}")
    return [name]


def _verdict(v) -> dict:
    return {"species": v.species, "status": v.status, "evidence": v.evidence}


# commands --------------------------------------------------------------------

def cmd_structure(pf: ParsedFile, args) -> dict:
    net = pf.network
    rep = structural_report(net)
    out = rep.as_dict()
    out["species"] = list(net.species_names)
    out["complexes"] = [net.format_complex(c) for c in net.complexes]
    out["stoichiometric_basis"] = [[str(x) for x in row] for row in stoich_basis(net)]
    out["matrices"] = {
        "Y": [[str(x) for x in row] for row in complex_matrix(net)],
        "I_a": incidence_matrix(net),
        "N": [[str(x) for x in row] for row in stoichiometric_matrix(net)],
    }
    return out


def cmd_kinetics(pf: ParsedFile, args) -> dict:
    net = pf.network
    K, source = _kinetics(pf)
    return {
        "source": source,
        "class": classify(net, K),
        "kinetic_orders": {rx.label: K.F[i] for i, rx in enumerate(net.reactions)},
        "rate_constants": {rx.label: K.k[i] for i, rx in enumerate(net.reactions)},
        "sf_pairs": {sp.name: [[net.reactions[a].label, net.reactions[b].label] for a, b in sf_pairs(K, sp.index)]
                     for sp in net.species},
    }


def cmd_acr_criterion(pf: ParsedFile, args) -> dict:
    K, source = _kinetics(pf)
    verdicts = stable_acr_criterion(pf.network, K)
    names = _species_list(pf.network, args.species)
    return {"kinetics": source, "verdicts": [_verdict(v) for v in verdicts if v.species in names]}


def cmd_acr_roots(pf: ParsedFile, args) -> dict:
    net = pf.network
    K, source = _kinetics(pf)
    out = []
    for name in _species_list(net, args.species):
        try:
            out.append(_verdict(acr_analysis(net, K, name, args.tol)))
        except InapplicableError as exc:
            if args.species is not None:
                raise
            out.append({"species": name, "status": "INAPPLICABLE", "evidence": {"reason": str(exc)}})
    if all(v["status"] == "INAPPLICABLE" for v in out):
        raise InapplicableError("no species admits the signomial reduction: " + out[0]["evidence"]["reason"])
    return {"kinetics": source, "verdicts": out}


def cmd_acr_necessary(pf: ParsedFile, args) -> dict:
    net = pf.network
    multistat = args.multistationary or pf.directives.multistationary
    candidates = acr_candidate_species(net)
    v = stoich_basis(net)
    return {
        "multistationary": "asserted" if multistat else "not asserted; conclusions hold only if it is",
        "direction": {name: str(x) for name, x in zip(net.species_names, v[0])},
        "candidates": candidates,
        "acr_upper_bound": acr_upper_bound(net),
        "co_conservative": structural_report(net).co_conservative,
    }


def cmd_probe(pf: ParsedFile, args) -> dict:
    net = pf.network
    K, source = _kinetics(pf)
    x0 = _csv_floats(args.x0, "--x0")
    if len(x0) != net.m:
        raise UsageError(f"--x0 needs {net.m} values ({', '.join(net.species_names)})")
    if any(x <= 0 for x in x0):
        raise UsageError("--x0 must be strictly positive")
    res = multistationarity_probe(net, K, x0, points=args.points)
    return {
        "kinetics": source,
        "x0": x0,
        "direction": dict(zip(net.species_names, res.direction)),
        "interval": [str(x) if np.isinf(x) else x for x in res.interval],
        "count": res.count,
        "equilibria": [dict(zip(net.species_names, e)) for e in res.equilibria],
        "note": "count is a lower bound; tangential equilibria can be missed",
    }


def _automatic_census(net: Network, K: PowerLawKinetics, tol: float) -> tuple[dict[str, Provenance], set[str], dict]:
    """ACR species proven by root analysis or the criterion, plus the set of species decided either way."""
    proven: dict[str, Provenance] = {}
    decided: set[str] = set()
    detail: dict[str, Any] = {}
    if len(stoich_basis(net)) != 1:
        return proven, decided, {"skipped": "rank is not one"}
    for v in stable_acr_criterion(net, K):
        if v.status is AcrStatus.ACR:
            proven[v.species] = Provenance.CRITERION
            decided.add(v.species)
    for name in net.species_names:
        try:
            verdict = acr_analysis(net, K, name, tol)
        except InapplicableError as exc:
            detail[name] = f"inapplicable: {exc}"
            continue
        detail[name] = verdict.status
        if verdict.status is AcrStatus.ACR:
            proven.setdefault(name, Provenance.ROOT_ANALYSIS)
            decided.add(name)
        elif verdict.status is AcrStatus.NOT_ACR:
            decided.add(name)
    ordered = {n: proven[n] for n in net.species_names if n in proven}
    return ordered, decided, detail


def _block(net: Network, K: PowerLawKinetics, block: tuple[int, ...], tol: float) -> dict:
    used = sorted(set().union(*(net.reactions[q].reactant.support | net.reactions[q].product.support
                                for q in block)))
    out: dict[str, Any] = {
        "reactions": [net.reactions[q].label for q in block],
        "species": [net.species[i].name for i in used],
    }
    F = K.F[list(block)]
    outside = [i for i in range(net.m) if i not in used]
    if outside and np.any(F[:, outside] != 0):
        out["acr"] = "skipped: kinetic orders involve species outside the block"
        return out
    remap = {old: new for new, old in enumerate(used)}

    def sub(cx):
        return Complex(tuple((remap[i], c) for i, c in cx.coefficients))

    subnet = Network([net.species[i].name for i in used],
                     [Reaction(net.reactions[q].label, sub(net.reactions[q].reactant), sub(net.reactions[q].product))
                      for q in block])
    subK = PowerLawKinetics(F[:, used], K.k[list(block)])
    proven, decided, _ = _automatic_census(subnet, subK, tol)
    out["acr"] = list(proven)
    out["census_complete"] = len(decided) == subnet.m
    if out["census_complete"]:
        sv = subnetwork_variation(AcrCensus(subnet.m, proven), net.m)
        out["variation"] = {"non_embedded": sv.v_non_embedded, "embedded": sv.v_embedded,
                            "identity_holds": sv.identity_holds, "gap_bound_holds": sv.gap_bound_holds}
    return out


def cmd_variation(pf: ParsedFile, args) -> dict:
    net = pf.network
    K, source = _kinetics(pf)
    multistat = args.multistationary or pf.directives.multistationary
    proven, decided, detail = _automatic_census(net, K, args.tol)
    out: dict[str, Any] = {"kinetics": source, "m": net.m, "automatic_analysis": detail}
    if args.acr is not None:
        names = [s.strip() for s in args.acr.split(",") if s.strip()]
        for s in names:
            if s not in net.species_names:
                raise UsageError(f"unknown species {s!r} in --acr")
        prov = {s: proven.get(s, Provenance.USER) for s in net.species_names if s in names}
        contradicted = [s for s in decided if s in names and s not in proven]
        if contradicted:
            out["warnings"] = [f"{s} is asserted ACR but root analysis shows it is not" for s in sorted(contradicted)]
        census = AcrCensus(net.m, prov)
        complete = True
    else:
        census = AcrCensus(net.m, proven, lower_bound=len(decided) < net.m)
        complete = not census.lower_bound
    samples = None
    if args.samples:
        try:
            samples = np.loadtxt(args.samples, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read samples from {args.samples}: {exc}") from None
    report = variation_bounds(net, census, multistationary=multistat, samples=samples, tol=args.rank_tol,
                              kinetics=K)
    out["census"] = {"acr_species": dict(census.provenance), "m_acr": census.m_acr, "complete": complete}
    if complete:
        out["v_plus"] = report.v_plus
    else:
        out["v_plus_upper"] = equilibria_variation(census)
    out["bounds"] = [{"kind": b.kind, "value": b.value, "source": b.source} for b in report.bounds]
    if report.violations():
        out["inconsistent_bounds"] = [b.kind for b in report.violations()]
    d = pf.directives.decomposition
    if d is not None:
        indep = is_independent(net, d)
        blocks = [_block(net, K, blk, args.tol) for blk in d.blocks]
        dec: dict[str, Any] = {"independent": indep, "blocks": blocks}
        if indep:
            sets = [b["acr"] if isinstance(b.get("acr"), list) else [] for b in blocks]
            lifted = acr_lift(net, d, sets)
            dec["lifted_acr_lower_bound"] = sorted(lifted.acr_species)
        out["decomposition"] = dec
    return out


def cmd_quotient(pf: ParsedFile, args) -> dict:
    net = pf.network
    K, source = _kinetics(pf)
    beta = _csv_floats(args.beta, "--beta")
    if len(beta) != net.m:
        raise UsageError(f"--beta needs {net.m} values ({', '.join(net.species_names)})")
    try:
        Q = homogeneous_pl_quotient(net, K, beta)
    except ValueError as exc:
        raise InapplicableError(str(exc)) from None
    return {
        "beta": dict(zip(net.species_names, beta)),
        "kinetic_orders": {rx.label: Q.F[i] for i, rx in enumerate(net.reactions)},
        "network_file": format_network(net, Q),
    }


# parsing & dispatch ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="network file")
    common.add_argument("--json", action="store_true", help="emit canonical JSON")
    common.add_argument("--tol", type=float, default=1e-9, help="root accuracy (default 1e-9)")
    common.add_argument("--species", help="restrict to one species")

    parser = _Parser(prog="crnacr", description="ACR analysis of power-law reaction networks")
    parser.add_argument("--version", action="version", version=f"crnacr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("structure", parents=[common], help="structural indices").set_defaults(func=cmd_structure)
    sub.add_parser("kinetics", parents=[common], help="kinetics class and SF-pairs").set_defaults(func=cmd_kinetics)

    acr = sub.add_parser("acr", help="rank-one ACR analyses")
    acr_sub = acr.add_subparsers(dest="acr_command", required=True, parser_class=_Parser)
    acr_sub.add_parser("criterion", parents=[common], help="arrow-diagram criterion").set_defaults(
        func=cmd_acr_criterion)
    acr_sub.add_parser("roots", parents=[common], help="signomial root analysis").set_defaults(func=cmd_acr_roots)
    nec = acr_sub.add_parser("necessary", parents=[common], help="necessary condition under multistationarity")
    nec.add_argument("--multistationary", action="store_true")
    nec.set_defaults(func=cmd_acr_necessary)

    probe = sub.add_parser("probe", parents=[common], help="count equilibria on a stoichiometric class")
    probe.add_argument("--x0", required=True, help="comma-separated positive point on the class")
    probe.add_argument("--points", type=int, default=4000, help="grid points per side")
    probe.set_defaults(func=cmd_probe)

    var = sub.add_parser("variation", parents=[common], help="equilibria variation and bounds")
    var.add_argument("--acr", help="comma-separated complete list of ACR species")
    var.add_argument("--multistationary", action="store_true")
    var.add_argument("--samples", help="CSV file of positive equilibria, one per row")
    var.add_argument("--rank-tol", type=float, default=1e-8, help="relative singular value cutoff")
    var.set_defaults(func=cmd_variation)

    quo = sub.add_parser("quotient", parents=[common], help="homogeneous PL quotient of a mass action system")
    quo.add_argument("--beta", required=True, help="comma-separated vector subtracted from every kinetic order row")
    quo.set_defaults(func=cmd_quotient)
    return parser


def _command_name(args) -> str:
    return args.command if args.command != "acr" else f"acr {args.acr_command}"


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run the CLI and return (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        return EXIT_USAGE, "", f"{exc}\n"
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0), "", ""
    name = _command_name(args)
    code, result, error = EXIT_OK, None, None
    try:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        pf = _load(args.file)
        result = args.func(pf, args)
    except UsageError as exc:
        code, error = EXIT_USAGE, {"kind": "usage", "message": str(exc)}
    except NetworkParseError as exc:
        code, error = EXIT_USAGE, {"kind": "parse", "message": "parse error",
                                   "diagnostics": [{"line": d.line, "column": d.column, "message": d.message}
                                                   for d in exc.diagnostics]}
    except InapplicableError as exc:
        code, error = EXIT_INAPPLICABLE, {"kind": "inapplicable", "message": str(exc)}
    except (NumericFailure, FloatingPointError, OverflowError) as exc:
        code, error = EXIT_NUMERIC, {"kind": "numeric", "message": str(exc)}
    envelope: dict[str, Any] = {"command": name, "version": __version__, "file": args.file}
    if error is None:
        envelope["result"] = result
    else:
        envelope["error"] = error
    if args.json:
        return code, render_json(envelope), ""
    if error is not None:
        msg = error["message"]
        for d in error.get("diagnostics", []):
            msg += f"\n  line {d['line']}, column {d['column']}: {d['message']}"
        return code, "", f"crnacr {name}: {msg}\n"
    return code, render_text(envelope), ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
