"""Line-oriented network file format.

::

    # comment
    #!flag multistationary
    #!decomposition R1,R2 | R3,R4
    R1 : X1 + X2 + X3 -> X3 @ 1.0
    R2 : 3X1 + X2 -> 2 X1
    F R1 : X3=2

Reaction lines are ``LABEL : COMPLEX -> COMPLEX [@ RATE]`` where a complex
is ``0`` or a ``+``-separated sum of ``[coeff] SPECIES`` terms.  ``F`` lines
give the kinetic order row of one reaction; omitted species have order 0 and
reactions without an ``F`` line use mass action orders.  Species are ordered
by first appearance in reaction lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import Diagnostic, NetworkParseError
from .kinetics import PowerLawKinetics, mass_action_orders
from .network import Network
from .variation import Decomposition

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_REACTION = re.compile(rf"^\s*(?P<label>{_IDENT})\s*:(?P<body>.*)$")
_FLINE = re.compile(rf"^\s*F\s+(?P<label>{_IDENT})\s*:(?P<body>.*)$")
_TERM = re.compile(rf"^\s*(?P<coeff>\d+(?:\.\d*)?(?:/\d+)?)?\s*(?P<name>{_IDENT})\s*$")
_ORDER = re.compile(rf"^\s*(?P<name>{_IDENT})\s*=\s*(?P<value>{_NUMBER})\s*$")

KNOWN_FLAGS = frozenset({"multistationary"})


@dataclass
class Directives:
    flags: set[str] = field(default_factory=set)
    decomposition: Decomposition | None = None

    @property
    def multistationary(self) -> bool:
        return "multistationary" in self.flags


@dataclass
class ParsedFile:
    network: Network
    kinetics: PowerLawKinetics | None
    directives: Directives


def _number(text: str) -> Fraction:
    return Fraction(text.strip())


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.errors: list[Diagnostic] = []
        self.species: list[str] = []
        self.labels: set[str] = set()
        self.reactions: list[tuple[int, str, dict, dict, float | None]] = []
        self.orders: dict[str, tuple[int, dict[str, float]]] = {}
        self.flags: set[str] = set()
        self.decomposition: tuple[int, list[list[str]]] | None = None

    def error(self, line: int, column: int, message: str) -> None:
        self.errors.append(Diagnostic(line, column, message))

    def complex(self, text: str, lineno: int, col: int) -> dict | None:
        if text.strip() == "0":
            return {}
        coeffs: dict[str, Fraction] = {}
        offset = col
        for part in text.split("+"):
            m = _TERM.match(part)
            if not m:
                self.error(lineno, offset + len(part) - len(part.lstrip()) + 1,
                           f"malformed complex term {part.strip()!r}")
                return None
            c = _number(m.group("coeff")) if m.group("coeff") else Fraction(1)
            name = m.group("name")
            coeffs[name] = coeffs.get(name, Fraction(0)) + c
            offset += len(part) + 1
        return {k: v for k, v in coeffs.items() if v != 0}

    def reaction(self, lineno: int, raw: str, m: re.Match) -> None:
        label = m.group("label")
        if label in self.labels:
            self.error(lineno, m.start("label") + 1, f"duplicate reaction label {label!r}")
            return
        self.labels.add(label)
        body_col = m.start("body")
        body = m.group("body")
        rate = None
        if "@" in body:
            at = body.index("@")
            rate_text = body[at + 1:]
            rate_col = body_col + at + 2 + len(rate_text) - len(rate_text.lstrip())
            try:
                rate_value = _number(rate_text)
            except (ValueError, ZeroDivisionError):
                self.error(lineno, rate_col, f"malformed rate {rate_text.strip()!r}")
                return
            if rate_value <= 0:
                self.error(lineno, rate_col, f"rate constant must be positive, got {rate_text.strip()}")
                return
            rate = float(rate_value)
            body = body[:at]
        if body.count("->") != 1:
            self.error(lineno, body_col + 1, "reaction needs exactly one '->'")
            return
        arrow = body.index("->")
        lhs = self.complex(body[:arrow], lineno, body_col)
        rhs = self.complex(body[arrow + 2:], lineno, body_col + arrow + 2)
        if lhs is None or rhs is None:
            return
        if lhs == rhs:
            self.error(lineno, body_col + arrow + 1, f"trivial reaction {label!r}: reactant equals product")
            return
        for name in list(lhs) + list(rhs):
            if name not in self.species:
                self.species.append(name)
        self.reactions.append((lineno, label, lhs, rhs, rate))

    def fline(self, lineno: int, m: re.Match) -> None:
        label = m.group("label")
        if label in self.orders:
            self.error(lineno, m.start("label") + 1, f"duplicate kinetic order line for {label!r}")
            return
        orders: dict[str, float] = {}
        body = m.group("body")
        offset = m.start("body")
        if body.strip():
            for part in body.split(","):
                om = _ORDER.match(part)
                if not om:
                    self.error(lineno, offset + 1, f"malformed kinetic order {part.strip()!r}")
                    return
                try:
                    value = float(_number(om.group("value")))
                except (ValueError, ZeroDivisionError):
                    self.error(lineno, offset + 1, f"malformed kinetic order {part.strip()!r}")
                    return
                name = om.group("name")
                if name in orders:
                    self.error(lineno, offset + 1, f"species {name!r} listed twice")
                    return
                orders[name] = value
                offset += len(part) + 1
        self.orders[label] = (lineno, orders)

    def directive(self, lineno: int, raw: str) -> None:
        body = raw.strip()[2:].strip()
        word, _, rest = body.partition(" ")
        if word == "flag":
            flag = rest.strip()
            if flag not in KNOWN_FLAGS:
                self.error(lineno, raw.index(flag) + 1 if flag else 1, f"unknown flag {flag!r}")
            else:
                self.flags.add(flag)
        elif word == "decomposition":
            blocks = [[s.strip() for s in blk.split(",") if s.strip()] for blk in rest.split("|")]
            self.decomposition = (lineno, blocks)
        else:
            self.error(lineno, 1, f"unknown directive {word!r}")

    def run(self) -> ParsedFile:
        for lineno, raw in enumerate(self.lines, start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            if stripped.startswith("#!"):
                self.directive(lineno, raw)
                continue
            if stripped.startswith("#"):
                continue
            fm = _FLINE.match(raw)
            if fm and "->" not in raw:
                self.fline(lineno, fm)
                continue
            rm = _REACTION.match(raw)
            if rm:
                self.reaction(lineno, raw, rm)
                continue
            self.error(lineno, len(raw) - len(raw.lstrip()) + 1, "expected a reaction, kinetic order line or directive")

        labels = [r[1] for r in self.reactions]
        for label, (lineno, orders) in self.orders.items():
            if label not in labels:
                self.error(lineno, 1, f"kinetic orders for unknown reaction {label!r}")
            for name in orders:
                if name not in self.species:
                    self.error(lineno, 1, f"unknown species {name!r} in kinetic order line")
        decomposition = None
        if self.decomposition is not None:
            lineno, blocks = self.decomposition
            flat = [b for blk in blocks for b in blk]
            unknown = [b for b in flat if b not in labels]
            if unknown:
                self.error(lineno, 1, f"unknown reaction labels in decomposition: {unknown}")
            elif sorted(flat) != sorted(labels) or len(set(flat)) != len(flat) or any(not b for b in blocks):
                self.error(lineno, 1, "decomposition blocks must partition the reactions")
            else:
                decomposition = Decomposition(tuple(tuple(labels.index(b) for b in blk) for blk in blocks))
        if not self.reactions and not self.errors:
            self.error(1, 1, "no reactions")
        if self.errors:
            raise NetworkParseError(sorted(self.errors, key=lambda d: (d.line, d.column)))

        rates = [r[4] for r in self.reactions]
        net = Network.from_dicts([(label, lhs, rhs) for _, label, lhs, rhs, _ in self.reactions],
                                 species=self.species, rates=rates)
        kinetics = None
        if self.orders or any(rate is not None for rate in rates):
            F = mass_action_orders(net)
            for label, (_, orders) in self.orders.items():
                row = labels.index(label)
                F[row] = 0.0
                for name, value in orders.items():
                    F[row, net.species_index(name)] = value
            k = [1.0 if rate is None else rate for rate in rates]
            kinetics = PowerLawKinetics(F, k)
        return ParsedFile(net, kinetics, Directives(self.flags, decomposition))


def parse(text: str) -> ParsedFile:
    """Parse a network file; raises NetworkParseError listing every problem found."""
    return _Parser(text).run()


def _format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_network(net: Network, kinetics: PowerLawKinetics | None = None,
                   directives: Directives | None = None) -> str:
    """Canonical text for a network; ``parse`` of the output reproduces the input exactly."""
    lines = []
    if directives is not None:
        for flag in sorted(directives.flags):
            lines.append(f"#!flag {flag}")
        if directives.decomposition is not None:
            blocks = " | ".join(",".join(net.reactions[q].label for q in blk)
                                for blk in directives.decomposition.blocks)
            lines.append(f"#!decomposition {blocks}")
    mak = mass_action_orders(net)
    for i, rx in enumerate(net.reactions):
        line = f"{rx.label} : {net.format_complex(rx.reactant)} -> {net.format_complex(rx.product)}"
        rate = kinetics.k[i] if kinetics is not None else rx.rate
        if rate is not None:
            line += f" @ {_format_number(rate)}"
        lines.append(line)
    if kinetics is not None:
        for i, rx in enumerate(net.reactions):
            if not np.array_equal(kinetics.F[i], mak[i]):
                entries = ", ".join(f"{sp.name}={_format_number(kinetics.F[i, sp.index])}"
                                    for sp in net.species if kinetics.F[i, sp.index] != 0)
                lines.append(f"F {rx.label} :" + (f" {entries}" if entries else ""))
    return "\n".join(lines) + "\n"
