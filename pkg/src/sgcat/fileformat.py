"""Reader and writer for line-oriented presentation files.

Grammar::

    field Q | field Fp <prime>
    vertices:
      <id> <id> ...
    arrows:
      <name> <src> <dst>
    rad_square_zero
      or
    relations:
      <coeff> <path> [<coeff> <path> ...]      one relation per line
    nilpotency <N>

Paths are ``.``-joined arrow names read right to left.  ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Algebra, AlgebraPresentation, Quiver, build_algebra, radical_square_zero
from .errors import InputError, ParseError
from .exactla import FieldSpec

_SECTIONS = ("vertices", "arrows", "relations")


@dataclass
class PresentationFile:
    field: FieldSpec
    vertices: list
    arrows: list                     # (name, src, dst)
    relations: list = field(default_factory=list)  # [[(coeff, (names...))]]
    rad_square_zero: bool = False
    nilpotency: Optional[int] = None
    name: str = ""

    def quiver(self) -> Quiver:
        return Quiver(tuple(self.vertices), tuple(tuple(a) for a in self.arrows))

    def build(self) -> Algebra:
        q = self.quiver()
        if self.rad_square_zero:
            return radical_square_zero(q, self.field, self.name)
        pres = AlgebraPresentation(q, self.relations, self.nilpotency, self.field)
        return build_algebra(pres, self.name)


def _coeff(tok: str, line: int):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient '{tok}'", line) from None


def parse_presentation(text: str, name: str = "") -> PresentationFile:
    fld = None
    verts, arrows, rels = [], [], []
    rsz = False
    nil = None
    section = None
    seen = set()
    last = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = no
        head = line.split()[0]
        if head == "field":
            if fld is not None:
                raise ParseError("duplicate field line", no)
            spec = line[len("field"):].strip()
            try:
                fld = FieldSpec.parse(spec)
            except InputError as e:
                raise ParseError(str(e), no) from None
            section = None
            continue
        if fld is None:
            raise ParseError("first line must be 'field Q' or 'field Fp <prime>'", no)
        if line.endswith(":") or (head.endswith(":") and head[:-1] in _SECTIONS):
            key = head[:-1]
            if key not in _SECTIONS:
                raise ParseError(f"unknown section '{key}'", no)
            if key in seen:
                raise ParseError(f"duplicate section '{key}'", no)
            seen.add(key)
            section = key
            rest = line[len(head):].strip()
            if rest:
                line = rest
            else:
                continue
        elif head == "rad_square_zero":
            if len(line.split()) != 1:
                raise ParseError("rad_square_zero takes no arguments", no)
            rsz = True
            section = None
            continue
        elif head == "nilpotency":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'nilpotency <N>'", no)
            if nil is not None:
                raise ParseError("duplicate nilpotency line", no)
            nil = int(parts[1])
            section = None
            continue
        toks = line.split()
        if section == "vertices":
            verts.extend(toks)
        elif section == "arrows":
            if len(toks) != 3:
                raise ParseError("arrow lines are 'name src dst'", no)
            arrows.append(tuple(toks))
        elif section == "relations":
            if len(toks) % 2:
                raise ParseError("relation lines are 'coeff path' pairs", no)
            terms = []
            for i in range(0, len(toks), 2):
                c = _coeff(toks[i], no)
                terms.append((c, tuple(toks[i + 1].split("."))))
            rels.append(terms)
        else:
            raise ParseError(f"unknown key '{head}'", no)
    if fld is None:
        raise ParseError("missing field line", 1)
    if not verts:
        raise ParseError("empty vertex list", last or 1)
    if rsz and ("relations" in seen or nil is not None):
        raise ParseError("rad_square_zero excludes relations and nilpotency", last)
    if not rsz:
        if nil is None:
            raise ParseError("missing 'nilpotency <N>' (or 'rad_square_zero')", last)
    pf = PresentationFile(fld, verts, arrows, rels, rsz, nil, name)
    try:
        q = pf.quiver()
        if not rsz:
            AlgebraPresentation(q, rels, nil, fld).validate()
    except ParseError:
        raise
    except InputError as e:
        raise ParseError(str(e), last) from None
    return pf


def read_presentation(path: str) -> PresentationFile:
    import os
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_presentation(text, os.path.splitext(os.path.basename(path))[0])


def format_presentation(pf: PresentationFile) -> str:
    out = [f"field {'Q' if pf.field.p == 0 else 'Fp ' + str(pf.field.p)}", "vertices:",
           "  " + " ".join(pf.vertices), "arrows:"]
    out += [f"  {a} {s} {t}" for a, s, t in pf.arrows]
    if pf.rad_square_zero:
        out.append("rad_square_zero")
    else:
        out.append("relations:")
        for r in pf.relations:
            out.append("  " + " ".join(f"{c} {'.'.join(w)}" for c, w in r))
        out.append(f"nilpotency {pf.nilpotency}")
    return "\n".join(out) + "\n"
