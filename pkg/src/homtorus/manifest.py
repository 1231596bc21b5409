"""Line-oriented manifest files describing a homology 3-torus.

Keys: ``manifold``, ``generators``, ``relator``, ``cupform``, ``w2-basis``,
``linking-matrix`` (followed by one row per component), ``epsilon``,
``rohlin-leaf`` and ``casson-leaf``.  ``#`` starts a comment.  Sublinks are
bit strings: character ``i`` refers to component ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .cupforms import TrilinearForm
from .grouppres import Presentation, format_word
from .rohlin import SurgeryDatum, mask_bits

KEYS = (
    "manifold", "generators", "relator", "cupform", "linking-matrix",
    "rohlin-leaf", "casson-leaf", "epsilon", "w2-basis",
)


class ManifestError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Manifest:
    name: str
    presentation: Presentation
    cupform: TrilinearForm | None = None
    w2_basis: list | None = None
    surgery: SurgeryDatum | None = None
    extras: dict = field(default_factory=dict)


def _tokens(line: str):
    """Yield ``(column, token)`` pairs (1-based columns)."""
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def _int(tok, lineno, col, what="an integer"):
    try:
        return int(tok)
    except ValueError:
        raise ManifestError(lineno, col, f"expected {what}, got {tok!r}") from None


def _bits(tok, lineno, col, length=None):
    if not tok or any(ch not in "01" for ch in tok):
        raise ManifestError(lineno, col, f"expected a bit string, got {tok!r}")
    if length is not None and len(tok) != length:
        raise ManifestError(lineno, col, f"expected {length} bits, got {len(tok)}")
    return tuple(int(ch) for ch in tok)


def _mask(bits) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def parse_manifest(text) -> Manifest:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    name = None
    gens = None
    relators = []
    cup = {}
    w2 = []
    rows = []
    epsilon = None
    rohlin = {}
    casson = {}
    deferred = []  # checks that need the final dimensions
    n = 0
    i = 0
    while i < len(lines):
        lineno = i + 1
        raw = lines[i].split("#", 1)[0]
        i += 1
        toks = list(_tokens(raw))
        if not toks:
            continue
        col, key = toks[0]
        args = toks[1:]
        if key not in KEYS:
            raise ManifestError(lineno, col, f"unknown key {key!r}; expected one of {', '.join(KEYS)}")
        if key == "manifold":
            if not args:
                raise ManifestError(lineno, col + len(key), "expected a manifold name")
            name = " ".join(t for _, t in args)
        elif key == "generators":
            if len(args) != 1:
                raise ManifestError(lineno, col + len(key), "expected one generator count")
            gens = _int(args[0][1], lineno, args[0][0], "a generator count")
            if gens < 1:
                raise ManifestError(lineno, args[0][0], "generator count must be positive")
        elif key == "relator":
            word = []
            for c, t in args:
                x = _int(t, lineno, c, "a signed generator index")
                if x == 0:
                    raise ManifestError(lineno, c, "generator index 0 is not allowed")
                word.append((x, c))
            relators.append((lineno, word))
        elif key == "cupform":
            if len(args) != 4:
                raise ManifestError(lineno, col + len(key), "expected 'cupform i j k v'")
            a, b, c, v = (_int(t, lineno, cc) for cc, t in args)
            if not 1 <= a < b < c <= 3:
                raise ManifestError(lineno, args[0][0], "cupform indices must satisfy 1 <= i < j < k <= 3")
            if v not in (0, 1):
                raise ManifestError(lineno, args[3][0], "cupform value must be 0 or 1")
            cup[(a - 1, b - 1, c - 1)] = v
        elif key == "w2-basis":
            if len(args) != 1:
                raise ManifestError(lineno, col + len(key), "expected one relator sign bit string")
            w2.append((lineno, args[0][0], _bits(args[0][1], lineno, args[0][0])))
        elif key == "linking-matrix":
            if args:
                raise ManifestError(lineno, args[0][0], "linking-matrix rows go on the following lines")
            first = None
            while True:
                if i >= len(lines):
                    raise ManifestError(len(lines), 1, "unexpected end of file inside linking-matrix")
                lineno = i + 1
                body = lines[i].split("#", 1)[0]
                i += 1
                rtoks = list(_tokens(body))
                if not rtoks:
                    continue
                row = [_int(t, lineno, c) for c, t in rtoks]
                if first is None:
                    first = len(row)
                if len(row) != first:
                    raise ManifestError(lineno, 1, f"expected {first} entries in linking-matrix row")
                rows.append(row)
                if len(rows) == first:
                    break
            n = len(rows)
        elif key == "epsilon":
            epsilon = []
            for c, t in args:
                e = _int(t, lineno, c, "+1 or -1")
                if e not in (1, -1):
                    raise ManifestError(lineno, c, "epsilon entries must be +1 or -1")
                epsilon.append(e)
            deferred.append(("epsilon", lineno, args[0][0] if args else col, len(epsilon)))
        elif key in ("rohlin-leaf", "casson-leaf"):
            if len(args) != 2:
                raise ManifestError(lineno, col + len(key), f"expected '{key} <sublink bits> <value>'")
            (mc, mt), (vc, vt) = args
            bits = _bits(mt, lineno, mc)
            deferred.append(("leaf", lineno, mc, len(bits)))
            if key == "rohlin-leaf":
                v = _int(vt, lineno, vc, "0 or 1")
                if v not in (0, 1):
                    raise ManifestError(lineno, vc, "rohlin leaf must be 0 or 1")
                rohlin[_mask(bits)] = v
            else:
                try:
                    casson[_mask(bits)] = Fraction(vt)
                except (ValueError, ZeroDivisionError):
                    raise ManifestError(lineno, vc, f"expected a rational, got {vt!r}") from None

    last = len(lines) or 1
    if name is None:
        raise ManifestError(last, 1, "missing 'manifold' line")
    if gens is None:
        raise ManifestError(last, 1, "missing 'generators' line")
    for lineno, word in relators:
        for x, c in word:
            if abs(x) > gens:
                raise ManifestError(lineno, c, f"generator {abs(x)} out of range 1..{gens}")
    p = Presentation(gens, tuple(tuple(x for x, _ in w) for _, w in relators))
    basis = None
    if w2:
        basis = []
        for lineno, c, bits in w2:
            if len(bits) != p.num_relators:
                raise ManifestError(lineno, c, f"expected {p.num_relators} relator sign bits")
            basis.append(bits)
    form = TrilinearForm(3, cup) if cup else None
    surgery = None
    if rows:
        for kind, lineno, c, length in deferred:
            if length != n:
                what = "epsilon entries" if kind == "epsilon" else "sublink bits"
                raise ManifestError(lineno, c, f"expected {n} {what}, got {length}")
        surgery = SurgeryDatum(
            np.array(rows, dtype=np.int64), form, rohlin, casson,
            tuple(epsilon) if epsilon is not None else None,
        )
    elif deferred:
        _, lineno, c, _ = deferred[0]
        raise ManifestError(lineno, c, "surgery data given without a linking-matrix")
    return Manifest(name, p, form, basis, surgery)


def format_manifest(m: Manifest) -> str:
    out = [f"manifold {m.name}", f"generators {m.presentation.num_generators}"]
    out += [f"relator {format_word(r)}" for r in m.presentation.relators]
    if m.cupform is not None:
        for i, j, k in [(0, 1, 2)]:
            out.append(f"cupform {i + 1} {j + 1} {k + 1} {m.cupform.values.get((i, j, k), 0)}")
    for bits in m.w2_basis or ():
        out.append("w2-basis " + "".join(str(b) for b in bits))
    d = m.surgery
    if d is not None:
        out.append("linking-matrix")
        out += [" ".join(str(int(x)) for x in row) for row in np.asarray(d.linking_matrix)]
        if d.epsilon is not None:
            out.append("epsilon " + " ".join(str(e) for e in d.epsilon))
        for mask in sorted(d.rohlin_leaves):
            out.append(f"rohlin-leaf {mask_bits(mask, d.n)} {d.rohlin_leaves[mask]}")
        for mask in sorted(d.casson_leaves):
            out.append(f"casson-leaf {mask_bits(mask, d.n)} {d.casson_leaves[mask]}")
    return "\n".join(out) + "\n"


FIXTURES = ("t3.hm", "f3.hm")


def fixture_text(name: str) -> str:
    if not name.endswith(".hm"):
        name += ".hm"
    return resources.files("homtorus.fixtures").joinpath(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> Manifest:
    return parse_manifest(fixture_text(name))


def load_manifest(path) -> Manifest:
    """Read a manifest from ``path``; bare shipped fixture names also work."""
    path = Path(path)
    if path.is_file():
        return parse_manifest(path.read_bytes())
    if path.name in FIXTURES or path.name + ".hm" in FIXTURES:
        return load_fixture(path.name)
    raise FileNotFoundError(f"no such manifest: {path}")
