"""Command line front end: ``homtorus <command> --manifest FILE [options]``.

Exit status is 0 on success, 1 when ``verify`` finds a mismatch and 2 on
input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import cupforms
from .grouppres import Character, abelianize, character_basis, format_word, reidemeister_schreier
from .manifest import ManifestError, load_manifest
from .orbitact import cover_reducibility, decompose_class, lambda3_mod2
from .projrep import as_class, cocycle_classes, enum_q8, search_su2, twisted_h1_dim
from .rohlin import casson_ledger, rho_ladder, spin_structures, verify_casson_rohlin
from .su2core import ImageTag, canonical_q8, classify_image

COMMANDS = (
    "homology", "cupform", "classes", "enum-q8", "search-su2", "orbits",
    "twisted-h1", "cover", "spin", "rohlin", "verify",
)


class InputError(Exception):
    pass


class Report:
    """Collects rows for either a text or a CSV rendering."""

    def __init__(self, header):
        self.header = list(header)
        self.rows = []
        self.lines = []

    def row(self, *values):
        self.rows.append([str(v) for v in values])

    def text(self, line: str):
        self.lines.append(line)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.header)
            writer.writerows(self.rows)
            return buf.getvalue()
        return "\n".join(self.lines) + "\n"


def _bits(v) -> str:
    return "".join(str(int(b)) for b in v)


def w_to_signs(manifest, text: str | None) -> tuple:
    """Map ``--w`` (bits over the H^2 basis) to a relator sign-bit vector."""
    p = manifest.presentation
    if text is None:
        raise InputError("--w is required for this command")
    if not text or any(ch not in "01" for ch in text):
        raise InputError(f"--w expects a bit string, got {text!r}")
    bits = [int(ch) for ch in text]
    if manifest.w2_basis is not None:
        if len(bits) != len(manifest.w2_basis):
            raise InputError(f"--w needs {len(manifest.w2_basis)} bits (one per declared H^2 basis vector)")
        out = np.zeros(p.num_relators, dtype=np.int64)
        for b, image in zip(bits, manifest.w2_basis):
            if b:
                out = (out + np.array(image)) % 2
        return tuple(int(x) for x in out)
    if len(bits) == p.num_relators:
        return tuple(bits)
    if not any(bits):
        return (0,) * p.num_relators
    raise InputError(f"class {text} is not presentable: no relator sign vector represents it")


def cmd_homology(m, args):
    ab = abelianize(m.presentation)
    r = Report(["free_rank", "torsion", "num_characters", "homology_torus"])
    torus = ab.free_rank == 3 and not ab.torsion
    tors = " ".join(str(t) for t in ab.torsion)
    r.row(ab.free_rank, tors, 2 ** len(character_basis(m.presentation)), int(torus))
    r.text(f"H_1 = Z^{ab.free_rank}" + "".join(f" + Z/{t}" for t in ab.torsion))
    r.text(f"mod 2 characters: {2 ** len(character_basis(m.presentation))}")
    r.text("homology 3-torus: " + ("yes" if torus else "no"))
    return r, 0


def cmd_cupform(m, args):
    f = m.cupform
    if f is None:
        raise InputError("manifest has no cupform lines")
    r = Report(["x", "cup_rank"])
    r.text("odd" if cupforms.is_odd(f) else "even")
    rank = int(np.linalg.matrix_rank(cupforms.lambda2_cup_matrix(f)))
    r.text(f"wedge-square cup map rank: {rank}")
    for n in range(1, 8):
        x = [(n >> (2 - k)) & 1 for k in range(3)]
        cr = cupforms.cup_rank(f, x)
        r.row(_bits(x), cr)
        r.text(f"cup rank of {_bits(x)}: {cr}")
    return r, 0


def cmd_classes(m, args):
    dim, reps = cocycle_classes(m.presentation)
    r = Report(["representative", "zero"])
    r.text(f"dimension {dim}, {len(reps)} classes")
    for v in reps:
        r.row(_bits(v) or "-", int(not any(v)))
        r.text("  " + (_bits(v) or "(empty)"))
    return r, 0


def cmd_enum_q8(m, args):
    signs = w_to_signs(m, args.w)
    reps = enum_q8(m.presentation, signs)
    r = Report(["index", "images", "signs"])
    r.text(f"{len(reps)} conjugacy classes with relator signs {_bits(signs) or '(none)'}")
    for n, rep in enumerate(reps, 1):
        images = " ".join(str(q) for q in rep.images)
        r.row(n, images, _bits(rep.sign_bits))
        r.text(f"  {n}: {rep}")
    return r, 0


def cmd_search_su2(m, args):
    signs = w_to_signs(m, args.w)
    found = search_su2(m.presentation, signs, args.seeds, args.seed, args.defect_tol)
    r = Report(["index", "defect", "image_class", "q8_labels", "a", "b", "c", "d"])
    r.text(f"{len(found)} clusters from {args.seeds} seeds (seed {args.seed})")
    for n, (rep, d) in enumerate(found, 1):
        cls_tol = max(args.tol, 10 * args.defect_tol ** 0.5)
        tag = classify_image(rep.images, cls_tol).tag
        labels = ""
        if tag is not ImageTag.IRREDUCIBLE_OTHER:
            labels = " ".join(str(q) for q in canonical_q8(rep.images, cls_tol)[0])
        for q in rep.images:
            r.row(n, f"{d:.3e}", tag.value, labels, *(f"{t:.12f}" for t in q.as_array()))
        r.text(f"  {n}: defect {d:.3e}, {tag.value}" + (f", Q8 labels {labels}" if labels else ""))
    return r, 0


def cmd_orbits(m, args):
    signs = w_to_signs(m, args.w)
    decomp = decompose_class(m.presentation, signs)
    r = Report(["orbit", "size", "stabilizer_order", "members"])
    k = len(decomp.orbits)
    head = f"{k} orbit" + ("" if k == 1 else "s")
    if k == 1:
        o = decomp.orbits[0]
        head += f", size {o.size}, stabilizer order {len(o.stabilizer)}"
    r.text(head)
    for n, o in enumerate(decomp.orbits, 1):
        members = " ".join(str(x) for x in o.members)
        r.row(n, o.size, len(o.stabilizer), members)
        stab = " ".join(str(c) for c in o.stabilizer)
        r.text(f"  orbit {n}: size {o.size}, stabilizer {{{stab}}}, members {members}")
    if decomp.nonzero_class:
        r.text(f"lambda''' mod 2: {lambda3_mod2(decomp)}")
    return r, 0


def cmd_twisted_h1(m, args):
    signs = w_to_signs(m, args.w)
    r = Report(["rep", "twisted_h1_dim", "cover"])
    for rep in enum_q8(m.presentation, signs):
        dim = twisted_h1_dim(m.presentation, rep)
        tag = cover_reducibility(m.presentation, rep).value
        r.row(rep, dim, tag)
        r.text(f"  {rep}: dim H^1 = {dim}, restriction to cover {tag}")
    return r, 0


def cmd_cover(m, args):
    p = m.presentation
    if args.chars:
        chars = []
        for text in args.chars:
            if len(text) != p.num_generators or any(ch not in "01" for ch in text):
                raise InputError(f"character {text!r} must be {p.num_generators} bits")
            chars.append(Character(tuple(int(ch) for ch in text)))
    else:
        chars = character_basis(p)
    try:
        cover = reidemeister_schreier(p, chars)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ab = abelianize(cover.presentation)
    r = Report(["index", "generators", "relators", "free_rank", "torsion"])
    tors = " ".join(str(t) for t in ab.torsion)
    r.row(cover.index, cover.presentation.num_generators, cover.presentation.num_relators, ab.free_rank, tors)
    r.text(f"index {cover.index} cover: {cover.presentation.num_generators} generators, "
           f"{cover.presentation.num_relators} relators")
    r.text(f"H_1 = Z^{ab.free_rank}" + "".join(f" + Z/{t}" for t in ab.torsion))
    if args.verbose:
        for n, w in enumerate(cover.inclusion, 1):
            r.text(f"  y{n} = {format_word(w)}")
    return r, 0


def _surgery(m):
    if m.surgery is None:
        raise InputError("manifest has no surgery section")
    return m.surgery


def cmd_spin(m, args):
    d = _surgery(m)
    try:
        sols = spin_structures(d)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    r = Report(["characteristic_sublink"])
    r.text(f"{len(sols)} spin structures")
    for c in sols:
        r.row(_bits(c))
        r.text("  " + _bits(c))
    return r, 0


def cmd_rohlin(m, args):
    d = _surgery(m)
    try:
        ladder = rho_ladder(d)
        lam = casson_ledger(d) if d.casson_leaves else None
    except KeyError as exc:
        raise InputError(exc.args[0]) from exc
    r = Report(["quantity", "sublink", "value"])
    for k, v in ladder.rho1.items():
        r.row("rho1", k, v)
        r.text(f"rho'({k}) = {v}")
    for (k, l), v in ladder.rho2.items():
        r.row("rho2", f"{k}{l}", v)
        r.text(f"rho''({k},{l}) = {v}")
    if ladder.rho3 is not None:
        r.row("rho3", "123", ladder.rho3)
        r.text(f"rho''' = {ladder.rho3}")
    if lam is not None:
        r.row("casson", "", lam)
        r.text(f"lambda = {lam}")
    return r, 0


def cmd_verify(m, args):
    if m.surgery is None or m.cupform is None:
        raise InputError("verify needs cupform and surgery data")
    try:
        rep = verify_casson_rohlin(m.presentation, m.surgery)
    except KeyError as exc:
        raise InputError(exc.args[0]) from exc
    r = Report(["lambda3_mod2", "cup", "rho3", "w_independent", "passed"])
    r.row(rep.lambda3, rep.cup, rep.rho3, int(rep.w_independent), int(rep.passed))
    for bits, v in sorted(rep.lambda3_by_class.items()):
        r.text(f"  w = {_bits(bits)}: lambda''' mod 2 = {v}")
    r.text(f"(λ''' mod 2, cup, ρ''') = ({rep.lambda3}, {rep.cup}, {rep.rho3})")
    r.text("pass" if rep.passed else "FAIL")
    return r, 0 if rep.passed else 1


HANDLERS = {
    "homology": cmd_homology, "cupform": cmd_cupform, "classes": cmd_classes,
    "enum-q8": cmd_enum_q8, "search-su2": cmd_search_su2, "orbits": cmd_orbits,
    "twisted-h1": cmd_twisted_h1, "cover": cmd_cover, "spin": cmd_spin,
    "rohlin": cmd_rohlin, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homtorus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--manifest", required=True, help="manifest file (t3.hm and f3.hm are built in)")
        sp.add_argument("--format", choices=("text", "csv"), default="text")
        sp.add_argument("--w", help="H^2 class as bits over the manifest's basis")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--defect-tol", type=float, default=1e-12)
        sp.add_argument("--seeds", type=int, default=50)
        sp.add_argument("--seed", type=int, default=0)
        if name == "cover":
            sp.add_argument("--chars", nargs="*", help="characters as generator bit strings")
            sp.add_argument("--verbose", action="store_true")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        manifest = load_manifest(args.manifest)
        report, code = HANDLERS[args.command](manifest, args)
    except (ManifestError, InputError, FileNotFoundError) as exc:
        print(f"homtorus {args.command}: input error: {exc}", file=stderr)
        return 2
    stdout.write(report.render(args.format))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
