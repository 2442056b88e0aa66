"""Command line interface.

Every command prints a ``key: value`` report (sections start with ``==``),
optionally writes it to ``--report`` with figures next to it, and exits with
0 when all checks pass, 1 when a checked violation is found and 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from . import fileformat
from .companion import drill_true_companion, theorem_input
from .complex import euler_characteristic, homology_ranks, is_boundary
from .corpus import GENERATORS, STACKS, generate
from .embedding import EmbeddingResult, embed_planar, verify_embedding
from .errors import FormatError, TopologyError
from .handles import chart_boundary_mesh, chart_disc_mesh, pieces_report
from .linking import Manifold3, SplittingDisc, linking_number, split_along_disc, verify_independence
from .pipeline import run_theorem_pipeline
from .planarize import planarize
from .strata import is_planar, pyramid_check, validate
from .surface import SurfaceComplex, avoids_interior, components, find_nontrivial_circle, is_simple_circle

OK, VIOLATION, USAGE = 0, 1, 2


class Report:
    def __init__(self, title: str):
        self.lines = [f"== {title}"]
        self.figures: list[tuple[str, Callable[[Path], object]]] = []
        self.ok = True

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def check(self, key: str, value: bool) -> None:
        self.add(key, value)
        self.ok = self.ok and bool(value)

    def section(self, title: str) -> None:
        self.lines.append(f"== {title}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _load(path: str) -> fileformat.ComplexFile:
    try:
        return fileformat.read(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _indices(text: str | None, cf: fileformat.ComplexFile | None = None) -> tuple[int, ...]:
    if text:
        try:
            return tuple(int(x) for x in text.split(","))
        except ValueError:
            raise FormatError(f"bad --indices value {text!r}") from None
    if cf is not None and cf.handle_indices:
        return cf.handle_indices
    return (0, 3)


# --- commands -------------------------------------------------------------------

def cmd_homology(a) -> Report:
    K = _load(a.file).complex
    rep = Report("homology")
    rep.add("f_vector", K.f_vector)
    rep.add("ranks", homology_ranks(K, K.dim))
    rep.add("euler", euler_characteristic(K))
    return rep


def cmd_classify(a) -> Report:
    K = _load(a.file).complex
    s = SurfaceComplex.of(K)
    rep = Report("classify")
    for i, comp in enumerate(components(s)):
        c = comp.classification
        rep.add(f"component {i + 1}", f"orientable={c.orientable} genus={c.genus} boundary={c.boundary_count} euler={c.euler}")
    rep.add("planar", all(c.classification.orientable and c.classification.genus == 0 and c.classification.boundary_count > 0 for c in components(s)))
    return rep


def cmd_circle_find(a) -> Report:
    K = _load(a.file).complex
    s = SurfaceComplex.of(K)
    t = K.label(a.subsurface) if a.subsurface else SurfaceComplex()
    rep = Report("circle-find")
    c = find_nontrivial_circle(s, t, method=a.method)
    rep.add("circle", " ".join(map(str, sorted(c.vertices))))
    rep.add("edges", len(c.support))
    rep.check("simple", is_simple_circle(c))
    rep.check("non_bounding", not is_boundary(c, s)[0])
    rep.check("avoids_subsurface_interior", avoids_interior(s, c, t))
    return rep


def cmd_link(a) -> Report:
    K = _load(a.file).complex
    m = Manifold3(K)
    ca, cb = K.label_chain(a.a, 1), K.label_chain(a.b, 1)
    rep = Report("link")
    lk = linking_number(m, ca, cb)
    rep.add("lk", lk)
    rep.check("symmetric", linking_number(m, cb, ca) == lk)
    rep.check("independent_of_spanning_chain", set(verify_independence(m, ca, cb, seed=a.seed)) == {lk})
    rep.value = lk
    return rep


def cmd_split(a) -> Report:
    K = _load(a.file).complex
    m = Manifold3(K)
    d = SplittingDisc.of(K.label_chain(a.disc, 2).support)
    res = split_along_disc(m, d)
    rep = Report("split")
    rep.check("components_two", res.components == 2)
    rep.check("intersection_is_disc", res.intersection_is_disc)
    rep.check("boundary_spheres", res.boundary_spheres)
    if res.components == 2:
        rep.add("U", f"{len(res.U.tets)} tetrahedra ranks {res.U.ranks}")
        rep.add("V", f"{len(res.V.tets)} tetrahedra ranks {res.V.ranks}")
    for n in res.notes:
        rep.add("note", n)
    return rep


def cmd_strat_validate(a) -> Report:
    cf = _load(a.file)
    if cf.stratification is None:
        raise FormatError("file has no STRATA section")
    st = cf.stratification
    v = validate(st)
    rep = Report("strat-validate")
    rep.add("strata", len(st))
    for x in v.violations:
        rep.add("violation", f"{x.kind} strata={x.strata}")
    rep.check("valid", v.ok)
    rep.add("planar", is_planar(st))
    rep.add("pyramid", pyramid_check(st))
    rep.figures.append(("strata", lambda p: _plots().strata_figure(st, p)))
    return rep


def cmd_chart_mesh(a) -> Report:
    rep = Report("chart-mesh")
    if a.index in (1, 2):
        mesh = chart_boundary_mesh(a.index, a.res)
        pr = pieces_report(mesh)
        rep.add("resolution", f"{mesh.resolution[0]}x{mesh.resolution[1]}")
        c = pr.classification
        rep.add("euler", c[3])
        rep.check("closed_orientable_genus0", c[:3] == (True, 0, 0))
        rep.check("pieces_partition", pr.partition)
        for (p, q), kind in sorted(pr.intersections.items()):
            rep.add(f"{p} meets {q}", kind)
        rep.check("pieces_meet_in_circles", pr.ok)
        for k, v in sorted(mesh.exact.items()):
            if not isinstance(v, (list, tuple)):
                rep.add(f"exact.{k}", v)
        rep.figures.append(("chart", lambda p: _plots().chart_mesh_figure(mesh, p)))
    elif a.index in (0, 3):
        mesh = chart_disc_mesh(a.index)
        c = mesh.surface.classification
        rep.add("euler", c.euler)
        rep.check("closed_orientable_genus0", (c.orientable, c.genus, c.boundary_count) == (True, 0, 0))
    else:
        raise FormatError("--index must be 0, 1, 2 or 3")
    if a.off:
        fileformat.write_off(a.off, {i: p for i, p in enumerate(mesh.coords)}, sorted(mesh.surface.simplices(2)))
        rep.add("off", a.off)
    return rep


def _companion(a):
    cf = _load(a.file)
    ti = theorem_input(cf.complex, _indices(a.indices, cf))
    return ti, drill_true_companion(ti.M, ti.charts, ti.stratification)


def cmd_companion(a) -> Report:
    ti, cs = _companion(a)
    rep = Report("companion")
    rep.add("indices", ti.assembly.spec.indices)
    rep.add("ambient f_vector", ti.M.complex.f_vector)
    for k, v in cs.conditions.items():
        rep.check(k, v)
    rep.add("H ranks", cs.H.ranks)
    rep.add("H strata", len(cs.stratification))
    for line in cs.log.lines():
        rep.add("op", line)
    rep.figures.append(("strata", lambda p: _plots().strata_figure(cs.stratification, p)))
    return rep


def cmd_planarize(a) -> Report:
    _, cs = _companion(a)
    ps = planarize(cs, a.budget)
    rep = Report("planarize")
    for line in ps.lines():
        rep.lines.append(line)
    rep.check("steps_certified", ps.steps_certified)
    if ps.audit:
        rep.check("audit_consistent", ps.audit["recorded_boundary_consistent"])
    return rep


def _embed(cf: fileformat.ComplexFile):
    if cf.stratification is None:
        raise FormatError("file has no STRATA section")
    st = cf.stratification
    h = Manifold3(st.union)
    return h, st


def cmd_embed(a) -> Report:
    cf = _load(a.file)
    h, st = _embed(cf)
    e = embed_planar(h, st)
    er = verify_embedding(e, h, a.mode)
    rep = Report("embed")
    for n in e.notes:
        rep.add("note", n)
    _verify_lines(rep, er)
    if a.coords:
        Path(a.coords).write_text(fileformat.coords_text(e.coords))
        rep.add("coords", a.coords)
    if a.off:
        fileformat.write_off(a.off, e.coords, _oriented_boundary(h))
        rep.add("off", a.off)
    rep.figures.append(("layouts", lambda p: _plots().layouts_figure(e, p)))
    rep.figures.append(("boundary", lambda p: _plots().embedding_figure(e, h, p)))
    return rep


def cmd_verify_embed(a) -> Report:
    cf = _load(a.file)
    h, st = _embed(cf)
    try:
        coords = fileformat.parse_coords(Path(a.coords).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {a.coords}: {exc.strerror}") from None
    e = EmbeddingResult(coords, st, [], [])
    rep = Report("verify-embed")
    _verify_lines(rep, verify_embedding(e, h, a.mode))
    return rep


def _verify_lines(rep: Report, er) -> None:
    rep.add("mode", er.mode)
    rep.add("pairs_checked", er.pairs_checked)
    rep.check("covers_all", er.covers_all)
    rep.check("nondegenerate", er.nondegenerate)
    rep.check("no_overlaps", not er.violations)
    rep.check("boundary_closed_surface", er.boundary_closed_surface)
    for v in er.violations[:20]:
        rep.add("violation", v)


def _oriented_boundary(h: Manifold3):
    from .surface import orientation

    o = orientation(h.boundary_surface)
    return [o[t] for t in sorted(o)]


def cmd_theorem(a) -> Report:
    cf = _load(a.file)
    m = Manifold3(cf.complex)
    rep = Report("theorem")
    if not m.is_closed() or not m.homology_sphere_evidence():
        rep.check("input_homology_sphere", False)
        rep.add("diagnostic", "input rejected: not a closed manifold with homology-sphere evidence")
        return rep
    ti = theorem_input(m, _indices(a.indices, cf))
    tr = run_theorem_pipeline(ti.M, ti.charts, ti.stratification, budget=a.budget)
    rep.lines += tr.lines()
    rep.section("summary")
    rep.check("performed_steps_certified", tr.performed_certified)
    rep.check("operations_preserve_invariants", tr.log.all_preserved)
    rep.check("companion_ranks_1000", tr.companion_ranks == (1, 0, 0, 0))
    rep.check("companion_boundary_sphere", tr.companion_boundary_sphere)
    rep.add("verified_facts", len(tr.verified))
    rep.add("cited_facts", len(tr.cited))
    if tr.embedding is not None and a.off:
        fileformat.write_off(a.off, tr.embedding.coords, _oriented_boundary(tr.companion.H))
        rep.add("off", a.off)
    if tr.companion is not None:
        st = tr.planarization.stratification if tr.planarization else tr.companion.stratification
        rep.figures.append(("strata", lambda p: _plots().strata_figure(st, p)))
    if tr.embedding is not None:
        rep.figures.append(("layouts", lambda p: _plots().layouts_figure(tr.embedding, p)))
    return rep


def cmd_generate(a) -> Report:
    params = {}
    for kv in a.param or []:
        k, sep, v = kv.partition("=")
        if not sep:
            raise FormatError(f"bad --param {kv!r}, expected key=value")
        params[k] = int(v)
    try:
        entry = generate(a.name, **params)
    except KeyError:
        raise FormatError(f"unknown generator {a.name!r}; known: {', '.join(sorted([*GENERATORS, *STACKS]))}") from None
    K = entry.complex
    rep = Report("generate")
    rep.add("name", a.name)
    rep.add("f_vector", K.f_vector)
    ranks = homology_ranks(K, K.dim)
    rep.check("ranks_as_declared", ranks == tuple(entry.expected["ranks"]))
    rep.check("euler_as_declared", euler_characteristic(K) == entry.expected["euler"])
    if a.out:
        fileformat.write(a.out, fileformat.ComplexFile(K, entry.stratification, _indices(a.indices) if a.indices else None))
        rep.add("out", a.out)
    return rep


def _plots():
    from . import plots

    return plots


# --- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tritopo", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="also write the report here, with figures next to it")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, file=True):
        q = sub.add_parser(name)
        if file:
            q.add_argument("file")
        q.set_defaults(fn=fn)
        return q

    add("homology", cmd_homology)
    add("classify", cmd_classify)
    q = add("circle-find", cmd_circle_find)
    q.add_argument("--subsurface")
    q.add_argument("--method", choices=("induction", "linear"), default="induction")
    q = add("link", cmd_link)
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q = add("split", cmd_split)
    q.add_argument("--disc", required=True)
    add("strat-validate", cmd_strat_validate)
    q = add("chart-mesh", cmd_chart_mesh, file=False)
    q.add_argument("--index", type=int, required=True)
    q.add_argument("--res", default="24x8")
    q.add_argument("--off")
    for name, fn in (("companion", cmd_companion), ("planarize", cmd_planarize), ("theorem", cmd_theorem)):
        q = add(name, fn)
        q.add_argument("--indices", help="critical indices, e.g. 0,1,2,3 (default: HANDLESPEC or 0,3)")
        q.add_argument("--budget", type=int, default=20)
        if name == "theorem":
            q.add_argument("--off")
    q = add("embed", cmd_embed)
    q.add_argument("--mode", choices=("fast", "exhaustive"), default="fast")
    q.add_argument("--off")
    q.add_argument("--coords")
    q = add("verify-embed", cmd_verify_embed)
    q.add_argument("--coords", required=True)
    q.add_argument("--mode", choices=("fast", "exhaustive"), default="fast")
    q = add("generate", cmd_generate, file=False)
    q.add_argument("name")
    q.add_argument("--param", action="append")
    q.add_argument("--indices", help="also write a HANDLESPEC with these critical indices")
    q.add_argument("--out")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # global flags may also follow the subcommand
    for flag in ("--seed", "--report"):
        if flag in argv:
            i = argv.index(flag)
            if i + 1 < len(argv):
                argv = [flag, argv[i + 1]] + argv[:i] + argv[i + 2:]
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    random.seed(a.seed)
    try:
        rep = a.fn(a)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except TopologyError as exc:
        rep = Report(a.command)
        rep.check("completed", False)
        rep.add("diagnostic", str(exc))
    if a.command == "link" and hasattr(rep, "value"):
        print(rep.value)
    sys.stdout.write(rep.text())
    if a.report:
        path = Path(a.report)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rep.text())
        for name, draw in rep.figures:
            draw(path.with_name(f"{path.stem}_{name}.png"))
    return OK if rep.ok else VIOLATION


if __name__ == "__main__":
    sys.exit(main())
