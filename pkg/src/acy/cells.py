"""Cell systems on SU(3) ADE graphs.

A cell system assigns a weight W(tri) to every closed loop of length three;
the weights must satisfy the two compatibility equations (type I over
pairs of parallel edges, type II over quadrilateral frames).  From a cell
system we derive the degree-2 relations of the quotient algebra: for an edge
a the relation is the sum over based loops (a, b, c) of W * (the path bc).

The equations are compiled once per graph into monomial form, shared by the
exact verifier and the numeric solver backends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .quiver import Graph, build_family
from .scalar import FieldTower, Scalar

__all__ = ["CellSystem", "RelationSet", "CellReport", "compile_equations",
           "verify_type_I", "verify_type_II", "derive_relations",
           "gauge_transform", "check_nu_invariance",
           "orbifold_cells", "unfold_cells", "builtin_cells", "builtin_relations",
           "standard_relations_e8star", "standard_relations_e8", "cells_to_doc", "cells_from_doc",
           "relations_to_doc", "relations_from_doc"]


def canon(tri: tuple[int, int, int]) -> tuple[int, int, int]:
    """Canonical representative of a closed loop under cyclic rotation."""
    a, b, c = tri
    return min((a, b, c), (b, c, a), (c, a, b))


class CellSystem:
    """Triangle weights on a graph, over a declared tower."""

    def __init__(self, graph: Graph, tower: FieldTower, weights: dict[tuple, Scalar],
                 label: str = "cells"):
        self.graph = graph
        self.tower = tower
        self.label = label
        tris = graph.triangles()
        self.weights = {}
        for t in tris:
            w = weights.get(t)
            if w is None:
                raise ValueError(f"missing weight for triangle {t}")
            self.weights[t] = w.lift(tower)
        if len(weights) != len(tris):
            extra = set(weights) - set(tris)
            raise ValueError(f"weights given for unknown triangles {sorted(extra)}")

    def weight(self, e1: int, e2: int, e3: int) -> Scalar:
        return self.weights[canon((e1, e2, e3))]

    def is_real(self) -> bool:
        return all(w.is_real() for w in self.weights.values())

    def __repr__(self):
        return f"CellSystem({self.graph.name}, {len(self.weights)} triangles, {self.label})"


@dataclass
class Relation:
    edge_id: int          # the deriving edge a
    src: str              # r(a): relations live in paths r(a) -> s(a)
    dst: str              # s(a)
    terms: dict           # (b_id, c_id) -> Scalar


class RelationSet:
    def __init__(self, graph: Graph, tower: FieldTower, relations: list[Relation]):
        self.graph = graph
        self.tower = tower
        self.relations = relations
        for r in self.relations:
            e = graph.edge_by_id[r.edge_id]
            if r.src != e.dst or r.dst != e.src:
                raise ValueError(f"relation at edge {r.edge_id} has wrong endpoints")
            for (b, c) in r.terms:
                eb, ec = graph.edge_by_id[b], graph.edge_by_id[c]
                if eb.src != r.src or eb.dst != ec.src or ec.dst != r.dst:
                    raise ValueError(f"relation term {(b, c)} is not a path {r.src}->{r.dst}")

    def by_block(self) -> dict[tuple[str, str], list[dict]]:
        out: dict[tuple[str, str], list[dict]] = {}
        for r in self.relations:
            out.setdefault((r.src, r.dst), []).append(r.terms)
        return out

    def __repr__(self):
        return f"RelationSet({self.graph.name}, {len(self.relations)} relations)"


# ---------------------------------------------------------------------------
# equation compiler: type I and type II in monomial form
# ---------------------------------------------------------------------------

@dataclass
class Equation:
    kind: str                  # "I" or "II"
    frame: tuple               # edge ids identifying the frame
    terms: list                # [(coeff Scalar, ((tri, conj_flag), ...)), ...]
    rhs: Scalar


def compile_equations(graph: Graph) -> list[Equation]:
    """All type I and type II equations of the graph, with exact coefficients."""
    tower = graph.tower
    phi = graph.phi
    two = tower.quantum(2)
    eqs: list[Equation] = []
    out_e, in_e = graph.out_edges, graph.in_edges
    # type I: ordered pairs of parallel edges (a, a')
    for (i, j), cls in sorted(graph.parallel_classes().items()):
        for a in cls:
            for a2 in cls:
                terms = []
                for b1 in out_e[j]:
                    for b2 in graph.out_edges[b1.dst]:
                        if b2.dst != i:
                            continue
                        t1 = canon((a.id, b1.id, b2.id))
                        t2 = canon((a2.id, b1.id, b2.id))
                        terms.append((tower.one(), ((t1, False), (t2, True))))
                rhs = two * phi[i] * phi[j] if a.id == a2.id else tower.zero()
                eqs.append(Equation("I", (a.id, a2.id), terms, rhs))
    # type II: frames a1: i4->i1, a2: i2->i1, a3: i2->i3, a4: i4->i3
    for i2 in graph.vertices:
        for a2 in out_e[i2]:
            i1 = a2.dst
            for a3 in out_e[i2]:
                i3 = a3.dst
                for a1 in in_e[i1]:
                    i4 = a1.src
                    for a4 in out_e[i4]:
                        if a4.dst != i3:
                            continue
                        terms = []
                        for k in graph.vertices:
                            b1s = [b for b in out_e[i1] if b.dst == k]
                            if not b1s:
                                continue
                            b3s = [b for b in out_e[i3] if b.dst == k]
                            if not b3s:
                                continue
                            b2s = [b for b in out_e[k] if b.dst == i2]
                            b4s = [b for b in out_e[k] if b.dst == i4]
                            if not b2s or not b4s:
                                continue
                            coeff = phi[k].inverse()
                            for b1 in b1s:
                                for b2 in b2s:
                                    for b3 in b3s:
                                        for b4 in b4s:
                                            terms.append((coeff, (
                                                (canon((a2.id, b1.id, b2.id)), False),
                                                (canon((a3.id, b3.id, b2.id)), True),
                                                (canon((a4.id, b3.id, b4.id)), False),
                                                (canon((a1.id, b1.id, b4.id)), True),
                                            )))
                        rhs = tower.zero()
                        if a1.id == a4.id and a2.id == a3.id:
                            rhs = rhs + phi[i4] * phi[i1] * phi[i2]
                        if a1.id == a2.id and a3.id == a4.id:
                            rhs = rhs + phi[i1] * phi[i2] * phi[i3]
                        eqs.append(Equation("II", (a1.id, a2.id, a3.id, a4.id), terms, rhs))
    return eqs


@dataclass
class CellReport:
    kind: str
    frames: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _verify(cells: CellSystem, kind: str, equations=None) -> CellReport:
    eqs = equations if equations is not None else compile_equations(cells.graph)
    tower = cells.tower
    W = cells.weights
    pair_cache: dict = {}
    report = CellReport(kind, 0)

    def pair(t1, c1, t2, c2):
        key = (t1, c1, t2, c2)
        v = pair_cache.get(key)
        if v is None:
            x = W[t1].conjugate() if c1 else W[t1]
            y = W[t2].conjugate() if c2 else W[t2]
            v = x * y
            pair_cache[key] = v
        return v

    for eq in eqs:
        if eq.kind != kind:
            continue
        report.frames += 1
        acc = tower.zero()
        for coeff, monos in eq.terms:
            if len(monos) == 2:
                (t1, c1), (t2, c2) = monos
                prod = pair(t1, c1, t2, c2)
            else:
                (t1, c1), (t2, c2), (t3, c3), (t4, c4) = monos
                prod = pair(t1, c1, t2, c2)
                if prod.is_zero():
                    continue
                prod = prod * pair(t3, c3, t4, c4)
            if not prod.is_zero():
                acc = acc + coeff * prod
        if acc != eq.rhs:
            report.failures.append(eq.frame)
    return report


def verify_type_I(cells: CellSystem, equations=None) -> CellReport:
    """Exact pass/fail per type I frame."""
    return _verify(cells, "I", equations)


def verify_type_II(cells: CellSystem, equations=None) -> CellReport:
    """Exact pass/fail per type II frame."""
    return _verify(cells, "II", equations)


# ---------------------------------------------------------------------------
# relations, gauge, nu-invariance
# ---------------------------------------------------------------------------

def derive_relations(cells: CellSystem) -> RelationSet:
    """Relation at edge a: sum over based loops (a, b, c) of W * path(b, c)."""
    g = cells.graph
    rels = []
    for a in g.edges:
        terms = {}
        for b in g.out_edges[a.dst]:
            for c in g.out_edges[b.dst]:
                if c.dst != a.src:
                    continue
                w = cells.weight(a.id, b.id, c.id)
                if not w.is_zero():
                    terms[(b.id, c.id)] = w
        rels.append(Relation(a.id, a.dst, a.src, terms))
    return RelationSet(g, cells.tower, rels)


def gauge_transform(cells: CellSystem, u: dict) -> CellSystem:
    """Apply a family of unitaries u[(src, dst)] (matrices over parallel edges).

    Missing classes default to the identity.  Unitarity is checked exactly.
    """
    g = cells.graph
    tower = cells.tower
    classes = g.parallel_classes()
    mats = {}
    for key, es in classes.items():
        m = u.get(key)
        if m is None:
            continue
        n = len(es)
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError(f"gauge matrix at {key} has wrong shape")
        m = [[x.lift(tower) if isinstance(x, Scalar) else tower.from_fraction(x)
              for x in row] for row in m]
        for i in range(n):
            for j in range(n):
                acc = tower.zero()
                for k in range(n):
                    acc = acc + m[i][k] * m[j][k].conjugate()
                if acc != (tower.one() if i == j else tower.zero()):
                    raise ValueError(f"gauge matrix at {key} is not unitary")
        mats[key] = {(es[i].id, es[j].id): m[i][j] for i in range(n) for j in range(n)}

    def factor(e_new: int, e_old: int) -> Scalar | None:
        e = g.edge_by_id[e_new]
        m = mats.get((e.src, e.dst))
        if m is None:
            return tower.one() if e_new == e_old else None
        return m.get((e_new, e_old))

    weights = {}
    for t in g.triangles():
        a, b, c = t
        acc = tower.zero()
        ea, eb, ec = (g.edge_by_id[x] for x in t)
        for a2 in g.out_edges[ea.src]:
            if a2.dst != ea.dst:
                continue
            fa = factor(a, a2.id)
            if fa is None or fa.is_zero():
                continue
            for b2 in g.out_edges[eb.src]:
                if b2.dst != eb.dst:
                    continue
                fb = factor(b, b2.id)
                if fb is None or fb.is_zero():
                    continue
                for c2 in g.out_edges[ec.src]:
                    if c2.dst != ec.dst:
                        continue
                    fc = factor(c, c2.id)
                    if fc is None or fc.is_zero():
                        continue
                    acc = acc + fa * fb * fc * cells.weights[canon((a2.id, b2.id, c2.id))]
        weights[t] = acc
    return CellSystem(g, tower, weights, label=cells.label + "+gauge")


def check_nu_invariance(cells: CellSystem) -> str:
    """'invariant' if W(nu tri) = W(tri); else 'span-stable' if the derived
    relation spans are nu-stable; else 'unstable'."""
    g = cells.graph
    invariant = True
    for t in g.triangles():
        nt = canon(tuple(g.nu_e[e] for e in t))
        if cells.weights[nt] != cells.weights[t]:
            invariant = False
            break
    if invariant:
        return "invariant"
    rels = derive_relations(cells)
    blocks = rels.by_block()
    path_index: dict[tuple, int] = {}

    def vec(terms):
        v = {}
        for bc, w in terms.items():
            idx = path_index.setdefault(bc, len(path_index))
            v[idx] = w
        return v

    for (i, j), terms_list in blocks.items():
        ti, tj = g.nu_v[i], g.nu_v[j]
        target = blocks.get((ti, tj), [])
        elim = linalg.Eliminator()
        for terms in target:
            elim.add(vec(terms))
        r0 = elim.rank
        for terms in terms_list:
            mapped = {(g.nu_e[b], g.nu_e[c]): w for (b, c), w in terms.items()}
            elim.add(vec(mapped))
        if elim.rank != r0:
            return "unstable"
    return "span-stable"


# ---------------------------------------------------------------------------
# orbifold (A(3k+3) -> D(3k+3)) and unfolding (G -> threefold cover)
# ---------------------------------------------------------------------------

def _phi_ratio(d_graph: Graph, cover: Graph, rep_of: dict, centre: str, tower: FieldTower):
    """mu with phi_D([u]) = mu phi_A(u) and phi_D(c_l) = mu phi_A(centre)/3."""
    mu = None
    for v in cover.vertices:
        if v == centre:
            continue
        lbl = f"[{rep_of[v]}]"
        ratio = d_graph.phi[lbl].lift(tower) / cover.phi[v].lift(tower)
        if mu is None:
            mu = ratio
        elif mu != ratio:
            raise ValueError("inconsistent phi ratio between orbifold and cover")
    for l in range(3):
        expect = mu * cover.phi[centre].lift(tower) / 3
        if d_graph.phi[f"c{l}"].lift(tower) != expect:
            raise ValueError("triplicated-vertex phi is not one third of the cover's")
    return mu


def orbifold_cells(d_graph: Graph, a_cells: CellSystem) -> CellSystem:
    """Cell system on D(3k+3) from a nu-invariant one on A(3k+3).

    Weights of liftable triangles are the cover weights; triangles through a
    triplicated vertex c_l pick up 1/sqrt(3) and a cube-root-of-unity phase
    omega^(l) or omega^(2l) according to which of the two parallel edges the
    triangle uses; non-liftable triangles get weight zero.
    """
    cover: Graph = d_graph.cover
    lift_info = d_graph.cover_lift
    rep_of = d_graph.cover_orbit_rep
    centre = d_graph.cover_centre
    if check_nu_invariance(a_cells) != "invariant":
        raise ValueError("orbifold requires nu-invariant cover cells")
    tower, sqrt3 = a_cells.tower.adjoin_sqrt(a_cells.tower.from_fraction(3))
    mu = _phi_ratio(d_graph, cover, rep_of, centre, tower)
    inv_sqrt3 = sqrt3.inverse()
    # omega^1 = -1/2 + i sqrt3/2
    om_re = tower.from_fraction(Fraction(-1, 2))
    om_im = sqrt3 * Fraction(1, 2)
    omega = om_re + tower.i_times(om_im)
    omega2 = omega * omega

    # the two parallel D-edges: phase exponents 1 and 2 by increasing edge id
    doubles = [es for es in d_graph.parallel_classes().values() if len(es) > 1]
    if len(doubles) != 1 or len(doubles[0]) != 2:
        raise ValueError("expected exactly one double edge on the orbifold graph")
    gamma, gamma2 = sorted(e.id for e in doubles[0])
    phase_exp = {gamma: 1, gamma2: 2}

    cover_orbit_members: dict[int, tuple[int, ...]] = {}
    for eid, info in lift_info.items():
        base = info[1]
        cover_orbit_members[eid] = (base, cover.nu_e[base], cover.nu_e[cover.nu_e[base]])

    def lift_edge_from(eid: int, src_vertex: str):
        """The cover edge in eid's orbit with the given source, or None."""
        for m in cover_orbit_members[eid]:
            if cover.edge_by_id[m].src == src_vertex:
                return cover.edge_by_id[m]
        return None

    weights = {}
    for t in d_graph.triangles():
        es = [d_graph.edge_by_id[x] for x in t]
        kinds = [lift_info[x][0] for x in t]
        if "into_centre" in kinds:
            # rotate so the order is (free gamma-edge, into_centre, from_centre)
            while kinds[0] != "free":
                es = es[1:] + es[:1]
                kinds = kinds[1:] + kinds[:1]
            free_e, in_e, out_e = es
            l = lift_info[in_e.id][2]
            assert lift_info[out_e.id][2] == l  # both legs touch the same copy
            # lift: free edge from its source rep, into the centre, then the
            # out-of-centre member closing back at the start
            start = rep_of[free_e.src[1:-1]]
            le1 = lift_edge_from(free_e.id, start)
            le2 = lift_edge_from(in_e.id, le1.dst)
            le3 = None
            for m in cover_orbit_members[out_e.id]:
                if cover.edge_by_id[m].dst == start:
                    le3 = cover.edge_by_id[m]
                    break
            if le2 is None or le3 is None:
                raise ValueError("centre triangle failed to lift")
            w = a_cells.weight(le1.id, le2.id, le3.id) * mu * inv_sqrt3
            phase = omega if phase_exp[free_e.id] == 1 else omega2
            weights[t] = w * (phase ** (l % 3)) if l % 3 else w
        else:
            # free triangle: lift from the source rep of the first edge
            start = rep_of[es[0].src[1:-1]]
            le1 = lift_edge_from(es[0].id, start)
            le2 = lift_edge_from(es[1].id, le1.dst)
            le3 = lift_edge_from(es[2].id, le2.dst) if le2 is not None else None
            if le2 is None or le3 is None or le3.dst != start:
                weights[t] = tower.zero()
            else:
                weights[t] = a_cells.weights[canon((le1.id, le2.id, le3.id))] * mu
    return CellSystem(d_graph, tower, weights, label=f"orbifold({a_cells.label})")


def unfold_cells(cover_graph: Graph, base_cells: CellSystem) -> CellSystem:
    """Cell system on the threefold unfolding: each base triangle lifts three
    times with the same weight, rescaled to the cover's phi normalization."""
    base: Graph = cover_graph.base_graph
    edge_of = cover_graph.base_edge_of
    tower = base_cells.tower
    mu = None
    for v in base.vertices:
        ratio = cover_graph.phi[f"{v}_0"].lift(tower) / base.phi[v].lift(tower)
        if mu is None:
            mu = ratio
        elif mu != ratio:
            raise ValueError("inconsistent phi ratio between cover and base")
    weights = {}
    for t in cover_graph.triangles():
        b = canon(tuple(edge_of[x][0] for x in t))
        weights[t] = base_cells.weights[b] * mu
    return CellSystem(cover_graph, tower, weights, label=f"unfold({base_cells.label})")


# ---------------------------------------------------------------------------
# built-in data
# ---------------------------------------------------------------------------

def _data_path(name: str) -> str:
    from importlib.resources import files

    return files("acy").joinpath("data").joinpath(name)


def _load_cell_doc(name: str) -> dict:
    path = _data_path(name)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise FileNotFoundError(
            f"built-in cell data {name} is missing; regenerate with scripts/make_cells.py"
        ) from None


def builtin_cells(graph: Graph) -> CellSystem:
    """Certified built-in cells: frozen data for A, A*, E8*; orbifold/unfold
    constructions for D, D*, E8.  Raises for families without data.

    Graphs loaded from files are accepted when structurally identical to the
    built-in family of the same name (cells are built on a canonical twin
    and re-tagged)."""
    name = graph.name
    if name.startswith("A"):
        doc = _load_cell_doc(f"cells_{name.replace('*', 's')}.json")
        return cells_from_doc(graph, doc)
    if name == "E8*":
        doc = _load_cell_doc("cells_E8s.json")
        return cells_from_doc(graph, doc)
    if name == "E8":
        twin = graph if hasattr(graph, "base_graph") else _canonical_twin(graph)
        cells = unfold_cells(twin, builtin_cells(build_family("E8*")))
    elif name.startswith("D") and name.endswith("*"):
        n = int(name[1:-1])
        twin = graph if hasattr(graph, "base_graph") else _canonical_twin(graph)
        cells = unfold_cells(twin, builtin_cells(build_family("A*", n)))
    elif name.startswith("D"):
        n = int(name[1:])
        twin = graph if hasattr(graph, "cover") else _canonical_twin(graph)
        cells = orbifold_cells(twin, builtin_cells(build_family("A", n)))
    else:
        raise ValueError(f"no built-in cell data for {name}: user data required")
    if twin is graph:
        return cells
    return CellSystem(graph, cells.tower, cells.weights, label=cells.label)


def _canonical_twin(graph: Graph) -> Graph:
    """The built-in graph with this name, required to match structurally."""
    from .quiver import parse_graph_spec

    twin = parse_graph_spec(graph.name)
    same = (twin.vertices == graph.vertices
            and [(e.id, e.src, e.dst) for e in twin.edges]
            == [(e.id, e.src, e.dst) for e in graph.edges]
            and twin.nu_v == graph.nu_v and twin.nu_e == graph.nu_e)
    if not same:
        raise ValueError(f"graph {graph.name!r} does not match the built-in family "
                         "of that name: supply cells from a file")
    return twin


def builtin_relations(graph: Graph) -> RelationSet:
    """Relation sets in their standard closed form where one exists (E8,
    E8*); relations derived from built-in cells otherwise."""
    if graph.name == "E8*":
        return standard_relations_e8star(graph)
    if graph.name == "E8":
        return standard_relations_e8(graph)
    return derive_relations(builtin_cells(graph))


def standard_relations_e8star(graph: Graph | None = None) -> RelationSet:
    """The eight closed-form relations of the four-vertex exceptional graph."""
    g = graph if graph is not None else build_family("E8*")
    base = FieldTower(8)
    tower, s3 = base.adjoin_sqrt(base.quantum(3))
    one = tower.one()
    inv_s3 = s3.inverse()
    q2 = tower.quantum(2)
    s3_over_2 = s3 / q2

    def eid(src, dst):
        hits = [e.id for e in g.out_edges[src] if e.dst == dst]
        assert len(hits) == 1
        return hits[0]

    e12, e22, e23, e32 = eid("1", "2"), eid("2", "2"), eid("2", "3"), eid("3", "2")
    e33, e31, e24, e43 = eid("3", "3"), eid("3", "1"), eid("2", "4"), eid("4", "3")
    rels = [
        Relation(e31, "1", "3", {(e12, e23): one}),                    # [123] = 0
        Relation(e12, "2", "1", {(e23, e31): one}),                    # [231] = 0
        Relation(e43, "3", "4", {(e32, e24): one}),                    # [324] = 0
        Relation(e24, "4", "2", {(e43, e32): one}),                    # [432] = 0
        Relation(e22, "2", "2", {(e22, e22): one, (e23, e32): inv_s3}),
        Relation(e33, "3", "3", {(e33, e33): one, (e32, e23): -inv_s3}),
        Relation(e23, "3", "2", {(e31, e12): s3_over_2, (e32, e22): one, (e33, e32): one}),
        Relation(e32, "2", "3", {(e24, e43): s3_over_2, (e22, e23): one, (e23, e33): one}),
    ]
    return RelationSet(g, tower, rels)


def standard_relations_e8(graph: Graph | None = None) -> RelationSet:
    """The E8 relations: the threefold unfolding of the E8* ones."""
    g = graph if graph is not None else build_family("E8")
    base_rels = standard_relations_e8star()
    edge_of = g.base_edge_of
    lift = {}
    for ce, (be, a) in edge_of.items():
        lift.setdefault(be, {})[a] = ce
    rels = []
    for r in base_rels.relations:
        for a in range(3):
            eid = lift[r.edge_id][a]
            e = g.edge_by_id[eid]
            terms = {}
            for (b, c), w in r.terms.items():
                b2 = lift[b][(a + 1) % 3]
                c2 = lift[c][(a + 2) % 3]
                terms[(b2, c2)] = w
            rels.append(Relation(eid, e.dst, e.src, terms))
    return RelationSet(g, base_rels.tower, rels)


# ---------------------------------------------------------------------------
# serialization: "acy-cells/1" and "acy-rels/1"
# ---------------------------------------------------------------------------

def cells_to_doc(cells: CellSystem) -> dict:
    return {
        "schema": "acy-cells/1",
        "graph_ref": cells.graph.name,
        "tower": cells.tower.to_doc(),
        "triangles": [{"edge_ids": list(t), "weight_coords": w.to_coords()}
                      for t, w in sorted(cells.weights.items())],
    }


def cells_from_doc(graph: Graph, doc: dict) -> CellSystem:
    if doc.get("schema") != "acy-cells/1":
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    if doc.get("graph_ref") not in (None, graph.name):
        raise ValueError(f"cell data is for {doc.get('graph_ref')!r}, not {graph.name!r}")
    tower = FieldTower.from_doc(doc["tower"])
    if tower.h != graph.h:
        raise ValueError("cell tower h does not match the graph")
    weights = {}
    for row in doc["triangles"]:
        t = canon(tuple(int(x) for x in row["edge_ids"]))
        weights[t] = Scalar.from_coords(tower, row["weight_coords"])
    return CellSystem(graph, tower, weights, label=doc.get("label", "file"))


def relations_to_doc(rels: RelationSet) -> dict:
    return {
        "schema": "acy-rels/1",
        "graph_ref": rels.graph.name,
        "tower": rels.tower.to_doc(),
        "relations": [{
            "edge_id": r.edge_id,
            "terms": [{"path": list(bc), "coeff": w.to_coords()}
                      for bc, w in sorted(r.terms.items())],
        } for r in rels.relations],
    }


def relations_from_doc(graph: Graph, doc: dict) -> RelationSet:
    if doc.get("schema") != "acy-rels/1":
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    tower = FieldTower.from_doc(doc["tower"])
    rels = []
    for row in doc["relations"]:
        eid = int(row["edge_id"])
        e = graph.edge_by_id[eid]
        terms = {tuple(int(x) for x in item["path"]): Scalar.from_coords(tower, item["coeff"])
                 for item in row["terms"]}
        rels.append(Relation(eid, e.dst, e.src, terms))
    return RelationSet(graph, tower, rels)
