"""The graded quotient algebra A = CG / <degree-2 relations>, built degree by
degree with exact linear algebra.

Degree k arises from degree k-1 by appending edges and imposing the images
of (basis of A_{k-2}) x (relations); the quotient basis is in echelon form
with respect to the lexicographic path order, so every basis element is a
monomial path and results are reproducible.  Construction hard-fails unless
the graded dimensions match the closed-form Hilbert series coefficient by
coefficient, and the top degree pairs one-dimensionally along nu.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg, series
from .cells import RelationSet
from .quiver import Graph
from .scalar import Scalar

__all__ = ["GradedAlgebra", "AlgebraError", "BasisElt"]


class AlgebraError(RuntimeError):
    pass


@dataclass(frozen=True)
class BasisElt:
    path: tuple[int, ...]
    src: str
    dst: str


class GradedAlgebra:
    """Bases, reduction tables, multiplication, the non-degenerate form and
    its dual bases, and the Nakayama action, for A = A(G, W)."""

    def __init__(self, graph: Graph, relations: RelationSet, check_hilbert: bool = True):
        self.graph = graph
        self.relations = relations
        self.tower = relations.tower
        self.top = graph.h - 3
        self.basis: list[list[BasisElt]] = []
        self.block_index: list[dict[tuple[str, str], list[int]]] = []
        self.index_of: list[dict[tuple[int, ...], int]] = []
        # reduction of monomials (prev basis index, edge id) -> vec over basis
        self.red: list[dict[tuple[int, int], dict]] = []
        self._mul_cache: dict = {}
        self._beta_cache: dict = {}
        self._build(check_hilbert)
        self._form_built = False

    # -- construction -------------------------------------------------------

    def _build(self, check_hilbert: bool):
        g = self.graph
        tower = self.tower
        verts = g.vertices
        b0 = [BasisElt((), v, v) for v in verts]
        self.basis.append(b0)
        self.index_of.append({b.path: i for i, b in enumerate(b0)})
        self.block_index.append({(v, v): [i] for i, v in enumerate(verts)})
        self.red.append({})
        rels_at = {}
        for r in self.relations.relations:
            rels_at.setdefault(r.src, []).append(r)
        H = series.hilbert_closed_form(g, g.h) if check_hilbert else None
        vi = g.vindex
        for k in range(1, self.top + 2):
            prev = self.basis[k - 1]
            monos = []       # (prev index, edge)
            for i, b in enumerate(prev):
                for e in sorted(g.out_edges[b.dst], key=lambda e: e.id):
                    monos.append((i, e))
            mono_pos = {(i, e.id): t for t, (i, e) in enumerate(monos)}
            by_block: dict[tuple[str, str], list[int]] = {}
            for t, (i, e) in enumerate(monos):
                by_block.setdefault((prev[i].src, e.dst), []).append(t)
            # relation images, per block
            pivots_vec: dict[int, dict] = {}
            if k >= 2:
                elim_by_block = {blk: linalg.Eliminator() for blk in by_block}
                for w_i, w in enumerate(self.basis[k - 2]):
                    for rel in rels_at.get(w.dst, ()):
                        blk = (w.src, rel.dst)
                        elim = elim_by_block.get(blk)
                        if elim is None:
                            continue
                        vec: dict[int, Scalar] = {}
                        for (b_e, c_e), coeff in rel.terms.items():
                            left = self.red[k - 1][(w_i, b_e)] if k >= 2 else None
                            # (w * b_e) reduced over basis[k-1], then append c_e
                            for j, cj in left.items():
                                t = mono_pos[(j, c_e)]
                                x = coeff * cj
                                cur = vec.get(t)
                                if cur is None:
                                    vec[t] = x
                                else:
                                    s = cur + x
                                    if s.is_zero():
                                        del vec[t]
                                    else:
                                        vec[t] = s
                        elim.add(vec)
                for elim in elim_by_block.values():
                    pivots_vec.update(elim.pivots)
            # surviving monomials form the basis
            new_basis: list[BasisElt] = []
            new_index: dict[tuple[int, ...], int] = {}
            new_blocks: dict[tuple[str, str], list[int]] = {}
            basis_of_mono: dict[int, int] = {}
            for t, (i, e) in enumerate(monos):
                if t in pivots_vec:
                    continue
                idx = len(new_basis)
                b = BasisElt(prev[i].path + (e.id,), prev[i].src, e.dst)
                new_basis.append(b)
                new_index[b.path] = idx
                new_blocks.setdefault((b.src, b.dst), []).append(idx)
                basis_of_mono[t] = idx
            red_k: dict[tuple[int, int], dict] = {}
            for t, (i, e) in enumerate(monos):
                if t in basis_of_mono:
                    red_k[(i, e.id)] = {basis_of_mono[t]: tower.one()}
                else:
                    piv = pivots_vec[t]
                    red_k[(i, e.id)] = {basis_of_mono[s]: -cs for s, cs in piv.items()
                                        if s != t}
            if k <= self.top:
                self.basis.append(new_basis)
                self.index_of.append(new_index)
                self.block_index.append(new_blocks)
                self.red.append(red_k)
            if check_hilbert:
                want = H[k] if k <= self.top + 1 else None
                dims: dict[tuple[str, str], int] = {}
                for (s, d), idxs in new_blocks.items():
                    dims[(s, d)] = len(idxs)
                for a in verts:
                    for b in verts:
                        got = dims.get((a, b), 0)
                        expect = want[vi[a]][vi[b]] if k <= g.h else 0
                        if got != expect:
                            raise AlgebraError(
                                f"Hilbert gate failed for {g.name} at degree {k}, "
                                f"block {a}->{b}: dim {got}, closed form {expect}")
            if k == self.top + 1 and new_basis:
                raise AlgebraError(f"A_{k} is nonzero above the top degree for {g.name}")

    # -- dimensions -----------------------------------------------------------

    def dim(self, k: int) -> int:
        if 0 <= k <= self.top:
            return len(self.basis[k])
        return 0

    def dims_by_block(self, k: int) -> dict[tuple[str, str], int]:
        if not 0 <= k <= self.top:
            return {}
        return {blk: len(idxs) for blk, idxs in self.block_index[k].items()}

    # -- multiplication ---------------------------------------------------------

    def unit(self, k: int, i: int) -> dict:
        return {i: self.tower.one()}

    def mul_edge(self, k: int, vec: dict, eid: int) -> dict:
        """Right-multiply a degree-k vector by an edge; degree k+1 (or 0)."""
        if k + 1 > self.top:
            return {}
        red = self.red[k + 1]
        out: dict[int, Scalar] = {}
        for i, c in vec.items():
            hit = red.get((i, eid))
            if not hit:
                continue
            for j, x in hit.items():
                t = c * x
                cur = out.get(j)
                if cur is None:
                    out[j] = t
                else:
                    s = cur + t
                    if s.is_zero():
                        del out[j]
                    else:
                        out[j] = s
        return out

    def mul_path(self, k: int, vec: dict, path: tuple[int, ...]) -> tuple[int, dict]:
        for eid in path:
            if not vec:
                return k, {}
            vec = self.mul_edge(k, vec, eid)
            k += 1
        return k, vec

    def mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> dict:
        """Product of two basis elements, as a degree k1+k2 vector (memoized)."""
        key = (k1, i1, k2, i2)
        hit = self._mul_cache.get(key)
        if hit is None:
            b2 = self.basis[k2][i2]
            if self.basis[k1][i1].dst != b2.src or k1 + k2 > self.top:
                hit = {}
            else:
                _, hit = self.mul_path(k1, self.unit(k1, i1), b2.path)
            self._mul_cache[key] = hit
        return hit

    def mul(self, k1: int, v1: dict, k2: int, v2: dict) -> dict:
        out: dict[int, Scalar] = {}
        for i2, c2 in v2.items():
            for i1, c1 in v1.items():
                prod = self.mul_basis(k1, i1, k2, i2)
                if not prod:
                    continue
                c = c1 * c2
                for j, x in prod.items():
                    t = c * x
                    cur = out.get(j)
                    if cur is None:
                        out[j] = t
                    else:
                        s = cur + t
                        if s.is_zero():
                            del out[j]
                        else:
                            out[j] = s
        return out

    def reduce_path(self, src: str, path: tuple[int, ...]) -> tuple[int, dict]:
        """Class of a raw path in the quotient."""
        vec = {self.graph.vindex[src]: self.tower.one()}
        return self.mul_path(0, vec, path)

    # -- Nakayama -----------------------------------------------------------------

    def beta_basis(self, k: int, i: int) -> dict:
        key = (k, i)
        hit = self._beta_cache.get(key)
        if hit is None:
            b = self.basis[k][i]
            nu_path = tuple(self.graph.nu_e[e] for e in b.path)
            _, hit = self.reduce_path(self.graph.nu_v[b.src], nu_path)
            self._beta_cache[key] = hit
        return hit

    def beta_vec(self, k: int, vec: dict, power: int = 1) -> dict:
        power %= 3
        for _ in range(power):
            out: dict[int, Scalar] = {}
            for i, c in vec.items():
                for j, x in self.beta_basis(k, i).items():
                    t = c * x
                    cur = out.get(j)
                    if cur is None:
                        out[j] = t
                    else:
                        s = cur + t
                        if s.is_zero():
                            del out[j]
                        else:
                            out[j] = s
            vec = out
        return vec

    # -- non-degenerate form and dual bases ------------------------------------------

    def build_form(self):
        """Choose top generators u_j, propagate f by (x,y) = (y, beta(x)),
        verify the commutation identity, and build dual bases per degree."""
        if self._form_built:
            return
        g, T, tower = self.graph, self.top, self.tower
        tops: dict[str, int] = {}
        for (s, d), idxs in self.block_index[T].items():
            if d != g.nu_v[s]:
                raise AlgebraError(f"top-degree block {s}->{d} off the nu-diagonal "
                                   f"has dimension {len(idxs)}")
            if len(idxs) != 1:
                raise AlgebraError(f"top-degree space at {s} has dimension {len(idxs)}")
            tops[s] = idxs[0]
        if set(tops) != set(g.vertices):
            missing = sorted(set(g.vertices) - set(tops))
            raise AlgebraError(f"no top-degree generator at vertices {missing}")
        # propagate the scale c_j of f on j A_T nu(j) along a spanning tree
        c: dict[str, Scalar] = {g.vertices[0]: tower.one()}
        queue = [g.vertices[0]]
        while queue:
            j = queue.pop()
            for a in g.out_edges[j]:
                m = a.dst
                if m in c:
                    continue
                x = self.reduce_path(j, (a.id,))[1]
                block = self.block_index[T - 1].get((m, g.nu_v[j]), []) if T >= 1 else []
                lam = lam2 = None
                for y_i in block:
                    xy = self.mul(1, x, T - 1, self.unit(T - 1, y_i))
                    if not xy:
                        continue
                    lam = xy[tops[j]]
                    ybx = self.mul(T - 1, self.unit(T - 1, y_i), 1, self.beta_vec(1, x))
                    if not ybx:
                        raise AlgebraError("form propagation hit a vanishing pair")
                    lam2 = ybx[tops[m]]
                    break
                if lam is None:
                    raise AlgebraError(f"cannot propagate the form along edge {j}->{m}")
                c[m] = c[j] * lam * lam2.inverse()
                queue.append(m)
        if set(c) != set(g.vertices):
            raise AlgebraError("graph is not strongly connected; form propagation failed")
        self.f_coeff = {tops[j]: c[j] for j in g.vertices}
        self.top_index = tops
        # normalized generators u_j with f(u_j) = 1
        self.u_vec = {j: {tops[j]: c[j].inverse()} for j in g.vertices}
        self._verify_symmetry()
        self._build_duals()
        self._form_built = True

    def f(self, vec: dict) -> Scalar:
        """The functional f on A_top (zero on other degrees by convention)."""
        acc = self.tower.zero()
        for i, x in vec.items():
            coeff = self.f_coeff.get(i)
            if coeff is not None:
                acc = acc + coeff * x
        return acc

    def pair(self, k: int, v1: dict, v2: dict) -> Scalar:
        """(x, y) = f(xy) for x of degree k, y of degree top - k."""
        return self.f(self.mul(k, v1, self.top - k, v2))

    def _verify_symmetry(self):
        g, T = self.graph, self.top
        for p in range(T + 1):
            for (s, d), idxs in self.block_index[p].items():
                yblock = self.block_index[T - p].get((d, g.nu_v[s]), [])
                for i in idxs:
                    x = self.unit(p, i)
                    bx = self.beta_vec(p, x)
                    for y_i in yblock:
                        y = self.unit(T - p, y_i)
                        lhs = self.f(self.mul(p, x, T - p, y))
                        rhs = self.f(self.mul(T - p, y, p, bx))
                        if lhs != rhs:
                            raise AlgebraError(
                                f"(x,y) != (y,beta(x)) at degree {p}, "
                                f"basis {i} / {y_i}")

    def _build_duals(self):
        """duals[p][i] = w_i* in degree top-p with f(w_i w_j*) = delta_ij."""
        g, T, tower = self.graph, self.top, self.tower
        self.duals: list[dict[int, dict]] = [dict() for _ in range(T + 1)]
        for p in range(T + 1):
            for (s, d), idxs in self.block_index[p].items():
                yidx = self.block_index[T - p].get((d, g.nu_v[s]), [])
                if len(yidx) != len(idxs):
                    raise AlgebraError(
                        f"pairing block at degree {p}, {s}->{d} is not square "
                        f"({len(idxs)} vs {len(yidx)})")
                n = len(idxs)
                if n == 0:
                    continue
                cols = []
                for y_i in yidx:
                    col = {}
                    for r, x_i in enumerate(idxs):
                        val = self.f(self.mul_basis(p, x_i, T - p, y_i))
                        if not val.is_zero():
                            col[r] = val
                    cols.append(col)
                try:
                    inv = linalg.invert_dense(cols, n, tower.one())
                except ValueError:
                    raise AlgebraError(
                        f"pairing matrix singular at degree {p}, block {s}->{d}") from None
                for r, x_i in enumerate(idxs):
                    dual = {}
                    for q, cq in inv[r].items():
                        dual[yidx[q]] = cq
                    self.duals[p][x_i] = dual

    def dual_pairs(self, p: int):
        """Iterate (w basis index, w* vector) at degree p (w* has degree top-p)."""
        for i in range(self.dim(p)):
            yield i, self.duals[p][i]

    def to_doc(self) -> dict:
        """Regression snapshot of bases and dimension tables."""
        return {
            "schema": "acy-algebra/1",
            "graph": self.graph.name,
            "tower": self.tower.to_doc(),
            "top_degree": self.top,
            "dims": [self.dim(k) for k in range(self.top + 1)],
            "dims_by_block": [
                {f"{s}->{d}": n for (s, d), n in sorted(self.dims_by_block(k).items())}
                for k in range(self.top + 1)
            ],
            "basis_paths": [[list(b.path) for b in self.basis[k]]
                            for k in range(self.top + 1)],
        }

    def __repr__(self):
        dims = [self.dim(k) for k in range(self.top + 1)]
        return f"GradedAlgebra({self.graph.name}, dims={dims})"


def spot_checks(A: GradedAlgebra, seed: int, triples: int = 100) -> dict[str, bool]:
    """Seeded randomized sanity checks: associativity on basis triples and
    multiplicativity of the Nakayama action on basis pairs."""
    import random

    rng = random.Random(seed)
    ok_assoc = True
    for _ in range(triples):
        p = rng.randrange(0, A.top + 1)
        q = rng.randrange(0, A.top + 1 - p)
        r = rng.randrange(0, A.top + 1 - p - q)
        x = A.unit(p, rng.randrange(A.dim(p)))
        y = A.unit(q, rng.randrange(A.dim(q)))
        z = A.unit(r, rng.randrange(A.dim(r)))
        if A.mul(p + q, A.mul(p, x, q, y), r, z) != A.mul(p, x, q + r, A.mul(q, y, r, z)):
            ok_assoc = False
            break
    ok_beta = True
    for _ in range(triples // 2):
        p = rng.randrange(0, A.top + 1)
        q = rng.randrange(0, A.top + 1 - p)
        x = A.unit(p, rng.randrange(A.dim(p)))
        y = A.unit(q, rng.randrange(A.dim(q)))
        lhs = A.beta_vec(p + q, A.mul(p, x, q, y))
        rhs = A.mul(p, A.beta_vec(p, x), q, A.beta_vec(q, y))
        if lhs != rhs:
            ok_beta = False
            break
    return {"spot_associativity": ok_assoc, "spot_nakayama": ok_beta}
