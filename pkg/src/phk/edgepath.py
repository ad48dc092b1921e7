"""Edge-path presentations and their link to twisting cocycles.

An edge ``e`` runs from ``d_1 e`` to ``d_0 e``.  Every nondegenerate
2-simplex ``s`` gives the relator ``(d_0 s)(d_2 s)(d_1 s)^-1``, written in the
same order as the cocycle identity ``t(d_0 s) t(d_2 s) = t(d_1 s)``, so a
homomorphism out of the edge-path group is literally a cocycle that is trivial
on the spanning tree.
"""

from dataclasses import dataclass

from .presentations import Presentation
from .simplicial import SSetError


class ConnectivityError(ValueError):
    pass


def vertex_components(X):
    """Map each vertex to the first vertex (listing order) of its component."""
    parent = {v: v for v in X.nd[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v
    if X.dim_cap >= 1:
        for e in X.nd[1]:
            a, b = X.faces[e][1].base, X.faces[e][0].base
            ra, rb = find(a), find(b)
            if ra != rb:
                if X.index[ra] < X.index[rb]:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    return {v: find(v) for v in X.nd[0]}


@dataclass(frozen=True)
class EdgePathData:
    presentation: Presentation
    basepoint: str
    tree: tuple
    generators: tuple

    @property
    def letter(self):
        return {e: i + 1 for i, e in enumerate(self.generators)}


def spanning_tree(X, x):
    """Breadth-first spanning tree from ``x``, scanning edges in listing order."""
    if x not in X.dim or X.dim[x] != 0:
        raise SSetError(f"basepoint {x!r} is not a vertex", x)
    edges = X.nd[1] if X.dim_cap >= 1 else ()
    incident = {v: [] for v in X.nd[0]}
    for e in edges:
        a, b = X.faces[e][1].base, X.faces[e][0].base
        incident[a].append((e, b))
        if b != a:
            incident[b].append((e, a))
    seen = {x}
    queue = [x]
    tree = []
    i = 0
    while i < len(queue):
        v = queue[i]
        i += 1
        for e, w in incident[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
                tree.append(e)
    if len(seen) != len(X.nd[0]):
        raise ConnectivityError("space is not connected")
    return tuple(tree)


def edge_path_data(X, x=None):
    if not X.nd[0]:
        raise ConnectivityError("empty space")
    x = X.nd[0][0] if x is None else x
    tree = spanning_tree(X, x)
    tset = set(tree)
    gens = tuple(e for e in (X.nd[1] if X.dim_cap >= 1 else ()) if e not in tset)
    letter = {e: i + 1 for i, e in enumerate(gens)}
    rels = []
    if X.dim_cap >= 2:
        for s in X.nd[2]:
            d0, d1, d2 = X.faces[s]
            word = []
            for f, sign in ((d0, 1), (d2, 1), (d1, -1)):
                if not f.is_degenerate and f.base in letter:
                    word.append(sign * letter[f.base])
            rels.append(tuple(word))
    return EdgePathData(Presentation(len(gens), tuple(rels)), x, tree, gens)


def edge_path_presentation(X, x=None):
    """Edge-path presentation of the fundamental group of connected X at x."""
    return edge_path_data(X, x).presentation


def cocycle_values(data, G, images):
    """Edge values of the cocycle attached to generator images."""
    vals = {e: 0 for e in data.tree}
    for e, g in zip(data.generators, images):
        vals[e] = g
    return vals


def gauge_fix(X, data, G, values):
    """Gauge-transform a cocycle to be trivial on the spanning tree.

    Returns ``(images, g)`` with ``images`` the generator values of the fixed
    cocycle and ``g`` the vertex function used.
    """
    g = {data.basepoint: 0}
    pending = list(data.tree)
    while pending:
        rest = []
        for e in pending:
            u, w = X.faces[e][1].base, X.faces[e][0].base
            t = values[e]
            if u in g and w not in g:
                g[w] = G.mul(g[u], G.inv(t))
            elif w in g and u not in g:
                g[u] = G.mul(g[w], t)
            elif u not in g:
                rest.append(e)
        if len(rest) == len(pending):
            raise ConnectivityError("tree does not reach every vertex")
        pending = rest

    def gauged(e):
        u, w = X.faces[e][1].base, X.faces[e][0].base
        return G.prod([g[w], values[e], G.inv(g[u])])
    return tuple(gauged(e) for e in data.generators), g
