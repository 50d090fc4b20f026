"""Godsil-McKay switching: a non-isomorphic mate and a cycle-union switch.

    python3 demos/gm_switching.py
"""

from cospectra.graph import cycle_graph
from cospectra.isomorphism import is_isomorphic
from cospectra.spectral import are_cospectral
from cospectra.switching import (
    apply_switch,
    dense_small_subgraph,
    gm_pendant_example,
    gm_switch,
    is_disjoint_cycles,
    neighborhood_graph,
)


def show(name, g, s):
    h = apply_switch(g, s)
    nb = neighborhood_graph(g, s.switch_vertices).graph
    print(f"{name}: {g.n} vertices, X = {s.switch_vertices}")
    print(f"  neighbourhood graph is a union of cycles: {is_disjoint_cycles(nb)}")
    print(f"  cospectral {are_cospectral(g, h)}, isomorphic {is_isomorphic(g, h)}")
    w = dense_small_subgraph(g, 2 * s.m + 1)
    print(f"  dense witness on <= {2 * s.m + 1} vertices: {sorted(w.vertices) if w else None}")


if __name__ == "__main__":
    g, gm = gm_pendant_example()
    show("pendant example", g, gm.switch())
    show("C8, alternate vertices", cycle_graph(8), gm_switch([0, 2, 4, 6]))
