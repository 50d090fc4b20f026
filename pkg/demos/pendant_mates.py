"""Build cospectral mates of a random giant component by swapping pendant trees.

    python3 demos/pendant_mates.py [seed]
"""

import sys

from cospectra.graph import SampleConfig, attach_rooted, giant_component, sample_gnp
from cospectra.isomorphism import is_isomorphic
from cospectra.pendant import enumerate_mates, rigid_pendant_roots
from cospectra.spectral import are_r_cospectral, char_poly
from cospectra.trees import catalog_pair


def main(seed: int = 0) -> None:
    pair = catalog_pair("r-cospectral")
    print(f"swap pair on {pair.t} vertices")
    print("  phi(T1) =", char_poly(pair.first.graph))
    print("  phi(T2) =", char_poly(pair.second.graph))

    host = giant_component(sample_gnp(SampleConfig(30, 3.0, seed)))
    g = host
    for v in (0, 1, 2):
        g = attach_rooted(g, v, pair.first)
    rigid, _ = rigid_pendant_roots(g, pair)
    print(f"host: {host.n} vertices, planted graph: {g.n} vertices, rigid roots {sorted(rigid)}")

    mates = enumerate_mates(g, pair)
    print(f"{len(mates)} graphs (2^{len(rigid)} expected)")
    for i, h in enumerate(mates[1:], 1):
        print(f"  mate {i}: R-cospectral {are_r_cospectral(g, h)}, isomorphic {is_isomorphic(g, h)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
