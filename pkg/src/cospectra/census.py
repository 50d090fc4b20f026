"""Exhaustive census of small graphs by generalized spectrum.

Graphs on n vertices are generated up to isomorphism by canonical
augmentation: a child G + v of a parent G is accepted only when v lies in
the automorphism orbit of the child's canonically last vertex, and children
of one parent are deduplicated by canonical form.  Each graph is then
classed by its spectral fingerprint (characteristic polynomials of G and of
its complement) and, separately, by its characteristic polynomial alone.
"""

from __future__ import annotations

import os
import struct
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .formats import from_graph6
from .graph import Graph
from .isomorphism import automorphism_orbits, canonical_form, canonical_labeling
from .spectral import char_poly, fingerprint

__all__ = [
    "Census",
    "generate_graphs",
    "brute_force_rds_oracle",
    "census_available",
    "cache_dir",
    "lookup",
    "UNLABELED_COUNTS",
]

MAX_N = 9
UNLABELED_COUNTS = (1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668)
_MAGIC = b"CSPCENS1"


def _children(parent: Graph):
    n = parent.n
    base = list(parent.edges())
    seen: set[bytes] = set()
    for mask in range(1 << n):
        edges = base + [(v, n) for v in range(n) if mask >> v & 1]
        child = Graph(n + 1, edges)
        lab = canonical_labeling(child)
        last = lab.index(n)
        if last != n:
            orbit = next(o for o in automorphism_orbits(child) if n in o)
            if last not in orbit:
                continue
        key = canonical_form(child)
        if key not in seen:
            seen.add(key)
            yield key


def generate_graphs(n: int) -> list[bytes]:
    """Canonical forms of all graphs on n vertices, one per isomorphism class."""
    if n < 0 or n > MAX_N:
        raise ValueError(f"census is budgeted for 0 <= n <= {MAX_N}")
    if n == 0:
        return [canonical_form(Graph(0, []))]
    layer = [canonical_form(Graph(1, []))]
    for _ in range(1, n):
        layer = [c for form in layer for c in _children(from_graph6(form))]
    return layer


@dataclass
class Census:
    """All graphs on n vertices with fingerprint and char-poly class ids."""

    n: int
    forms: list[bytes]
    r_class: list[int]
    cp_class: list[int]
    index: dict[bytes, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.forms)}

    def __len__(self) -> int:
        return len(self.forms)

    def graph(self, i: int) -> Graph:
        return from_graph6(self.forms[i]) if self.n else Graph(0, [])

    def _members(self, classes: list[int]) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for i, c in enumerate(classes):
            out[c].append(i)
        return out

    def r_classes(self) -> dict[int, list[int]]:
        return self._members(self.r_class)

    def cp_classes(self) -> dict[int, list[int]]:
        return self._members(self.cp_class)

    def is_rds(self, g: Graph) -> bool:
        i = self.index[canonical_form(g)]
        return self.r_class.count(self.r_class[i]) == 1

    def r_mates(self, g: Graph) -> list[Graph]:
        i = self.index[canonical_form(g)]
        c = self.r_class[i]
        return [self.graph(j) for j, x in enumerate(self.r_class) if x == c and j != i]

    def cospectral_mates(self, g: Graph) -> list[Graph]:
        i = self.index[canonical_form(g)]
        c = self.cp_class[i]
        return [self.graph(j) for j, x in enumerate(self.cp_class) if x == c and j != i]

    # -- persistence ---------------------------------------------------

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(_MAGIC + struct.pack("<II", self.n, len(self.forms)))
            for f, r, c in zip(self.forms, self.r_class, self.cp_class):
                fh.write(struct.pack("<HII", len(f), r, c) + f)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Census":
        data = Path(path).read_bytes()
        if not data.startswith(_MAGIC):
            raise ValueError(f"{path} is not a census file")
        off = len(_MAGIC)
        n, count = struct.unpack_from("<II", data, off)
        off += 8
        forms, rs, cs = [], [], []
        for _ in range(count):
            ln, r, c = struct.unpack_from("<HII", data, off)
            off += 10
            forms.append(bytes(data[off:off + ln]))
            off += ln
            rs.append(r)
            cs.append(c)
        return cls(n, forms, rs, cs)


def _classify(n: int, forms: list[bytes]) -> Census:
    r_ids: dict = {}
    cp_ids: dict = {}
    rs, cs = [], []
    for f in forms:
        g = from_graph6(f) if n else Graph(0, [])
        fp = fingerprint(g)
        cp = char_poly(g)
        rs.append(r_ids.setdefault(fp, len(r_ids)))
        cs.append(cp_ids.setdefault(cp, len(cp_ids)))
    return Census(n, forms, rs, cs)


def cache_dir() -> Path:
    root = os.environ.get("COSPECTRA_CACHE")
    return Path(root) if root else Path.home() / ".cache" / "cospectra"


def _cache_path(n: int) -> Path:
    return cache_dir() / f"census_n{n}.bin"


def census_available(n: int) -> bool:
    return 0 <= n <= MAX_N and _cache_path(n).exists()


@lru_cache(maxsize=None)
def _cached(n: int, root: str) -> Census:
    path = Path(root) / f"census_n{n}.bin"
    if path.exists():
        return Census.load(path)
    census = _classify(n, generate_graphs(n))
    try:
        census.save(path)
    except OSError:
        pass  # read-only cache: keep the in-memory copy
    return census


def brute_force_rds_oracle(n: int, use_cache: bool = True) -> Census:
    """The census of all graphs on n <= 9 vertices (n = 9 takes a long time)."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"census is budgeted for 0 <= n <= {MAX_N}")
    if not use_cache:
        return _classify(n, generate_graphs(n))
    return _cached(n, str(cache_dir()))


def lookup(g: Graph) -> tuple[bool, Graph | None]:
    """``(True, None)`` if g is determined by its R-spectrum, else ``(False, mate)``."""
    census = brute_force_rds_oracle(g.n)
    mates = census.r_mates(g)
    return (not mates, mates[0] if mates else None)
