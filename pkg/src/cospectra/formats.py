"""graph6 / sparse6 codecs and the JSON edge-list form.

Both byte formats follow nauty's ``formats.txt`` description; sparse6
padding reproduces the small-n special case so that output is byte-identical
to other conforming encoders.
"""

from __future__ import annotations

import json
from typing import Iterable

from .graph import Graph

__all__ = [
    "to_graph6",
    "from_graph6",
    "to_sparse6",
    "from_sparse6",
    "from_bytes",
    "to_interchange",
    "graph_to_json",
    "graph_from_json",
    "dumps_graph",
    "loads_graph",
]


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return b"~" + bytes(((n >> s) & 63) + 63 for s in (12, 6, 0))
    if n <= 68719476735:
        return b"~~" + bytes(((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("n too large for graph6")


def _decode_n(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise ValueError("missing vertex count")
    if data[0] != 126:
        return data[0] - 63, data[1:]
    if len(data) > 1 and data[1] == 126:
        if len(data) < 8:
            raise ValueError("truncated vertex count")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, data[8:]
    if len(data) < 4:
        raise ValueError("truncated vertex count")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, data[4:]


def _pack(bits: list[int]) -> bytes:
    out = bytearray()
    for i in range(0, len(bits), 6):
        chunk = bits[i:i + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = (val << 1) | b
        out.append(val + 63)
    return bytes(out)


def _unpack(data: bytes) -> Iterable[int]:
    for byte in data:
        val = byte - 63
        if not 0 <= val < 64:
            raise ValueError(f"invalid byte {byte!r} in graph data")
        for s in range(5, -1, -1):
            yield (val >> s) & 1


def _strip(data: bytes | str, header: bytes) -> bytes:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(header):
        data = data[len(header):]
    return data


def to_graph6(g: Graph, header: bool = False) -> bytes:
    n = g.n
    bits = []
    for j in range(1, n):
        row = g.masks[j]
        bits.extend((row >> i) & 1 for i in range(j))
    out = _encode_n(n) + _pack(bits)
    return (b">>graph6<<" + out) if header else out


def from_graph6(data: bytes | str) -> Graph:
    data = _strip(data, b">>graph6<<")
    n, rest = _decode_n(data)
    need = n * (n - 1) // 2
    if len(rest) != (need + 5) // 6:
        raise ValueError(f"graph6 body has {len(rest)} bytes, expected {(need + 5) // 6}")
    bits = _unpack(rest)
    edges = []
    for j in range(1, n):
        for i in range(j):
            if next(bits):
                edges.append((i, j))
    return Graph(n, edges)


def _sparse6_k(n: int) -> int:
    k = 1
    while (1 << k) < n:
        k += 1
    return k


def to_sparse6(g: Graph, header: bool = False) -> bytes:
    n = g.n
    k = _sparse6_k(n)

    def enc(x):
        return [(x >> (k - 1 - i)) & 1 for i in range(k)]

    bits: list[int] = []
    cur = 0
    for v, u in sorted((max(a, b), min(a, b)) for a, b in g.edges()):
        if v == cur:
            bits.append(0)
            bits.extend(enc(u))
        elif v == cur + 1:
            cur = v
            bits.append(1)
            bits.extend(enc(u))
        else:
            cur = v
            bits.append(1)
            bits.extend(enc(v))
            bits.append(0)
            bits.extend(enc(u))
    if k < 6 and n == (1 << k) and (-len(bits)) % 6 >= k and cur < n - 1:
        # padding with ones alone would decode as an edge at vertex n-1
        bits.append(0)
    bits.extend([1] * ((-len(bits)) % 6))
    out = b":" + _encode_n(n) + _pack(bits)
    return (b">>sparse6<<" + out) if header else out


def from_sparse6(data: bytes | str) -> Graph:
    data = _strip(data, b">>sparse6<<")
    if not data.startswith(b":"):
        raise ValueError("sparse6 data must start with ':'")
    n, rest = _decode_n(data[1:])
    k = _sparse6_k(n)
    bits = list(_unpack(rest))
    edges = []
    v, i = 0, 0
    while i + 1 + k <= len(bits):
        b = bits[i]
        x = 0
        for t in bits[i + 1:i + 1 + k]:
            x = (x << 1) | t
        i += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        else:
            edges.append((x, v))
    return Graph(n, edges)


def from_bytes(data: bytes | str) -> Graph:
    """Decode a graph6 or sparse6 record (format detected from the prefix)."""
    raw = _strip(data, b"")
    if raw.startswith(b">>sparse6<<") or raw.startswith(b":"):
        return from_sparse6(raw)
    return from_graph6(raw)


def to_interchange(g: Graph) -> bytes:
    """graph6 for n <= 62, sparse6 above."""
    return to_graph6(g) if g.n <= 62 else to_sparse6(g)


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}


def graph_from_json(obj: dict) -> Graph:
    if "n" not in obj or "edges" not in obj:
        raise ValueError("graph JSON needs 'n' and 'edges'")
    return Graph(int(obj["n"]), [tuple(e) for e in obj["edges"]])


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_json(g), separators=(",", ":"))


def loads_graph(text: str) -> Graph:
    return graph_from_json(json.loads(text))
