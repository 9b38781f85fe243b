"""
graph6 and sparse6 codecs (nauty's formats.txt). Both encoders produce the
same bytes as networkx for the same vertex order.
"""

from app.services.errors import MalformedInput
from app.services.graphs import Graph

GRAPH6_HEADER = ">>graph6<<"
SPARSE6_HEADER = ">>sparse6<<"


def _encode_size(n: int) -> list[int]:
    if n < 0 or n >= 1 << 36:
        raise MalformedInput(f"cannot encode {n} vertices")
    if n <= 62:
        return [n]
    if n <= 258047:
        return [63, (n >> 12) & 0x3F, (n >> 6) & 0x3F, n & 0x3F]
    return [63, 63] + [(n >> (6 * i)) & 0x3F for i in range(5, -1, -1)]


def _decode_size(data: list[int]) -> tuple[int, list[int]]:
    if not data:
        raise MalformedInput("missing vertex count")
    if data[0] != 63:
        return data[0], data[1:]
    if len(data) >= 2 and data[1] == 63:
        if len(data) < 8:
            raise MalformedInput("truncated vertex count")
        n = 0
        for d in data[2:8]:
            n = (n << 6) | d
        return n, data[8:]
    if len(data) < 4:
        raise MalformedInput("truncated vertex count")
    return (data[1] << 12) | (data[2] << 6) | data[3], data[4:]


def _to_text(values: list[int]) -> str:
    return "".join(chr(v + 63) for v in values)


def _from_text(text: str) -> list[int]:
    values = [ord(c) - 63 for c in text]
    if any(not 0 <= v <= 63 for v in values):
        raise MalformedInput("byte outside the printable graph6 range")
    return values


def _pack(bitlist: list[int]) -> list[int]:
    bitlist = bitlist + [0] * (-len(bitlist) % 6)
    return [
        int("".join(map(str, bitlist[i : i + 6])), 2) for i in range(0, len(bitlist), 6)
    ]


def _unpack(values: list[int]) -> list[int]:
    return [(v >> (5 - i)) & 1 for v in values for i in range(6)]


def encode_graph6(graph: Graph) -> str:
    n = graph.n
    bitlist = [graph.rows[j] >> i & 1 for j in range(1, n) for i in range(j)]
    return _to_text(_encode_size(n) + _pack(bitlist))


def decode_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER) :]
    n, data = _decode_size(_from_text(text))
    needed = n * (n - 1) // 2
    if len(data) != -(-needed // 6):
        raise MalformedInput(
            f"graph6 body has {len(data)} bytes, expected {-(-needed // 6)}", n=n
        )
    bitlist = _unpack(data)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bitlist[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def encode_sparse6(graph: Graph) -> str:
    n = graph.n
    k = max(1, (n - 1).bit_length())

    def enc(x: int) -> list[int]:
        return [(x >> (k - 1 - i)) & 1 for i in range(k)]

    edges = sorted((v, u) for u, v in graph.edges())
    bitlist: list[int] = []
    current = 0
    for v, u in edges:
        if v == current:
            bitlist += [0] + enc(u)
        elif v == current + 1:
            current += 1
            bitlist += [1] + enc(u)
        else:
            current = v
            bitlist += [1] + enc(v) + [0] + enc(u)
    pad = -len(bitlist) % 6
    if k < 6 and n == 1 << k and pad >= k and current < n - 1:
        # padding with ones would read as an edge to n-1
        bitlist.append(0)
        pad = -len(bitlist) % 6
    bitlist += [1] * pad
    return ":" + _to_text(_encode_size(n) + _pack(bitlist))


def decode_sparse6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(SPARSE6_HEADER):
        text = text[len(SPARSE6_HEADER) :]
    if not text.startswith(":"):
        raise MalformedInput("sparse6 data must start with ':'")
    n, data = _decode_size(_from_text(text[1:]))
    k = max(1, (n - 1).bit_length())
    bitlist = _unpack(data)
    edges = set()
    v = 0
    pos = 0
    while pos + 1 + k <= len(bitlist):
        b = bitlist[pos]
        x = int("".join(map(str, bitlist[pos + 1 : pos + 1 + k])), 2)
        pos += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        elif x == v:
            raise MalformedInput(f"loop at vertex {v} in sparse6 data", vertex=v)
        else:
            edges.add((x, v))
    return Graph.from_edges(n, sorted(edges))


def decode_graph(text: str) -> Graph:
    """Decode one graph6 or sparse6 line, telling them apart by the prefix."""
    body = text.strip()
    if body.startswith(SPARSE6_HEADER) or body.startswith(":"):
        return decode_sparse6(body)
    return decode_graph6(body)

