"""Plain-text Cayley-table files for finite structures.

Format:
    arity m
    size k
    <k**m result lines>      one element index per line, row-major
                             lexicographic over argument tuples
    labels x0 x1 ... xk-1    optional single final line

Blank lines and lines starting with '#' are ignored.
"""

from __future__ import annotations

from .core import FiniteCarrier, NAryOperation, PolyadicStructure, _index_table


def _header(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise ValueError(f"expected '{key} N' header line, got {line!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise ValueError(f"bad {key} value in {line!r}") from None
    if value < 1:
        raise ValueError(f"{key} must be positive, got {value}")
    return value


def parse_table(text: str, name: str = "table") -> PolyadicStructure:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ValueError("table file is missing its header lines")
    m = _header(lines[0], "arity")
    k = _header(lines[1], "size")
    body = lines[2:]
    labels = None
    if body and body[-1].startswith("labels"):
        labels = body[-1].split()[1:]
        body = body[:-1]
        if len(labels) != k:
            raise ValueError(f"labels block must list exactly {k} names")
    need = k ** m
    if len(body) != need:
        raise ValueError(f"expected {need} result lines, got {len(body)}")
    flat = []
    for ln in body:
        try:
            v = int(ln)
        except ValueError:
            raise ValueError(f"bad result line {ln!r}") from None
        if not 0 <= v < k:
            raise ValueError(f"result index {v} out of range 0..{k - 1}")
        flat.append(v)
    carrier = FiniteCarrier(range(k), labels=labels, name=name)

    def fn(polyad, _flat=flat, _k=k):
        idx = 0
        for d in polyad:
            idx = idx * _k + d
        return _flat[idx]

    return PolyadicStructure(carrier, NAryOperation(m, fn, name=name), name=name)


def read_table(path: str) -> PolyadicStructure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read(), name=path)


def format_table(s: PolyadicStructure) -> str:
    """Serialize a finite structure; round-trips through parse_table."""
    if not s.carrier.is_finite:
        raise ValueError("only finite structures can be written as tables")
    table, k = _index_table(s)
    lines = [f"arity {s.arity}", f"size {k}"]
    lines.extend(str(v) for v in table)
    if getattr(s.carrier, "labels", None):
        lines.append("labels " + " ".join(s.carrier.labels))
    return "\n".join(lines) + "\n"


def write_table(s: PolyadicStructure, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_table(s))
