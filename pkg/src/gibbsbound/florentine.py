"""The Florentine families marriage network and a plain edge-list reader.

The classical data of Padgett and Ansell: 16 Renaissance families, 20
marriage ties, one isolated family (Pucci).  Vertices are indexed by
the alphabetical order of the family names below.
"""

from __future__ import annotations

from .graphs import LabeledGraph

__all__ = ["FLORENTINE_FAMILIES", "FLORENTINE_MARRIAGES",
           "florentine_graph", "read_edge_list"]

FLORENTINE_FAMILIES = (
    "Acciaiuoli", "Albizzi", "Barbadori", "Bischeri", "Castellani",
    "Ginori", "Guadagni", "Lamberteschi", "Medici", "Pazzi", "Peruzzi",
    "Pucci", "Ridolfi", "Salviati", "Strozzi", "Tornabuoni",
)

FLORENTINE_MARRIAGES = (
    ("Acciaiuoli", "Medici"),
    ("Albizzi", "Ginori"),
    ("Albizzi", "Guadagni"),
    ("Albizzi", "Medici"),
    ("Barbadori", "Castellani"),
    ("Barbadori", "Medici"),
    ("Bischeri", "Guadagni"),
    ("Bischeri", "Peruzzi"),
    ("Bischeri", "Strozzi"),
    ("Castellani", "Peruzzi"),
    ("Castellani", "Strozzi"),
    ("Guadagni", "Lamberteschi"),
    ("Guadagni", "Tornabuoni"),
    ("Medici", "Ridolfi"),
    ("Medici", "Salviati"),
    ("Medici", "Tornabuoni"),
    ("Pazzi", "Salviati"),
    ("Peruzzi", "Strozzi"),
    ("Ridolfi", "Strozzi"),
    ("Ridolfi", "Tornabuoni"),
)


def florentine_graph():
    """The marriage network as a LabeledGraph plus the vertex labels."""
    index = {name: k for k, name in enumerate(FLORENTINE_FAMILIES)}
    edges = [(index[a], index[b]) for a, b in FLORENTINE_MARRIAGES]
    return LabeledGraph.from_edges(len(FLORENTINE_FAMILIES), edges), FLORENTINE_FAMILIES


def read_edge_list(path):
    """Read a whitespace-separated edge list; returns (graph, labels).

    Each non-empty, non-comment line names two endpoints.  Integer
    tokens are taken as vertex ids directly (the graph then spans
    0..max id); anything else is treated as a label and indexed in
    order of first appearance.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"expected two endpoints per line, got {line!r}")
            rows.append(tuple(parts))
    if all(a.isdigit() and b.isdigit() for a, b in rows):
        edges = [(int(a), int(b)) for a, b in rows]
        n = max(max(e) for e in edges) + 1 if edges else 0
        return LabeledGraph.from_edges(n, edges), tuple(str(k) for k in range(n))
    labels = {}
    for a, b in rows:
        for token in (a, b):
            labels.setdefault(token, len(labels))
    edges = [(labels[a], labels[b]) for a, b in rows]
    names = tuple(sorted(labels, key=labels.get))
    return LabeledGraph.from_edges(len(labels), edges), names
