"""Text formats: Graphviz DOT export and the JSON relation, model and lift files."""

import json
import re

import numpy as np

from spiraltower.errors import DomainMismatch, DuplicateVertex
from spiraltower.relations import SubLabels, relation_from_dict, relation_to_dict
from spiraltower.representation import SpiralModel
from spiraltower.spirals import SpiralLabels, classify
from spiraltower.tower import LevelLabels, LevelPoint, build_level


def _quote(label):
    return '"' + str(label).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(relation, name="R", node_attrs=None):
    """DOT digraph of a relation; ``node_attrs(label) -> dict`` adds attributes."""
    lines = [f"digraph {_quote(name)} {{"]
    for v in relation.vertices:
        attrs = node_attrs(v) if node_attrs else {}
        extra = "".join(f", {k}={_quote(val)}" for k, val in attrs.items())
        lines.append(f"  {_quote(v)} [label={_quote(v)}{extra}];")
    for a, b in relation.edge_list():
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _spiral_attrs(point):
    kind = classify(point.point if isinstance(point, LevelPoint) else point)
    return {"class": kind, "shape": "circle" if kind == "recurrent" else "box"}


def spiral_dot(spiral):
    return to_dot(spiral.relation, f"Sigma_{spiral.level}", _spiral_attrs)


def level_dot(level, word=None):
    if word is None:
        return to_dot(level.relation, f"W_{level.level}", _spiral_attrs)
    sl = level.spiral_slice(word)
    sub = SubLabels(level.points, np.arange(sl.start, sl.stop))
    return to_dot(level.relation.induced(sub), f"W_{level.level}[{word}]", _spiral_attrs)


_DOT_NODE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*\[')
_DOT_EDGE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"\s*;')


def read_dot(text):
    """``(nodes, edges)`` from a document written by :func:`to_dot`."""
    if not text.lstrip().startswith("digraph") or not text.rstrip().endswith("}"):
        raise ValueError("not a digraph document")
    nodes, edges = [], []
    for line in text.splitlines()[1:-1]:
        m = _DOT_EDGE.match(line)
        if m:
            edges.append((m.group(1), m.group(2)))
            continue
        m = _DOT_NODE.match(line)
        if m:
            nodes.append(m.group(1))
        elif line.strip():
            raise ValueError(f"unreadable line {line!r}")
    return nodes, edges


def structured(relation, classify_points=False):
    doc = relation_to_dict(relation)
    if classify_points:
        doc["classification"] = {str(v): _spiral_attrs(v)["class"] for v in relation.vertices}
    return doc


def dumps(doc):
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# models ------------------------------------------------------------------------

def model_to_dict(model):
    v = model.target.vertices
    rows = [[p.spiral, str(p.point), str(v[int(c)])]
            for p, c in zip(model.points, model.assignment.codes)]
    return {
        "target": relation_to_dict(model.target),
        "spirals": [{"id": s.id, "level": s.level} for s in model.spirals],
        "assignment": rows,
    }


def model_from_dict(doc, target=None):
    """Rebuild a :class:`SpiralModel`.  ``target`` replaces the file's own
    relation when given; the two must agree as label sets."""
    file_target = relation_from_dict(doc["target"])
    if target is None:
        target = file_target
    elif file_target.edges != {(str(a), str(b)) for a, b in target.edge_list()}:
        raise DomainMismatch("model target differs from the expected relation")
    tv = target.vertices
    by_label = {str(x): i for i, x in enumerate(tv)} if not isinstance(tv, LevelLabels) else None

    def vertex_index(label):
        return by_label[label] if by_label is not None else tv.index(label)

    spirals = doc["spirals"]
    ids = [int(s["id"]) for s in spirals]
    if len(set(ids)) != len(ids):
        raise DuplicateVertex(f"spiral id listed twice in {ids}")
    level = {int(s["id"]): int(s["level"]) for s in spirals}
    per = {i: {} for i in ids}
    for sid, point, vertex in doc["assignment"]:
        sid = int(sid)
        if sid not in per:
            raise DomainMismatch(f"assignment names unknown spiral {sid}")
        labels = SpiralLabels(level[sid])
        j = labels.index(point)
        if j in per[sid]:
            raise DomainMismatch(f"point {point} of spiral {sid} is assigned twice")
        per[sid][j] = vertex_index(vertex)
    parts = []
    for sid in ids:
        n_pts = len(SpiralLabels(level[sid]))
        if len(per[sid]) != n_pts:
            raise DomainMismatch(f"spiral {sid} has unassigned points")
        parts.append((sid, level[sid], [per[sid][j] for j in range(n_pts)]))
    return SpiralModel.from_parts(target, parts)


def level_model_from_dict(doc, n):
    """A model file whose target is the relation of W_n, re-indexed onto W_n."""
    return model_from_dict(doc, target=build_level(n).relation)


def lift_to_dict(result):
    rows = []
    for p, c in zip(result.expanded_model.points, result.rho.codes):
        q = result.rho.codomain[int(c)]
        rows.append([p.spiral, str(p.point), str(q.word), str(q.point)])
    return {
        "n": result.problem.n,
        "k": result.problem.k,
        "duplication_record": {str(k): v for k, v in sorted(result.duplication_record.items())},
        "spirals": [
            {"id": s.id, "level": s.level, "target_word": str(result.targets.get(s.id, ""))}
            for s in result.expanded_model.spirals
        ],
        "companions": list(result.companions),
        "rho": rows,
    }

