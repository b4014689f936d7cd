import json
import random

import numpy as np

from spiraltower import formats, lifting, tower
from spiraltower.relations import new_relation
from spiraltower.representation import represent_relation
from spiraltower.suites import random_relation


def test_dot_roundtrip_with_awkward_labels():
    R = new_relation({'a"b', "c\\d", "e f"}, [('a"b', "c\\d"), ("c\\d", "e f"), ("e f", 'a"b')])
    nodes, edges = formats.read_dot(formats.to_dot(R))
    unq = [n.replace('\\"', '"').replace("\\\\", "\\") for n in nodes]
    assert sorted(unq) == sorted(R.vertices)
    assert len(edges) == 3


def test_model_roundtrip():
    R = random_relation(random.Random(2))
    model = represent_relation(R)
    back = formats.model_from_dict(json.loads(formats.dumps(formats.model_to_dict(model))))
    assert back.is_exact()
    assert [(s.id, s.level) for s in back.spirals] == [(s.id, s.level) for s in model.spirals]
    assert np.array_equal(back.assignment.codes, model.assignment.codes)


def test_level_model_roundtrip():
    model = represent_relation(tower.build_level(1).relation)
    doc = formats.model_to_dict(model)
    back = formats.level_model_from_dict(doc, 1)
    p = lifting.LiftProblem(back, 1, 1)
    r = lifting.find_lift(p, deepen=True)
    out = formats.lift_to_dict(r)
    assert len(out["rho"]) == len(r.expanded_model.points)
