import json

import numpy as np
import pytest

from plankbound import io as pio
from plankbound.geometry import DegenerateBody
from plankbound.planks import Plank, slab_cover


def test_body_roundtrip(tmp_path, triangle):
    path = tmp_path / "t.json"
    pio.write_json(pio.body_to_dict(triangle), path)
    assert np.array_equal(pio.load_body(path).vertices, triangle.vertices)


def test_planks_roundtrip_bit_exact(tmp_path, rng, corpus):
    K = corpus[3]
    u = rng.normal(size=K.dim)
    P = slab_cover(K, u / np.linalg.norm(u), 7)
    path = tmp_path / "p.json"
    pio.write_json(pio.planks_to_dict(P, K.dim), path)
    assert pio.load_planks(path) == P


@pytest.mark.parametrize("doc, field", [
    ({"vertices": [[0, 0]]}, "dimension"),
    ({"dimension": 2.5, "vertices": [[0, 0]]}, "dimension"),
    ({"dimension": 1, "vertices": [[0]]}, "dimension"),
    ({"dimension": 2}, "vertices"),
    ({"dimension": 2, "vertices": [[0, 0], [1, 0], [0, 1, 2]]}, r"vertices\[2\]"),
    ({"dimension": 2, "vertices": [[0, 0], [1, "a"], [0, 1]]}, r"vertices\[1\]\[1\]"),
    ({"dimension": 2, "vertices": [[0, 0], [1, True], [0, 1]]}, r"vertices\[1\]\[1\]"),
    ([], "top level"),
])
def test_body_schema_errors_name_the_field(doc, field):
    with pytest.raises(pio.SchemaError, match=field):
        pio.body_from_dict(doc)


def test_rank_deficient_body():
    with pytest.raises(DegenerateBody, match="not full-dimensional"):
        pio.body_from_dict({"dimension": 2, "vertices": [[0, 0], [1, 1], [3, 3]]})


@pytest.mark.parametrize("item, field", [
    ({"normal": [1, 0], "width": 1}, r"planks\[0\]\.translation"),
    ({"normal": [1, 0, 0], "translation": 0, "width": 1}, r"planks\[0\]\.normal"),
    ({"normal": [0, 0], "translation": 0, "width": 1}, r"planks\[0\]\.normal"),
    ({"normal": [1, 0], "translation": 0, "width": -1}, r"planks\[0\]\.width"),
    ({"normal": [1, 0], "translation": None, "width": 1}, r"planks\[0\]\.translation"),
])
def test_plank_schema_errors(item, field):
    with pytest.raises(pio.SchemaError, match=field):
        pio.planks_from_dict({"dimension": 2, "planks": [item]})


def test_renormalization_warns():
    doc = {"dimension": 2, "planks": [{"normal": [2, 0], "translation": 0, "width": 1}]}
    with pytest.warns(pio.NormalRenormalized):
        (p,) = pio.planks_from_dict(doc)
    assert p == Plank([1.0, 0.0], 0.0, 1.0)


def test_tiny_renormalization_is_silent(recwarn):
    n = [0.6 * (1 + 1e-11), 0.8 * (1 + 1e-11)]
    (p,) = pio.planks_from_dict({"dimension": 2, "planks": [
        {"normal": n, "translation": 0, "width": 1}]})
    assert abs(np.linalg.norm(p.normal) - 1) <= 1e-15
    assert not [w for w in recwarn if issubclass(w.category, pio.NormalRenormalized)]


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(pio.SchemaError, match="invalid JSON"):
        pio.load_body(path)


def test_dumps_shortest_roundtrip():
    x = 0.1 + 0.2
    text = pio.dumps({"x": x})
    assert "0.30000000000000004" in text
    assert json.loads(text)["x"] == x
    with pytest.raises(ValueError):
        pio.dumps({"x": float("nan")})
