import json
import math
import os
from pathlib import Path

import pytest

import hypstretch as hs

SURFACES = Path(os.environ.get(
    "HYPSTRETCH_SURFACES", Path(__file__).resolve().parents[2] / "surfaces"))


def load(name):
    return hs.load(str(SURFACES / name))


def test_pieces_and_special_points():
    q = hs.Piece.quad(0.5)
    assert q.kind == hs.PieceKind.Quad
    sp = hs.special_points(q)
    assert set(sp) == {"P_AD", "P_BC"}
    for e in sp.values():
        assert abs(e["signed_dist"] - e["closed_form"]) < 1e-9
    assert abs(sp["P_AD"]["closed_form"] - 0.25) < 1e-12

    lens = hs.edge_lengths(hs.Piece.hexagon(0.5, 1.0, 1.5))
    assert lens["l1"] is not None and lens["l1"] > 0

    with pytest.raises(hs.GeomError):
        hs.special_points(hs.Piece.triangle())


def test_displacement():
    assert abs(hs.displacement(0.0) - 0.5 * math.log(2)) < 1e-15
    s = 0.7
    assert abs(hs.displacement(-s) - hs.displacement(s) - s / 2) < 1e-15


def test_surface_roundtrip_and_validation():
    x = load("pants.json")
    rep = x.validate()
    assert rep["valid"] and rep["expected_pieces"] == 2
    assert hs.loads(x.dumps()).validate()["valid"]

    d = x.classify()
    assert d["block_pieces"] == [0, 1] and d["crowns"] == []

    ht = load("holed_torus.json")
    assert ht.classify()["crowns"] == [{"quads": [0], "spikes": 1}]


def test_stretch_and_distance():
    x = load("pants.json")
    t = 0.4
    y = hs.generalized_stretch(x, t)
    assert abs(y.pieces[0].s1 - math.exp(t) * x.pieces[0].s1) < 1e-12

    est = hs.arc_distance_estimate(x, y, depth=2)
    assert abs(est["lower_bound"] - t) < 1e-9
    assert est["witness"].startswith("arc:")
    assert abs(est["length_to"] - math.exp(t) * est["length_from"]) < 1e-9

    with pytest.raises(hs.GeomError):
        hs.arc_distance_estimate(x, load("holed_torus.json"), depth=1)


def test_candidate_lengths():
    table = hs.candidate_lengths(load("pants.json"), depth=1)
    by_name = {row["name"]: row["length"] for row in table}
    assert abs(by_name["arc:0.a3 0.a2"] - 1.0) < 1e-9


def test_verify():
    rep = hs.verify(load("holed_torus.json"), [0.25, 1.0])
    assert rep["pass"]
    assert all(c["pass"] for c in rep["checks"])
    assert json.loads(json.dumps(rep)) == rep
