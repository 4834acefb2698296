import random
from fractions import Fraction

import numpy as np
import pytest

from hypvol.diagram import (
    CoxeterDiagram,
    Dashed,
    Finite,
    GramMatrix,
    Infinity,
    assert_lorentzian,
    gram_matrix,
    inertia,
    parse_diagram,
    signature,
)
from hypvol.errors import (
    BadWeight,
    DiagramSyntaxError,
    NotLorentzian,
    UnsupportedLabel,
)
from hypvol.polytopes import POLYTOPE_5D, POLYTOPE_7D
from hypvol.surd import MultiSurd, parse_surd


def test_parse_5d_polytope():
    d = parse_diagram(POLYTOPE_5D)
    assert d.dimension == 5
    assert d.facets == 8
    labels = list(d.edges.values())
    dashed = [l for l in labels if isinstance(l, Dashed)]
    assert len(dashed) == 2
    assert all(l.weight == parse_surd("sqrt(26)/4") for l in dashed)
    assert sum(isinstance(l, Infinity) for l in labels) == 1
    assert sum(isinstance(l, Finite) for l in labels) == 6


def test_parse_unsupported_label():
    text = "n 2\nfacets 3\nedge 0 1 3\nedge 1 2 3\nedge 0 2 7\n"
    with pytest.raises(UnsupportedLabel):
        parse_diagram(text)


def test_parse_label_two_hints_right_angle():
    with pytest.raises(UnsupportedLabel, match="right angle"):
        parse_diagram("n 2\nfacets 3\nedge 0 1 2\n")


def test_parse_no_edges_is_valid():
    d = parse_diagram("n 2\nfacets 3\n")
    assert d.edges == {}
    G = gram_matrix(d)
    assert all(G[i, j] == (1 if i == j else 0) for i in range(3) for j in range(3))


@pytest.mark.parametrize("text", [
    "facets 3\nedge 0 1 3\n",                 # edge before headers
    "n 2\nfacets 3\nedge 0 3 3\n",            # index out of range
    "n 2\nfacets 3\nedge 0 0 3\n",            # self edge
    "n 2\nfacets 3\nedge 0 1 3\nedge 1 0 4\n",  # duplicate edge
    "n 2\nfacets 3\nedge 0 1\n",              # missing label
    "n two\nfacets 3\n",                      # bad integer
    "n 2\nfacets 3\nvertex 0 1 3\n",          # unknown directive
    "n 2\nfacets 3\nedge 0 1 frob\n",         # unknown label
    "n 2\n",                                  # missing facets
])
def test_parse_syntax_errors(text):
    with pytest.raises(DiagramSyntaxError):
        parse_diagram(text)


def test_parse_bad_dashed_weights():
    with pytest.raises(BadWeight):
        parse_diagram("n 2\nfacets 3\nedge 0 1 dashed 1\n")
    with pytest.raises(BadWeight):
        parse_diagram("n 2\nfacets 3\nedge 0 1 dashed 1/2\n")
    with pytest.raises(BadWeight):
        parse_diagram("n 2\nfacets 3\nedge 0 1 dashed spam\n")


def test_comments_and_blank_lines():
    d = parse_diagram("# header\n\nn 2\nfacets 3\nedge 0 1 3  # angle pi/3\n")
    assert d.edges[(0, 1)] == Finite(3)


def test_gram_single_edge_label3():
    d = parse_diagram("n 2\nfacets 3\nedge 0 1 3\n")
    G = gram_matrix(d)
    assert G[0, 1] == MultiSurd(Fraction(-1, 2))
    assert G[1, 0] == G[0, 1]
    assert G[0, 2].is_zero()


def test_gram_exact_cosines():
    d = parse_diagram("n 3\nfacets 4\nedge 0 1 4\nedge 1 2 5\nedge 2 3 6\n")
    G = gram_matrix(d)
    assert G[0, 1] == parse_surd("-sqrt(2)/2")
    assert G[1, 2] == parse_surd("-1/4 - 1/4*sqrt(5)")
    assert G[2, 3] == parse_surd("-sqrt(3)/2")


def test_gram_5d_entries():
    G = gram_matrix(parse_diagram(POLYTOPE_5D))
    w = parse_surd("sqrt(26)/4")
    assert G[0, 1] == -w
    assert G[4, 5] == -w
    assert G[0, 4] == MultiSurd(-1)


def test_gram_is_label_local():
    base = "n 2\nfacets 4\nedge 0 1 3\nedge 1 2 3\nedge 2 3 3\n"
    changed = base.replace("edge 1 2 3", "edge 1 2 4")
    G1 = gram_matrix(parse_diagram(base))
    G2 = gram_matrix(parse_diagram(changed))
    diffs = [(i, j) for i in range(4) for j in range(4) if G1[i, j] != G2[i, j]]
    assert sorted(diffs) == [(1, 2), (2, 1)]


def test_signature_identity():
    d = parse_diagram("n 2\nfacets 3\n")
    assert signature(gram_matrix(d)) == (3, 0, 0)


def test_signature_diag_plus_minus():
    G = GramMatrix(1, [[MultiSurd(1), MultiSurd(0)], [MultiSurd(0), MultiSurd(-1)]])
    assert signature(G) == (1, 1, 0)


def test_inertia_hyperbolic_pair():
    a = MultiSurd.sqrt(2)
    assert inertia([[MultiSurd(0), a], [a, MultiSurd(0)]]) == (1, 1, 0)


def test_signature_5d_with_float_oracle():
    G = gram_matrix(parse_diagram(POLYTOPE_5D))
    exact = signature(G)
    eig = np.linalg.eigvalsh(np.array([[float(G[i, j]) for j in range(8)] for i in range(8)]))
    oracle = (int((eig > 1e-9).sum()), int((eig < -1e-9).sum()),
              int((np.abs(eig) <= 1e-9).sum()))
    assert exact == oracle == (5, 1, 2)


def test_signature_7d():
    G = gram_matrix(parse_diagram(POLYTOPE_7D))
    assert signature(G) == (7, 1, 2)
    assert_lorentzian(G)


def test_signature_permutation_invariance():
    G = gram_matrix(parse_diagram(POLYTOPE_5D))
    rng = random.Random(3)
    for _ in range(5):
        perm = list(range(8))
        rng.shuffle(perm)
        assert signature(G.permuted(perm)) == (5, 1, 2)


def test_relabeled_diagram_same_signature():
    d = parse_diagram(POLYTOPE_7D)
    rng = random.Random(11)
    perm = list(range(d.facets))
    rng.shuffle(perm)
    assert signature(gram_matrix(d.relabeled(perm))) == (7, 1, 2)


def test_assert_lorentzian_rejects_definite():
    d = parse_diagram("n 2\nfacets 3\n")
    with pytest.raises(NotLorentzian):
        assert_lorentzian(gram_matrix(d))


def test_diagram_validation():
    with pytest.raises(ValueError):
        CoxeterDiagram(1, 3, {})
    with pytest.raises(ValueError):
        CoxeterDiagram(2, 2, {})
    with pytest.raises(ValueError):
        CoxeterDiagram(2, 3, {(0, 5): Finite(3)})
