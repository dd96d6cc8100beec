"""Smoke test for the pykronpath extension module."""

import os
import tempfile

import pykronpath as kp


def main():
    graph = kp.Graph.from_text("0 a 1\n1 a 0\n1 b 1\n")
    assert graph.vertex_count == 2 and len(graph) == 3

    query = kp.Query.grammar("S -> a S b | a b")
    assert query.accepts(["a", "a", "b", "b"])
    assert not query.accepts(["a", "b", "b"])

    index = kp.Index.build(query, graph)
    assert index.reachable_pairs() == [("0", "1"), ("1", "1")]
    assert index.iterations == 3
    assert index.pair_counts() == {"S": 2}

    paths = index.paths("1", "1", max_word_len=4)
    assert paths == [[("1", "a", "0"), ("0", "a", "1"), ("1", "b", "1"), ("1", "b", "1")]]
    assert len(index.paths("1", "1", max_word_len=8)) == 2
    assert index.paths("0", "0") == []

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "fig1.kpi")
        index.save(path)
        again = kp.Index.load(path)
        assert again.reachable_pairs("S") == index.reachable_pairs("S")
    assert kp.Index.loads(index.dumps()).iterations == 3

    rpq = kp.Index.build(kp.Query.regex("a b*"), graph)
    assert rpq.reachable_pairs() == [("0", "1"), ("1", "0")]
    assert rpq.productive_iterations == 1

    assert len(kp.Query.template_names()) == 28
    q2 = kp.Query.template("Q2", ["a", "b"])
    assert kp.Index.build(q2, graph).reachable_pairs() == rpq.reachable_pairs()

    rdf = kp.Graph.synthetic(2000, ["subClassOf", "type", "x"], seed=4, add_inverse=True)
    g1 = kp.Index.build(kp.Query.builtin("g1"), rdf)
    assert g1.vertex_count == rdf.vertex_count

    for bad in (lambda: kp.Query.grammar("S -> a ("), lambda: index.reachable_pairs("T")):
        try:
            bad()
        except kp.KronpathError:
            pass
        else:
            raise AssertionError("expected KronpathError")
    try:
        kp.Index.load("/nonexistent/index.kpi")
    except OSError:
        pass
    else:
        raise AssertionError("expected OSError")

    print("pykronpath smoke test passed:", index)


if __name__ == "__main__":
    main()
