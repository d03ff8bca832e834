"""Smoke test for the pylalg bindings.

Build and install first:  pip install --no-build-isolation crates/py
"""

import pylalg


def main():
    a4 = pylalg.make_a(4)
    flags = a4.classify()
    assert flags["is_l"] and flags["is_ckl"] and flags["is_linear"] and flags["is_simple"]
    assert not flags["is_hilbert"]
    assert a4.ideals() == [[0], [0, 1, 2, 3]]

    lh = pylalg.make_lh(5)
    assert len(lh.ideals()) == 5
    assert len(lh.spectrum()) == 4

    bad = pylalg.Table([[0, 1, 2], [0, 0, 0], [0, 0, 0]])
    report = bad.classify()
    assert not report["is_l"]
    assert report["witnesses"]["l"]["axiom"] == "antisymmetry"

    try:
        pylalg.Table([[0, 1], [0, 5]])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range entry accepted")

    x = pylalg.Table([[0, 1, 2], [0, 0, 1], [0, 1, 0]])
    u = pylalg.make_a(2)
    prod, carrier = pylalg.semidirect(x, u, [[0, 1, 2], [0, 0, 0]])
    assert prod.size == 6 and carrier[3] == (1, 1)
    assert len(prod.ideals()) == 3

    assert pylalg.Table.parse(a4.to_text()) == a4
    assert a4.canonical().isomorphic(a4)

    ckl4 = pylalg.enumerate(4, "ckl")
    assert all(t.classify()["is_ckl"] for t in ckl4)
    try:
        pylalg.enumerate(5, budget_nodes=5)
    except pylalg.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget not enforced")

    r = pylalg.conjecture_search(4)
    assert r["counterexamples"] == [] and r["frontier"] is None

    assert pylalg.word_dot(x, [1], [2]) == [1]
    assert pylalg.approx_equiv(x, [0], [])["outcome"] == "equivalent"
    assert pylalg.approx_equiv(x, [1, 2], [2, 1])["outcome"] == "distinguished"

    print("pylalg smoke test passed")


if __name__ == "__main__":
    main()
