#!/usr/bin/env python3
"""Builds the matroid_markets extension with cargo, loads it, and drives
every exposed operation once against known-good answers."""

import importlib.util
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    subprocess.run(
        ["cargo", "build", "-p", "matroid-markets-py"],
        cwd=ROOT,
        check=True,
    )
    candidates = [
        ROOT / "target" / "debug" / "libmatroid_markets.so",
        ROOT / "target" / "debug" / "libmatroid_markets.dylib",
        ROOT / "target" / "debug" / "matroid_markets.dll",
    ]
    path = next((p for p in candidates if p.exists()), None)
    if path is None:
        sys.exit("extension library not found under target/debug")
    spec = importlib.util.spec_from_file_location("matroid_markets", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def check_matroids(mm):
    m = mm.Matroid.uniform(4, 2)
    assert m.ground == [0, 1, 2, 3]
    assert m.rank() == 2
    assert m.check_axioms() is None
    assert m.is_independent([0, 3])
    assert not m.is_independent([0, 1, 2])
    assert len(m.bases()) == 6
    assert m.is_base([1, 3])
    assert all(len(c) == 3 for c in m.circuits())
    assert m.fundamental_circuit(2, [0, 1]) == [0, 1, 2]
    assert m.d_set(2, [0, 1]) == [0, 1]

    removed, inserted = m.exchange_ordering([0, 1], [2, 3])
    assert sorted(removed) == [0, 1] and sorted(inserted) == [2, 3]
    f = m.brualdi_exchange([0, 1], [2, 3], 0)
    assert f in (2, 3)

    lam = mm.Matroid.laminar(3, [([0, 1, 2], 2), ([0, 1], 1)])
    assert lam.check_axioms() is None
    assert lam.is_independent([0, 2])
    assert not lam.is_independent([0, 1])
    assert lam.restrict([0, 2]).rank() == 2

    try:
        mm.Matroid.explicit(2, [[], [0, 1]])
    except ValueError as e:
        assert "downward" in str(e) or "independent" in str(e), e
    else:
        raise AssertionError("explicit family violating the axioms must be rejected")
    print("matroid surface ok")


def check_tie_instance(mm):
    text = (ROOT / "crates/core/tests/fixtures/tie.json").read_text()
    inst = mm.Instance.from_json(text)
    assert inst.doctors == ["d1", "d2"]
    assert inst.hospitals == ["h1"]
    assert inst.edges == [("d1", "h1"), ("d2", "h1")]

    mu = [("d1", "h1")]
    assert inst.stability(mu) == (True, False, False)
    assert inst.core_membership(mu) == (True, False, False)
    blocks = inst.blocking_edges(mu)
    assert blocks == [(("d2", "h1"), "strong", "weak", "weak", ("d1", "h1"))], blocks
    assert len(inst.matchings()) == 3
    assert inst.six_set_sizes() == (2, 0, 0, 2, 0, 0)
    ok, violations = inst.verify()
    assert ok and violations == []

    reparsed = mm.Instance.from_json(inst.to_json())
    assert reparsed.to_json() == inst.to_json()
    print("tie instance ok")


def check_generated(mm):
    a = mm.Instance.generate(3, 2, edge_probability=0.8, tie_intensity=0.4, seed=5)
    b = mm.Instance.generate(3, 2, edge_probability=0.8, tie_intensity=0.4, seed=5)
    assert a.to_json() == b.to_json(), "same seed must generate the same instance"

    ok, violations = a.verify()
    assert ok, violations
    for h in a.hospitals:
        assert a.check_responsive(h) is None
        matroid = a.matroid(h)
        assert matroid.check_axioms() is None
        assert matroid.rank() <= len(matroid.ground)

    for mu in a.matchings():
        weak, strong, sup = a.stability(mu)
        assert (not sup or strong) and (not strong or weak)

    try:
        a.stability([("d1", "nowhere")])
    except ValueError:
        pass
    else:
        raise AssertionError("unknown hospital must be rejected")
    print("generated instance ok:", repr(a))


def main():
    mm = load_module()
    check_matroids(mm)
    check_tie_instance(mm)
    check_generated(mm)
    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
