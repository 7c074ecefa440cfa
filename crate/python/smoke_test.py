"""Smoke test for the eppa extension module.

Build and install first:

    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install --force-reinstall dist/eppa-*.whl
    python python/smoke_test.py
"""

import itertools

import eppa


def main():
    assert eppa.witness_size(6, 3) == 96

    # parts {1, 2} and {3, 4}, every arc left to right
    t = eppa.Tournament(2, [1, 1, 2, 2], [(1, 3), (1, 4), (2, 3), (2, 4)])
    assert t.is_semigeneric()
    assert eppa.Tournament.from_json(t.to_json()) == t

    odd = eppa.Tournament(2, [1, 1, 2, 2], [(1, 3), (1, 4), (2, 3), (4, 2)])
    assert odd.semigeneric_violation() == ((1, 2), (1, 2), (3, 4), 3)

    try:
        eppa.Tournament(2, [1, 2], [])
    except ValueError as e:
        assert "completeness" in str(e)
    else:
        raise AssertionError("missing edge accepted")

    w = eppa.Witness(t)
    assert (w.k, w.n, w.part_size, w.order) == (4, 2, 2, 16)
    for x, y in itertools.permutations(range(1, 5), 2):
        assert t.has_arc(x, y) == w.has_arc(w.embed(x), w.embed(y))

    maps = t.partial_automorphisms()
    for phi in maps:
        cert = w.extend(phi)
        theta = cert["theta"]
        assert w.is_automorphism(theta)
        for x, y in phi:
            assert theta[w.embed(x) - 1] == w.embed(y)
    print(f"extended {len(maps)} partial automorphisms")

    phi = [(w.embed(1), w.embed(2)), (w.embed(3), w.embed(4))]
    found = w.oracle_extension(phi)
    assert found is not None and w.is_automorphism(found)

    small = eppa.Tournament(2, [1, 2, 2], [(1, 2), (3, 1)])
    embedding, checked = w.serves(small)
    assert len(embedding) == 3 and checked > 0

    report = eppa.campaign(n=2, max_k=4, oracle=True)
    assert report["instances"] == 18
    assert report["failed"] == 0 and report["tested"] == report["oracle_checked"]

    sampled = eppa.campaign(n=3, max_k=6, sample=10, instances=3, seed=5, jobs=2)
    assert sampled == eppa.campaign(n=3, max_k=6, sample=10, instances=3, seed=5, jobs=1)
    assert sampled["tested"] == 30 and sampled["failed"] == 0

    print("smoke test passed")


if __name__ == "__main__":
    main()
