import csv

import pytest

from kacmoody.linalg import RealSpan, nullspace, rank, realify, solve, unrealify
from kacmoody.affine import AffineKacMoody
from kacmoody.report import build_report
from kacmoody.sampling import random_element
from kacmoody.suites import SUITES, SuiteConfig, run_suite


@pytest.mark.parametrize("name", SUITES)
def test_every_suite_passes_small(name):
    base = "abelian:2" if name in ("heisenberg", "classify", "group") else "sl2"
    if name in ("flatness", "signature", "tame"):
        base = "abelian:1"
    rep = run_suite(name, SuiteConfig(seed=1, base=base, window=3, trials=10))
    assert rep.passed, rep.failures


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", SuiteConfig(seed=1))


def test_failure_witnesses_capped():
    rep = run_suite("flatness", SuiteConfig(seed=2, base="sl2", window=3, trials=20))
    assert not rep.passed and 0 < len(rep.failures) <= 5 <= rep.failure_count


def test_realify_roundtrip(rng):
    km = AffineKacMoody("abelian:2")
    for _ in range(5):
        X = random_element(km, rng, 3)
        assert unrealify(realify(X, 3), km, 3) == X


def test_exact_linear_algebra():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(rows) == 2
    for v in nullspace(rows):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    span = RealSpan([[1, 0, 0], [0, 1, 1]])
    assert span.contains([2, 3, 3]) and not span.contains([0, 1, 0])
    assert solve([[1, 0], [1, 1]], [3, 5]) == [-2, 5]
    with pytest.raises(ValueError):
        solve([[1, 0]], [0, 1])


def test_report_files(tmp_path):
    files = build_report(tmp_path, seed=1, window=3, trials=20)
    for key, path in files.items():
        assert (tmp_path / path.split("/")[-1]).stat().st_size > 0
    with open(files["signature_csv"]) as fh:
        rows = list(csv.DictReader(fh))
    compact = sorted(float(r["eigenvalue"]) for r in rows if r["realform"] == "compact")
    assert sum(v < 0 for v in compact) == 1
