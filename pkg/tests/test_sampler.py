from fractions import Fraction
from itertools import islice

from randwalls.sampler import (
    check_admissible,
    enumerate_patches,
    random_patch,
    sample_presentation,
    stream_rng,
)
from randwalls.canonical import certificate
from randwalls.words import is_cyclically_reduced

D = Fraction(3, 14)
EPS = Fraction(1, 50)


def test_stream_rng_independence():
    a = stream_rng(5, "alpha")
    b = stream_rng(5, "beta")
    a2 = stream_rng(5, "alpha")
    seq = [a.random() for _ in range(5)]
    assert seq == [a2.random() for _ in range(5)]
    assert seq != [b.random() for _ in range(5)]


def test_sample_presentation():
    res = sample_presentation(2, D, 14, seed=7)
    pres = res.presentation
    assert len(pres.relators) == 27  # floor(3^3)
    assert pres.subdivision == 2 and pres.ell == 28
    assert all(is_cyclically_reduced(w) for w in pres.relators)
    assert all(len(w) == 14 for w in pres.relators)
    again = sample_presentation(2, D, 14, seed=7)
    assert again.presentation == pres
    other = sample_presentation(2, D, 14, seed=8)
    assert other.presentation != pres


def test_sample_duplicates_warn():
    # 8 draws from the 12 cyclically reduced words of length 2 must collide
    res = sample_presentation(2, Fraction(19, 20), 2, seed=0)
    assert len(res.presentation.relators) == 8
    assert any("duplicate" in w for w in res.warnings)


def test_enumerate_patches_dedup():
    pres = sample_presentation(2, D, 8, seed=7).presentation
    patches = list(islice(enumerate_patches(pres, max_cells=2), 200))
    assert len(patches) == 200
    certs = {certificate(p.whole) for p in patches}
    assert len(certs) == 200  # labeled-isomorphism dedup
    for p in patches[:20]:
        assert p.fulfilled_violations == []
    singles = [p for p in patches if len(p.cells) == 1]
    assert len(singles) == len(set(pres.relators))


def test_enumerate_budget():
    pres = sample_presentation(2, D, 8, seed=7).presentation
    assert len(list(enumerate_patches(pres, budget=25))) == 25


def test_random_patch_deterministic():
    pres = sample_presentation(2, D, 8, seed=7).presentation
    a = random_patch(pres, stream_rng(3, "patches"))
    b = random_patch(pres, stream_rng(3, "patches"))
    assert a is not None
    assert a.to_json() == b.to_json()
    assert len(a.cells) == 2 and a.fulfilled_violations == []


def test_random_patch_overlap_bias():
    pres = sample_presentation(2, D, 8, seed=7).presentation
    rng = stream_rng(4, "bias")
    lengths = []
    for _ in range(60):
        p = random_patch(pres, rng)
        if p is not None:
            lengths.append(p.gluings[0].length)
    ell = pres.ell
    long_frac = sum(ell // 4 <= q for q in lengths) / len(lengths)
    assert long_frac > 0.5  # biased toward potile-range overlaps


def test_check_admissible(corpus, ring3_patch):
    for name, (patch, _) in corpus.items():
        assert check_admissible(patch, D, EPS).ok, name
    rep = check_admissible(ring3_patch, D, EPS)
    assert not rep.ok
    assert rep.ipi_violations  # Can = 18 beats (d + eps) |Y| ell on the ring
    assert not rep.geodesics.ok  # and its girth is below ell
