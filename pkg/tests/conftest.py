"""Shared generators for randomized tests.

Random instances are drawn from parameter shapes known to be valid and of
Hamiltonian degree at most 9, so full pipelines stay fast while still
exercising every family and both sign branches.
"""

import random
from fractions import Fraction

from abelint import (
    BiPoly,
    GaussRat,
    NormalForm,
    OneForm,
    RectifyingMap,
    UniPoly,
    build_rectifier,
)

# (family, p1, p, q1, q, k, n_beta) shapes; F3 entries carry (family, sum_a)
F1_PLUS_SHAPES = [("F1", 0, 1, 1, 2, 1, 1), ("F1", 0, 1, 1, 3, 1, 1)]
F1_MINUS_SHAPES = [("F1", 1, 2, 0, 1, 1, 1), ("F1", 1, 2, 0, 1, 1, 2),
                   ("F1", 1, 3, 0, 1, 1, 1)]
F2_PLUS_SHAPES = [("F2", 0, 1, 1, 2, 1, 1), ("F2", 0, 1, 1, 3, 1, 1)]
F2_MINUS_SHAPES = [("F2", 1, 2, 0, 1, 1, 1), ("F2", 1, 2, 0, 1, 1, 2),
                   ("F2", 1, 3, 0, 1, 1, 1)]
F2_RANK1_SHAPES = [("F2", 0, 1, 0, 0, k, 0) for k in (1, 2, 3)] \
    + [("F2", 1, 2, 0, 0, k, 0) for k in (1, 2, 3)] \
    + [("F2", 1, 3, 0, 0, 1, 0), ("F2", 2, 3, 0, 0, 1, 0)]

_BETA_POOL = [GaussRat(v) for v in (1, -1, 2, -2, 3, Fraction(1, 2))] \
    + [GaussRat(0, 1), GaussRat(1, 1)]


def random_gauss(rng: random.Random, nonzero: bool = False) -> GaussRat:
    while True:
        value = GaussRat(Fraction(rng.randint(-4, 4),
                                  rng.choice((1, 1, 1, 2, 3))))
        if value or not nonzero:
            return value


def random_unipoly(rng: random.Random, max_degree: int) -> UniPoly:
    if max_degree < 0:
        return UniPoly()
    return UniPoly([random_gauss(rng) for _ in range(rng.randint(0, max_degree) + 1)])


def random_betas(rng: random.Random, count: int):
    return tuple(rng.sample(_BETA_POOL, count))


def random_normal_form(rng: random.Random, shapes=None) -> NormalForm:
    """Draw a valid normal form of total degree at most 9."""
    if shapes is None:
        shapes = (F1_PLUS_SHAPES + F1_MINUS_SHAPES + F2_PLUS_SHAPES
                  + F2_MINUS_SHAPES + F2_RANK1_SHAPES + [("F3", None)])
    shape = rng.choice(shapes)
    if shape[0] == "F3":
        total = rng.randint(2, 6)
        pieces = []
        while total > 0:
            piece = rng.randint(1, min(total, 3))
            pieces.append(piece)
            total -= piece
        return NormalForm("F3", a=tuple(pieces),
                          beta=random_betas(rng, len(pieces)),
                          h=random_unipoly(rng, sum(pieces) - 1))
    _, p1, p, q1, q, k, n_beta = shape
    if n_beta:
        count = rng.randint(1, n_beta)
        a = tuple(1 for _ in range(count))
        if count < n_beta:  # allow higher multiplicity in single-beta shapes
            a = (rng.randint(1, n_beta),)
            count = 1
        beta = random_betas(rng, count)
    else:
        a, beta = (), ()
    return NormalForm(shape[0], p1=p1, p=p, q1=q1, q=q, k=k,
                      P=random_unipoly(rng, k - 1), a=a, beta=beta)


def random_oneform(rng: random.Random, max_degree: int,
                   with_dy: bool = True) -> OneForm:
    """Sparse random polynomial 1-form of total degree at most max_degree."""
    a_terms, b_terms = {}, {}
    for _ in range(rng.randint(1, 5)):
        i = rng.randint(0, max_degree)
        j = rng.randint(0, max_degree - i)
        a_terms[(i, j)] = random_gauss(rng, nonzero=True)
    if with_dy and rng.random() < 0.5:
        for _ in range(rng.randint(1, 3)):
            i = rng.randint(0, max_degree)
            j = rng.randint(0, max_degree - i)
            b_terms[(i, j)] = random_gauss(rng, nonzero=True)
    return OneForm(BiPoly(a_terms), BiPoly(b_terms))


def random_bipoly(rng: random.Random, max_degree: int) -> BiPoly:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        i = rng.randint(0, max_degree)
        j = rng.randint(0, max_degree - i)
        terms[(i, j)] = random_gauss(rng)
    return BiPoly(terms)


_RECTIFIER_CACHE = {}


def cached_rectifier(nf: NormalForm) -> RectifyingMap:
    if nf not in _RECTIFIER_CACHE:
        _RECTIFIER_CACHE[nf] = build_rectifier(nf)
    return _RECTIFIER_CACHE[nf]
