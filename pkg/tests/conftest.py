"""Shared fixtures and random generators for the test suite."""

import random

import pytest

from frobdiff.base_field import FieldSpec, Poly, RatFunc


@pytest.fixture
def f2t():
    return FieldSpec(2, ["t"])


@pytest.fixture
def f3st():
    return FieldSpec(3, ["s", "t"])


def rand_poly(rng: random.Random, spec: FieldSpec, max_deg=2, max_terms=3) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * spec.k
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            exps[rng.randrange(spec.k)] += 1
        terms[tuple(exps)] = rng.randrange(spec.p)
    return spec.poly(terms)


def rand_poly_nonzero(rng, spec, max_deg=2, max_terms=3) -> Poly:
    while True:
        f = rand_poly(rng, spec, max_deg, max_terms)
        if not f.is_zero():
            return f


def rand_ratfunc(rng, spec, max_deg=2) -> RatFunc:
    num = rand_poly(rng, spec, max_deg)
    den = rand_poly_nonzero(rng, spec, 1, 2)
    return RatFunc.make(num, den)


def rand_ratfunc_nonzero(rng, spec, max_deg=2) -> RatFunc:
    while True:
        a = rand_ratfunc(rng, spec, max_deg)
        if a:
            return a
