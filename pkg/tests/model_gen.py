"""Random SUT models for agreement sweeps and property tests.

Each constraint draws its relations from a small pool of parameters (at
most three) and has bounded depth, which keeps the brute-force oracle cheap
while still producing unsatisfiable models, vacuous constraints, and
parameter-to-parameter relations from time to time.
"""

import random

from citbdd.model import (
    And, Implies, Not, Or,
    ParamEqConst, ParamEqParam, ParamGeConst, ParamGtConst,
    ParamLeConst, ParamLtConst, ParamNeqConst, ParamNeqParam,
    Parameter, SutModel,
)

_CONST_KINDS = (ParamEqConst, ParamNeqConst, ParamLtConst, ParamLeConst,
                ParamGtConst, ParamGeConst)


def _random_relation(rng: random.Random, pool, sizes):
    if len(pool) >= 2 and rng.random() < 0.2:
        a, b = rng.sample(pool, 2)
        return rng.choice((ParamEqParam, ParamNeqParam))(a, b)
    p = rng.choice(pool)
    kind = rng.choice(_CONST_KINDS)
    return kind(p, rng.randrange(sizes[p]))


def _random_tree(rng: random.Random, pool, sizes, depth):
    if depth <= 0 or rng.random() < 0.35:
        return _random_relation(rng, pool, sizes)
    shape = rng.random()
    if shape < 0.2:
        return Not(_random_tree(rng, pool, sizes, depth - 1))
    op = rng.choice((And, Or, Implies))
    return op(_random_tree(rng, pool, sizes, depth - 1),
              _random_tree(rng, pool, sizes, depth - 1))


def random_model(rng: random.Random, max_params: int = 6, max_domain: int = 4,
                 max_constraints: int = 4) -> SutModel:
    n = rng.randint(2, max_params)
    sizes = [rng.randint(2, max_domain) for _ in range(n)]
    params = tuple(
        Parameter(f"p{i}", tuple(f"v{j}" for j in range(sizes[i])))
        for i in range(n)
    )
    constraints = []
    for _ in range(rng.randint(1, max_constraints)):
        pool = rng.sample(range(n), rng.randint(1, min(3, n)))
        constraints.append(_random_tree(rng, pool, sizes, depth=2))
    return SutModel(params, tuple(constraints))


def all_assignments(model):
    """Every full and partial assignment of the model, dash included."""
    from itertools import product
    choices = [(None, *range(s)) for s in model.sizes]
    return product(*choices)
