import random
from fractions import Fraction as F

import pytest
from conftest import rand_state, rand_valued_weight

from gptk.errors import InputError
from gptk.linalg import rank, vec
from gptk.systems import (
    bit,
    classical_bit_model,
    coin_testspace,
    grid_testspace,
    grid_valued_weight,
    square_bit,
    trit,
)
from gptk.testspace import is_probability_weight, weight_polytope_vertices
from gptk.vweight import (
    Model,
    ValuedWeight,
    canonical_weight,
    factorization_check,
    is_valued_weight,
    pullback_state,
)


def test_is_valued_weight_examples():
    b = bit()
    coin = coin_testspace()
    assert is_valued_weight(ValuedWeight(b, coin, {"x": (1, 0), "y": (0, 1)}))
    half = (F(1, 2), F(1, 2))
    assert is_valued_weight(ValuedWeight(b, coin, {"x": half, "y": half}))
    assert not is_valued_weight(ValuedWeight(b, coin, {"x": (1, 0), "y": (1, 0)}))


def test_missing_outcome_rejected():
    with pytest.raises(InputError):
        ValuedWeight(bit(), coin_testspace(), {"x": (1, 0)})


def test_pullback_examples():
    b = bit()
    coin = coin_testspace()
    delta = ValuedWeight(b, coin, {"x": (1, 0), "y": (0, 1)})
    alpha = pullback_state(delta, (F(1, 3), F(2, 3)))
    assert alpha == {"x": F(1, 3), "y": F(2, 3)}
    const = ValuedWeight(b, coin, {"x": (F(1, 2), F(1, 2)), "y": (F(1, 2), F(1, 2))})
    assert pullback_state(const, (F(1, 4), F(3, 4))) == {"x": F(1, 2), "y": F(1, 2)}
    grid_w = grid_valued_weight()
    alpha = pullback_state(grid_w, (1,))
    assert [alpha[f"r0c{j}"] for j in range(3)] == [F(1, 6), F(1, 3), F(1, 2)]


def test_pullback_affine_in_the_state():
    rng = random.Random(21)
    for sp in (bit(), square_bit()):
        f = rand_valued_weight(rng, sp)
        phi, psi = rand_state(rng, sp), rand_state(rng, sp)
        lam = F(rng.randint(0, 5), 5)
        mix = vec(lam * a + (1 - lam) * b for a, b in zip(phi, psi))
        left = pullback_state(f, mix)
        a1, a2 = pullback_state(f, phi), pullback_state(f, psi)
        assert all(left[x] == lam * a1[x] + (1 - lam) * a2[x] for x in left)


def test_pullback_is_probability_weight():
    rng = random.Random(22)
    sp = trit()
    f = rand_valued_weight(rng, sp)
    phi = rand_state(rng, sp)
    assert is_probability_weight(f.testspace, pullback_state(f, phi))


def test_canonical_weight_bit():
    cw = canonical_weight(classical_bit_model())
    assert cw.space.dim == 2
    assert cw.values["x"] == (1, 0) and cw.values["y"] == (0, 1)
    assert vec(a + b for a, b in zip(cw.values["x"], cw.values["y"])) == cw.space.unit
    assert is_valued_weight(cw)


def test_canonical_weight_singleton_uniform():
    m = Model(coin_testspace(), ({"x": F(1, 2), "y": F(1, 2)},))
    cw = canonical_weight(m)
    assert cw.space.dim == 1
    # the evaluation functional is alpha(x) times the unit
    assert cw.values["x"] == tuple(F(1, 2) * u for u in cw.space.unit)


def test_canonical_weight_grid_dimension():
    grid = grid_testspace()
    m = Model(grid, tuple(weight_polytope_vertices(grid)))
    cw = canonical_weight(m)
    # oracle: the six permutation weights have rank 5 as vectors
    rows = [tuple(s[x] for x in grid.outcomes) for s in m.states]
    assert rank(rows) == 5
    assert cw.space.dim == 5
    assert is_valued_weight(cw)


def test_factorization_examples():
    b = bit()
    coin = coin_testspace()
    assert factorization_check(ValuedWeight(b, coin, {"x": (1, 0), "y": (0, 1)}))
    half = (F(1, 2), F(1, 2))
    assert factorization_check(ValuedWeight(b, coin, {"x": half, "y": half}))
    assert factorization_check(grid_valued_weight())


def test_factorization_on_random_weights():
    rng = random.Random(23)
    for sp in (bit(), trit(), square_bit()):
        for _ in range(3):
            f = rand_valued_weight(rng, sp)
            assert is_valued_weight(f)
            assert factorization_check(f)


def test_model_deduplicates_states():
    m = Model(coin_testspace(), ({"x": F(1), "y": F(0)}, {"x": 1, "y": 0}))
    assert len(m.states) == 1


def test_worked_three_outcome_weight_is_valid():
    from gptk.systems import worked_bit_weight
    assert is_valued_weight(worked_bit_weight())
