from dfo.generators import (
    GenParams, random_distinct_sentence, random_existential_sentence, random_formula,
    random_structure, rng_for,
)
from dfo.logic import DFO, Signature, check_fragment, existential_local, free_vars, local_fo
from dfo.parser import parse_structure, serialize_structure

import pytest


def test_deterministic():
    p = GenParams(seed=17)
    assert random_structure(p) == random_structure(p)
    assert random_formula(p, existential_local(2)) == random_formula(p, existential_local(2))
    assert random_formula(p, DFO, rng_for(1, "a")) == random_formula(p, DFO, rng_for(1, "a"))
    assert rng_for(1, "a").random() != rng_for(1, "b").random()


def test_existential_local_formulas_pass_gate():
    sig = Signature(frozenset({"p1", "p2"}), 2)
    for t in range(1000):
        phi = random_formula(GenParams(dim=2, predicates=2), existential_local(2), rng_for(0, "gen", t))
        assert check_fragment(phi, sig, existential_local(2)).ok
        assert not free_vars(phi)


def test_structures_round_trip():
    for t in range(1000):
        A = random_structure(GenParams(max_size=5, dim=2, predicates=t % 3), rng_for(0, "struct", t))
        assert 1 <= len(A.universe) <= 5
        assert parse_structure(serialize_structure(A)) == A


def test_biased_sentences():
    params = GenParams(dim=2, radius=1)
    for t in range(200):
        rng = rng_for(2, "bias", t)
        e = random_existential_sentence(params, rng)
        assert check_fragment(e, Signature(None, 2), existential_local(1)).ok
        d = random_distinct_sentence(params, rng, 3)
        assert check_fragment(d, Signature(None, 2), DFO).ok and not free_vars(d)
    for t in range(200):
        phi = random_formula(GenParams(dim=1), local_fo(3), rng_for(3, t))
        assert check_fragment(phi, None, local_fo(3)).ok


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(max_size=0)
    with pytest.raises(ValueError):
        GenParams(dim=-1)
    assert GenParams(predicates=2).sigma == ("p1", "p2")
    assert GenParams().with_(dim=3).dim == 3
