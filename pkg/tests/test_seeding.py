from utils.seeding import MASK64, derive_seeds, mix_seed, rep_seeds, splitmix64


def test_splitmix64_reference_value():
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_outputs_fit_in_64_bits():
    for x in (0, 1, MASK64, 2**63 + 5):
        assert 0 <= splitmix64(x) <= MASK64


def test_rep_seeds_distinct_and_stable():
    seeds = rep_seeds(2019, 1_000)
    assert len(set(seeds)) == 1_000
    assert seeds == rep_seeds(2019, 1_000)
    assert seeds[:10] != rep_seeds(2020, 10)


def test_derive_chain():
    assert derive_seeds(5, (3,)) == mix_seed(5, 3)
    assert derive_seeds(5, (3, 4)) == mix_seed(mix_seed(5, 3), 4)
    assert derive_seeds(5, (0, 1)) != derive_seeds(5, (1, 0))
    assert derive_seeds(5, ()) == 5
