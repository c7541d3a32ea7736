import pytest

from nlgames.rng import SplitMix64


def reference_stream(seed, count):
    """Transliteration of the published splitmix64 reference algorithm."""
    mask = (1 << 64) - 1
    state = seed & mask
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append((z ^ (z >> 31)) & mask)
    return out


def test_known_vectors_seed_zero():
    rng = SplitMix64(0)
    assert [rng.next_uint64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_known_vectors_seed_1234567():
    rng = SplitMix64(1234567)
    assert rng.next_uint64() == 0x599ED017FB08FC85
    assert rng.next_uint64() == 0x2C73F08458540FA5


def test_matches_reference_for_assorted_seeds():
    for seed in (0, 1, 42, 2**63, 2**64 - 1, 123456789):
        rng = SplitMix64(seed)
        assert [rng.next_uint64() for _ in range(10)] == reference_stream(seed, 10)


def test_same_seed_same_stream():
    a = SplitMix64(99)
    b = SplitMix64(99)
    assert [a.next_uint64() for _ in range(100)] == [b.next_uint64() for _ in range(100)]


def test_randbelow_range_and_coverage():
    rng = SplitMix64(3)
    seen = set()
    for _ in range(1000):
        x = rng.randbelow(7)
        assert 0 <= x < 7
        seen.add(x)
    assert seen == set(range(7))
    with pytest.raises(ValueError):
        rng.randbelow(0)
