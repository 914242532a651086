import math

from hypothesis import strategies as st

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23]


@st.composite
def moduli_lists(draw, max_size=300, max_len=4):
    """Arbitrary moduli n_i >= 1 whose product stays below max_size."""
    out = []
    size = 1
    for _ in range(draw(st.integers(1, max_len))):
        cap = max_size // size
        if cap < 1:
            break
        m = draw(st.integers(1, min(cap, 60)))
        out.append(m)
        size *= m
    return out or [1]


@st.composite
def odd_prime_power_moduli(draw, max_size=2000, with_two=False):
    """Distinct odd prime powers, optionally followed by one power of two."""
    primes = draw(st.lists(st.sampled_from(ODD_PRIMES), min_size=0 if with_two else 1,
                           max_size=3, unique=True))
    moduli = []
    size = 1
    for p in sorted(primes):
        e = draw(st.integers(1, 3))
        while e > 1 and size * p**e > max_size:
            e -= 1
        if size * p**e > max_size:
            continue
        moduli.append(p**e)
        size *= p**e
    if with_two:
        m = draw(st.integers(1, 5))
        while m > 1 and size * 2**m > max_size:
            m -= 1
        moduli.append(2**m)
    if not moduli:
        moduli = [3]
    return moduli


def product(xs):
    return math.prod(xs)
