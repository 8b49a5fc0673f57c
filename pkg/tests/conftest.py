import random

import pytest

from codetherm.codes import Code, GeneratorMatrix, make_linear_code, random_code

HAMMING_74_ROWS = (
    (1, 0, 0, 0, 1, 1, 0),
    (0, 1, 0, 0, 1, 0, 1),
    (0, 0, 1, 0, 0, 1, 1),
    (0, 0, 0, 1, 1, 1, 1),
)


def hamming74() -> Code:
    return make_linear_code(GeneratorMatrix(2, HAMMING_74_ROWS))


def extended_hamming8() -> Code:
    base = hamming74()
    return Code.from_words(2, (w + (sum(w) % 2,) for w in base.words))


def repetition(q: int, n: int) -> Code:
    return Code.from_words(q, [(a,) * n for a in range(min(q, 2))])


def full_cube(q: int, n: int) -> Code:
    return random_code(q, n, q ** n, seed=0)


def random_battery(count: int, seed: int, qs=(2, 3, 5), n_max: int = 10,
                   max_size: int = 24) -> list[Code]:
    """Deterministic batch of random codes with n >= 2 and #C >= 2."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.choice(qs)
        n = rng.randint(2, n_max)
        size = rng.randint(2, min(q ** n, max_size))
        out.append(random_code(q, n, size, rng.randrange(2 ** 30)))
    return out


@pytest.fixture(scope="session")
def hamming():
    return hamming74()
