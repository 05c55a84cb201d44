"""Seeded random instances and the bundled example instances."""
from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .cech import ElementSystem
from .fpmod import FPModule, Ideal
from .instance import Instance, parse_instance
from .matrix import Matrix
from .ring import ZZ, PolyRing, Ring, product

F5 = PolyRing(5)


def prime_pool(ring: Ring) -> list:
    if ring == ZZ:
        return [2, 3, 5]
    if isinstance(ring, PolyRing) and ring.p == 5:
        return [ring.parse(s) for s in ("t", "t + 1", "t^2 + 2")]
    raise ValueError(f"no prime pool for {ring}")


@dataclass(frozen=True)
class CorpusEntry:
    M: FPModule
    I: Ideal
    system: ElementSystem


def _random_primary(rng: random.Random, primes: list, max_exp: int = 3):
    chosen = rng.sample(primes, rng.randint(1, len(primes)))
    return [(p, rng.randint(1, max_exp)) for p in chosen]


def scramble(rng: random.Random, A: Matrix, steps: int = 4) -> Matrix:
    """Row and column operations with unit coefficients; the cokernel is unchanged."""
    ring = A.ring
    data = A.tolist()
    rows, cols = A.rows, A.cols
    for _ in range(steps):
        c = ring.from_int(rng.choice([-1, 1]))
        if rows > 1 and rng.random() < 0.5:
            i, j = rng.sample(range(rows), 2)
            data[i] = [a + c * b for a, b in zip(data[i], data[j])]
        elif cols > 1:
            i, j = rng.sample(range(cols), 2)
            for r in data:
                r[i] = r[i] + c * r[j]
    return Matrix(ring, data, rows, cols)


def random_module(rng: random.Random, ring: Ring) -> FPModule:
    primes = prime_pool(ring)
    free_rank = rng.randint(0, 3)
    factors = []
    for _ in range(rng.randint(0, 4)):
        factors.append(product(ring, [p ** e for p, e in _random_primary(rng, primes)]))
    base = FPModule.from_invariants(ring, free_rank, factors)
    if base.ngens == 0:
        return base
    return FPModule(ring, scramble(rng, base.presentation))


def random_ideal(rng: random.Random, ring: Ring) -> Ideal:
    """(g) with g built from the prime pool, sometimes given by two generators."""
    primes = prime_pool(ring)
    g = product(ring, [p ** e for p, e in _random_primary(rng, primes, 2)])
    if rng.random() < 0.3:
        a, b = rng.sample(primes, 2)
        return Ideal(ring, [g * a, g * b])
    return Ideal(ring, [g])


def random_system(rng: random.Random, I: Ideal) -> ElementSystem:
    """Up to three elements whose gcd has the same radical as I."""
    ring = I.ring
    support = [p for p in prime_pool(ring) if ring.divides(p, I.reduced)]
    r = rng.randint(1, 3)
    elements = [product(ring, [p ** rng.randint(1, 3) for p in support]) for _ in range(r)]
    return ElementSystem(ring, tuple(elements))


def random_entry(rng: random.Random, ring: Ring | None = None) -> CorpusEntry:
    ring = ring or rng.choice([ZZ, F5])
    I = random_ideal(rng, ring)
    return CorpusEntry(random_module(rng, ring), I, random_system(rng, I))


def random_corpus(count: int, seed: int = 0) -> list[CorpusEntry]:
    rng = random.Random(seed)
    return [random_entry(rng) for _ in range(count)]


def random_torsion_in_support(rng: random.Random, I: Ideal) -> FPModule:
    """A torsion module killed by a power of the ideal's generator (possibly zero)."""
    ring = I.ring
    support = [p for p in prime_pool(ring) if ring.divides(p, I.reduced)]
    factors = [product(ring, [p ** rng.randint(0, 3) for p in support]) for _ in range(rng.randint(0, 3))]
    return FPModule.from_invariants(ring, 0, factors)


# -- bundled instances --------------------------------------------------------------

def bundled_names() -> list[str]:
    root = resources.files("adicert") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def bundled_text(name: str) -> str:
    path = resources.files("adicert") / "corpus" / f"{name}.toml"
    if not path.is_file():
        raise KeyError(name)
    return path.read_text()


def load_bundled(name: str) -> Instance:
    return parse_instance(bundled_text(name))
