"""Seeded synthetic dictionaries with a planted structure.

The generator builds a closed lexicon whose definition graph has one giant
core SCC (definitions drawn only from other core words), a layer of small
satellite SCCs fed by core words, and an acyclic outside mass defined from
earlier words. It can also draw norms whose group means follow a planted
ordering across the structural layers, for exercising the statistics
pipeline end to end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .decomposition import Decomposition, Label
from .lexicon import NORM_VARIABLES, Lexicon, LexiconEntry

# Higher values are planted deeper in the structure for every variable
# except age of acquisition, which runs the other way (learned earlier).
PLANTED_DIRECTIONS: dict[str, int] = {
    "aoa": -1,
    "concreteness": 1,
    "imageability": 1,
    "freq_written": 1,
    "freq_oral": 1,
}

# Stratum base means on an MRC-like 100..700 rating scale, listed from the
# deepest layer outwards: core-and-grounding, satellite-and-grounding,
# core only, satellite only, outside the kernel.
_STRATUM_MEANS = (620.0, 560.0, 470.0, 400.0, 300.0)
_STRATUM_SD = 35.0


@dataclass(frozen=True)
class SynthConfig:
    entries: int = 2000
    seed: int = 0
    mean_def_len: float = 10.0
    core_frac: float = 0.03
    satellite_frac: float = 0.025

    def __post_init__(self) -> None:
        if self.entries < 20:
            raise ValueError("need at least 20 entries to plant the structure")
        if not 0 < self.core_frac + self.satellite_frac < 0.5:
            raise ValueError("core and satellite fractions must leave room for the outside")


def _sample(rng: random.Random, pool: list[str], count: int, exclude: str) -> set[str]:
    count = min(count, len(pool) - (1 if exclude in pool else 0))
    picked: set[str] = set()
    while len(picked) < count:
        w = pool[rng.randrange(len(pool))]
        if w != exclude:
            picked.add(w)
    return picked


def generate_lexicon(cfg: SynthConfig) -> Lexicon:
    """A closed lexicon whose kernel is exactly the planted core and satellites."""
    rng = random.Random(cfg.seed)
    n = cfg.entries
    words = [f"w{i:06d}" for i in range(n)]
    n_core = max(3, int(n * cfg.core_frac))
    n_sat = max(2, int(n * cfg.satellite_frac))
    core = words[:n_core]
    satellite_words = words[n_core : n_core + n_sat]
    outside = words[n_core + n_sat :]

    def length() -> int:
        return max(2, int(round(rng.gauss(cfg.mean_def_len, cfg.mean_def_len / 4))))

    entries: dict[str, LexiconEntry] = {}

    # Core: a covering cycle plus random core fill keeps it one SCC, and
    # core-only definitions mean no incoming link from outside it.
    for i, w in enumerate(core):
        bag = {core[(i - 1) % n_core]}
        bag |= _sample(rng, core, length() - 1, exclude=w)
        bag.discard(w)
        entries[w] = LexiconEntry(w, 1, frozenset(bag))

    # Satellites: small cyclic groups whose definitions also use core words,
    # so each group sits in the kernel but receives links from the core.
    groups: list[list[str]] = []
    i = 0
    while i < len(satellite_words):
        size = min(rng.randint(2, 4), len(satellite_words) - i)
        if size == 1:
            groups[-1].append(satellite_words[i])
            break
        groups.append(satellite_words[i : i + size])
        i += size
    for group in groups:
        for j, w in enumerate(group):
            bag = {group[(j - 1) % len(group)]}
            bag |= _sample(rng, core, max(1, length() - 1), exclude=w)
            bag.discard(w)
            entries[w] = LexiconEntry(w, 1, frozenset(bag))

    # Outside: defined from kernel words and earlier outside words only, so
    # this mass is acyclic and prunes away entirely.
    pool = core + satellite_words
    for w in outside:
        bag = _sample(rng, pool, length(), exclude=w)
        entries[w] = LexiconEntry(w, 1, frozenset(bag))
        pool.append(w)

    return Lexicon(entries, closed=True)


def _stratum(label: Label, in_mgs: bool) -> int:
    if label is Label.CORE:
        return 0 if in_mgs else 2
    if label is Label.SATELLITE:
        return 1 if in_mgs else 3
    return 4


def planted_norms_csv(
    decomposition: Decomposition,
    grounding_words: frozenset[str],
    seed: int,
    coverage: float = 1.0,
) -> str:
    """Norms CSV whose layer means follow the planted ordering.

    For every variable the means run grounding-set > core > satellites >
    outside (reversed for age of acquisition), so MGS > C and C > S and
    K > D-K hold for the raw group means.
    """
    rng = random.Random(seed ^ 0x5EED)
    lines = ["word," + ",".join(NORM_VARIABLES)]
    for w in sorted(decomposition.label):
        if coverage < 1.0 and rng.random() > coverage:
            continue
        stratum = _stratum(decomposition.label[w], w in grounding_words)
        cells = []
        for variable in NORM_VARIABLES:
            base = _STRATUM_MEANS[stratum]
            if PLANTED_DIRECTIONS[variable] < 0:
                base = 900.0 - base  # flip the scale, keep it positive
            cells.append(f"{rng.gauss(base, _STRATUM_SD):.1f}")
        lines.append(w + "," + ",".join(cells))
    return "\n".join(lines) + "\n"
