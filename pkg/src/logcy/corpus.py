"""Seeded random blow-up sequences and corpus generation."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .blowdown import blow_up_nontoric, blow_up_toric
from .divisor import DivisorConfig
from .reduction import MinimalModelLabel, all_minimal_models, enumerate_labeled
from .lattice import AmbientLattice

NONTORIC_MOVE = "nontoric"
TORIC_MOVE = "toric"


@dataclass(frozen=True)
class BlowUpMove:
    kind: str
    where: int  # component for non-toric, edge for toric

    def __str__(self) -> str:
        return f"{self.kind}@{self.where + 1}"


def available_moves(D: DivisorConfig) -> list[BlowUpMove]:
    moves = [BlowUpMove(NONTORIC_MOVE, i) for i in range(D.k)]
    moves += [BlowUpMove(TORIC_MOVE, t) for t in range(len(D.edges))]
    return moves


def apply_move(D: DivisorConfig, mv: BlowUpMove) -> DivisorConfig:
    if mv.kind == NONTORIC_MOVE:
        return blow_up_nontoric(D, mv.where)
    return blow_up_toric(D, mv.where)


def random_blow_ups(
    D: DivisorConfig, length: int, rng: random.Random
) -> tuple[list[BlowUpMove], list[DivisorConfig]]:
    """``length`` uniformly chosen blow-ups; returns the moves and every config after each."""
    moves, configs = [], []
    cur = D
    for _ in range(length):
        mv = rng.choice(available_moves(cur))
        cur = apply_move(cur, mv)
        moves.append(mv)
        configs.append(cur)
    return moves, configs


def label_slug(label: MinimalModelLabel) -> str:
    s = label.case
    if label.parameter is not None:
        s += f"_{'m' if label.parameter < 0 else ''}{abs(label.parameter)}"
    if label.twist is not None:
        s += f"_t{label.twist}"
    return s


@dataclass(frozen=True)
class CorpusEntry:
    filename: str
    label: MinimalModelLabel
    moves: tuple[BlowUpMove, ...]
    config: DivisorConfig


def build_corpus(
    ambients: Optional[Iterable[AmbientLattice]] = None,
    ks: Optional[Iterable[int]] = None,
    params: Iterable[int] = range(-3, 4),
    blowups: int = 0,
    seed: int = 0,
    max_length: int = 6,
) -> list[CorpusEntry]:
    """Minimal models, each followed by ``blowups`` random blown-up variants.

    Variant j of model i is drawn from its own generator seeded with
    (seed, i, j), so the output does not depend on iteration order.
    """
    params = list(params)
    if ambients is None:
        models = all_minimal_models(params)
    else:
        models = []
        for L in ambients:
            for k in (ks if ks is not None else range(1, 5)):
                models += enumerate_labeled(L, k, params)
    if ks is not None:
        keep = set(ks)
        models = [(lab, D) for lab, D in models if D.k in keep]
    out = []
    for i, (lab, D) in enumerate(models):
        base = f"{i:03d}_{label_slug(lab)}"
        out.append(CorpusEntry(base + ".json", lab, (), D))
        for j in range(blowups):
            rng = random.Random(f"{seed}:{i}:{j}")
            moves, configs = random_blow_ups(D, rng.randint(1, max_length), rng)
            out.append(CorpusEntry(f"{base}_bu{j:02d}.json", lab, tuple(moves), configs[-1]))
    return out


def write_corpus(entries: list[CorpusEntry], outdir: str) -> None:
    from .files import write_divisor

    os.makedirs(outdir, exist_ok=True)
    index = []
    for e in entries:
        write_divisor(os.path.join(outdir, e.filename), e.config)
        index.append(f"{e.filename}\t{e.label}\t{' '.join(map(str, e.moves)) or '-'}")
    with open(os.path.join(outdir, "index.tsv"), "w", encoding="utf-8") as fh:
        fh.write("file\tlabel\tblow-ups\n")
        fh.write("".join(line + "\n" for line in index))
