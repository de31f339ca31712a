"""Alphabets and the row-stochastic matrix representation of sequences.

A sequence of length L over an alphabet of size ``|G|`` is represented by an
L x |G| matrix whose rows sum to one.  Hard (symbolic) strings map to one-hot
rows; soft strings carry a distribution over symbols per position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownSymbol

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbols with a symbol <-> index bijection."""

    symbols: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise ValueError("alphabet needs at least 2 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be unique")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.symbols)})

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, char: str) -> int:
        return self._index[char]

    def __contains__(self, char: str) -> bool:
        return char in self._index


DNA = Alphabet("ACGT")
PROTEIN = Alphabet("ACDEFGHIKLMNPQRSTVWY")

PRESETS = {"dna": DNA, "protein": PROTEIN}


def get_alphabet(spec: str) -> Alphabet:
    """Resolve a preset name ("dna", "protein") or a literal symbol string."""
    key = spec.lower()
    if key in PRESETS:
        return PRESETS[key]
    return Alphabet(spec)


def infer_alphabet(strings) -> Alphabet:
    """Build an alphabet from the sorted set of symbols used in ``strings``."""
    symbols = sorted(set().union(*[set(s) for s in strings]) if strings else set())
    return Alphabet("".join(symbols))


@dataclass(frozen=True)
class SequenceEncoding:
    """L x |G| row-stochastic matrix representing a (possibly soft) string.

    The matrix is frozen (read-only) after construction, so encodings are
    safe to share between concurrent workers.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise ValueError("encoding matrix must be 2-D")
        if m.size and (m.min() < 0.0 or m.max() > 1.0):
            raise ValueError("encoding entries must lie in [0, 1]")
        if m.shape[0] and np.abs(m.sum(axis=1) - 1.0).max() > ROW_SUM_TOL:
            raise ValueError("encoding rows must sum to 1")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def length(self) -> int:
        return self.matrix.shape[0]

    @property
    def alphabet_size(self) -> int:
        return self.matrix.shape[1]


def encode_one_hot(s: str, a: Alphabet) -> SequenceEncoding:
    """One-hot encode a symbol string.

    Raises UnknownSymbol with the offending position if a character is not
    in the alphabet.
    """
    m = np.zeros((len(s), a.size))
    for i, c in enumerate(s):
        if c not in a:
            raise UnknownSymbol(i, c)
        m[i, a.index(c)] = 1.0
    return SequenceEncoding(m)


def decode_argmax(x: SequenceEncoding, a: Alphabet) -> str:
    """Decode a soft encoding to a string by per-row argmax.

    Ties break to the lowest symbol index, so decoding is deterministic.
    """
    if x.alphabet_size != a.size:
        raise ValueError("encoding width does not match alphabet size")
    if x.length == 0:
        return ""
    idx = np.argmax(x.matrix, axis=1)
    return "".join(a.symbols[i] for i in idx)


def soften(x: SequenceEncoding, eps: float) -> SequenceEncoding:
    """Mix each row with the uniform distribution: (1 - eps*|G|)*x + eps.

    Keeps rows stochastic while moving every entry strictly inside (0, 1);
    used to initialise centroids from hard strings so log/gradients are
    well defined.  Requires 0 < eps < 1/|G|.
    """
    g = x.alphabet_size
    if not 0.0 < eps < 1.0 / g:
        raise ValueError(f"eps must lie in (0, 1/{g})")
    return SequenceEncoding((1.0 - eps * g) * x.matrix + eps)
