"""Key-stream generators and file ingestion.

Generated keys are integer ids ``1..K`` ranked by decreasing probability, so
key 1 is always the most frequent key of the base distribution. Ingested
tokens are interned to dense ids ``0, 1, 2, ...`` in order of first
appearance; edge lists keep their integer vertex ids.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Union

import numpy as np
from scipy.special import ndtr

from .core import Message, UsageError

LN1 = (1.789, 2.366)
LN2 = (2.245, 1.133)


class IngestError(Exception):
    """An input file could not be read or parsed."""


class IngestMode(enum.Enum):
    KEY_PER_LINE = "lines"
    TOKENIZED_TEXT = "text"
    EDGE_LIST_INVERTED = "edges"


@dataclass(frozen=True)
class LogNormal:
    """Log-normal key popularity.

    With ``construction="iid"`` (default) each of the ``keys`` keys gets an
    i.i.d. log-normal weight drawn from the spec's seed. With
    ``construction="rounded"`` the key of a message is a log-normal sample
    rounded to the nearest integer, truncated to ``keys`` values, so value
    ``v`` has probability ``F(v + 1/2) - F(v - 1/2)``; this gives a much
    heavier top key (about 14.7% for ``LN1``, 7.0% for ``LN2``). Either way
    the weights are normalized and ranked in decreasing order.
    """

    mu: float
    sigma: float
    keys: int
    messages: int
    seed: int = 0
    construction: str = "iid"


@dataclass(frozen=True)
class Zipf:
    exponent: float
    keys: int
    messages: int
    seed: int = 0


@dataclass(frozen=True)
class Uniform:
    keys: int
    messages: int
    seed: int = 0


@dataclass(frozen=True)
class HeavyKey:
    """Key 1 with probability ``p1``; the rest uniform over keys ``2..K``."""

    p1: float
    keys: int
    messages: int
    seed: int = 0


@dataclass(frozen=True)
class Drift:
    """Rotates the rank-to-key assignment of ``base`` by a random shift every
    ``epoch`` messages. The popularity curve is unchanged; which keys are hot
    changes."""

    base: "Distribution"
    epoch: int

    @property
    def messages(self) -> int:
        return self.base.messages

    @property
    def keys(self) -> int:
        return self.base.keys

    @property
    def seed(self) -> int:
        return self.base.seed


@dataclass(frozen=True)
class FileSource:
    path: Union[str, Path]
    mode: IngestMode = IngestMode.KEY_PER_LINE


Distribution = Union[LogNormal, Zipf, Uniform, HeavyKey]
WorkloadSpec = Union[LogNormal, Zipf, Uniform, HeavyKey, Drift, FileSource]


@dataclass
class KeyStream:
    """A finite stream of messages. Message ``t`` carries ``keys[t]``.

    ``source_keys`` is set for inverted edge lists: the key used to pick the
    source (edge origin), while ``keys`` is what the source routes on.
    ``vocab[i]`` is the token behind interned id ``i``.
    """

    keys: np.ndarray
    source_keys: np.ndarray | None = None
    vocab: list[str] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.keys.shape[0])

    def messages(self) -> Iterator[Message]:
        for t, k in enumerate(self.keys.tolist()):
            yield Message(t, k)

    def head(self, m: int) -> "KeyStream":
        return KeyStream(
            self.keys[:m],
            None if self.source_keys is None else self.source_keys[:m],
            self.vocab,
        )

    def label(self, key: int) -> str:
        return self.vocab[key] if self.vocab is not None else str(key)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed & ((1 << 64) - 1), stream])


def _validate(spec: WorkloadSpec) -> None:
    if isinstance(spec, FileSource):
        return
    if isinstance(spec, Drift):
        if spec.epoch < 1:
            raise UsageError(f"drift epoch must be >= 1, got {spec.epoch}")
        if isinstance(spec.base, (Drift, FileSource)):
            raise UsageError("drift needs a synthetic base distribution")
        _validate(spec.base)
        return
    if spec.keys < 1:
        raise UsageError(f"K must be >= 1, got {spec.keys}")
    if spec.messages < 1:
        raise UsageError(f"m must be >= 1, got {spec.messages}")
    if isinstance(spec, HeavyKey) and not 0 < spec.p1 <= 1:
        raise UsageError(f"p1 must be in (0, 1], got {spec.p1}")
    if isinstance(spec, LogNormal):
        if spec.sigma <= 0:
            raise UsageError(f"sigma must be > 0, got {spec.sigma}")
        if spec.construction not in ("rounded", "iid"):
            raise UsageError(f"unknown log-normal construction {spec.construction!r}")


def probabilities(spec: Distribution) -> np.ndarray:
    """Probability of keys ``1..K`` (index 0 is key 1).

    Non-increasing, except for ``HeavyKey`` with ``p1`` below the uniform share.
    """
    _validate(spec)
    K = spec.keys
    if isinstance(spec, Uniform):
        p = np.full(K, 1.0 / K)
    elif isinstance(spec, Zipf):
        p = np.arange(1, K + 1, dtype=float) ** -float(spec.exponent)
    elif isinstance(spec, HeavyKey):
        if K == 1:
            p = np.ones(1)
        else:
            p = np.full(K, (1.0 - spec.p1) / (K - 1))
            p[0] = spec.p1
    elif isinstance(spec, LogNormal):
        if spec.construction == "iid":
            p = _rng(spec.seed, 1).lognormal(spec.mu, spec.sigma, K)
        else:
            edges = np.arange(K + 1, dtype=float) - 0.5
            edges[0] = 1.0  # placeholder; value 0 starts at -inf on the log scale
            cdf = ndtr((np.log(edges) - spec.mu) / spec.sigma)
            cdf[0] = 0.0
            p = np.diff(cdf)
        p = np.sort(p, kind="stable")[::-1]
    else:
        raise UsageError(f"not a synthetic distribution: {spec!r}")
    return p / p.sum()


def generate(spec: WorkloadSpec) -> KeyStream:
    """Materialize a workload as a ``KeyStream``. Deterministic in the spec's seed."""
    _validate(spec)
    if isinstance(spec, FileSource):
        return ingest(spec.path, spec.mode)
    if isinstance(spec, Drift):
        ranks = _sample(spec.base)
        return KeyStream(_rotate(ranks, spec.base.keys, spec.epoch, spec.base.seed))
    return KeyStream(_sample(spec))


def _sample(spec: Distribution) -> np.ndarray:
    p = probabilities(spec)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    u = _rng(spec.seed, 0).random(spec.messages)
    idx = np.searchsorted(cdf, u, side="right")
    np.minimum(idx, spec.keys - 1, out=idx)
    return idx.astype(np.int64) + 1


def _rotate(ranks: np.ndarray, K: int, epoch: int, seed: int) -> np.ndarray:
    m = ranks.shape[0]
    offset = np.repeat(_epoch_shifts(K, m, epoch, seed), epoch)[:m]
    return (ranks - 1 + offset) % K + 1


def _epoch_shifts(K: int, m: int, epoch: int, seed: int) -> np.ndarray:
    n_epochs = (m + epoch - 1) // epoch
    if K == 1:
        return np.zeros(n_epochs, dtype=np.int64)
    steps = _rng(seed, 2).integers(1, K, size=n_epochs)
    steps[0] = 0
    return np.cumsum(steps) % K


def rotation_offsets(spec: Drift) -> np.ndarray:
    """Per-epoch cyclic shift applied to the key ranks of a drift workload."""
    _validate(spec)
    return _epoch_shifts(spec.base.keys, spec.base.messages, spec.epoch, spec.base.seed)


class Interner:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}
        self.vocab: list[str] = []

    def __call__(self, token: str) -> int:
        i = self.ids.get(token)
        if i is None:
            i = self.ids[token] = len(self.vocab)
            self.vocab.append(token)
        return i


def ingest(path: Union[str, Path], mode: IngestMode = IngestMode.KEY_PER_LINE) -> KeyStream:
    """Read a UTF-8 input file into a ``KeyStream``.

    ``KEY_PER_LINE``: one message per line, the key is the whole line.
    ``TOKENIZED_TEXT``: one message per whitespace-separated token.
    ``EDGE_LIST_INVERTED``: one message per ``src dst`` line; the source is
    chosen by ``src`` and the message is routed to workers by ``dst``. Lines
    starting with ``#`` and blank lines are skipped.
    """
    mode = IngestMode(mode)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc

    if mode is IngestMode.EDGE_LIST_INVERTED:
        src, dst = [], []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise IngestError(f"{path}:{lineno}: expected 'src dst', got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-integer vertex in {line!r}") from None
            src.append(a)
            dst.append(b)
        return KeyStream(np.array(dst, dtype=np.int64), np.array(src, dtype=np.int64))

    intern = Interner()
    if mode is IngestMode.KEY_PER_LINE:
        ids = [intern(line) for line in text.splitlines()]
    else:
        ids = [intern(tok) for tok in text.split()]
    return KeyStream(np.array(ids, dtype=np.int64), vocab=intern.vocab)


def empirical_frequencies(stream: Union[KeyStream, np.ndarray, list]) -> dict[int, int]:
    keys = stream.keys if isinstance(stream, KeyStream) else np.asarray(stream, dtype=np.int64)
    if keys.size == 0:
        return {}
    uniq, counts = np.unique(keys, return_counts=True)
    return dict(zip(uniq.tolist(), counts.tolist()))


def powerlaw_edges(n_edges: int, n_vertices: int, exponent: float = 1.0,
                   seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Directed edges whose out- and in-degrees both follow a Zipf law over
    independently shuffled vertex ranks."""
    rng = _rng(seed, 3)
    p = np.arange(1, n_vertices + 1, dtype=float) ** -float(exponent)
    cdf = np.cumsum(p / p.sum())
    cdf[-1] = 1.0
    out_rank = np.minimum(np.searchsorted(cdf, rng.random(n_edges), side="right"), n_vertices - 1)
    in_rank = np.minimum(np.searchsorted(cdf, rng.random(n_edges), side="right"), n_vertices - 1)
    out_perm = rng.permutation(n_vertices)
    in_perm = rng.permutation(n_vertices)
    return out_perm[out_rank].astype(np.int64), in_perm[in_rank].astype(np.int64)


def write_edge_list(path: Union[str, Path], src: np.ndarray, dst: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# src dst\n")
        for a, b in zip(src.tolist(), dst.tolist()):
            fh.write(f"{a} {b}\n")


_NUM = r"[-+0-9.eE]+"


def parse_spec(text: str, seed: int = 0) -> Distribution | Drift:
    """Parse the workload mini-grammar.

    ``lognormal:MU,SIGMA,K,M[,iid|rounded]``, ``zipf:S,K,M``, ``uniform:K,M``,
    ``heavykey:P1,K,M``, ``drift:EPOCH:INNER`` (``INNER`` optionally in
    parentheses). Integers accept scientific notation such as ``1e6``.
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.lower()
    if name == "drift":
        epoch_s, _, inner = rest.partition(":")
        inner = inner.strip()
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        base = parse_spec(inner, seed)
        if isinstance(base, Drift):
            raise UsageError("nested drift specs are not supported")
        return Drift(base, _int(epoch_s, text))
    args = [a.strip() for a in rest.split(",")] if rest else []
    construction = "iid"
    if name == "lognormal" and len(args) == 5 and args[4] in ("iid", "rounded"):
        construction = args.pop()
    if not all(re.fullmatch(_NUM, a) for a in args):
        raise UsageError(f"bad workload spec {text!r}")
    arity = {"lognormal": 4, "zipf": 3, "uniform": 2, "heavykey": 3}
    if name not in arity:
        raise UsageError(f"unknown workload kind {name!r} in {text!r}")
    if len(args) != arity[name]:
        raise UsageError(f"{name} takes {arity[name]} parameters, got {len(args)} in {text!r}")
    if name == "lognormal":
        spec = LogNormal(float(args[0]), float(args[1]), _int(args[2], text), _int(args[3], text),
                         seed, construction)
    elif name == "zipf":
        spec = Zipf(float(args[0]), _int(args[1], text), _int(args[2], text), seed)
    elif name == "uniform":
        spec = Uniform(_int(args[0], text), _int(args[1], text), seed)
    else:
        spec = HeavyKey(float(args[0]), _int(args[1], text), _int(args[2], text), seed)
    _validate(spec)
    return spec


def _int(s: str, ctx: str) -> int:
    try:
        v = float(s)
    except ValueError:
        raise UsageError(f"bad number {s!r} in {ctx!r}") from None
    if v != int(v):
        raise UsageError(f"expected an integer, got {s!r} in {ctx!r}")
    return int(v)
