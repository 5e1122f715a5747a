"""Tables of zeta-zero ordinates: parsing, caching, and zero counting."""
from __future__ import annotations

import hashlib
import math
import os
import tempfile
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from filelock import FileLock

FIRST_ZERO = 14.134725141734693
DEFAULT_URL = "https://www.dtc.umn.edu/~odlyzko/zeta_tables/zeros1"


class ZeroTableError(ValueError):
    """Malformed zero table."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InsufficientTableError(ZeroTableError):
    """The table stops below the height a computation needs."""

    def __init__(self, required: float, available: float):
        super().__init__(f"zero table reaches height {available:.6g}, "
                         f"but {required:.6g} is required")
        self.required = required
        self.available = available


class NetworkError(OSError):
    """Download failed; safe to retry."""

    retryable = True


class CorruptCacheError(OSError):
    """Cached table does not match its checksum sidecar; delete and re-download."""


@dataclass(frozen=True)
class ZeroTable:
    """Ascending zero ordinates.

    ``complete_to`` is the height through which no zero is missing. It
    defaults to the last ordinate; a table read with an explicit height cap
    knows it is complete up to that cap even though its last zero sits lower.
    """

    heights: np.ndarray = field(repr=False)
    source: str = "<memory>"
    complete_to: float | None = None

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        h.setflags(write=False)
        object.__setattr__(self, "heights", h)
        if self.complete_to is None:
            object.__setattr__(self, "complete_to", self.max_height)

    @property
    def max_height(self) -> float:
        return float(self.heights[-1]) if self.heights.size else 0.0

    def __len__(self) -> int:
        return int(self.heights.size)

    def require(self, height: float) -> None:
        if height > self.complete_to:
            raise InsufficientTableError(height, self.complete_to)

    def upto(self, height: float) -> np.ndarray:
        """Ordinates in ``(0, height]``."""
        return self.heights[: np.searchsorted(self.heights, height, side="right")]


# a table that ends early is accepted only if it is this close to the
# Riemann-von Mangoldt count at the requested height
RVM_SLACK = 3.0


def parse_zeros(lines, max_height: float = math.inf) -> np.ndarray:
    """Parse ordinates up to ``max_height`` from an iterable of text lines."""
    values = []
    prev = -math.inf
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            g = float(text)
        except ValueError:
            raise ZeroTableError(f"cannot parse {text!r} as a number", lineno) from None
        if not math.isfinite(g) or g <= 0:
            raise ZeroTableError(f"ordinate {text!r} is not a positive number", lineno)
        if g <= prev:
            raise ZeroTableError(f"non-ascending ordinate {g} after {prev}", lineno)
        prev = g
        if g > max_height:
            return np.array(values)
        values.append(g)
    if math.isfinite(max_height) and max_height > 2 * math.pi:
        # file ended below max_height: fine only if nothing can be missing
        if rvm_asymptotic(max_height) - len(values) > RVM_SLACK:
            raise InsufficientTableError(max_height, prev if values else 0.0)
    return np.array(values)


def validate(table: ZeroTable) -> None:
    h = table.heights
    if h.size == 0:
        raise ZeroTableError("zero table is empty")
    if h[0] <= 14.0:
        raise ZeroTableError(f"first ordinate {h[0]} is not above 14")
    if abs(h[0] - FIRST_ZERO) > 1e-3:
        raise ZeroTableError(f"first ordinate {h[0]} is not the first zeta zero")
    if np.any(np.diff(h) <= 0):
        raise ZeroTableError("ordinates are not strictly increasing")


def load_zeros(path, max_height: float = math.inf, check: bool = True) -> ZeroTable:
    """Read ordinates <= max_height from a one-number-per-line file.

    A file that ends below ``max_height`` is accepted only while its count stays
    within RVM_SLACK of the Riemann-von Mangoldt term there; a truncated table
    raises InsufficientTableError. Pass ``max_height=inf`` to read everything.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        heights = parse_zeros(fh, max_height)
    top = max_height if math.isfinite(max_height) else None
    table = ZeroTable(heights, str(path), top)
    if check:
        validate(table)
    return table


def write_zeros(table: ZeroTable, path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {len(table)} zeta-zero ordinates from {table.source}\n")
        for g in table.heights:
            fh.write(f"{float(g)!r}\n")
    return path


def zero_counting_N(x: float, table: ZeroTable) -> int:
    """Number of ordinates in (0, x]."""
    table.require(x)  # binary search below
    return int(np.searchsorted(table.heights, x, side="right"))


def rvm_asymptotic(x: float) -> float:
    """Riemann-von Mangoldt main term (x/2pi) log(x/2pi) - x/2pi + 7/8."""
    if x <= 2 * math.pi:
        raise ValueError(f"x = {x} must exceed 2*pi")
    u = x / (2 * math.pi)
    return u * math.log(u) - u + 7.0 / 8.0


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _cache_name(url: str, count: int) -> str:
    tag = hashlib.sha256(url.encode()).hexdigest()[:12]
    return f"zeros_{count}_{tag}.txt"


def default_cache_dir() -> Path:
    env = os.environ.get("PRIMELAB_CACHE")
    return Path(env) if env else Path.home() / ".cache" / "primelab"


def fetch_zeros(url: str = DEFAULT_URL, cache_dir=None, count: int = 100_000, *,
                offline: bool = False, timeout: float = 60.0, retries: int = 2) -> Path:
    """Download the first ``count`` ordinates of a public table into a checksummed cache.

    A warm cache is served without touching the network. ``offline=True``
    turns a cold cache into an error instead of a download.
    """
    if count < 1:
        raise ValueError("count must be positive")
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    target = cache_dir / _cache_name(url, count)
    sidecar = target.with_name(target.name + ".sha256")

    with FileLock(str(target) + ".lock"):
        if target.exists() and sidecar.exists():
            expected = sidecar.read_text().split()[0].strip()
            if sha256_file(target) != expected:
                raise CorruptCacheError(f"{target} does not match {sidecar.name}; "
                                        "delete both files and fetch again")
            return target
        if offline:
            raise NetworkError(f"no cached table for {url} (count={count}) in {cache_dir} "
                               "and network access is disabled")
        lines = _download(url, timeout, retries)
        values = []
        for lineno, raw in enumerate(lines, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                float(text)
            except ValueError:
                raise ZeroTableError(f"cannot parse {text!r} from {url}", lineno) from None
            values.append(text)
            if len(values) == count:
                break
        if len(values) < count:
            raise ZeroTableError(f"{url} holds only {len(values)} ordinates, {count} requested")
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".part")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# first {count} zeta-zero ordinates from {url}\n")
            fh.write("\n".join(values) + "\n")
        os.replace(tmp, target)
        sidecar.write_text(f"{sha256_file(target)}  {target.name}\n")
    return target


def _download(url: str, timeout: float, retries: int) -> list[str]:
    last: Exception | None = None
    for attempt in range(retries + 1):
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                return resp.read().decode("utf-8").splitlines()
        except (urllib.error.URLError, OSError) as exc:
            last = exc
            if attempt < retries:
                time.sleep(0.5 * 2**attempt)
    raise NetworkError(f"could not download {url}: {last}")
