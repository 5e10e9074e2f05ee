"""Trade-tape parsing and per-trader path reconstruction.

A tape is a CSV of individual trades (time, symbol, price, size, buyer,
seller). From it we rebuild, for any broker id, the running inventory and
wealth observed at that trader's own trade times, then turn those paths into
increment series on either a regular grid or the raw asynchronous grid.

All functions are pure: they never mutate their inputs and are safe to call
concurrently.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from ._validation import (
    as_1d_float_array,
    check_choice,
    check_positive,
    check_strictly_increasing,
)
from .errors import (
    BinLargerThanSession,
    EmptyTape,
    MissingColumn,
    TooFewObservations,
    TraderNotFound,
    UnparsableRow,
)

INVENTORY = "inventory"
WEALTH = "wealth"
PAYMENT_SUM = "payment_sum"
CASH_PLUS_MARK = "cash_plus_mark"

WEALTH_CONVENTIONS = (PAYMENT_SUM, CASH_PLUS_MARK)


@dataclass(frozen=True)
class TapeFormat:
    """Column map for a tape CSV plus the session-clock convention.

    ``session_open`` is the raw timestamp of the session open. When None the
    clock starts at the earliest timestamp found on the tape, so tapes with
    arbitrary epoch conventions normalize to seconds-from-open.
    """

    timestamp: str = "timestamp"
    symbol: str = "symbol"
    price: str = "price"
    size: str = "size"
    buyer: str = "buyer"
    seller: str = "seller"
    session_open: float | None = None


@dataclass(frozen=True)
class TradeRecord:
    """One tape line, with the timestamp in seconds since session open."""

    timestamp: float
    symbol: str
    price: float
    size: int
    buyer_id: str
    seller_id: str

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")
        if not self.price > 0:
            raise ValueError(f"price must be > 0, got {self.price}")
        if not self.size > 0:
            raise ValueError(f"size must be > 0, got {self.size}")
        if not self.buyer_id or not self.seller_id:
            raise ValueError("buyer_id and seller_id must be non-empty")


@dataclass
class PathSeries:
    """Asynchronous (time, value) observations of one trader/day process.

    ``kind`` is ``"inventory"`` or ``"wealth"``; ``session_length`` is the
    horizon in seconds used by the resampler and the activity filter.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str
    session_length: float

    def __post_init__(self):
        self.times = as_1d_float_array("times", self.times)
        self.values = as_1d_float_array("values", self.values)
        check_choice("kind", self.kind, (INVENTORY, WEALTH))
        self.session_length = check_positive("session_length", self.session_length)
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        check_strictly_increasing("times", self.times)
        if len(self.times) and self.times[0] < 0:
            raise ValueError("times must be >= 0")
        if len(self.times) and self.times[-1] > self.session_length:
            raise ValueError("all times must be <= session_length")

    def __len__(self) -> int:
        return len(self.times)


@dataclass
class IncrementSeries:
    """Per-interval increments of a path plus the interval lengths.

    Regular grids repeat one interval length; asynchronous grids carry the
    raw gaps between consecutive observations. ``horizon`` is the session
    length the increments were cut from.
    """

    interval_lengths: np.ndarray
    increments: np.ndarray
    horizon: float

    def __post_init__(self):
        self.interval_lengths = as_1d_float_array(
            "interval_lengths", self.interval_lengths
        )
        self.increments = as_1d_float_array("increments", self.increments)
        self.horizon = check_positive("horizon", self.horizon)
        if len(self.interval_lengths) != len(self.increments):
            raise ValueError("interval_lengths and increments must have equal length")
        if len(self.interval_lengths):
            if np.any(self.interval_lengths <= 0):
                raise ValueError("interval_lengths must be > 0")
            total = float(np.sum(self.interval_lengths))
            slack = float(np.max(self.interval_lengths))
            if total > self.horizon + slack + 1e-9 * max(1.0, self.horizon):
                raise ValueError("interval lengths overrun the horizon")

    def __len__(self) -> int:
        return len(self.increments)

    def is_regular(self, rtol: float = 1e-9) -> bool:
        if len(self.interval_lengths) == 0:
            return True
        first = self.interval_lengths[0]
        return bool(np.all(np.abs(self.interval_lengths - first) <= rtol * first))


@dataclass
class TraderEvents:
    """Per-observation event table for one trader, after aggregating
    same-timestamp trades into a single observation."""

    times: np.ndarray
    inventory_deltas: np.ndarray
    prices: np.ndarray  # size-weighted trade price per observation
    payments: np.ndarray  # signed sum of (shares * price) per observation


def _int_size(raw: str) -> int:
    value = float(raw)
    if not value.is_integer():
        raise ValueError(f"size {raw!r} is not an integer")
    return int(value)


def parse_tape(source, fmt: TapeFormat | None = None) -> list[TradeRecord]:
    """Parse a tape CSV into trade records sorted by timestamp.

    ``source`` may be a filesystem path, a text or byte stream, or a str /
    bytes blob. Raises ``MissingColumn`` if the header lacks a configured
    column, ``UnparsableRow`` (with the 1-based line number) on the first
    malformed row, and ``EmptyTape`` when there are no data rows.
    """
    fmt = fmt or TapeFormat()

    if isinstance(source, bytes):
        stream = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str) and "\n" in source:
        stream = io.StringIO(source)
    elif hasattr(source, "read"):
        raw = source.read()
        stream = io.StringIO(raw.decode("utf-8") if isinstance(raw, bytes) else raw)
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return parse_tape(fh.read(), fmt)

    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise EmptyTape("tape has no header row")
    for column in (fmt.timestamp, fmt.symbol, fmt.price, fmt.size, fmt.buyer, fmt.seller):
        if column not in reader.fieldnames:
            raise MissingColumn(f"column {column!r} not in header {reader.fieldnames}")

    raw_rows: list[tuple[int, float, str, float, int, str, str]] = []
    for row in reader:
        line_no = reader.line_num
        try:
            timestamp = float(row[fmt.timestamp])
            price = float(row[fmt.price])
            size = _int_size(row[fmt.size])
            buyer = (row[fmt.buyer] or "").strip()
            seller = (row[fmt.seller] or "").strip()
        except (TypeError, ValueError, KeyError) as exc:
            raise UnparsableRow(line_no, str(exc)) from exc
        if not np.isfinite(timestamp) or not np.isfinite(price):
            raise UnparsableRow(line_no, "non-finite timestamp or price")
        if price <= 0:
            raise UnparsableRow(line_no, f"price must be > 0, got {price}")
        if size <= 0:
            raise UnparsableRow(line_no, f"size must be > 0, got {size}")
        if not buyer or not seller:
            raise UnparsableRow(line_no, "empty buyer or seller id")
        symbol = (row[fmt.symbol] or "").strip()
        raw_rows.append((line_no, timestamp, symbol, price, size, buyer, seller))

    if not raw_rows:
        raise EmptyTape("tape has a header but no data rows")

    open_time = fmt.session_open
    if open_time is None:
        open_time = min(r[1] for r in raw_rows)

    records = []
    for line_no, timestamp, symbol, price, size, buyer, seller in raw_rows:
        clock = timestamp - open_time
        if clock < 0:
            raise UnparsableRow(line_no, "timestamp precedes the session open")
        records.append(TradeRecord(clock, symbol, price, size, buyer, seller))

    records.sort(key=lambda r: r.timestamp)
    return records


def trader_events(records, trader: str) -> TraderEvents:
    """Aggregate a sorted record stream into per-timestamp trader events.

    Trades sharing a timestamp collapse into one observation: inventory
    deltas and payments add up, and the observation price is the
    size-weighted average over the trader's legs.
    """
    trader = str(trader)
    times: list[float] = []
    deltas: list[float] = []
    payments: list[float] = []
    weighted: list[float] = []
    volumes: list[float] = []

    last_time = None
    for rec in records:
        if last_time is not None and rec.timestamp < last_time:
            raise ValueError("records must be sorted by timestamp")
        last_time = rec.timestamp

        legs = []
        if rec.buyer_id == trader:
            legs.append(float(rec.size))
        if rec.seller_id == trader:
            legs.append(-float(rec.size))
        if not legs:
            continue

        if times and times[-1] == rec.timestamp:
            idx = len(times) - 1
        else:
            times.append(rec.timestamp)
            deltas.append(0.0)
            payments.append(0.0)
            weighted.append(0.0)
            volumes.append(0.0)
            idx = len(times) - 1

        for signed in legs:
            deltas[idx] += signed
            payments[idx] += signed * rec.price
            weighted[idx] += abs(signed) * rec.price
            volumes[idx] += abs(signed)

    if not times:
        raise TraderNotFound(f"trader {trader!r} does not appear on the tape")

    prices = np.array(weighted) / np.array(volumes)
    return TraderEvents(
        times=np.array(times),
        inventory_deltas=np.array(deltas),
        prices=prices,
        payments=np.array(payments),
    )


def build_trader_paths(
    records,
    trader: str,
    wealth_convention: str = PAYMENT_SUM,
    q0: float = 0.0,
    x0: float = 0.0,
    session_length: float | None = None,
) -> tuple[PathSeries, PathSeries]:
    """Reconstruct (inventory, wealth) paths for one trader.

    Inventory steps by +size when the trader buys and -size when they sell.
    Wealth under ``payment_sum`` cumulates the signed payments (q_i - q_{i-1})
    * price; under ``cash_plus_mark`` it is cash (the negated payments) plus
    the inventory marked at the observation's trade price.
    """
    check_choice("wealth_convention", wealth_convention, WEALTH_CONVENTIONS)
    events = trader_events(records, trader)

    horizon = session_length if session_length is not None else float(events.times[-1])
    if horizon <= 0:
        # all trades at the session open; give the paths a minimal horizon
        horizon = max(float(events.times[-1]), 1.0)

    inventory_values = q0 + np.cumsum(events.inventory_deltas)
    if wealth_convention == PAYMENT_SUM:
        wealth_values = x0 + np.cumsum(events.payments)
    else:
        cash = x0 - np.cumsum(events.payments)
        wealth_values = cash + inventory_values * events.prices

    inventory = PathSeries(events.times, inventory_values, INVENTORY, horizon)
    wealth = PathSeries(events.times, wealth_values, WEALTH, horizon)
    return inventory, wealth


def resample_regular(
    path: PathSeries, bin_seconds: float, initial_value: float = 0.0
) -> IncrementSeries:
    """Resample a path to a regular grid and difference it.

    The grid is t_k = k * bin_seconds for k = 0..floor(T / bin_seconds); the
    value at each grid point is the last observation at or before it
    (``initial_value`` before the first trade), and the increments are the
    grid-value differences.
    """
    bin_seconds = check_positive("bin_seconds", bin_seconds)
    if len(path) == 0:
        raise TooFewObservations("cannot resample an empty path")
    n_bins = int(np.floor(path.session_length / bin_seconds + 1e-9))
    if n_bins < 1:
        raise BinLargerThanSession(
            f"bin of {bin_seconds}s exceeds the {path.session_length}s session"
        )

    grid = bin_seconds * np.arange(n_bins + 1)
    idx = np.searchsorted(path.times, grid, side="right") - 1
    grid_values = np.where(idx >= 0, path.values[np.maximum(idx, 0)], initial_value)
    return IncrementSeries(
        interval_lengths=np.full(n_bins, bin_seconds),
        increments=np.diff(grid_values),
        horizon=path.session_length,
    )


def async_increments(path: PathSeries) -> IncrementSeries:
    """Difference a path on its own observation times."""
    if len(path) < 2:
        raise TooFewObservations("need at least 2 observations for increments")
    return IncrementSeries(
        interval_lengths=np.diff(path.times),
        increments=np.diff(path.values),
        horizon=path.session_length,
    )


def activity_filter(path: PathSeries, min_rate: float = 1.0) -> bool:
    """True iff the path has at least ``min_rate`` observations per minute
    of session, i.e. count >= min_rate * session_length / 60."""
    required = min_rate * path.session_length / 60.0
    return len(path) >= required


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    return repr(float(x))


def path_to_csv(path: PathSeries, dest) -> None:
    """Write a path as two-column CSV (time,value). ``dest`` is a text stream
    or a filesystem path."""
    if hasattr(dest, "write"):
        writer = csv.writer(dest, lineterminator="\n")
        writer.writerow(["time", "value"])
        for t, v in zip(path.times, path.values):
            writer.writerow([_fmt(t), _fmt(v)])
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            path_to_csv(path, fh)


def path_from_csv(source, kind: str, session_length: float | None = None) -> PathSeries:
    """Read a two-column (time,value) CSV back into a PathSeries."""
    if hasattr(source, "read"):
        rows = list(csv.DictReader(source))
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    if not rows:
        raise EmptyTape("path CSV has no rows")
    times = [float(r["time"]) for r in rows]
    values = [float(r["value"]) for r in rows]
    horizon = session_length if session_length is not None else times[-1]
    return PathSeries(np.array(times), np.array(values), kind, horizon)


def path_to_json(path: PathSeries) -> str:
    """Serialize a path as JSON records."""
    payload = {
        "kind": path.kind,
        "session_length": path.session_length,
        "observations": [
            {"time": float(t), "value": float(v)}
            for t, v in zip(path.times, path.values)
        ],
    }
    return json.dumps(payload, sort_keys=True)


def path_from_json(blob: str) -> PathSeries:
    payload = json.loads(blob)
    obs = payload["observations"]
    return PathSeries(
        np.array([o["time"] for o in obs]),
        np.array([o["value"] for o in obs]),
        payload["kind"],
        payload["session_length"],
    )
