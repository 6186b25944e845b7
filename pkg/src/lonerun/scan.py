"""Exhaustive, resumable enumeration of primitive speed tuples.

Tuples are generated in lexicographic order and processed in blocks that
share their leading pair (v1, v2); a block is the checkpoint granule and the
unit of parallelism.  Output is append-only JSONL, one record per tuple,
plus a summary JSON at completion.  Identical configs produce byte-identical
output, interrupted or not, sharded or not.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .engine import MAX_SPEED
from .rational import ONE_HALF, Rational, WidthError, reduce
from .spectrum import AT_LEAST_FLOOR, SPECTRUM_POINT, SpectrumClass, classify


class ScanError(Exception):
    pass


class CheckpointMismatch(ScanError):
    """Checkpoint belongs to a different configuration."""


def _three_share_ge2(speeds) -> bool:
    return any(gcd(gcd(a, b), c) >= 2 for a, b, c in combinations(speeds, 3))


def _pair_gcd_gt3(speeds) -> bool:
    return any(gcd(a, b) > 3 for a, b in combinations(speeds, 2))


def _pair_gcd_eq3_isolated(speeds) -> bool:
    """Some pair shares exactly the factor 3, outside the other filters' reach."""
    gs = [gcd(a, b) for a, b in combinations(speeds, 2)]
    return 3 in gs and max(gs) <= 3 and not _three_share_ge2(speeds)


FILTERS = {
    "three-share-ge2": _three_share_ge2,
    "pair-gcd-gt3": _pair_gcd_gt3,
    "pair-gcd-eq3-isolated": _pair_gcd_eq3_isolated,
}


def _predicate(filter_names: Sequence[str]):
    preds = []
    for name in filter_names:
        if name not in FILTERS:
            raise ScanError(f"unknown filter {name!r} (known: {sorted(FILTERS)})")
        preds.append(FILTERS[name])
    if not preds:
        return None
    if len(preds) == 1:
        return preds[0]
    return lambda speeds: all(p(speeds) for p in preds)


def _pair_blocks(n: int, v_max: int) -> Iterator[tuple[int, int]]:
    """Leading pairs (v1, v2) in lexicographic order."""
    for v1 in range(1, v_max - n + 2):
        for v2 in range(v1 + 1, v_max - n + 3):
            yield v1, v2


def _block_tuples(n: int, v_max: int, v1: int, v2: int, predicate=None) -> list[tuple[int, ...]]:
    """Primitive ascending tuples with leading pair (v1, v2), lexicographic."""
    g2 = gcd(v1, v2)
    out = []
    if n == 2:
        if g2 == 1 and (predicate is None or predicate((v1, v2))):
            out.append((v1, v2))
        return out
    for rest in combinations(range(v2 + 1, v_max + 1), n - 2):
        if g2 > 1:
            g = g2
            for v in rest:
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                continue
        tup = (v1, v2) + rest
        if predicate is None or predicate(tup):
            out.append(tup)
    return out


def enumerate_primitive(n: int, v_max: int, shard: tuple[int, int] = (0, 1)) -> Iterator[tuple[int, ...]]:
    """Every strictly increasing tuple with max <= v_max and gcd 1, once each.

    Lexicographic order; sharding assigns leading-pair blocks round-robin,
    so the shards partition the full enumeration.
    """
    if n < 2:
        raise ValueError("enumeration needs n >= 2")
    if v_max < n:
        raise ValueError("v_max must be at least n")
    if v_max > MAX_SPEED:
        raise WidthError(f"v_max {v_max} exceeds the {MAX_SPEED} input bound")
    index, total = shard
    if not (0 <= index < total):
        raise ValueError("shard index must satisfy 0 <= index < total")
    for b, (v1, v2) in enumerate(_pair_blocks(n, v_max)):
        if b % total != index:
            continue
        yield from _block_tuples(n, v_max, v1, v2)


@dataclass(frozen=True)
class ScanConfig:
    n: int
    v_max: int
    floor: Optional[Rational] = None  # default 1/n
    filters: tuple[str, ...] = ()
    shard: tuple[int, int] = (0, 1)
    output_path: Optional[str] = None
    checkpoint_path: Optional[str] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("scan needs n >= 2")
        if self.v_max < self.n:
            raise ValueError("v_max must be at least n")
        if self.v_max > MAX_SPEED:
            raise WidthError(f"v_max {self.v_max} exceeds the {MAX_SPEED} input bound")
        index, total = self.shard
        if not (0 <= index < total):
            raise ValueError("shard index must satisfy 0 <= index < total")
        f = self.effective_floor
        if not Rational(0) < f <= ONE_HALF:
            raise ValueError("floor must satisfy 0 < floor <= 1/2")
        _predicate(self.filters)

    @property
    def effective_floor(self) -> Rational:
        return self.floor if self.floor is not None else Rational(1, self.n)

    def base_config_dict(self) -> dict:
        return {
            "n": self.n,
            "v_max": self.v_max,
            "floor": str(self.effective_floor),
            "filters": list(self.filters),
        }

    def config_dict(self) -> dict:
        d = self.base_config_dict()
        d["shard"] = list(self.shard)
        return d

    def config_hash(self) -> str:
        payload = json.dumps(self.config_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class CensusSummary:
    """Aggregate spectrum classification counts for a scan (or merged scans)."""

    config: dict
    shards: tuple[tuple[int, int], ...]
    total: int = 0
    at_least_floor: int = 0
    histogram: dict = field(default_factory=dict)  # (k_min, s) -> count
    amended: list = field(default_factory=list)    # {"speeds": [...], "ml": "p/q"}
    lrc: list = field(default_factory=list)
    complete: bool = False

    def add_record(self, speeds, ml: Optional[Rational], cls: Optional[SpectrumClass]):
        self.total += 1
        if cls is None or cls.kind == AT_LEAST_FLOOR:
            self.at_least_floor += 1
            return
        entry = {"speeds": list(speeds), "ml": str(ml)}
        if cls.kind == SPECTRUM_POINT:
            key = (cls.k_min, cls.s)
            self.histogram[key] = self.histogram.get(key, 0) + 1
        else:
            self.amended.append(entry)
        if cls.lrc_violation:
            self.lrc.append(entry)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "shards": [list(s) for s in self.shards],
            "total": self.total,
            "at_least_floor": self.at_least_floor,
            "histogram": [
                {"k": k, "s": s, "count": self.histogram[(k, s)]}
                for k, s in sorted(self.histogram)
            ],
            "violations": {"amended": self.amended, "lrc": self.lrc},
        }


def merge_census(a: CensusSummary, b: CensusSummary) -> CensusSummary:
    """Component-wise merge of censuses from disjoint shards of one config."""
    if a.config != b.config:
        raise ScanError("cannot merge censuses with different configs")
    totals = {t for _, t in a.shards} | {t for _, t in b.shards}
    if len(totals) > 1:
        raise ScanError("cannot merge shards from different shard totals")
    if set(a.shards) & set(b.shards):
        raise ScanError("cannot merge overlapping shards")
    hist = dict(a.histogram)
    for key, c in b.histogram.items():
        hist[key] = hist.get(key, 0) + c
    return CensusSummary(
        config=dict(a.config),
        shards=tuple(sorted(set(a.shards) | set(b.shards))),
        total=a.total + b.total,
        at_least_floor=a.at_least_floor + b.at_least_floor,
        histogram=hist,
        amended=sorted(a.amended + b.amended, key=lambda e: e["speeds"]),
        lrc=sorted(a.lrc + b.lrc, key=lambda e: e["speeds"]),
        complete=a.complete and b.complete,
    )


def _record_line(n: int, speeds, row) -> tuple[str, Optional[Rational], Optional[SpectrumClass]]:
    mode, a, d, m, i, j = (int(x) for x in row)
    if mode == 1:
        rec = {
            "speeds": list(speeds),
            "ml": None,
            "floor": True,
            "class": SpectrumClass(AT_LEAST_FLOOR).to_json_dict(),
            "witness": None,
        }
        return json.dumps(rec, separators=(",", ":")) + "\n", None, None
    ml = reduce(a, d)
    cls = classify(n, ml)
    rec = {
        "speeds": list(speeds),
        "ml": str(ml),
        "floor": False,
        "class": cls.to_json_dict(),
        "witness": {"t": str(reduce(m, d)), "pair": [i, j]},
    }
    return json.dumps(rec, separators=(",", ":")) + "\n", ml, cls


def _scan_block_worker(args):
    """Compute one leading-pair block: returns (jsonl_text, census_delta)."""
    n, v_max, floor_num, floor_den, filter_names, v1, v2 = args
    tuples = _block_tuples(n, v_max, v1, v2, _predicate(filter_names))
    if not tuples:
        return "", (0, 0, [], [], [])
    arr = np.asarray(tuples, dtype=np.int64)
    rows = kernels.ml_batch(arr, floor_num, floor_den)
    lines = []
    total = len(tuples)
    alf = 0
    hist = {}
    amended = []
    lrc = []
    for speeds, row in zip(tuples, rows):
        line, ml, cls = _record_line(n, speeds, row)
        lines.append(line)
        if cls is None or cls.kind == AT_LEAST_FLOOR:
            alf += 1
            continue
        entry = {"speeds": list(speeds), "ml": str(ml)}
        if cls.kind == SPECTRUM_POINT:
            key = (cls.k_min, cls.s)
            hist[key] = hist.get(key, 0) + 1
        else:
            amended.append(entry)
        if cls.lrc_violation:
            lrc.append(entry)
    return "".join(lines), (total, alf, list(hist.items()), amended, lrc)


def _apply_delta(census: CensusSummary, delta) -> int:
    total, alf, hist_items, amended, lrc = delta
    census.total += total
    census.at_least_floor += alf
    for key, c in hist_items:
        key = tuple(key)
        census.histogram[key] = census.histogram.get(key, 0) + c
    census.amended.extend(amended)
    census.lrc.extend(lrc)
    return total


def _write_checkpoint(path: str, config_hash: str, last_block, emitted: int):
    payload = {"config_hash": config_hash, "last_block": list(last_block), "emitted": emitted}
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _truncate_to_lines(path: str, n_lines: int) -> list[str]:
    """Keep exactly the first n_lines complete lines; return them."""
    kept = []
    offset = 0
    with open(path, "rb") as fh:
        for _ in range(n_lines):
            line = fh.readline()
            if not line.endswith(b"\n"):
                raise ScanError(
                    f"output {path} has fewer than {n_lines} complete records; cannot resume"
                )
            kept.append(line.decode())
            offset += len(line)
    with open(path, "r+b") as fh:
        fh.truncate(offset)
    return kept


def _rebuild_census(census: CensusSummary, n: int, lines: list[str]):
    """Re-derive census entries from persisted records (class from ml value)."""
    for line in lines:
        rec = json.loads(line)
        if rec["floor"]:
            census.add_record(rec["speeds"], None, None)
        else:
            ml = Rational.parse(rec["ml"])
            census.add_record(rec["speeds"], ml, classify(n, ml))


def summary_path_for(output_path: str) -> str:
    return output_path + ".summary.json"


def run_scan(
    cfg: ScanConfig,
    workers: int = 1,
    resume: bool = False,
    stop_after_blocks: Optional[int] = None,
    log=None,
) -> CensusSummary:
    """Scan every tuple of the config's shard, classifying and persisting.

    Appends one JSONL record per tuple to ``cfg.output_path`` (if set),
    advances ``cfg.checkpoint_path`` after each completed leading-pair block,
    and writes a summary JSON next to the output at completion.  With
    ``resume=True`` the checkpoint must match the config; the remaining
    output is byte-identical to an uninterrupted run.  ``stop_after_blocks``
    stops early at a checkpoint boundary (the census then covers only the
    emitted records).  ``log`` receives one line per completed block.
    """
    floor = cfg.effective_floor
    cfg_hash = cfg.config_hash()
    census = CensusSummary(config=cfg.base_config_dict(), shards=(cfg.shard,))
    emitted = 0
    last_done: Optional[tuple[int, int]] = None

    if resume:
        if cfg.checkpoint_path is None or cfg.output_path is None:
            raise ScanError("resume requires both checkpoint and output paths")
        cp = load_checkpoint(cfg.checkpoint_path)
        if cp.get("config_hash") != cfg_hash:
            raise CheckpointMismatch(
                f"checkpoint hash {cp.get('config_hash')} != config hash {cfg_hash}"
            )
        last_done = tuple(cp["last_block"])
        emitted = int(cp["emitted"])
        kept = _truncate_to_lines(cfg.output_path, emitted)
        _rebuild_census(census, cfg.n, kept)
    else:
        if cfg.output_path is not None:
            open(cfg.output_path, "w").close()
        if cfg.checkpoint_path is not None and os.path.exists(cfg.checkpoint_path):
            os.remove(cfg.checkpoint_path)  # stale checkpoint from an older run

    index, total_shards = cfg.shard
    blocks = [
        bp
        for b, bp in enumerate(_pair_blocks(cfg.n, cfg.v_max))
        if b % total_shards == index and (last_done is None or bp > last_done)
    ]

    out = open(cfg.output_path, "a") if cfg.output_path is not None else None
    new_blocks = 0
    stopped = False
    try:
        def finish_block(block, text, delta):
            nonlocal emitted, new_blocks
            if out is not None:
                out.write(text)
                out.flush()
            _apply_delta(census, delta)
            emitted += delta[0]
            if cfg.checkpoint_path is not None:
                _write_checkpoint(cfg.checkpoint_path, cfg_hash, block, emitted)
            new_blocks += 1
            if log is not None:
                log(f"block {block[0]},{block[1]}: {delta[0]} records ({emitted} total)")

        def task(block):
            return (cfg.n, cfg.v_max, floor.num, floor.den, cfg.filters, block[0], block[1])

        if workers <= 1:
            for block in blocks:
                text, delta = _scan_block_worker(task(block))
                finish_block(block, text, delta)
                if stop_after_blocks is not None and new_blocks >= stop_after_blocks:
                    stopped = True
                    break
        else:
            # Warm the kernels before forking so children inherit compiled code.
            kernels.ml_batch(np.asarray([[1, 2]], dtype=np.int64), 1, 2)
            window = max(2 * workers, 4)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pending = []
                it = iter(blocks)
                for block in it:
                    pending.append((block, pool.submit(_scan_block_worker, task(block))))
                    if len(pending) >= window:
                        break
                while pending:
                    block, fut = pending.pop(0)
                    text, delta = fut.result()
                    finish_block(block, text, delta)
                    if stop_after_blocks is not None and new_blocks >= stop_after_blocks:
                        stopped = True
                        for _, f in pending:
                            f.cancel()
                        break
                    nxt = next(it, None)
                    if nxt is not None:
                        pending.append((nxt, pool.submit(_scan_block_worker, task(nxt))))
    finally:
        if out is not None:
            out.close()

    if not stopped:
        census.complete = True
        if cfg.output_path is not None:
            summary = dict(census.to_json_dict())
            summary["config"] = cfg.config_dict()
            summary["config"]["config_hash"] = cfg_hash
            with open(summary_path_for(cfg.output_path), "w") as fh:
                json.dump(summary, fh, indent=2, sort_keys=True)
                fh.write("\n")
    return census


def merge_jsonl(paths: Sequence[str], output_path: str):
    """Merge shard JSONL outputs back into global enumeration order."""
    lines = []
    for p in paths:
        with open(p) as fh:
            for line in fh:
                lines.append((json.loads(line)["speeds"], line))
    lines.sort(key=lambda item: item[0])
    with open(output_path, "w") as fh:
        for _, line in lines:
            fh.write(line)
