"""File formats: SGR graphs, AFF affinity volumes, LAB label volumes.

Each format is a JSON header at the given path plus a raw little-endian
binary payload in a ``.bin`` sidecar next to it (``graph.sgr`` pairs with
``graph.sgr.bin``).  Headers are fixed schemas:

* SGR v1: ``{"format":"sgr","version":1,"nodes":N,"edges":M,
  "weights":"split"|"signed"}``; payload records are
  (u: u64, v: u64, w_plus: f32, w_minus: f32, flags: u8) for "split" or
  (u: u64, v: u64, w: f32, flags: u8) for "signed"; flag bit0 = is_local.
* AFF v1: ``{"format":"aff","version":1,"shape":[Z,Y,X],
  "offsets":[[dz,dy,dx],...],"dtype":"f32"}``; payload is C-order
  channel-major float32.
* LAB v1: ``{"format":"lab","version":1,"shape":[Z,Y,X],"dtype":"u32"}``;
  payload is C-order uint32.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .graph import SignedGraph

__all__ = [
    "FormatError",
    "read_sgr", "write_sgr",
    "read_aff", "write_aff",
    "read_labels", "write_labels",
    "sniff_format",
]

_SPLIT_DTYPE = np.dtype([("u", "<u8"), ("v", "<u8"), ("wp", "<f4"),
                         ("wm", "<f4"), ("flags", "u1")])
_SIGNED_DTYPE = np.dtype([("u", "<u8"), ("v", "<u8"), ("w", "<f4"),
                          ("flags", "u1")])


class FormatError(ValueError):
    """Malformed header or payload; message carries file context."""


def _payload_path(path) -> str:
    return os.fspath(path) + ".bin"


def _read_header(path, expected_format: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: cannot read header ({exc})") from exc
    if not isinstance(header, dict):
        raise FormatError(f"{path}: header is not a JSON object")
    fmt = header.get("format")
    if fmt != expected_format:
        raise FormatError(
            f"{path}: expected format {expected_format!r}, found {fmt!r}")
    if header.get("version") != 1:
        raise FormatError(f"{path}: unsupported version {header.get('version')!r}")
    return header


def _read_payload(path, dtype: np.dtype, count: int) -> np.ndarray:
    bin_path = _payload_path(path)
    try:
        raw = np.fromfile(bin_path, dtype=dtype)
    except OSError as exc:
        raise FormatError(f"{bin_path}: cannot read payload ({exc})") from exc
    if raw.shape[0] != count:
        raise FormatError(
            f"{bin_path}: payload holds {raw.shape[0]} records "
            f"({raw.shape[0] * dtype.itemsize} bytes), header expects {count}")
    return raw


def sniff_format(path) -> str:
    """The "format" field of a header file, for CLI dispatch."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: cannot read header ({exc})") from exc
    fmt = header.get("format") if isinstance(header, dict) else None
    if fmt not in ("sgr", "aff", "lab"):
        raise FormatError(f"{path}: unrecognized format {fmt!r}")
    return fmt


def write_sgr(graph: SignedGraph, path, weights: str = "split") -> None:
    if weights not in ("split", "signed"):
        raise ValueError("weights must be 'split' or 'signed'")
    m = graph.edge_count
    header = {"format": "sgr", "version": 1, "nodes": graph.node_count,
              "edges": m, "weights": weights}
    if weights == "split":
        rec = np.empty(m, dtype=_SPLIT_DTYPE)
        rec["wp"] = graph.w_plus.astype("<f4")
        rec["wm"] = graph.w_minus.astype("<f4")
    else:
        rec = np.empty(m, dtype=_SIGNED_DTYPE)
        rec["w"] = graph.signed_weights().astype("<f4")
    rec["u"] = graph.endpoints[0]
    rec["v"] = graph.endpoints[1]
    rec["flags"] = graph.is_local.astype("u1")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(header, fh)
        fh.write("\n")
    rec.tofile(_payload_path(path))


def read_sgr(path) -> SignedGraph:
    header = _read_header(path, "sgr")
    try:
        nodes = int(header["nodes"])
        edges = int(header["edges"])
        weights = header["weights"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad header field ({exc})") from exc
    if weights not in ("split", "signed"):
        raise FormatError(f"{path}: unknown weights mode {weights!r}")
    dtype = _SPLIT_DTYPE if weights == "split" else _SIGNED_DTYPE
    rec = _read_payload(path, dtype, edges)
    if weights == "split":
        wp = rec["wp"].astype(np.float64)
        wm = rec["wm"].astype(np.float64)
    else:
        w = rec["w"].astype(np.float64)
        wp = np.maximum(w, 0.0)
        wm = np.maximum(-w, 0.0)
    is_local = (rec["flags"] & 1).astype(bool)
    try:
        return SignedGraph.from_arrays(nodes, rec["u"].astype(np.int64),
                                       rec["v"].astype(np.int64), wp, wm,
                                       is_local)
    except ValueError as exc:
        raise FormatError(f"{path}: invalid graph data ({exc})") from exc


def write_aff(data: np.ndarray, offsets, path) -> None:
    """Write a (C, Z, Y, X) affinity array with its channel offsets."""
    data = np.asarray(data)
    if data.ndim != 4:
        raise ValueError("affinity data must be 4-D (C, Z, Y, X)")
    header = {"format": "aff", "version": 1,
              "shape": [int(s) for s in data.shape[1:]],
              "offsets": [[int(c) for c in off] for off in offsets],
              "dtype": "f32"}
    if len(header["offsets"]) != data.shape[0]:
        raise ValueError("offset count must match channel count")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(header, fh)
        fh.write("\n")
    np.ascontiguousarray(data, dtype="<f4").tofile(_payload_path(path))


def read_aff(path) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Read an affinity volume; returns (float64 data (C,Z,Y,X), offsets)."""
    header = _read_header(path, "aff")
    try:
        shape = tuple(int(s) for s in header["shape"])
        offsets = [tuple(int(c) for c in off) for off in header["offsets"]]
        dtype = header["dtype"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad header field ({exc})") from exc
    if len(shape) != 3 or any(s <= 0 for s in shape):
        raise FormatError(f"{path}: shape must be three positive extents")
    if dtype != "f32":
        raise FormatError(f"{path}: unsupported dtype {dtype!r}")
    if any(len(off) != 3 for off in offsets):
        raise FormatError(f"{path}: offsets must be 3-vectors")
    count = len(offsets) * shape[0] * shape[1] * shape[2]
    raw = _read_payload(path, np.dtype("<f4"), count)
    data = raw.astype(np.float64).reshape((len(offsets),) + shape)
    return data, offsets


def write_labels(labels: np.ndarray, path) -> None:
    labels = np.asarray(labels)
    if labels.ndim != 3:
        raise ValueError("label volume must be 3-D (Z, Y, X)")
    header = {"format": "lab", "version": 1,
              "shape": [int(s) for s in labels.shape], "dtype": "u32"}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(header, fh)
        fh.write("\n")
    np.ascontiguousarray(labels, dtype="<u4").tofile(_payload_path(path))


def read_labels(path) -> np.ndarray:
    header = _read_header(path, "lab")
    try:
        shape = tuple(int(s) for s in header["shape"])
        dtype = header["dtype"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad header field ({exc})") from exc
    if len(shape) != 3 or any(s <= 0 for s in shape):
        raise FormatError(f"{path}: shape must be three positive extents")
    if dtype != "u32":
        raise FormatError(f"{path}: unsupported dtype {dtype!r}")
    raw = _read_payload(path, np.dtype("<u4"), shape[0] * shape[1] * shape[2])
    return raw.astype(np.uint32).reshape(shape)
