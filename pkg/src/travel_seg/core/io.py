"""
Scan and label file I/O.

Supported scan formats: KITTI velodyne .bin (float32 x, y, z, intensity, little
endian), CSV with an `x,y,z[,intensity][,ring]` header, and ASCII PLY with
x/y/z vertex properties. Label files hold one little-endian uint32 per point.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError, LabelSizeError, ScanFormatError
from .types import PointCloud

log = logging.getLogger(__name__)

SCAN_FORMATS = ("kitti_bin", "csv", "ply_ascii")
KITTI_RECORD = np.dtype("<f4")
LABEL_RECORD = np.dtype("<u4")
FORMAT_SUFFIXES = {".bin": "kitti_bin", ".csv": "csv", ".ply": "ply_ascii"}


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix not in FORMAT_SUFFIXES:
        raise ScanFormatError(f"Cannot infer scan format from '{path}' (known suffixes: {', '.join(FORMAT_SUFFIXES)})")
    return FORMAT_SUFFIXES[suffix]


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as e:
        raise InputError(f"Cannot read '{path}': {e}") from e


def _finite_cloud(columns: dict, path: Path) -> PointCloud:
    """Drop records with any non-finite value and report how many went."""
    xyz = np.column_stack([columns["x"], columns["y"], columns["z"]]).astype(np.float64)
    keep = np.all(np.isfinite(xyz), axis=1)
    intensity = columns.get("intensity")
    if intensity is not None:
        intensity = np.asarray(intensity, dtype=np.float64)
        keep &= np.isfinite(intensity)
    ring = columns.get("ring")
    dropped = int((~keep).sum())
    if dropped:
        log.warning(f"Dropped {dropped} non-finite records from {path}")
    return PointCloud(
        xyz[keep],
        None if intensity is None else intensity[keep],
        None if ring is None else np.asarray(ring)[keep],
        frame_id=path.stem,
        dropped=dropped,
    )


def _load_kitti(path: Path) -> PointCloud:
    raw = _read_bytes(path)
    record_width = 4 * KITTI_RECORD.itemsize
    if len(raw) % record_width:
        raise ScanFormatError(f"'{path}' is {len(raw)} bytes, not a multiple of the {record_width}-byte KITTI record")
    records = np.frombuffer(raw, dtype=KITTI_RECORD).reshape(-1, 4)
    return _finite_cloud({"x": records[:, 0], "y": records[:, 1], "z": records[:, 2], "intensity": records[:, 3]}, path)


def _load_csv(path: Path) -> PointCloud:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            rows = [row for row in reader if row]
    except OSError as e:
        raise InputError(f"Cannot read '{path}': {e}") from e
    if header is None:
        return PointCloud(np.empty((0, 3)), frame_id=path.stem)
    header = [h.strip().lower() for h in header]
    if header[:3] != ["x", "y", "z"] or not set(header[3:]) <= {"intensity", "ring"}:
        raise ScanFormatError(f"'{path}' has header {header}; expected x,y,z[,intensity][,ring]")
    try:
        values = np.array([[float(v) for v in row] for row in rows], dtype=np.float64).reshape(-1, len(header))
    except ValueError as e:
        raise ScanFormatError(f"'{path}' contains a malformed row: {e}") from e
    columns = {name: values[:, i] for i, name in enumerate(header)}
    if "ring" in columns:
        ring = columns["ring"]
        ring = np.where(np.isfinite(ring), ring, -1)
        columns["ring"] = ring.astype(np.int64)
    return _finite_cloud(columns, path)


def _load_ply(path: Path) -> PointCloud:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read '{path}': {e}") from e
    if not lines or lines[0].strip() != "ply":
        raise ScanFormatError(f"'{path}' does not start with a PLY magic line")
    vertex_count = None
    properties = []
    in_vertex = False
    body_start = None
    for i, line in enumerate(lines[1:], start=1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "format" and parts[1] != "ascii":
            raise ScanFormatError(f"'{path}' is {parts[1]} PLY; only ascii is supported")
        elif parts[0] == "element":
            in_vertex = parts[1] == "vertex"
            if in_vertex:
                vertex_count = int(parts[2])
        elif parts[0] == "property" and in_vertex:
            properties.append(parts[-1])
        elif parts[0] == "end_header":
            body_start = i + 1
            break
    if vertex_count is None or body_start is None:
        raise ScanFormatError(f"'{path}' has no vertex element or no end_header")
    if properties[:3] != ["x", "y", "z"]:
        raise ScanFormatError(f"'{path}' vertex properties {properties} do not start with x, y, z")
    body = lines[body_start:body_start + vertex_count]
    if len(body) != vertex_count:
        raise ScanFormatError(f"'{path}' declares {vertex_count} vertices but holds {len(body)}")
    try:
        values = np.array([[float(v) for v in row.split()] for row in body], dtype=np.float64)
    except ValueError as e:
        raise ScanFormatError(f"'{path}' contains a malformed vertex: {e}") from e
    values = values.reshape(-1, len(properties))
    columns = {name: values[:, i] for i, name in enumerate(properties)}
    if "ring" in columns:
        columns["ring"] = np.where(np.isfinite(columns["ring"]), columns["ring"], -1).astype(np.int64)
    return _finite_cloud(columns, path)


SCAN_READERS = {"kitti_bin": _load_kitti, "csv": _load_csv, "ply_ascii": _load_ply}


def load_scan(path, format: str | None = None) -> PointCloud:
    """
    Load a scan file into a PointCloud.

    Args:
        path: File to read.
        format: One of SCAN_FORMATS; inferred from the suffix when omitted.

    Returns:
        The cloud; `cloud.dropped` counts the non-finite records discarded.
    """
    path = Path(path)
    format = format or detect_format(path)
    if format not in SCAN_READERS:
        raise ScanFormatError(f"Unknown scan format '{format}'")
    if not path.is_file():
        raise InputError(f"Scan file not found: {path}")
    cloud = SCAN_READERS[format](path)
    log.info(f"Loaded {len(cloud)} points from {path} ({format}, dropped {cloud.dropped})")
    return cloud


def save_scan(cloud: PointCloud, path, format: str | None = None):
    """Write a cloud in any supported format (CSV/PLY with round-trip precision)."""
    path = Path(path)
    format = format or detect_format(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == "kitti_bin":
        intensity = cloud.intensity if cloud.intensity is not None else np.zeros(len(cloud))
        records = np.column_stack([cloud.xyz, intensity]).astype(KITTI_RECORD)
        records.tofile(path)
        return
    names = ["x", "y", "z"]
    columns = [cloud.xyz]
    if cloud.intensity is not None:
        names.append("intensity")
        columns.append(cloud.intensity[:, None])
    if cloud.ring is not None:
        names.append("ring")
        columns.append(cloud.ring[:, None].astype(np.float64))
    table = np.hstack(columns) if len(cloud) else np.empty((0, len(names)))
    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as f:
            f.write(",".join(names) + "\n")
            np.savetxt(f, table, fmt="%.17g", delimiter=",")
    elif format == "ply_ascii":
        with open(path, "w", encoding="utf-8") as f:
            f.write("ply\nformat ascii 1.0\n")
            f.write(f"element vertex {len(cloud)}\n")
            for name in names:
                kind = "int" if name == "ring" else "double"
                f.write(f"property {kind} {name}\n")
            f.write("end_header\n")
            np.savetxt(f, table, fmt="%.17g", delimiter=" ")
    else:
        raise ScanFormatError(f"Unknown scan format '{format}'")


@dataclass(frozen=True)
class LabelArray:
    """Semantic-KITTI-style labels: lower 16 bits class, upper 16 bits instance."""

    raw: np.ndarray

    def __len__(self) -> int:
        return self.raw.shape[0]

    @property
    def semantic(self) -> np.ndarray:
        return (self.raw & 0xFFFF).astype(np.uint32)

    @property
    def instance(self) -> np.ndarray:
        return (self.raw >> 16).astype(np.uint32)

    @classmethod
    def from_parts(cls, semantic, instance) -> "LabelArray":
        semantic = np.asarray(semantic, dtype=np.uint32)
        instance = np.asarray(instance, dtype=np.uint32)
        return cls(((instance << 16) | (semantic & 0xFFFF)).astype(np.uint32))


def load_labels(path, expected_count: int | None = None) -> LabelArray:
    """Read a uint32 label file, optionally checking it against a point count."""
    path = Path(path)
    raw = _read_bytes(path)
    if len(raw) % LABEL_RECORD.itemsize:
        raise LabelSizeError(f"'{path}' is {len(raw)} bytes, not a multiple of {LABEL_RECORD.itemsize}")
    labels = np.frombuffer(raw, dtype=LABEL_RECORD).astype(np.uint32)
    if expected_count is not None and labels.shape[0] != expected_count:
        raise LabelSizeError(f"'{path}' holds {labels.shape[0]} labels, expected {expected_count}")
    return LabelArray(labels)


def save_labels(path, labels):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    raw = labels.raw if isinstance(labels, LabelArray) else np.asarray(labels)
    raw.astype(LABEL_RECORD).tofile(path)
