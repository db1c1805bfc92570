"""File formats: IMU / micromovement / annotation CSVs and the JSON manifest.

All writers emit floats with ``repr`` so that a load/save round trip
reproduces the numeric content bit-exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantViolation, MissingFileError, ParseError
from .model import (
    BiteAnnotation,
    MicromovementWindow,
    ImuStream,
    Session,
    Wrist,
)

IMU_HEADER = ["t", "ax", "ay", "az", "gx", "gy", "gz"]
MICRO_HEADER = ["index", "t_start", "p", "u", "m", "d", "n"]
ANNOTATION_HEADER = ["bite_id", "start_s", "end_s", "weight_g"]


def _fmt(x: float) -> str:
    return repr(float(x))


def _open_rows(path: Path, expected_header: list[str]):
    if not path.exists():
        raise MissingFileError(f"file not found: {path}")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != expected_header:
        raise ParseError(
            f"expected header {','.join(expected_header)}", path=path, line=1
        )
    return rows[1:]


def _floats(fields: Sequence[str], path: Path, line: int) -> list[float]:
    try:
        return [float(x) for x in fields]
    except ValueError as exc:
        raise ParseError(str(exc), path=path, line=line) from None


def read_imu_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read an IMU CSV into (times, (N, 6) value matrix)."""
    path = Path(path)
    rows = _open_rows(path, IMU_HEADER)
    data = np.empty((len(rows), 7))
    for i, row in enumerate(rows):
        if len(row) != 7:
            raise ParseError(f"expected 7 fields, got {len(row)}", path=path, line=i + 2)
        data[i] = _floats(row, path, i + 2)
    return data[:, 0], data[:, 1:]


def write_imu_csv(path: str | Path, t: np.ndarray, values: np.ndarray) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(IMU_HEADER)
        for ti, row in zip(t, values):
            w.writerow([_fmt(ti)] + [_fmt(v) for v in row])


def read_micromovement_csv(path: str | Path) -> list[MicromovementWindow]:
    path = Path(path)
    windows = []
    for i, row in enumerate(_open_rows(path, MICRO_HEADER)):
        if len(row) != 7:
            raise ParseError(f"expected 7 fields, got {len(row)}", path=path, line=i + 2)
        vals = _floats(row, path, i + 2)
        try:
            windows.append(MicromovementWindow(
                index=int(vals[0]), t_start=vals[1], probs=np.array(vals[2:])
            ))
        except InvariantViolation as exc:
            raise ParseError(str(exc), path=path, line=i + 2) from None
    return windows


def write_micromovement_csv(path: str | Path,
                            windows: Iterable[MicromovementWindow]) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MICRO_HEADER)
        for win in windows:
            w.writerow([win.index, _fmt(win.t_start)] + [_fmt(p) for p in win.probs])


def read_annotation_csv(path: str | Path) -> list[BiteAnnotation]:
    path = Path(path)
    bites = []
    for i, row in enumerate(_open_rows(path, ANNOTATION_HEADER)):
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", path=path, line=i + 2)
        vals = _floats(row[1:], path, i + 2)
        bites.append(BiteAnnotation(
            bite_id=row[0], start_s=vals[0], end_s=vals[1], weight_g=vals[2]
        ))
    return bites


def write_annotation_csv(path: str | Path, bites: Iterable[BiteAnnotation]) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ANNOTATION_HEADER)
        for b in bites:
            w.writerow([b.bite_id, _fmt(b.start_s), _fmt(b.end_s), _fmt(b.weight_g)])


def load_session(entry: dict, subject_id: str, session_id: str,
                 base_dir: str | Path = ".") -> Session:
    """Build a validated Session from one manifest entry.

    The entry's ``sync_offset_s`` is added to the IMU timestamps so that
    everything ends up on the annotation clock.
    """
    base = Path(base_dir)
    for key in ("imu", "micromovement", "annotations", "wrist"):
        if key not in entry:
            raise ParseError(f"manifest entry missing key '{key}'")
    offset = float(entry.get("sync_offset_s", 0.0))
    t, values = read_imu_csv(base / entry["imu"])
    windows = read_micromovement_csv(base / entry["micromovement"])
    bites = read_annotation_csv(base / entry["annotations"])
    try:
        wrist = Wrist(entry["wrist"])
    except ValueError:
        raise ParseError(f"wrist must be 'left' or 'right', got {entry['wrist']!r}")
    fs = float(entry.get("fs_hz", _nominal_rate(t)))
    imu = ImuStream(t=t + offset, values=values, fs=fs, wrist=wrist)
    return Session(
        subject_id=subject_id,
        session_id=session_id,
        imu=imu,
        micromovements=tuple(windows),
        bites=tuple(sorted(bites, key=lambda b: b.start_s)),
        sync_offset_s=offset,
    )


def _nominal_rate(t: np.ndarray) -> float:
    if t.size < 2:
        return 1.0
    return float((t.size - 1) / (t[-1] - t[0]))


def load_manifest(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingFileError(f"manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", path=path, line=exc.lineno) from None
    if "subjects" not in manifest or not isinstance(manifest["subjects"], dict):
        raise ParseError("manifest must carry a 'subjects' object", path=path, line=1)
    return manifest


def load_dataset(manifest_path: str | Path) -> list[Session]:
    """Load every session referenced by a manifest, in subject/session order."""
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    sessions = []
    for subject_id in sorted(manifest["subjects"]):
        entries = manifest["subjects"][subject_id]
        for entry in entries:
            session_id = entry.get("session_id", f"session{len(sessions):02d}")
            sessions.append(load_session(
                entry, subject_id, session_id, base_dir=manifest_path.parent
            ))
    return sessions


def save_session_files(session: Session, out_dir: str | Path,
                       raw_offset: bool = True) -> dict:
    """Write one session's three CSVs and return its manifest entry.

    With ``raw_offset`` the IMU timestamps are shifted back off the
    annotation clock, so that loading the entry (which re-applies the
    offset) reproduces the in-memory session.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{session.subject_id}_{session.session_id}"
    offset = session.sync_offset_s if raw_offset else 0.0
    imu_path = out / f"{stem}_imu.csv"
    micro_path = out / f"{stem}_micro.csv"
    ann_path = out / f"{stem}_bites.csv"
    write_imu_csv(imu_path, session.imu.t - offset, session.imu.values)
    write_micromovement_csv(micro_path, session.micromovements)
    write_annotation_csv(ann_path, session.bites)
    return {
        "session_id": session.session_id,
        "imu": imu_path.name,
        "micromovement": micro_path.name,
        "annotations": ann_path.name,
        "wrist": session.imu.wrist.value,
        "sync_offset_s": offset,
        "fs_hz": session.imu.fs,
    }


def save_dataset(sessions: Sequence[Session], out_dir: str | Path,
                 manifest_name: str = "manifest.json") -> Path:
    """Write all session files plus a manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    subjects: dict[str, list] = {}
    for session in sessions:
        entry = save_session_files(session, out)
        subjects.setdefault(session.subject_id, []).append(entry)
    manifest_path = out / manifest_name
    manifest_path.write_text(json.dumps({"subjects": subjects}, indent=2, sort_keys=True) + "\n")
    return manifest_path


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingFileError(f"file not found: {path}")
    return json.loads(path.read_text())
