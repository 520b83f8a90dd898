"""Per-sample manifest: the index of the six data modalities.

One newline-delimited JSON record per sample, stable field order.  The
six modalities map to ten files:

    params               structured parameter table (JSON)
    dxf_front/top/side   vector CAD drawing, one DXF per view
    png_front/top/side   raster image, one PNG per view
    script               executable modeling script
    step                 ISO 10303-21 solid model
    brep                 boundary-representation structure dump

Paths are relative to the dataset root; digests are SHA-256 of file
bytes, so a manifest row changes iff some artifact byte changed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

FILE_KEYS = (
    "params",
    "dxf_front",
    "dxf_top",
    "dxf_side",
    "png_front",
    "png_top",
    "png_side",
    "script",
    "step",
    "brep",
)


class ManifestError(Exception):
    pass


@dataclass(frozen=True)
class SampleManifest:
    sample_id: str
    seed: int
    index: int
    schema_version: str
    files: dict[str, str]
    digests: dict[str, str]

    def __post_init__(self):
        missing = [k for k in FILE_KEYS if k not in self.files]
        if missing:
            raise ManifestError(f"sample {self.sample_id} missing modality files: {missing}")
        if set(self.digests) != set(self.files):
            raise ManifestError(f"sample {self.sample_id}: digests do not cover files")

    def to_record(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "seed": self.seed,
            "index": self.index,
            "schema_version": self.schema_version,
            "files": {k: self.files[k] for k in FILE_KEYS},
            "digests": {k: self.digests[k] for k in FILE_KEYS},
        }

    @classmethod
    def from_record(cls, rec: dict) -> "SampleManifest":
        return cls(
            sample_id=rec["sample_id"],
            seed=int(rec["seed"]),
            index=int(rec["index"]),
            schema_version=rec["schema_version"],
            files=dict(rec["files"]),
            digests=dict(rec["digests"]),
        )


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_manifest(samples: list[SampleManifest]) -> bytes:
    lines = [json.dumps(s.to_record(), separators=(",", ":")) for s in samples]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def read_manifest(source: bytes | str | Path) -> list[SampleManifest]:
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source
    out = []
    for i, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(SampleManifest.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError) as exc:
            raise ManifestError(f"manifest line {i}: {exc}") from None
    return out


def verify_manifest(samples: list[SampleManifest], root: Path) -> list[str]:
    """Check that every named file exists and digest-matches."""
    issues = []
    for s in samples:
        for key in FILE_KEYS:
            path = root / s.files[key]
            if not path.is_file():
                issues.append(f"{s.sample_id}/{key}: missing file {s.files[key]}")
                continue
            actual = digest(path.read_bytes())
            if actual != s.digests[key]:
                issues.append(f"{s.sample_id}/{key}: digest mismatch")
    return issues
