"""End-to-end composition: label matrix or point cloud -> barcode -> entropy summary."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import alpha, entropy, ingest, persistence
from .stats import DEFAULT_ADJUSTMENT, DEFAULT_ALPHA

DEFAULT_CELLS = 400


@dataclass
class PipelineConfig:
    n_cells: int = DEFAULT_CELLS
    log_base: float = 2.0
    infinite_policy: str = "drop"
    adjustment: str = DEFAULT_ADJUSTMENT
    alpha_threshold: float = DEFAULT_ALPHA
    seed: int = 0

    def __post_init__(self):
        if self.n_cells < 3:
            raise ValueError(f"n_cells must be >= 3, got {self.n_cells}")
        if not self.log_base > 1:
            raise ValueError(f"log_base must exceed 1, got {self.log_base}")
        if self.infinite_policy not in ("drop", "cap"):
            raise ValueError(f"infinite_policy must be 'drop' or 'cap', got {self.infinite_policy!r}")
        if not 0 < self.alpha_threshold < 1:
            raise ValueError(f"alpha_threshold must lie in (0, 1), got {self.alpha_threshold}")


@dataclass
class SampleResult:
    image: str
    n_cells: int
    barcode: persistence.Barcode
    summary: entropy.EntropySummary
    cloud: ingest.PointCloud


def cloud_from_matrix(m: ingest.LabelMatrix, n_cells: int, start=None) -> ingest.PointCloud:
    cells = ingest.spiral_select(m, n_cells, start)
    return ingest.compute_centroids(m, cells)


def load_cloud(path: Path, cfg: PipelineConfig) -> ingest.PointCloud:
    """Point-cloud CSVs are used whole; label matrices go through spiral selection."""
    data = Path(path).read_bytes()
    suffix = Path(path).suffix.lower()
    if suffix == ".pgm":
        return cloud_from_matrix(ingest.load_label_matrix(data, "pgm16"), cfg.n_cells)
    if ingest.is_point_cloud_csv(data):
        return ingest.read_point_cloud(data.decode())
    return cloud_from_matrix(ingest.load_label_matrix(data, "csv"), cfg.n_cells)


def barcode_of(pc: ingest.PointCloud) -> tuple[alpha.FilteredComplex, persistence.Barcode]:
    fc = alpha.alpha_complex(pc)
    return fc, persistence.compute_persistence(fc)


def summarize_cloud(pc: ingest.PointCloud, cfg: PipelineConfig, image: str = "") -> SampleResult:
    fc, bc = barcode_of(pc)
    cap: Optional[float] = fc.max_value() if cfg.infinite_policy == "cap" else None
    summary = entropy.summarize_entropy(bc, cfg.infinite_policy, cfg.log_base, cap)
    return SampleResult(image, len(pc), bc, summary, pc)


def process_file(path, cfg: PipelineConfig) -> SampleResult:
    return summarize_cloud(load_cloud(Path(path), cfg), cfg, image=Path(path).name)
