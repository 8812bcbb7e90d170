"""Triangle meshes over (u, v) grids and their OBJ / CSV / JSON writers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

REPORT_FIELDS = ("family", "m", "params", "grid", "max_abs_H_analytic", "max_abs_H_numeric",
                 "constraint_residuals", "skipped_vertices", "domain_nonempty", "wall_ms")


@dataclass
class SurfaceMesh:
    vertices: np.ndarray          # (n, 3)
    faces: np.ndarray             # (f, 3), 0-based
    u: np.ndarray
    v: np.ndarray
    H_analytic: np.ndarray        # NaN where the formula was skipped
    H_numeric: Optional[np.ndarray] = None
    grid_shape: tuple = field(default=(0, 0))

    @property
    def skipped(self) -> int:
        return int(np.count_nonzero(np.isnan(self.H_analytic)))

    def max_abs(self, values) -> Optional[float]:
        if values is None:
            return None
        finite = np.abs(values[~np.isnan(values)])
        return float(finite.max()) if finite.size else None


def grid_mesh(points: np.ndarray, mask: np.ndarray, U: np.ndarray, V: np.ndarray,
              H: np.ndarray, H_num: Optional[np.ndarray] = None) -> SurfaceMesh:
    """Collect the masked nodes of an (nu, nv) grid and triangulate its cells.

    Cells with all four corners kept give two triangles, cells with three
    give one.
    """
    nu, nv = mask.shape
    index = -np.ones(mask.shape, dtype=int)
    index[mask] = np.arange(int(mask.sum()))
    faces = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a, b, c, d = index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]
            kept = [x for x in (a, b, c, d) if x >= 0]
            if len(kept) == 4:
                faces.append((a, b, c))
                faces.append((a, c, d))
            elif len(kept) == 3:
                faces.append(tuple(kept))
    return SurfaceMesh(
        vertices=points[mask],
        faces=np.array(faces, dtype=int).reshape(-1, 3),
        u=U[mask], v=V[mask], H_analytic=H[mask],
        H_numeric=None if H_num is None else H_num[mask],
        grid_shape=(nu, nv),
    )


def _num(x: float) -> str:
    return format(float(x), ".17g")


def write_obj(mesh: SurfaceMesh, path) -> None:
    lines = [f"v {_num(x)} {_num(y)} {_num(z)}" for x, y, z in mesh.vertices]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.faces]
    Path(path).write_text("\n".join(lines) + "\n")


def write_csv(mesh: SurfaceMesh, path) -> None:
    rows = ["u,v,x1,x2,x3,H"]
    for uu, vv, (x, y, z), h in zip(mesh.u, mesh.v, mesh.vertices, mesh.H_analytic):
        rows.append(",".join(_num(q) for q in (uu, vv, x, y, z, h)))
    Path(path).write_text("\n".join(rows) + "\n")


def write_mesh(mesh: SurfaceMesh, path) -> None:
    suffix = Path(path).suffix.lower()
    if suffix == ".obj":
        write_obj(mesh, path)
    elif suffix == ".csv":
        write_csv(mesh, path)
    else:
        raise ValueError(f"unknown mesh format {suffix!r}; use .obj or .csv")


def read_csv_H(path) -> np.ndarray:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return np.atleast_1d(data["H"])


def write_report(report: dict, path) -> None:
    missing = set(REPORT_FIELDS) ^ set(report)
    if missing:
        raise ValueError(f"report fields mismatch: {sorted(missing)}")
    ordered = {k: report[k] for k in REPORT_FIELDS}
    Path(path).write_text(json.dumps(ordered, indent=2) + "\n")
