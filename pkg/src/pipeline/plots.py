"""SVG plots. Hash salt and metadata are pinned so reruns give identical files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from common.config import config  # noqa: E402
from estimates.fit import upper_envelope  # noqa: E402
from estimates.schemas import BlowupFit, FieldSample, NormReport, sample_arrays  # noqa: E402
from geometry.domain import HoledDomain  # noqa: E402
from sdot.laguerre import LaguerreDiagram  # noqa: E402

plt.rcParams["svg.hashsalt"] = "holed-ot-lab"
_SVG_METADATA = {"Date": None}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    return path


def plot_blowup(samples: list[FieldSample], fit: BlowupFit | None, path: Path) -> Path:
    """Log-log scatter of the proxy against d with the fitted envelope."""
    cols = sample_arrays(samples)
    d, proxy = cols["d"], cols["proxy"]
    keep = d > 0
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(d[keep], proxy[keep], ".", ms=2, alpha=0.4, color="tab:blue", label="samples")
    if fit is not None:
        band = keep & (d >= fit.d_band[0]) & (d <= fit.d_band[1])
        env_d, env_p = upper_envelope(d[band], proxy[band], fit.d_band, config.fit_bins)
        ax.loglog(env_d, env_p, "o", ms=4, color="tab:orange", label="envelope")
        line = np.geomspace(*fit.d_band, 50)
        ax.loglog(line, np.exp(fit.intercept) * line**fit.slope, "-", color="tab:red", label=f"slope {fit.slope:.3f}")
    ax.set_xlabel("distance to boundary d")
    ax.set_ylabel("Hessian proxy")
    ax.legend(loc="upper right")
    return _save(fig, path)


def plot_refinement(norms: list[NormReport], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for norm in norms:
        series = np.asarray(norm.refinement_series)
        ax.plot(np.arange(len(series)), series / series[-1], "o-", label=f"p = {norm.p:g}")
    ax.set_xlabel("refinement level")
    ax.set_ylabel("value / last value")
    ax.legend(loc="lower right")
    return _save(fig, path)


def plot_diagram(diagram: LaguerreDiagram, dom: HoledDomain, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    for cell in diagram.cells:
        if cell is None:
            continue
        v = np.vstack([cell.vertices, cell.vertices[:1]])
        ax.plot(v[:, 0], v[:, 1], "-", lw=0.3, color="0.5")
    for poly in [dom.outer] + [h.polygon for h in dom.holes]:
        v = np.vstack([poly.vertices, poly.vertices[:1]])
        ax.plot(v[:, 0], v[:, 1], "-", lw=1.0, color="k")
    lo, hi = dom.outer.bbox
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_aspect("equal")
    ax.set_axis_off()
    return _save(fig, path)
