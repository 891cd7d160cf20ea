from __future__ import annotations

import numpy as np
from scipy import stats

from common.config import config
from common.errors import InvalidParameterError, UnderSampledError
from common.logging import get_logger
from estimates.schemas import BlowupFit, FieldSample, sample_arrays

logger = get_logger(__name__)


def upper_envelope(d: np.ndarray, proxy: np.ndarray, d_band: tuple[float, float], bins: int) -> tuple[np.ndarray, np.ndarray]:
    """(d, proxy) of the largest proxy in each logarithmic d-bin."""
    edges = np.geomspace(d_band[0], d_band[1], bins + 1)
    idx = np.clip(np.searchsorted(edges, d, side="right") - 1, 0, bins - 1)
    env_d, env_p = [], []
    for b in range(bins):
        members = np.flatnonzero(idx == b)
        if len(members) == 0:
            continue
        best = members[np.argmax(proxy[members])]
        env_d.append(d[best])
        env_p.append(proxy[best])
    return np.array(env_d), np.array(env_p)


def blowup_fit(samples: list[FieldSample], d_band: tuple[float, float], bins: int | None = None) -> BlowupFit:
    """Least-squares slope of log(proxy) against log(d) on the upper envelope."""
    lo, hi = d_band
    if not 0 < lo < hi:
        raise InvalidParameterError(f"Distance band must satisfy 0 < lo < hi, got {d_band}")
    bins = bins or config.fit_bins
    cols = sample_arrays(samples)
    d, proxy = cols["d"], cols["proxy"]
    keep = (d >= lo) & (d <= hi) & (proxy > 0)
    n = int(keep.sum())
    if n < config.fit_min_samples:
        raise UnderSampledError(f"{n} samples in the band [{lo:g}, {hi:g}], need {config.fit_min_samples}")

    env_d, env_p = upper_envelope(d[keep], proxy[keep], (lo, hi), bins)
    if len(env_d) < 3:
        raise UnderSampledError(f"Only {len(env_d)} non-empty envelope bins in [{lo:g}, {hi:g}]")

    res = stats.linregress(np.log(env_d), np.log(env_p))
    half = float(stats.t.ppf(0.975, len(env_d) - 2) * res.stderr)
    logger.info(f"[Fit] slope={res.slope:.4f} ± {half:.4f} over {len(env_d)} bins ({n} samples)")
    return BlowupFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        ci=(float(res.slope - half), float(res.slope + half)),
        stderr=float(res.stderr),
        n_samples=n,
        n_bins=len(env_d),
        d_band=(float(lo), float(hi)),
    )


def certified_constant(samples: list[FieldSample], d_band: tuple[float, float]) -> float:
    """Smallest C with proxy ≤ C·d^(−1/2) over the samples in the band."""
    cols = sample_arrays(samples)
    d, proxy = cols["d"], cols["proxy"]
    keep = (d >= d_band[0]) & (d <= d_band[1])
    if not keep.any():
        raise UnderSampledError(f"No samples in the band {d_band}")
    return float((proxy[keep] * np.sqrt(d[keep])).max())
