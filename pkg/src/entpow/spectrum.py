"""Distribution of entangling power under Haar-random unitaries.

For square bipartitions the density is markedly dimension dependent: at
``2x2`` it grows monotonically toward the maximum (most two-qubit gates are
nearly optimal entanglers), while from ``3x3`` on it vanishes at both ends of
the allowed range and peaks in the interior.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ValidationError
from .power import _map_ordered, ep_value, upper_bound
from .sampling import SeedSpec, _haar_unitary_from, block_sizes
from .tensorops import Bipartition


@dataclass(eq=False)
class Histogram:
    """Binned estimate of the entangling-power density, with sample metadata."""

    part: Bipartition
    bin_edges: np.ndarray
    counts: np.ndarray
    n_samples: int
    seed: SeedSpec
    empirical_mean: float
    empirical_max: float

    @property
    def densities(self) -> np.ndarray:
        """Counts normalized to a probability density over the binned range."""
        widths = np.diff(self.bin_edges)
        return self.counts / (self.n_samples * widths)


def sample_q(part: Bipartition, n_samples: int, n_bins: int, seed: SeedSpec,
             threads: int | None = None) -> Histogram:
    """Histogram of entangling power over ``n_samples`` Haar-random unitaries.

    Bins are uniform over ``[0, upper_bound(part)]`` (over ``[0, 1]`` when the
    bound degenerates to zero, i.e. a trivial factor).  Sampling fans out over
    a fixed set of seed substreams and is reduced in stream order, so the
    histogram is deterministic for a given seed at any worker count.
    """
    if n_samples < 1:
        raise ValidationError(f"n_samples must be >= 1, got {n_samples}")
    if n_bins < 2:
        raise ValidationError(f"n_bins must be >= 2, got {n_bins}")
    n = part.dim

    def one_block(args):
        b, count = args
        rng = seed.substream(b).generator()
        return np.array([ep_value(_haar_unitary_from(rng, n), part) for _ in range(count)])

    sizes = block_sizes(n_samples)
    values = np.concatenate(_map_ordered(one_block, list(enumerate(sizes)), threads))

    bound = upper_bound(part)
    hi = bound if bound > 0 else 1.0
    edges = np.linspace(0.0, hi, n_bins + 1)
    # exact values live in [0, bound]; clipping only removes float fuzz at the ends
    counts, _ = np.histogram(np.clip(values, 0.0, hi), bins=edges)
    return Histogram(
        part=part,
        bin_edges=edges,
        counts=counts,
        n_samples=n_samples,
        seed=seed,
        empirical_mean=float(values.mean()),
        empirical_max=float(values.max()),
    )


def monotonicity_score(h: Histogram) -> float:
    """Rank correlation between bin index and count over the occupied range.

    Scores near +1 mean the density grows monotonically toward the upper end
    of its support (the two-qubit signature); interior-peaked densities score
    much lower.  Requires at least 10 nonempty bins up to the last occupied
    one.
    """
    counts = np.asarray(h.counts)
    nonzero = np.nonzero(counts)[0]
    if nonzero.size == 0:
        raise ValidationError("histogram is empty")
    last = nonzero[-1]
    leading = counts[: last + 1]
    if np.count_nonzero(leading) < 10:
        raise ValidationError(
            f"need >= 10 nonempty leading bins for a meaningful score, got {np.count_nonzero(leading)}"
        )
    if np.all(leading == leading[0]):
        raise ValidationError("histogram counts are degenerate (constant)")
    rho = stats.spearmanr(np.arange(leading.size), leading).statistic
    return float(rho)
