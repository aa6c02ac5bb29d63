"""Mode decompositions of an aggregate signal and energy-based selection.

Four decompositions share one interface: each turns a mean-centred signal of
length n into a set of signal-domain components, ranked by energy.  A prefix
of that ranking with enough cumulative energy is then normalized into the
columns of a projection basis.

DFT
    Two components per frequency 1..n/2-1 (cosine and sine projections);
    the DC term is excluded and the Nyquist term is folded into the
    highest-frequency cosine component, giving 2*(n/2-1) components.
DWT
    Full-depth Haar analysis; every detail coefficient contributes one
    component (coefficient times its wavelet vector).  The final
    approximation is excluded: it is zero for mean-centred input.
DWPT
    Full-depth Haar wavelet packet tree with the minimum Shannon-entropy
    basis chosen bottom-up; every selected packet coefficient contributes
    one component.
EMD
    Empirical mode decomposition; the intrinsic mode functions are the
    components and the trend residual is reported separately.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import mean_center
from .emd import EMDOptions, sift

__all__ = [
    "Method",
    "ComponentSet",
    "BasisMatrix",
    "decompose",
    "dft_components",
    "dwt_components",
    "dwpt_components",
    "emd_components",
    "haar_detail_coefficients",
    "best_basis_cost",
    "select_components",
    "normalize_components",
]

_SQRT2 = np.sqrt(2.0)


class Method(str, Enum):
    DFT = "dft"
    DWT = "dwt"
    DWPT = "dwpt"
    EMD = "emd"


@dataclass(frozen=True)
class ComponentSet:
    """Signal-domain components of one signal, sorted by descending energy.

    ``components`` is an (l, n) array whose rows sum (plus ``residual`` when
    present) back to the analysed signal.  ``energies[i]`` equals the squared
    norm of row i; ``source_energy`` is the squared norm of the analysed
    (mean-centred) signal.
    """

    components: np.ndarray
    energies: np.ndarray
    method: Method
    source_energy: float
    residual: np.ndarray | None = None

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        energies = np.asarray(self.energies, dtype=float)
        if comps.ndim != 2 or energies.shape != (comps.shape[0],):
            raise ValueError("components must be (l, n) with one energy per row")
        if np.any(np.diff(energies) > 0):
            raise ValueError("energies must be non-increasing")
        comps.setflags(write=False)
        energies.setflags(write=False)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "energies", energies)

    def __len__(self) -> int:
        return self.components.shape[0]

    @property
    def energy_fraction(self) -> float:
        """Cumulative energy of all held components over the source energy."""
        if self.source_energy == 0:
            return 0.0
        return float(self.energies.sum() / self.source_energy)


@dataclass(frozen=True)
class BasisMatrix:
    """Unit-norm components stacked as columns of an (n, p) projection basis."""

    columns: np.ndarray
    method: Method
    retained_energy_fraction: float

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] == 0:
            raise ValueError("basis must be (n, p) with p >= 1")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @property
    def n_components(self) -> int:
        return self.columns.shape[1]

    @property
    def ref(self) -> str:
        """Short stable identifier derived from the basis content."""
        digest = hashlib.sha1(np.ascontiguousarray(self.columns).tobytes()).hexdigest()
        return f"{self.method.value}-p{self.n_components}-{digest[:10]}"


def _required_pow2(n: int) -> int:
    levels = int(np.log2(n))
    if 2**levels != n:
        raise ValueError("signal length must be a power of two")
    return levels


def _energy_sorted(comps: np.ndarray, method: Method, source_energy: float,
                   residual: np.ndarray | None = None) -> ComponentSet:
    energies = np.einsum("ij,ij->i", comps, comps)
    order = np.argsort(-energies, kind="stable")
    return ComponentSet(
        components=comps[order],
        energies=energies[order],
        method=method,
        source_energy=source_energy,
        residual=residual,
    )


def dft_components(a: np.ndarray) -> ComponentSet:
    """Cosine/sine projection components per frequency of a mean-centred signal."""
    a = np.asarray(a, dtype=float)
    n = a.size
    _required_pow2(n)
    spectrum = np.fft.rfft(a)
    freqs = np.arange(1, n // 2)
    k = np.arange(n)
    angles = (2.0 * np.pi / n) * np.outer(freqs, k)
    cos_part = (2.0 / n) * spectrum.real[freqs, None] * np.cos(angles)
    sin_part = (-2.0 / n) * spectrum.imag[freqs, None] * np.sin(angles)
    # Nyquist bin is real for real input; fold it into the top cosine row.
    cos_part[-1] += (spectrum.real[n // 2] / n) * np.cos(np.pi * k)
    comps = np.empty((2 * freqs.size, n))
    comps[0::2] = cos_part
    comps[1::2] = sin_part
    return _energy_sorted(comps, Method.DFT, float(a @ a))


def haar_detail_coefficients(x: np.ndarray) -> tuple[list[np.ndarray], float]:
    """Full-depth Haar detail coefficients, finest scale first.

    Returns ``(details, approximation)`` where ``details[i]`` holds the
    level-(i+1) coefficients (length n / 2**(i+1)) and ``approximation`` is
    the single remaining scaling coefficient.
    """
    x = np.asarray(x, dtype=float)
    _required_pow2(x.size)
    details: list[np.ndarray] = []
    approx = x
    while approx.size > 1:
        even = approx[0::2]
        odd = approx[1::2]
        details.append((even - odd) / _SQRT2)
        approx = (even + odd) / _SQRT2
    return details, float(approx[0])


def dwt_components(a: np.ndarray) -> ComponentSet:
    """One component per Haar detail coefficient of a mean-centred signal."""
    a = np.asarray(a, dtype=float)
    n = a.size
    details, _ = haar_detail_coefficients(a)
    comps = np.zeros((n - 1, n))
    row = 0
    for i, coeffs in enumerate(details):
        j = i + 1                      # level: support 2**j samples
        width = 2**j
        half = width // 2
        scale = 2.0 ** (-j / 2.0)
        for kk, c in enumerate(coeffs):
            lo = kk * width
            comps[row, lo:lo + half] = c * scale
            comps[row, lo + half:lo + width] = -c * scale
            row += 1
    return _energy_sorted(comps, Method.DWT, float(a @ a))


def best_basis_cost(v: np.ndarray) -> float:
    """Shannon entropy of the normalized squared coefficients of ``v``.

    Zero for the zero vector and for any one-hot vector; ``log(len(v))`` at
    worst when the energy is spread evenly.
    """
    v = np.asarray(v, dtype=float)
    energy = float(v @ v)
    if energy == 0.0:
        return 0.0
    q = (v * v) / energy
    nz = q > 0
    return float(-np.sum(q[nz] * np.log(q[nz])))


def _entropy_cost(v: np.ndarray, root_energy: float) -> float:
    # Additive form of the entropy cost: coefficients are normalized by the
    # root signal norm so parent cost and summed child costs are comparable.
    q = (v * v) / root_energy
    nz = q > 0
    if not np.any(nz):
        return 0.0
    return float(-np.sum(q[nz] * np.log(q[nz])))


def _packet_levels(a: np.ndarray) -> list[np.ndarray]:
    """Haar packet tree: level j is a (2**j, n / 2**j) coefficient array."""
    levels = [a[None, :]]
    cur = levels[0]
    while cur.shape[1] > 1:
        even = cur[:, 0::2]
        odd = cur[:, 1::2]
        nxt = np.empty((cur.shape[0] * 2, cur.shape[1] // 2))
        nxt[0::2] = (even + odd) / _SQRT2
        nxt[1::2] = (even - odd) / _SQRT2
        levels.append(nxt)
        cur = nxt
    return levels

def _packet_pattern(level: int, node: int) -> np.ndarray:
    """Sign pattern of the packet basis vector, read from the split path."""
    pattern = np.array([1.0])
    for bit in format(node, f"0{level}b") if level else "":
        sign = 1.0 if bit == "0" else -1.0
        pattern = np.concatenate((pattern, sign * pattern)) / _SQRT2
    return pattern


def best_basis_nodes(a: np.ndarray) -> list[tuple[int, int]]:
    """Minimum-entropy packet basis, chosen bottom-up over the full tree.

    A parent is split exactly when its cost exceeds the summed cost of its
    children's best subtrees.  Returns ``(level, node)`` pairs covering the
    signal; node coefficients live in ``_packet_levels(a)[level][node]``.
    """
    levels = _packet_levels(a)
    depth = len(levels) - 1
    root_energy = float(a @ a)
    if root_energy == 0.0:
        raise ValueError("cannot choose a basis for the zero signal")
    cost = [None] * (depth + 1)
    chosen: list[list[list[tuple[int, int]]]] = [None] * (depth + 1)
    cost[depth] = [_entropy_cost(v, root_energy) for v in levels[depth]]
    chosen[depth] = [[(depth, b)] for b in range(levels[depth].shape[0])]
    for j in range(depth - 1, -1, -1):
        cost[j] = []
        chosen[j] = []
        for b, v in enumerate(levels[j]):
            own = _entropy_cost(v, root_energy)
            child = cost[j + 1][2 * b] + cost[j + 1][2 * b + 1]
            if own <= child:
                cost[j].append(own)
                chosen[j].append([(j, b)])
            else:
                cost[j].append(child)
                chosen[j].append(chosen[j + 1][2 * b] + chosen[j + 1][2 * b + 1])
    return chosen[0][0]


def dwpt_components(a: np.ndarray) -> ComponentSet:
    """One component per packet coefficient of the best packet basis."""
    a = np.asarray(a, dtype=float)
    n = a.size
    _required_pow2(n)
    levels = _packet_levels(a)
    nodes = best_basis_nodes(a)
    comps = np.zeros((n, n))
    row = 0
    for j, b in nodes:
        coeffs = levels[j][b]
        width = n // coeffs.size
        pattern = _packet_pattern(j, b)
        for kk, c in enumerate(coeffs):
            comps[row, kk * width:(kk + 1) * width] = c * pattern
            row += 1
    return _energy_sorted(comps, Method.DWPT, float(a @ a))


def emd_components(a: np.ndarray, opts: EMDOptions | None = None) -> ComponentSet:
    """Intrinsic mode functions of ``a`` as components; trend kept as residual."""
    a = np.asarray(a, dtype=float)
    imfs, residual = sift(a, opts)
    if not imfs:
        comps = np.empty((0, a.size))
    else:
        comps = np.vstack(imfs)
    return _energy_sorted(comps, Method.EMD, float(a @ a), residual=residual)


def decompose(a: np.ndarray, method: Method | str,
              emd_opts: EMDOptions | None = None) -> ComponentSet:
    """Mean-centre ``a`` and decompose it with the requested method."""
    method = Method(method)
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("input must be a non-empty 1-d array")
    if not np.all(np.isfinite(a)):
        raise ValueError("input must be finite")
    a = mean_center(a)
    if not np.any(a):
        raise ValueError("signal is constant; nothing to decompose")
    if method is Method.DFT:
        return dft_components(a)
    if method is Method.DWT:
        return dwt_components(a)
    if method is Method.DWPT:
        return dwpt_components(a)
    return emd_components(a, opts=emd_opts)


def select_components(cs: ComponentSet, energy_threshold: float = 0.9) -> ComponentSet:
    """Smallest energy-ranked prefix reaching the cumulative energy target.

    Keeps the fewest leading components whose cumulative energy is at least
    ``energy_threshold`` times the source energy.  If even the full set falls
    short (possible for non-orthogonal decompositions), everything is kept.
    """
    if not 0.0 < energy_threshold <= 1.0:
        raise ValueError("energy_threshold must be in (0, 1]")
    if len(cs) == 0:
        raise ValueError("component set is empty")
    cum = np.cumsum(cs.energies)
    target = energy_threshold * cs.source_energy
    hit = np.nonzero(cum >= target)[0]
    p = int(hit[0]) + 1 if hit.size else len(cs)
    return ComponentSet(
        components=cs.components[:p],
        energies=cs.energies[:p],
        method=cs.method,
        source_energy=cs.source_energy,
        residual=cs.residual,
    )


def normalize_components(cs: ComponentSet) -> BasisMatrix:
    """Scale each retained component to unit norm and stack them as columns."""
    if len(cs) == 0:
        raise ValueError("component set is empty")
    norms = np.sqrt(cs.energies)
    if np.any(norms <= 1e-12):
        raise ValueError("cannot normalize a degenerate (near-zero) component")
    cols = (cs.components / norms[:, None]).T
    return BasisMatrix(
        columns=cols,
        method=cs.method,
        retained_energy_fraction=min(1.0, cs.energy_fraction),
    )
