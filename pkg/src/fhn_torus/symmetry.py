"""Translation symmetry of the torus lattice.

The group is Z_N x Z_N acting by cyclic index shifts: the element
g = (r, s) replaces the cell value at (i, j) with the value previously
held at (i + r, j + s).  The x lattice splits into invariant planes

    V_k = { Re(z * w^(i*k1 + j*k2)) : z complex },   w = exp(2*pi*1j/N)

indexed by k = (k1, k2) with k and -k giving the same plane; g acts on
the complex coordinate of V_k as multiplication by w^(r*k1 + s*k2).
A canonical index set with one representative per plane is produced by
:func:`mode_index_set`.  Full states carry two copies of each plane
(one in the x slots, one in the y slots).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ClassificationError, DimensionMismatchError
from .model import from_grids, infer_n, to_grids, _require_odd_prime

__all__ = [
    "GroupElement",
    "ModeIndex",
    "IsotypicComponent",
    "IsotropySubgroup",
    "SymmetryPrediction",
    "group_elements",
    "act",
    "state_permutation",
    "mode_index_set",
    "canonical_mode",
    "mode_basis",
    "mode_coordinate",
    "embed_pattern",
    "isotypic_component",
    "project_isotypic",
    "fix_modes",
    "fix_projection",
    "isotropy_of",
    "predict_hopf_symmetries",
]

GroupElement = tuple  # (r, s) with entries mod N


def group_elements(n: int) -> list:
    _require_odd_prime(n)
    return [(r, s) for r in range(n) for s in range(n)]


def state_permutation(g, n: int) -> np.ndarray:
    """Index array perm with act(g, z) == z[perm]."""
    _require_odd_prime(n)
    r, s = int(g[0]) % n, int(g[1]) % n
    ii = np.arange(n)
    i_new = np.tile(ii, n)
    j_new = np.repeat(ii, n)
    p_old = ((j_new + s) % n) * n + (i_new + r) % n
    perm = np.empty(2 * n * n, dtype=np.intp)
    perm[0::2] = 2 * p_old
    perm[1::2] = 2 * p_old + 1
    return perm


def act(g, z: np.ndarray, n: int | None = None) -> np.ndarray:
    """Apply the shift g = (r, s) to a flat state.

    The returned state holds at cell (i, j) the old value of cell
    (i + r, j + s); x and y slots move together.  The dtype of z is
    preserved, so complex eigenvectors can be shifted as well.
    """
    z = np.asarray(z)
    if n is None:
        n = infer_n(z)
    return z[state_permutation(g, n)]


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Canonical label (k1, k2) of an invariant plane of the x lattice."""

    k1: int
    k2: int

    @property
    def dim(self) -> int:
        return 1 if (self.k1, self.k2) == (0, 0) else 2

    def as_tuple(self):
        return (self.k1, self.k2)

    def dot(self, g) -> int:
        return self.k1 * g[0] + self.k2 * g[1]


def mode_index_set(n: int) -> list[ModeIndex]:
    """Canonical mode labels, one per invariant plane.

    Families, in order: (0,0); (0,k) and (k,0) and (k,k) for
    1 <= k <= (N-1)/2; (k1,k2) with 1 <= k2 < k1 <= N-1.  Dimensions
    add up to N^2.
    """
    _require_odd_prime(n)
    half = (n - 1) // 2
    out = [ModeIndex(0, 0)]
    out += [ModeIndex(0, k) for k in range(1, half + 1)]
    out += [ModeIndex(k, 0) for k in range(1, half + 1)]
    out += [ModeIndex(k, k) for k in range(1, half + 1)]
    out += [
        ModeIndex(k1, k2) for k1 in range(2, n) for k2 in range(1, k1)
    ]
    return out


def canonical_mode(r: int, s: int, n: int) -> ModeIndex:
    """Canonical representative of the plane containing frequency (r, s)."""
    _require_odd_prime(n)
    r, s = r % n, s % n
    for cand in ((r, s), ((n - r) % n, (n - s) % n)):
        k1, k2 = cand
        if k1 == 0 and k2 == 0:
            return ModeIndex(0, 0)
        if k1 == 0 and 1 <= k2 <= (n - 1) // 2:
            return ModeIndex(k1, k2)
        if k2 == 0 and 1 <= k1 <= (n - 1) // 2:
            return ModeIndex(k1, k2)
        if k1 == k2 and 1 <= k1 <= (n - 1) // 2:
            return ModeIndex(k1, k2)
        if 1 <= k2 < k1 <= n - 1:
            return ModeIndex(k1, k2)
    raise ClassificationError(f"no canonical representative for ({r}, {s}) mod {n}")


def _phase_grid(k: ModeIndex, n: int) -> np.ndarray:
    i = np.arange(1, n + 1)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    return 2.0 * np.pi * (ii * k.k1 + jj * k.k2) / n


def mode_basis(k: ModeIndex, n: int) -> list[np.ndarray]:
    """Orthonormal x-lattice patterns spanning the plane of k.

    Returns the patterns for complex coordinate 1 and -1j (cosine and
    sine); just the constant pattern for k = (0, 0).  Patterns are flat
    length-N^2 arrays in the same order as the x slots of a state.
    """
    _require_odd_prime(n)
    if k.as_tuple() == (0, 0):
        return [np.full(n * n, 1.0 / n)]
    th = _phase_grid(k, n)
    scale = np.sqrt(2.0) / n
    cos_pat = scale * np.cos(th)
    sin_pat = scale * np.sin(th)
    return [cos_pat.T.reshape(-1), sin_pat.T.reshape(-1)]


def mode_coordinate(pattern: np.ndarray, k: ModeIndex, n: int) -> complex:
    """Complex coordinate z of an x-lattice pattern within the plane of k."""
    grid = np.asarray(pattern, dtype=float).reshape(n, n).T
    th = _phase_grid(k, n)
    w = np.exp(-1j * th)
    if k.as_tuple() == (0, 0):
        return complex(np.mean(grid))
    return complex(2.0 * np.sum(grid * w) / (n * n))


def embed_pattern(xpat: np.ndarray, ypat: np.ndarray, n: int) -> np.ndarray:
    """Build a flat state from separate x and y lattice patterns."""
    z = np.zeros(2 * n * n)
    z[0::2] = xpat
    z[1::2] = ypat
    return z


@dataclass(frozen=True)
class IsotypicComponent:
    """The four-dimensional (two for k = 0) piece of state space built
    from two copies of the plane of k, one in x slots and one in y."""

    mode: ModeIndex
    basis: tuple


def isotypic_component(k: ModeIndex, n: int) -> IsotypicComponent:
    pats = mode_basis(k, n)
    zeros = np.zeros(n * n)
    vecs = [embed_pattern(p, zeros, n) for p in pats]
    vecs += [embed_pattern(zeros, p, n) for p in pats]
    return IsotypicComponent(mode=k, basis=tuple(vecs))


def project_isotypic(z: np.ndarray, k: ModeIndex, n: int | None = None) -> np.ndarray:
    """Orthogonal projection of a state onto the isotypic piece of k.

    Uses the 2-D discrete Fourier transform of each lattice half and
    keeps only the frequency bins (k1, k2) and (-k1, -k2).
    """
    if n is None:
        n = infer_n(z)
    x, y = to_grids(z, n)
    mask = np.zeros((n, n))
    mask[k.k1 % n, k.k2 % n] = 1.0
    mask[(-k.k1) % n, (-k.k2) % n] = 1.0

    def filt(g):
        return np.real(np.fft.ifft2(np.fft.fft2(g) * mask))

    return from_grids(filt(x), filt(y))


def fix_modes(g, n: int) -> list[ModeIndex]:
    """Canonical modes whose planes are fixed pointwise by g."""
    _require_odd_prime(n)
    return [k for k in mode_index_set(n) if k.dot(g) % n == 0]


@dataclass(frozen=True)
class IsotropySubgroup:
    """Subgroup descriptor: the full group, a cyclic order-N subgroup
    with a canonical generator, or the trivial group."""

    kind: str  # "full" | "cyclic" | "trivial"
    n: int
    generator: tuple | None = None

    def __post_init__(self):
        _require_odd_prime(self.n)
        if self.kind not in ("full", "cyclic", "trivial"):
            raise ClassificationError(f"unknown subgroup kind {self.kind!r}")
        if self.kind == "cyclic":
            if self.generator is None or tuple(self.generator) == (0, 0):
                raise ClassificationError("cyclic subgroup needs a nonzero generator")

    @staticmethod
    def full(n: int) -> "IsotropySubgroup":
        return IsotropySubgroup("full", n)

    @staticmethod
    def trivial(n: int) -> "IsotropySubgroup":
        return IsotropySubgroup("trivial", n)

    @staticmethod
    def cyclic(g, n: int) -> "IsotropySubgroup":
        r, s = int(g[0]) % n, int(g[1]) % n
        if (r, s) == (0, 0):
            raise ClassificationError("cyclic subgroup needs a nonzero generator")
        gen = min(((m * r) % n, (m * s) % n) for m in range(1, n))
        return IsotropySubgroup("cyclic", n, gen)

    def elements(self) -> list:
        if self.kind == "full":
            return group_elements(self.n)
        if self.kind == "trivial":
            return [(0, 0)]
        r, s = self.generator
        return [((m * r) % self.n, (m * s) % self.n) for m in range(self.n)]

    def order(self) -> int:
        return {"full": self.n * self.n, "cyclic": self.n, "trivial": 1}[self.kind]

    def contains(self, g) -> bool:
        gg = (int(g[0]) % self.n, int(g[1]) % self.n)
        return gg in set(self.elements())

    def label(self) -> str:
        if self.kind == "full":
            return "Gamma"
        if self.kind == "trivial":
            return "1"
        return f"Z({self.generator[0]},{self.generator[1]})"


def fix_projection(z: np.ndarray, sub: IsotropySubgroup) -> np.ndarray:
    """Orthogonal projection onto the fixed-point space of a subgroup,
    computed as the average of the state over the subgroup orbit."""
    n = sub.n
    acc = np.zeros_like(np.asarray(z, dtype=float))
    for g in sub.elements():
        acc += act(g, z, n)
    return acc / sub.order()


def isotropy_of(z: np.ndarray, tol: float = 1e-9) -> IsotropySubgroup:
    """Largest subgroup fixing the state to relative tolerance tol."""
    n = infer_n(z)
    z = np.asarray(z, dtype=float)
    scale = max(1.0, float(np.max(np.abs(z))))
    fixers = {
        g
        for g in group_elements(n)
        if float(np.max(np.abs(act(g, z, n) - z))) <= tol * scale
    }
    if len(fixers) == n * n:
        return IsotropySubgroup.full(n)
    for g in sorted(fixers):
        if g == (0, 0):
            continue
        sub = IsotropySubgroup.cyclic(g, n)
        if set(sub.elements()) <= fixers:
            return sub
    return IsotropySubgroup.trivial(n)


@dataclass(frozen=True)
class SymmetryPrediction:
    """Predicted spatio-temporal symmetry of a bifurcating orbit.

    ``spatial`` (often called H) maps the orbit to itself up to a time
    shift; ``fixing`` (K) fixes it pointwise.  ``phases`` gives the time
    shift of each generator of ``spatial`` as a fraction of the period.
    """

    spatial: IsotropySubgroup
    fixing: IsotropySubgroup
    phases: dict = field(default_factory=dict)


def _perp_generator(k: ModeIndex, n: int) -> tuple:
    return ((n - k.k2) % n, k.k1 % n)


def predict_hopf_symmetries(
    equilibrium_isotropy: IsotropySubgroup,
    center_mode: ModeIndex,
    n: int | None = None,
) -> SymmetryPrediction:
    """Spatio-temporal symmetries forced by a simple Hopf bifurcation.

    Parameters
    ----------
    equilibrium_isotropy : IsotropySubgroup
        Isotropy of the equilibrium undergoing the bifurcation.
    center_mode : ModeIndex
        Canonical mode carrying the critical eigenvalue pair.
    n : int, optional
        Lattice side; defaults to the subgroup's.

    Returns
    -------
    SymmetryPrediction
        The predicted time shifts are those of the wave rotating with
        the canonical exponent k; the mirror-image wave (exponent N-k,
        the same plane) realizes the complementary shifts.  The fixing
        subgroup is the same for both.
    """
    H = equilibrium_isotropy
    if n is None:
        n = H.n
    if H.n != n:
        raise ClassificationError("subgroup and lattice sizes disagree")
    k = canonical_mode(center_mode.k1, center_mode.k2, n)
    if k != center_mode:
        raise ClassificationError(
            f"center mode {center_mode.as_tuple()} is not canonical for n={n}"
        )

    if H.kind == "full":
        if k.as_tuple() == (0, 0):
            return SymmetryPrediction(
                spatial=H,
                fixing=H,
                phases={(1, 0): Fraction(0), (0, 1): Fraction(0)},
            )
        K = IsotropySubgroup.cyclic(_perp_generator(k, n), n)
        phases = {
            (1, 0): Fraction(k.k1 % n, n),
            (0, 1): Fraction(k.k2 % n, n),
        }
        return SymmetryPrediction(spatial=H, fixing=K, phases=phases)

    if H.kind == "trivial":
        return SymmetryPrediction(spatial=H, fixing=H, phases={})

    g = H.generator
    if k.dot(g) % n == 0:
        return SymmetryPrediction(spatial=H, fixing=H, phases={g: Fraction(0)})
    return SymmetryPrediction(
        spatial=H,
        fixing=IsotropySubgroup.trivial(n),
        phases={g: Fraction(k.dot(g) % n, n)},
    )
