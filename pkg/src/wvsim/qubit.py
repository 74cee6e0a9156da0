"""Single-qubit states, density matrices, and the AAV weak value.

Conventions used throughout the package:

* the measured observable is sigma_z with eigenvalue +1 on ``|up>`` and
  -1 on ``|down>``;
* inner products conjugate the bra side, ``<phi|psi> = conj(a)*alpha +
  conj(b)*beta`` for ``phi = (a, b)`` and ``psi = (alpha, beta)``;
* global phase is never canonicalized -- every derived statistic is
  phase invariant.

All types are immutable and all functions are pure, so everything here
is safe to share across threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import InitVar, dataclass

from .errors import OverlapTooSmall

SPIN_UP = +1
SPIN_DOWN = -1

#: Default floor on |<post|pre>|^2 below which the AAV weak value is
#: treated as divergent rather than merely large.
OVERLAP_FLOOR = 1e-14

_NORM_TOL = 1e-12
_POSITIVITY_TOL = 1e-12
_PURITY_TOL = 1e-10


def _require_finite(z: complex, what: str) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{what} must be finite, got {z!r}")


@dataclass(frozen=True)
class PureQubitState:
    """Normalized spin-1/2 state ``up|up> + down|down>``.

    With ``normalize=True`` the amplitudes are rescaled to unit norm;
    otherwise construction rejects states whose squared norm deviates
    from 1 by more than 1e-12.
    """

    up: complex
    down: complex
    normalize: InitVar[bool] = False

    def __post_init__(self, normalize: bool) -> None:
        up = complex(self.up)
        down = complex(self.down)
        _require_finite(up, "amplitude")
        _require_finite(down, "amplitude")
        norm_sq = abs(up) ** 2 + abs(down) ** 2
        if normalize:
            if norm_sq <= 0.0:
                raise ValueError("cannot normalize the zero state")
            scale = math.sqrt(norm_sq)
            up /= scale
            down /= scale
        elif abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(
                f"state not normalized: |up|^2 + |down|^2 = {norm_sq!r}"
            )
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)


def make_state(theta: float, phi: float) -> PureQubitState:
    """Bloch-angle constructor: ``(cos(theta/2), e^{i phi} sin(theta/2))``.

    ``theta`` must lie in [0, pi] and ``phi`` in [-pi, pi].
    """
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"theta must be in [0, pi], got {theta}")
    if not (-math.pi <= phi <= math.pi):
        raise ValueError(f"phi must be in [-pi, pi], got {phi}")
    return PureQubitState(
        math.cos(theta / 2.0),
        cmath.exp(1j * phi) * math.sin(theta / 2.0),
    )


def braket(post: PureQubitState, pre: PureQubitState) -> complex:
    """Inner product ``<post|pre>``."""
    return post.up.conjugate() * pre.up + post.down.conjugate() * pre.down


@dataclass(frozen=True)
class QubitDensityMatrix:
    """2x2 Hermitian trace-1 matrix stored as (``p_up``, ``coh``).

    ``p_up`` is the up-up element, ``coh`` the up-down element; the
    remaining elements follow from hermiticity and unit trace.
    """

    p_up: float
    coh: complex = 0.0

    def __post_init__(self) -> None:
        p = float(self.p_up)
        c = complex(self.coh)
        if not math.isfinite(p):
            raise ValueError("p_up must be finite")
        _require_finite(c, "coherence")
        if p < -_POSITIVITY_TOL or p > 1.0 + _POSITIVITY_TOL:
            raise ValueError(f"p_up must lie in [0, 1], got {p}")
        p = min(max(p, 0.0), 1.0)
        if abs(c) ** 2 > p * (1.0 - p) + _POSITIVITY_TOL:
            raise ValueError(
                f"positivity violated: |coh|^2 = {abs(c)**2!r} exceeds "
                f"p_up*(1-p_up) = {p * (1.0 - p)!r}"
            )
        object.__setattr__(self, "p_up", p)
        object.__setattr__(self, "coh", c)

    @property
    def p_down(self) -> float:
        return 1.0 - self.p_up

    @property
    def is_pure(self) -> bool:
        """True iff |coh|^2 equals p_up*(1-p_up) within 1e-10."""
        return abs(abs(self.coh) ** 2 - self.p_up * self.p_down) <= _PURITY_TOL

    @property
    def is_diagonal(self) -> bool:
        return self.coh == 0.0

    def as_matrix(self):
        """Return the full 2x2 complex matrix (numpy array)."""
        import numpy as np

        return np.array(
            [[self.p_up, self.coh], [self.coh.conjugate(), self.p_down]],
            dtype=complex,
        )


def density_of(state: PureQubitState) -> QubitDensityMatrix:
    """Projector ``|state><state|`` in (p_up, coh) form."""
    return QubitDensityMatrix(
        abs(state.up) ** 2, state.up * state.down.conjugate()
    )


def aav_weak_value(
    pre: PureQubitState,
    post: PureQubitState,
    overlap_floor: float = OVERLAP_FLOOR,
) -> complex:
    """AAV weak value ``<post|sigma_z|pre> / <post|pre>``.

    Raises :class:`OverlapTooSmall` when the squared overlap drops below
    ``overlap_floor``, the regime in which the ratio diverges.
    """
    denom = braket(post, pre)
    if abs(denom) ** 2 <= overlap_floor:
        raise OverlapTooSmall(
            f"|<post|pre>|^2 = {abs(denom)**2!r} <= floor {overlap_floor!r}"
        )
    numer = (
        post.up.conjugate() * pre.up - post.down.conjugate() * pre.down
    )
    return numer / denom
