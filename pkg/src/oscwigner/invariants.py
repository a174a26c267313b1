"""Canonicalization of quadratic Hermitian invariants.

The general quadratic invariant is parametrized by (A, B, D, E) with A, D
complex and B, E real:

    I = A/2 a'^2 + B/2 (a'a + aa') + A*/2 a^2 + D a' + D* a + E,

(a' denoting the creation operator of the reference basis).  Choosing the
Bogoliubov pair that kills the a'^2 term reduces it to the canonical
number-operator form with energy scale hbar*omega0, linear coefficient
delta and constant epsilon = E + hbar*omega0/2.  Everything here is pure
coefficient arithmetic; no operator algebra is materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import HyperbolicInvariantError, InvariantError, OrientationError
from .modes import BogoliubovPair


@dataclass(frozen=True)
class QuadraticInvariant:
    """Coefficients of the general quadratic Hermitian invariant."""

    A: complex
    B: float
    D: complex
    E: float

    def __post_init__(self):
        if isinstance(self.B, complex) or isinstance(self.E, complex):
            raise InvariantError("B and E must be real")

    @property
    def elliptic(self) -> bool:
        return self.B * self.B > abs(self.A) ** 2


@dataclass(frozen=True)
class CanonicalInvariant:
    """Canonical form data plus the Bogoliubov choice that produced it."""

    hbar_omega0: float
    delta: complex
    epsilon: float
    pair: BogoliubovPair

    @property
    def displacement(self) -> complex:
        """Displacement z = -delta / (hbar omega0) of the thermal state."""
        return -self.delta / self.hbar_omega0


def canonicalize(inv: QuadraticInvariant) -> CanonicalInvariant:
    """Reduce (A, B, D, E) to canonical number-operator form.

    Solves A + 2 B r + A* r^2 = 0 for r = nu/mu*, keeps the root with
    |r| < 1 (the roots have reciprocal moduli), and fixes the gauge with
    mu real positive, mu = 1/sqrt(1 - |r|^2).  Then

        hbar omega0 = A mu* nu* + B (|mu|^2 + |nu|^2) + A* mu nu,
        delta       = D mu* + D* nu,
        epsilon     = E + hbar omega0 / 2.
    """
    a = complex(inv.A)
    b = float(inv.B)
    if b < 0:
        raise OrientationError(
            f"B = {b:g} < 0: negative-temperature orientation; negate the "
            "invariant to obtain a bounded thermal state")
    if not inv.elliptic:
        raise HyperbolicInvariantError(
            f"B^2 = {b * b:g} <= |A|^2 = {abs(a) ** 2:g}: hyperbolic "
            "invariant, no normalizable thermal state exists")
    if a == 0:
        r = 0.0 + 0.0j
    else:
        s = math.sqrt(b * b - abs(a) ** 2)
        r = (-b + s) / a.conjugate()
    r2 = abs(r) ** 2
    mu = 1.0 / math.sqrt(1.0 - r2)
    nu = r * mu
    pair = BogoliubovPair(mu, nu)
    hw_c = (a * mu * nu.conjugate() + b * (mu * mu + abs(nu) ** 2)
            + a.conjugate() * mu * nu)
    if abs(hw_c.imag) > 1e-12 * max(1.0, abs(hw_c.real)):
        raise InvariantError(
            f"canonical energy scale not real: {hw_c:g} (ill-conditioned input)")
    hw = hw_c.real
    if hw <= 0:
        raise InvariantError(f"canonical energy scale not positive: {hw:g}")
    delta = complex(inv.D) * mu + complex(inv.D).conjugate() * nu
    return CanonicalInvariant(hw, delta, float(inv.E) + 0.5 * hw, pair)


def recompose(canon: CanonicalInvariant) -> QuadraticInvariant:
    """Inverse substitution: rebuild (A, B, D, E) from canonical data.

    Used as the round-trip certificate of :func:`canonicalize`.
    """
    mu, nu = canon.pair.mu, canon.pair.nu
    hw = canon.hbar_omega0
    a = -2.0 * hw * mu * nu
    b = hw * (abs(mu) ** 2 + abs(nu) ** 2)
    d = canon.delta * mu - canon.delta.conjugate() * nu
    e = canon.epsilon - 0.5 * hw
    return QuadraticInvariant(complex(a), float(b), complex(d), float(e))
