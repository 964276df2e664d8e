"""Platform descriptors: a serializable name for one of the three group families."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .cyclic import CyclicTripleGroup
from .errors import ConfigError
from .group import Group
from .heisenberg import HeisenbergGroup
from .numtheory import find_qnr, is_prime
from .quaternion import QuaternionGroup, QuatParams, precision_for

FAMILIES = ("heisenberg", "cyclic-triple", "quaternion")


@dataclass(frozen=True)
class PlatformDescriptor:
    family: str
    p: int
    m: Optional[int] = None  # heisenberg
    alpha: Optional[int] = None  # cyclic-triple, quaternion
    n: Optional[int] = None  # quaternion class
    t: Optional[int] = None  # quaternion nonresidue
    N: Optional[int] = None  # quaternion precision

    @classmethod
    def heisenberg(cls, p: int, m: int = 1) -> PlatformDescriptor:
        return cls("heisenberg", p, m=m).validated()

    @classmethod
    def cyclic_triple(cls, p: int, alpha: int = 1) -> PlatformDescriptor:
        return cls("cyclic-triple", p, alpha=alpha).validated()

    @classmethod
    def quaternion(
        cls, p: int, alpha: int, n: int, t: Optional[int] = None, N: Optional[int] = None
    ) -> PlatformDescriptor:
        return cls("quaternion", p, alpha=alpha, n=n, t=t, N=N).validated()

    def validated(self) -> PlatformDescriptor:
        """Fill defaults and check the family preconditions."""
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown platform family {self.family!r}")
        p = self.p
        if p < 3 or not is_prime(p):
            raise ConfigError(f"p must be an odd prime, got {p}")
        if self.family == "heisenberg":
            m = 1 if self.m is None else self.m
            if m < 1:
                raise ConfigError(f"m must be positive, got {m}")
            return PlatformDescriptor("heisenberg", p, m=m)
        alpha = 1 if self.alpha is None else self.alpha
        if alpha < 1:
            raise ConfigError(f"alpha must be positive, got {alpha}")
        if self.family == "cyclic-triple":
            return PlatformDescriptor("cyclic-triple", p, alpha=alpha)
        if p <= 3:
            raise ConfigError("quaternion platform needs p > 3")
        n = 2 if self.n is None else self.n
        if n < 1:
            raise ConfigError(f"n must be positive, got {n}")
        t = find_qnr(p).value if self.t is None else self.t
        N = precision_for(n, alpha) if self.N is None else self.N
        if N < precision_for(n, alpha):
            raise ConfigError(f"precision N={N} below the required {precision_for(n, alpha)}")
        try:
            QuatParams(p, t, N, alpha, n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return PlatformDescriptor("quaternion", p, alpha=alpha, n=n, t=t, N=N)

    @property
    def key_alpha(self) -> int:
        """Exponent alpha with |c| = p^alpha for a well-chosen instance."""
        return 1 if self.family == "heisenberg" else self.alpha

    @property
    def max_class(self) -> Optional[int]:
        """Largest supported class n (None means unbounded, as for quaternion quotients)."""
        return None if self.family == "quaternion" else 2

    def quat_params(self) -> QuatParams:
        return QuatParams(self.p, self.t, self.N, self.alpha, self.n)

    def make_group(self) -> Group:
        if self.family == "heisenberg":
            return HeisenbergGroup(self.p, self.m)
        if self.family == "cyclic-triple":
            return CyclicTripleGroup(self.p, self.alpha)
        P = self.quat_params()
        return QuaternionGroup(P, level=P.quotient_level)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> PlatformDescriptor:
        try:
            return cls(**data).validated()
        except TypeError as exc:
            raise ConfigError(f"bad platform descriptor: {exc}") from exc
