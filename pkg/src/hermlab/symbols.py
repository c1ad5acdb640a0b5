"""Spectral symbols m evaluated on the Hermite eigenvalues 2k + d."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import SymbolDomainError

__all__ = ["SpectralSymbol", "eigenvalues"]

_FAMILIES = ("constant", "oscillatory", "schrodinger", "wave", "power", "table", "callable")


def eigenvalues(d: int, N: int) -> np.ndarray:
    """Hermite eigenvalues 2k + d for k = 0..N."""
    return 2.0 * np.arange(N + 1) + d


@dataclass(frozen=True)
class SpectralSymbol:
    """A rule lam -> m(lam) applied to the eigenvalues of the Hermite operator.

    Use the family constructors rather than the raw initializer::

        SpectralSymbol.oscillatory(beta=2.0, gamma=1.0)   # exp(i lam^gamma) / lam^beta
        SpectralSymbol.schrodinger(t)                      # exp(i t lam)
        SpectralSymbol.wave(t)                             # sin(t sqrt(lam)) / sqrt(lam)
    """

    family: str
    params: Mapping = field(default_factory=dict)
    func: Callable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown symbol family {self.family!r}")
        if self.family == "oscillatory":
            if not (self.params["beta"] > 0 and self.params["gamma"] > 0):
                raise ValueError("oscillatory symbol needs beta > 0 and gamma > 0")
        if self.family == "callable" and self.func is None:
            raise ValueError("callable symbol needs a function")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value: complex = 1.0) -> "SpectralSymbol":
        return cls("constant", {"value": complex(value)})

    @classmethod
    def oscillatory(cls, beta: float, gamma: float) -> "SpectralSymbol":
        return cls("oscillatory", {"beta": float(beta), "gamma": float(gamma)})

    @classmethod
    def schrodinger(cls, t: float) -> "SpectralSymbol":
        return cls("schrodinger", {"t": float(t)})

    @classmethod
    def wave(cls, t: float) -> "SpectralSymbol":
        return cls("wave", {"t": float(t)})

    @classmethod
    def power(cls, s: float) -> "SpectralSymbol":
        """lam -> lam**s; ``power(1)`` is the Hermite operator itself."""
        return cls("power", {"s": float(s)})

    @classmethod
    def table(cls, weights: Mapping[float, complex]) -> "SpectralSymbol":
        return cls("table", {"weights": {float(k): complex(v) for k, v in weights.items()}})

    @classmethod
    def from_callable(cls, func: Callable, name: str = "callable") -> "SpectralSymbol":
        return cls("callable", {"name": name}, func)

    # -- evaluation -------------------------------------------------------

    def __call__(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        p = self.params
        fam = self.family
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if fam == "constant":
                out = np.full(lam.shape, p["value"], dtype=complex)
            elif fam == "oscillatory":
                out = np.exp(1j * lam ** p["gamma"]) / lam ** p["beta"]
            elif fam == "schrodinger":
                out = np.exp(1j * p["t"] * lam)
            elif fam == "wave":
                root = np.sqrt(lam)
                out = np.sin(p["t"] * root) / root
            elif fam == "power":
                out = lam ** p["s"]
            elif fam == "table":
                w = p["weights"]
                out = np.array([w.get(float(v), np.nan) for v in lam.ravel()], dtype=complex)
                out = out.reshape(lam.shape)
            else:
                try:
                    out = self.func(lam)
                except Exception as exc:  # user callables may fail anywhere
                    raise SymbolDomainError(f"symbol could not be evaluated: {exc}") from exc
        return np.asarray(out, dtype=complex)

    def on_levels(self, d: int, N: int) -> np.ndarray:
        """m(2k + d) for k = 0..N; raises if any value is not finite."""
        vals = self(eigenvalues(d, N))
        bad = ~np.isfinite(vals)
        if bad.any():
            k = int(np.argmax(bad))
            raise SymbolDomainError(
                f"symbol {self.family} is not finite at eigenvalue {2 * k + d}"
            )
        return vals

    def __mul__(self, other: "SpectralSymbol") -> "SpectralSymbol":
        if not isinstance(other, SpectralSymbol):
            return NotImplemented
        return SpectralSymbol.from_callable(
            lambda lam: self(lam) * other(lam), name=f"({self.family})*({other.family})"
        )

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        fam = self.family
        p = self.params
        if fam == "constant":
            v = p["value"]
            return {"family": fam, "re": v.real, "im": v.imag}
        if fam == "oscillatory":
            return {"family": fam, "beta": p["beta"], "gamma": p["gamma"]}
        if fam in ("schrodinger", "wave"):
            return {"family": fam, "t": p["t"]}
        if fam == "power":
            return {"family": fam, "s": p["s"]}
        if fam == "table":
            pairs = [[k, v.real, v.imag] for k, v in sorted(p["weights"].items())]
            return {"family": fam, "pairs": pairs}
        raise TypeError("callable symbols cannot be serialized")

    @classmethod
    def from_json(cls, obj: Mapping) -> "SpectralSymbol":
        fam = obj.get("family")
        if fam == "constant":
            return cls.constant(complex(obj.get("re", 1.0), obj.get("im", 0.0)))
        if fam == "oscillatory":
            return cls.oscillatory(obj["beta"], obj["gamma"])
        if fam == "schrodinger":
            return cls.schrodinger(obj["t"])
        if fam == "wave":
            return cls.wave(obj["t"])
        if fam == "power":
            return cls.power(obj["s"])
        if fam == "table":
            return cls.table({k: complex(re, im) for k, re, im in obj["pairs"]})
        raise ValueError(f"cannot deserialize symbol family {fam!r}")
