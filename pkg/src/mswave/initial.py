"""Initial-condition library."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

KINDS = ("sine", "multisine", "bump", "fourier")


@dataclass(frozen=True)
class InitialCondition:
    """Recipe for u0 on the unit period.

    * ``sine``: amplitude * sin(2 pi mode x)
    * ``multisine``: sum of c cos(2 pi m x) + s sin(2 pi m x) over
      ``coefficients`` = [(m, c, s), ...]
    * ``bump``: amplitude * sum_{j=-3..3} exp(-((x - 0.5 + j)/width)^2), mean removed
    * ``fourier``: like multisine; when ``coefficients`` is empty, ``modes``
      random low modes are drawn from ``seed`` with coefficients uniform in
      [-amplitude, amplitude]
    """

    kind: str
    amplitude: float = 0.0
    mode: int = 1
    coefficients: tuple = field(default_factory=tuple)
    width: float = 0.05
    modes: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"ic.kind must be one of {KINDS}, got {self.kind!r}")
        if not np.isfinite(self.amplitude):
            raise ConfigError(f"ic.amplitude must be finite, got {self.amplitude}")
        if self.kind == "sine" and (not isinstance(self.mode, int) or self.mode < 1):
            raise ConfigError(f"ic.mode must be a positive integer, got {self.mode!r}")
        if self.kind == "bump" and not self.width > 0:
            raise ConfigError(f"ic.width must be positive, got {self.width}")
        if self.kind == "multisine" and not self.coefficients:
            raise ConfigError("ic.coefficients must be non-empty for kind 'multisine'")
        if self.kind == "fourier" and not self.coefficients and self.modes < 1:
            raise ConfigError(f"ic.modes must be >= 1, got {self.modes}")
        coeffs = []
        for entry in self.coefficients:
            try:
                m, c, s = entry
            except (TypeError, ValueError):
                raise ConfigError(f"ic.coefficients entries must be (mode, cos, sin), got {entry!r}") from None
            if int(m) != m or m < 1:
                raise ConfigError(f"ic.coefficients mode must be a positive integer, got {m!r}")
            coeffs.append((int(m), float(c), float(s)))
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def terms(self):
        if self.kind != "fourier" or self.coefficients:
            return self.coefficients
        rng = np.random.default_rng(self.seed)
        cs = rng.uniform(-self.amplitude, self.amplitude, size=(self.modes, 2))
        return tuple((m + 1, float(c), float(s)) for m, (c, s) in enumerate(cs))

    def field(self, grid):
        x = grid.nodes
        if self.kind == "sine":
            return self.amplitude * np.sin(2 * np.pi * self.mode * x)
        if self.kind == "bump":
            u = self.amplitude * sum(np.exp(-(((x - 0.5 + j) / self.width) ** 2)) for j in range(-3, 4))
            return u - u.mean()
        u = np.zeros(grid.n)
        for m, c, s in self.terms():
            if m >= grid.n // 2:
                raise ConfigError(f"mode {m} is not resolvable on a grid of {grid.n} nodes")
            u += c * np.cos(2 * np.pi * m * x) + s * np.sin(2 * np.pi * m * x)
        return u

    def as_dict(self):
        d = {"kind": self.kind, "amplitude": self.amplitude, "mode": self.mode,
             "coefficients": [list(t) for t in self.coefficients], "width": self.width,
             "modes": self.modes, "seed": self.seed}
        return d
