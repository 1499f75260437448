from __future__ import annotations

from dataclasses import dataclass

ALGORITHMS = ("2ps-l", "2ps-hdrf", "hdrf", "dbh")


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class RunConfig:
    k: int
    alpha: float = 1.05
    passes: int = 1
    cap_factor: float = 1.0
    algorithm: str = "2ps-l"
    lam: float = 1.1
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 2:
            raise ConfigError("k", f"must be an integer >= 2, got {self.k!r}")
        if not self.alpha >= 1.0:
            raise ConfigError("alpha", f"must be >= 1, got {self.alpha!r}")
        if not isinstance(self.passes, int) or self.passes < 1:
            raise ConfigError("passes", f"must be an integer >= 1, got {self.passes!r}")
        if not self.cap_factor > 0:
            raise ConfigError("cap_factor", f"must be > 0, got {self.cap_factor!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError("algorithm", f"must be one of {', '.join(ALGORITHMS)}")
        if not self.lam >= 0:
            raise ConfigError("lambda", f"must be >= 0, got {self.lam!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed", f"must be a non-negative integer, got {self.seed!r}")
