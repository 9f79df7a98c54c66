"""Sawtooth schedule of the infeasibility penalty factor alpha."""
from dataclasses import dataclass, field


def step_size(alpha_min: float, alpha_max: float, beta: float, n: int) -> float:
    """Increment that takes alpha from its minimum to its maximum in about beta*n steps."""
    if not alpha_max > alpha_min:
        raise ValueError("alpha_max must exceed alpha_min")
    if beta <= 0 or n < 1:
        raise ValueError("beta and n must be positive")
    return (alpha_max - alpha_min) / (beta * n)


@dataclass
class PenaltySchedule:
    alpha_min: float
    alpha_max: float
    beta: float
    n: int
    alpha: float = field(init=False)
    alpha_step: float = field(init=False)

    def __post_init__(self):
        self.alpha_step = step_size(self.alpha_min, self.alpha_max, self.beta, self.n)
        self.alpha = self.alpha_min

    def advance(self) -> float:
        # no clamping: alpha may overshoot alpha_max by less than one step
        if self.alpha < self.alpha_max:
            self.alpha += self.alpha_step
        else:
            self.alpha = self.alpha_min
        return self.alpha

    def reset(self) -> None:
        self.alpha = self.alpha_min
