"""Random integrands from the closed-form fragment, as parser text."""
import random
from fractions import Fraction


def _q(rng: random.Random, lo=-4, hi=4, nonzero=True) -> str:
    while True:
        value = Fraction(rng.randint(lo * 3, hi * 3), rng.choice([1, 2, 3]))
        if value or not nonzero:
            return f"({value})"


def _pos(rng: random.Random) -> str:
    """A positive constant, sometimes a series."""
    return rng.choice([f"({rng.randint(1, 5)})", "t", "(1 + t)", "t^2", f"({rng.randint(1, 4)} + t)"])


def _poly(rng, degree=3) -> str:
    coeffs = [rng.choice([_q(rng, nonzero=False), "t", "(2 - t)", "X"]) for _ in range(degree + 1)]
    return " + ".join(f"{c}*x^{k}" for k, c in enumerate(coeffs))


TEMPLATES = [
    lambda r: _poly(r, r.randint(0, 3)),
    lambda r: f"{_q(r)}/(x + {_pos(r)})",
    lambda r: f"{_q(r)}/(x^2 + {_pos(r)}^2)",
    lambda r: f"({_q(r)}*x + {_q(r)})/(x^2 + {_pos(r)})",
    lambda r: f"1/((x + {r.randint(1, 3)})*(x + {r.randint(4, 6)} + t))",
    lambda r: f"sqrt(x^2 + {_pos(r)})",
    lambda r: f"x*sqrt({_pos(r)} - x^2)",
    lambda r: f"1/sqrt({_pos(r)}^2 - x^2)",
    lambda r: f"x^({Fraction(r.choice([-2, -1, 1, 2, 4]), 3)})",
    lambda r: f"x^{r.randint(0, 3)}*log(x)",
    lambda r: f"arctan({_q(r)}*x)",
    lambda r: f"X*({_poly(r, 2)})",
    lambda r: f"abs(x - {_q(r)})",
    lambda r: f"log(x)/x",
    lambda r: f"{_q(r)}*x/(x^2 + {_pos(r)})^2",
]


def random_fragment(rng: random.Random, summands: int = 1) -> list:
    """Texts of ``summands`` random integrands; their sum is also in the fragment."""
    return [rng.choice(TEMPLATES)(rng) for _ in range(summands)]
