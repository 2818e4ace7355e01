"""Series solver for u'' + a(x) u = f(x) on [0, x1] with u(0) = alpha, u'(x1) = beta."""

import sys

from ._sbvp import *  # noqa: F401,F403
from ._sbvp import cli_main, fundamental_system, make_grid, sample, solve_problem_d


def solve(a, f, x1, alpha=0.0, beta=0.0, n=1024, tol=1e-10):
    """Sample a and f on a uniform grid, sum the series and solve the boundary value problem."""
    grid = make_grid(x1, n)
    sol = fundamental_system(sample(a, grid), sample(f, grid), tol=tol)
    return sol, solve_problem_d(sol, alpha, beta)


def main():
    code, out, err = cli_main(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
