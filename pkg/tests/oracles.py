"""Independent reference computations used to derive and check expected values.

Nothing here imports the package under test. Queueing oracles use exact
rational arithmetic with explicit factorials; reliability oracles enumerate
every up/down state of every VNF instance.
"""

import itertools
import math
from fractions import Fraction


def erlang_c_exact(m, a):
    """Probability of waiting in M/M/m, textbook factorial form, exact for rational a."""
    a = Fraction(a)
    head = sum(a**i / math.factorial(i) for i in range(m))
    tail = a**m / (math.factorial(m) * (1 - a / m))
    return tail / (head + tail)


def mmc_sojourn_exact(lam, mu_server, c):
    """Mean sojourn in M/M/c: W = C / (c mu - lam) + 1 / mu, per-server rate mu."""
    lam, mu_server = Fraction(lam), Fraction(mu_server)
    C = erlang_c_exact(c, lam / mu_server)
    return C / (c * mu_server - lam) + 1 / mu_server


def mmm_chain_response_exact(lam, mus, l):
    # each VNF split into l servers of rate mu / l sharing one queue
    return sum(mmc_sojourn_exact(lam, Fraction(mu) / l, l) for mu in mus)


def mm1_chain_response_exact(lam, mus, l=1):
    # l independent subchains each fed lam / l with rates mu / l
    lam = Fraction(lam)
    return sum(1 / (Fraction(mu) / l - lam / l) for mu in mus)


def enumerate_availability(ps, kind, count=1):
    """Exact availability by summing over all 2**instances states.

    kind: "SC", "SCB" (count = b backups), "MM1" (count = l subchains),
    "MMm" (count = l instances per stage). ps may hold Fractions.
    """
    n = len(ps)
    copies = {"SC": 1, "SCB": count + 1, "MM1": count, "MMm": count}[kind]
    total = 0
    for state in itertools.product((0, 1), repeat=n * copies):
        prob = 1
        for idx, up in enumerate(state):
            p = ps[idx % n]
            prob *= p if up else (1 - p)
        grid = [state[k * n:(k + 1) * n] for k in range(copies)]  # grid[copy][stage]
        if kind == "MM1":
            ok = any(all(row) for row in grid)
        else:
            ok = all(any(grid[k][j] for k in range(copies)) for j in range(n))
        if ok:
            total += prob
    return total


def linear_scan_mm1(lam, mus, sla, l_max):
    """Largest l with l * sum 1/(mu - lam) <= sla, by trying every l."""
    best = None
    for l in range(1, l_max + 1):
        if mm1_chain_response_exact(lam, mus, l) <= Fraction(sla):
            best = l
    return best


def mmm_chain_response_grid(lam, mus, l_max):
    """E(l) for l = 1..l_max at once, in float.

    Erlang C comes from the Poisson form B = pmf(m; a) / cdf(m; a),
    C = B / (1 - rho (1 - B)), a different route from a recurrence.
    """
    import numpy as np
    from scipy.stats import poisson

    ls = np.arange(1, l_max + 1)
    total = np.zeros(l_max)
    for mu in mus:
        rho = lam / mu
        b = poisson.pmf(ls, ls * rho) / poisson.cdf(ls, ls * rho)
        c = b / (1 - rho * (1 - b))
        total += (ls / mu) * (1 + c / (ls * (1 - rho)))
    return total


def scan_largest(values, sla, strict):
    """Largest 1-based index whose value meets the SLA, looking at every entry."""
    best = None
    for i, v in enumerate(values, start=1):
        if (v < sla) if strict else (v <= sla):
            best = i
    return best
