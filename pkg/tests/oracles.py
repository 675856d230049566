"""Brute-force reference implementations used as independent oracles.

These deliberately avoid the package's closed forms: everything is a
plain year-by-year loop so a bug in the library cannot hide in its own
oracle.
"""


def pv_loop(values, rate, include_year_zero):
    total = 0.0
    for t, v in enumerate(values):
        if t == 0 and not include_year_zero:
            continue
        total += v / (1.0 + rate) ** t
    return total


def annuity_factor_loop(rate, years):
    # The annuity factor is the payment spreading one present dollar over
    # the horizon, i.e. the reciprocal of the discounted unit stream.
    unit_stream = pv_loop([0.0] + [1.0] * years, rate, include_year_zero=True)
    return 1.0 / unit_stream


def lcoe_loop(costs, energies, rate, include_year_zero):
    return pv_loop(costs, rate, include_year_zero) / pv_loop(
        energies, rate, include_year_zero
    )


def pv_module_lcoe_loop(capital, yearly_costs, rated_kwh, degradation, rate, include_year_zero):
    energy = [rated_kwh * (1.0 - degradation) ** t for t in range(len(yearly_costs))]
    return (capital + pv_loop(yearly_costs, rate, include_year_zero)) / pv_loop(
        energy, rate, include_year_zero
    )


def lcos_loop(capital, yearly_costs, energies, rate, include_year_zero):
    return (capital + pv_loop(yearly_costs, rate, include_year_zero)) / pv_loop(
        energies, rate, include_year_zero
    )
