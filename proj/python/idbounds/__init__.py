"""Deviation bounds for infinitely divisible laws and their Monte Carlo checks."""

from ._idbounds import (  # noqa: F401
    BoundValue,
    IdboundsError,
    TailBound,
    dev_nico_bound,
    empirical_tail,
    engine_bound,
    h_T_eigs,
    levy_area_bound,
    quad_wiener_bound,
    run_config,
    sample_chaos2,
    sample_levy_area,
    sample_stable,
    solve_expm1_ratio,
)
