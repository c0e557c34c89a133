"""Uniform sampling of binary matrices with fixed margins by MCMC, plus exact
kernel analysis on small state spaces."""

__version__ = "0.1.0"

from .matrix import (BinaryMatrix, Margins, SwapQuad, apply_swap, canonical_key,
                     from_grid, is_checkerboard)
from .enumeration import (StateSpace, enumerate_state_space, gale_ryser_feasible,
                          strip_degenerate)
from .rng import RngStream
from .chains import (ChainState, curveball_step, rectangle_loop_step, run_chain,
                     swap_step)
from .exact import (TransitionMatrix, build_curveball_kernel, build_kernel, build_rectangle_kernel,
                    build_swap_kernel, check_peskun_dominance, check_stationarity,
                    rectangle_pair_probability, tv_distance_curve)
from .stats import (StatTrace, estimate_statistic, perturbation_score, s_bar_squared,
                    swap_efficiency_report)
