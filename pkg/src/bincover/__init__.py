"""Exact-arithmetic online bin covering with advice."""

from .core import (BinClass, Bin, Instance, Packing, PackingError, PackingStats, classify_bin,
                   fill_profile, is_covered, make_size, packing_stats, read_instance,
                   validate_packing, write_instance)
from .encoding import (AdviceRecord, AdviceTape, ApproxNumber, approx_int, approx_real, choose_k,
                       decode_advice, encode_advice)
from .solver import OracleLimitError, optimal_cover, optimal_value
from .oracle import derive_advice_record, full_advice, normalize_packing, run_oracle
from .online import (RunResult, advice_cover, dual_next_fit, dual_worst_fit_place,
                     optimal_replay, split_pair)
from .adversary import (SeparationInstance, covering_upper_bound_from_errors, random_instance,
                        run_separation_via_covering, separation_to_covering, sigma_family)

__version__ = "0.1.0"
