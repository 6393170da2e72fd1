"""factorcover: certify that factorial products cover Z_p*.

The question: which residues mod p arise as x_1! * x_2! * ... * x_t! with
x_1 + ... + x_t = p - 1?  For every prime except 5, all of them do.  This
package certifies that fact prime by prime (compact lemma certificates,
fallback cover sets, exact brute force), simulates the multiplicative
set-growth argument that handles all larger primes, and rechecks the
explicit prime-counting bounds and closing inequalities that argument
leans on.
"""

from .analytic import (
    AnalyticParams,
    DeltaScanResult,
    charged_steps,
    default_lam_grid,
    delta_scan,
    derive_params,
    initial_density_floor,
    run_recurrence,
    search_window,
    step_limit,
    threshold_final,
    threshold_master,
)
from .certify import (
    BruteCover,
    CoverCertificate,
    LemmaCertificate,
    PartitionWitness,
    SearchConfig,
    TwoPowerCover,
    brute_cover,
    fallback_cover,
    find_certificate,
    multinomial_identity_check,
    two_power_blocks,
    two_power_cover_check,
    verify_certificate,
    verify_cover_certificate,
    verify_witness,
    witness_partition,
)
from .growth import (
    GrowthStep,
    GrowthTrace,
    ResidueSet,
    T_of,
    grow_step,
    init_kfold,
    init_pairs,
    product_set,
    rep_count,
    run_growth,
    sarkozy_check,
)
from .modmath import (
    DiscreteLogTable,
    build_factorial_table,
    discrete_log,
    factor_into_primes,
    inverse_mod,
    is_primitive_root,
    pow_mod,
)
from .primes import (
    BOUND_VALIDITY,
    PRIME_SUM_WINDOW_TOP,
    BoundReport,
    PrimeList,
    check_all_bounds,
    check_bound,
    prime_count,
    prime_sum_upto,
    sieve_upto,
)
from .verify import (
    Checkpoint,
    VerificationReport,
    certify_prime,
    emit_report,
    packaged_bad_list,
    reproduce_bad_lists,
    run_verification,
    verify_range,
)

__version__ = "0.1.0"
