"""Large-sieve style moments of Legendre symbol sums over short shifted
intervals: exact arithmetic kernels, Selberg weights, square-product counts
and numerical checks of the sieve argument."""

__version__ = "0.1.0"

from .arith import (
    KernelTable,
    PrimeRange,
    dyadic_primes,
    is_prime,
    is_square,
    jacobi,
    jacobi_array,
    kernel_table,
    primes_in,
    two_adic_split,
)
from .charsum import (
    DyadicPart,
    MomentResult,
    WeightSequence,
    char_sum,
    dyadic_decompose,
    moment,
    moment_pair_expand,
)
from .errors import CapacityError, DomainError, EmptyRangeError, InvalidModulusError, UnsupportedModeError
from .prooflab import (
    ExperimentConfig,
    MomentReport,
    ProofTrace,
    burgess_scan,
    grh_scan,
    period_sums,
    proof_trace,
    random_configs,
    theorem_report,
    trace_many,
)
from .selberg import SieveSystem, big_g, coprime_count, selberg_lambdas, sieve_upper_count, verify_sieve
from .squareprod import (
    KernelClassCount,
    conjecture_scan,
    kernel_class_count,
    r2_structured,
    r_count_brute,
    r_count_kernel,
)
