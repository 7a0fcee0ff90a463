"""Data-aided EVM under kappa-mu shadowed fading with co-channel interference."""
from .evm import (DivergenceError, EvmResult, EvmScenario, UnsupportedScenarioError, evaluate,
                  evm_iid_kappamu, evm_iid_nakagami, evm_iid_rayleigh, evm_iid_rician,
                  evm_iid_shadowed, evm_inid_shadowed, evm_nakagami_large_m, evm_no_fading_limit,
                  evm_noise_kappamu, evm_noise_nakagami, evm_noise_rayleigh, evm_noise_rician,
                  evm_noise_shadowed, evm_rayleigh_large_L)
from .fading import (InterfererProfile, ShadowedFadingParams, SpecialCase, nakagami, no_fading,
                     power_pdf, rayleigh, rician, sample_power, special_case_params, sum_power_pdf)
from .mcsim import McConfig, McResult, empirical_evm, reduction_check, simulate_block
from .specfun import DomainError, PrecisionError, PrecisionPolicy

__version__ = "0.1.0"
