"""Local decoding of Reed-Muller codes through arithmetic codices.

Submodules: ``gf`` (finite fields), ``rm`` (Reed-Muller words and corrupted
oracles), ``function_fields`` (rational and Hermitian curves),
``codex`` (codex construction and audit), ``mfp`` (multiplication-friendly
pairs and interleaving), ``decoders``, ``local_decoding``, ``bounds``,
``harness`` and ``cli``.
"""

from .bounds import (BoundError, chebyshev_tail, eps_alg2, eps_curve, eps_line, eps_repetition, eps_tcurve,
                     queries_repetition, theorem_presets, twise_tail)
from .codex import Codex, CodexError, audit_codex, build_codex, hermitian_codex, rational_codex
from .config import ConfigError, ExperimentConfig, load_config
from .decoders import brute_force_decode, ee_decode, gmd_decode, hermitian_decode, rs_decode
from .gf import GF, FieldError, extension, field_new
from .harness import independence_audit, run_repetition_baseline, run_trials
from .local_decoding import plan_queries_alg1, plan_queries_alg2, recover_alg1, recover_alg2
from .mfp import build_mfp, interleave, varphi
from .rm import CorruptedWordOracle, rm_eval, rm_random_poly, rm_sparse_poly

__version__ = "0.1.0"
