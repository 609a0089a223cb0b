"""
Configuration for the PolyStab robust stability checker
Defaults for every numerical knob, CLI behaviour and logging
"""

# ============================================================================
# TOOL INFORMATION
# ============================================================================

TOOL_INFO = {
    'tool_name': 'polystab',
    'description': 'Robust D-stability of polytopic and interval polynomial matrices',
    'version': '1.0.0',
}

# ============================================================================
# POLYNOMIAL ARITHMETIC
# ============================================================================

POLYNOMIAL_CONFIG = {
    # Trailing coefficients below trim_tolerance * max|coeff| are dropped
    'trim_tolerance': 1e-12,

    # Root residual contract: |p(r)| <= residual_tolerance * sum |c_k| |r|^k
    'residual_tolerance': 1e-8,

    # Newton polishing steps applied to companion-matrix eigenvalues
    'polish_iterations': 8,
}

# ============================================================================
# STABILITY REGIONS
# ============================================================================

REGION_CONFIG = {
    # Names accepted by --region and the "region" field of a family file
    'names': ['hurwitz', 'disk', 'shifted:<sigma>', 'sector:<phi-radians>'],
    'default': 'hurwitz',
}

# ============================================================================
# FAMILY MODEL
# ============================================================================

FAMILY_CONFIG = {
    # Largest coefficient count expanded into 2^count box corners
    'corner_cap': 12,

    # Vertex assignments enumerated exhaustively before falling back to sampling
    'vertex_budget': 20000,
}

# ============================================================================
# CHECKER
# ============================================================================

CHECKER_CONFIG = {
    'boundary_count': 512,        # uniform samples of the boundary of D
    'sweep_multiple': 10.0,       # sweep limit = multiple * (1 + Cauchy bound)
    'sweep_limit': None,          # fixed sweep limit, overrides the multiple
    'max_depth': 24,              # lambda-box bisection depth
    'exclusion_margin': 1e-9,     # relative distance 0 must keep from a value set
    'oracle_samples': 10000,      # random members drawn by the oracle
    'seed': 42,
    'marginal_tol': 1e-6,         # roots this close to the boundary are not stable
    'refine_rounds': 3,           # sweep trisection rounds near minima
    'refine_fraction': 0.05,      # share of boundary points refined per round
    'degree_samples': 1000,       # random members for the degree precheck
    'box_budget': 20000,          # lambda boxes per boundary point
    'budget': 200000,             # critical families per check
    'workers': 1,                 # process pool size (1 = serial)
}

# ============================================================================
# COMMAND LINE
# ============================================================================

CLI_CONFIG = {
    'default_seed': 42,
    'valueset_samples_per_point': 16,
    'batch_glob': '*.json',
    'json_indent': 2,
}

# ============================================================================
# LOGGING
# ============================================================================

LOGGING_CONFIG = {
    'level': 'WARNING',
    'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    'log_to_file': False,
    'log_file': 'polystab.log'
}

# ============================================================================
# EXIT CODES
# ============================================================================

EXIT_CODES = {
    'STABLE': 0,
    'UNSTABLE': 1,
    'INCONCLUSIVE': 2,
    'INPUT_ERROR': 3,
}

# ============================================================================
# CONFIGURATION NOTES
# ============================================================================
#
# PRECEDENCE:
#   1. Defaults above
#   2. The optional "config" block of a family file (CHECKER_CONFIG keys)
#   3. Command line flags (--boundary-count, --max-depth, --tol, ...)
#
# REPRODUCIBILITY:
#   All randomness is drawn from numpy generators seeded with 'seed'.
#   Reports carry no wall time unless --timing is given, so two runs with
#   the same file, seed and flags produce byte-identical output.
#
# ============================================================================
