"""Frozen envelope constants for the verification suites.

Generated by tools/calibrate_frozen.py: each value is the largest constant
observed over the standard check corpus (default seeds), times a 1.5 safety
factor.  Regenerate with `python3 tools/calibrate_frozen.py --write` after
any change to the check implementations or their corpora.
"""

LOCAL56_C = 3.3848519193714486
CONCENTRATION_A = 0.03625120940336473
SUDLER_FACTOR_C = 9.4801802984353714
KASHAEV_FACTOR_A = 0.31089443414354512
KASHAEV_FACTOR_C = 0.0020059629241840249
TAIL_C = 14.489535702273249
COT_SUM_C = 0.55227767353923429
VLX_C = 1.4123913570367448
TH3_C = 1.776588414122747
OSC_C = 0.00087989518822692201
