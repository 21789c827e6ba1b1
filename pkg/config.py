import os

class Config:
    """
    Configuration settings for the Nominal Wyvern toolchain.
    Environment variables are read for the few knobs an operator may want to change
    without touching code (colour mode, log directory).
    """
    # Normalization and subtyping budgets
    AVOID_FUEL = 16          # Unfolding steps granted to avoidance before it gives up
    ORACLE_DEPTH = 8         # Derivation depth searched by the brute-force oracle
    STEP_CEILING = 10**6     # Hard ceiling on rule applications per subtype query
    MEMO_LIMIT = 4096        # Exposure and expansion results kept per context family

    # Evaluation
    DEFAULT_EVAL_FUEL = 64       # Used by the playground when no slider value is set
    PLAYGROUND_EVAL_FUEL = 128   # Upper end of the playground fuel slider

    # Terminal output: auto | always | never
    COLOR_MODE = os.getenv("NOMWYV_COLOR", "auto")

    # Logging settings
    LOG_DIR = os.getenv("NOMWYV_LOG_DIR", "logs")   # Directory where log files will be stored
    LOG_FILE = os.path.join(LOG_DIR, "nomwyv.log")  # Main log file, also read by the fuzz dashboard

    # Random program generation (fuzzing and property suites)
    GEN_MAX_NAMES = 5
    GEN_MAX_MEMBERS = 3
    GEN_MAX_REFINEMENT_DEPTH = 2
    GEN_SHAPE_PROBABILITY = 0.3
    FUZZ_QUERIES_PER_CASE = 6

    # Bundled programs
    CORPUS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
    PRELUDE_FILE = os.path.join(CORPUS_DIR, "prelude.nwyv")
    SOURCE_SUFFIX = ".nwyv"

    @staticmethod
    def color_enabled() -> bool | None:
        """Maps COLOR_MODE to click's tri-state colour flag (None lets click decide)."""
        mode = Config.COLOR_MODE.lower()
        if mode == "always":
            return True
        if mode == "never":
            return False
        return None
