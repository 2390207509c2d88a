import os
import logging
from dotenv import load_dotenv

load_dotenv()

CCDM_LOG_LEVEL = os.getenv("CCDM_LOG_LEVEL", "INFO").upper()


# Logging Configuration
def setup_logging(level: str = None):
    """Configure logging for the application"""
    # Create logger
    logger = logging.getLogger()
    logger.setLevel(level or CCDM_LOG_LEVEL)

    # Remove existing handlers to avoid duplicates
    logger.handlers = []

    # Console handler writes to stderr; stdout carries command output
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level or CCDM_LOG_LEVEL)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_handler.setFormatter(formatter)

    logger.addHandler(console_handler)

    return logger

# Initialize logging
setup_logging()

# Enumeration limits (codebook and empirical divergence)
CCDM_ENUMERATION_LIMIT = int(os.getenv("CCDM_ENUMERATION_LIMIT", "20"))

# Selftest Configuration
CCDM_SELFTEST_MAX_N = int(os.getenv("CCDM_SELFTEST_MAX_N", "12"))
CCDM_SELFTEST_TRIALS = int(os.getenv("CCDM_SELFTEST_TRIALS", "1000"))
CCDM_SELFTEST_SEED = int(os.getenv("CCDM_SELFTEST_SEED", "2016"))
# Random inputs per large reference blocklength (0 skips them)
CCDM_SELFTEST_LARGE_TRIALS = int(os.getenv("CCDM_SELFTEST_LARGE_TRIALS", "0"))

# Process pool size for block coding and sweeps (1 = sequential)
CCDM_WORKERS = int(os.getenv("CCDM_WORKERS", "1"))

# API Configuration
CCDM_API_HOST = os.getenv("CCDM_API_HOST", "0.0.0.0")
CCDM_API_PORT = int(os.getenv("CCDM_API_PORT", "8000"))

# Numeric constants
DISTRIBUTION_SUM_TOLERANCE = 1e-9
DISTRIBUTION_VALID_TOLERANCE = 1e-12
REPORT_SIGNIFICANT_DIGITS = 15

# Paths
DATASETS_PATH = os.path.join(os.path.dirname(__file__), "datasets")
TEMPLATES_PATH = os.path.join(os.path.dirname(__file__), "templates")
REFERENCE_DISTRIBUTION_PATH = os.path.join(DATASETS_PATH, "reference_distribution.txt")
