import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    # Numerical tolerances
    DEFAULT_TOL: float = float(os.getenv("DEFAULT_TOL", "1e-4"))
    QUAD_MIN_NODES: int = 64
    QUAD_MAX_NODES: int = 2**20
    ZERO_BAND: float = 1e-9  # relative to r
    RADIUS_PERTURBATION: float = 1e-6  # relative to r
    ISOLATION_RADIUS: float = 1e-3
    WINDING_TOL: float = 1e-3

    # Execution
    THREADS: int = int(os.getenv("THREADS", "1"))
    OUTPUT_FORMAT: str = os.getenv("OUTPUT_FORMAT", "csv")
    SEED: int = int(os.getenv("SEED", "0"))
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Independent-subset enumeration refuses beyond this many forms
    THEOREM_R_MAX_FORMS: int = 12


settings = Settings()
