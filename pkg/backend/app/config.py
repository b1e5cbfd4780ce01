from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    LOG_LEVEL: str = "INFO"

    # Safety ceiling on lantern rewrites per reduce_right_twists call
    MAX_REWRITE_STEPS: int = 200000
    VALIDATE_LANTERN: bool = True
    CHECK_MEASURE: bool = True

    # Exhaustive short-vector search is only run up to this rank
    MAX_LATTICE_RANK: int = 8
    SWEEP_JOBS: int = 1

    class Config:
        env_file = ".env"
        env_prefix = "PLANAR_"


@lru_cache()
def get_settings():
    return Settings()
