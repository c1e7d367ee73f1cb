from pydantic_settings import BaseSettings
from typing import Literal


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "Special Color Layer Packer"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Hiding
    MAX_ROUNDS: int = 64
    MARKED_FORMAT: Literal["png", "ppm"] = "png"

    # Quality metrics (SSIM reference defaults)
    SSIM_WINDOW_SIZE: int = 11
    SSIM_K1: float = 0.01
    SSIM_K2: float = 0.03
    SSIM_SIGMA: float = 1.5
    SSIM_WEIGHTING: Literal["gaussian", "uniform"] = "gaussian"

    # Layer fixtures (quantization of luminance)
    BINARY_THRESHOLD: int = 128
    TRI_LEVEL_STEP: int = 32

    # HTTP API
    MAX_UPLOAD_SIZE: int = 64 * 1024 * 1024  # 64MB

    class Config:
        env_file = ".env"
        case_sensitive = True


# Create settings instance
settings = Settings()
