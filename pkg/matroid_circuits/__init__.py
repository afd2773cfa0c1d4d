import logging
import os
from dataclasses import dataclass, fields

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


@dataclass
class Settings:
    # guards (exhaustive searches only make sense at desk scale)
    max_enumerate: int = 24
    max_separation: int = 20
    max_axiom: int = 14
    max_tu: int = 8
    max_auto: int = 12

    # verification defaults
    trials: int = 50
    seed: int = 20240611

    log_level: str = "WARNING"


settings = Settings()

_ENV_NAMES = {
    "max_enumerate": "MATROID_MAX_ENUMERATE",
    "max_separation": "MATROID_MAX_SEPARATION",
    "max_axiom": "MATROID_MAX_AXIOM",
    "max_tu": "MATROID_MAX_TU",
    "max_auto": "MATROID_MAX_AUTO",
    "trials": "MATROID_TRIALS",
    "seed": "MATROID_SEED",
    "log_level": "MATROID_LOG_LEVEL",
}


def _coerce(name: str, raw: str):
    # everything except the log level is an int
    if name == "log_level":
        return raw.strip().upper()
    return int(raw)


def load_settings() -> Settings:
    load_dotenv()

    for f in fields(Settings):
        raw = os.getenv(_ENV_NAMES[f.name])
        if raw is None or raw == "":
            continue
        setattr(settings, f.name, _coerce(f.name, raw))

    return settings


def raise_guards(max_n: int) -> None:
    """Raise every element-count guard to max_n for this process."""
    for name in ("max_enumerate", "max_separation", "max_axiom", "max_auto"):
        old = getattr(settings, name)
        if max_n != old:
            logger.warning("guard %s overridden: %d -> %d", name, old, max_n)
            setattr(settings, name, max_n)


def guard(value, name: str) -> int:
    """Explicit keyword wins, otherwise the configured guard."""
    return getattr(settings, name) if value is None else value
