"""
Exact verification toolkit for the elliptic Stark constant attached to
theta series of imaginary quadratic fields.
"""

import logging
import os

import yaml
from cachelib import SimpleCache

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS = dict(
    PADIC_DIGITS=30,
    Q_TRUNCATION=200,
    COMPLEX_BITS=256,
    MIN_TRUNCATION=30,
    CLASS_GROUP_BOUND=10**7,
    POINT_COUNT_BOUND=10**5,
    SEED=20240229,
    RESAMPLE_RETRIES=16,
    EULER_DEGREE_BOUND=16,
    T_MARGIN=10,
    CACHE_THRESHOLD=500,
    LOG_LEVEL="WARNING",
)

SETTINGS_FILE = "starkrankin.yml"
SETTINGS_ENV = "STARKRANKIN_SETTINGS"

cache = SimpleCache(threshold=DEFAULT_SETTINGS["CACHE_THRESHOLD"], default_timeout=0)


class Settings(dict):
    """
    Configuration mapping. Keys are upper case; lower case keys given to
    from_mapping are ignored the same way a Flask config ignores them.
    """

    def from_mapping(self, mapping=None, **kwargs):
        """Update the settings from a mapping and/or keyword arguments"""
        items = dict(mapping or {})
        items.update(kwargs)
        for key, value in items.items():
            if key.isupper():
                self[key] = value
        return True

    def from_yaml(self, filename, silent=False):
        """
        Update the settings from a YAML document.

        Arguments:
            filename: path of the YAML file
            silent: return False instead of raising when the file is missing
        Returns:
            True if the file was loaded
        """
        try:
            with open(filename, encoding="utf-8") as handle:
                data = yaml.safe_load(handle) or {}
        except OSError as e:
            if silent:
                return False
            e.strerror = f"Unable to load settings file ({e.strerror})"
            raise
        if not isinstance(data, dict):
            raise ValueError(f"Settings file {filename} must hold a mapping")
        return self.from_mapping(data)


def create_context(test_config=None, settings_file=None):
    """Create settings instance"""

    settings = Settings()
    settings.from_mapping(DEFAULT_SETTINGS)

    if test_config is None:
        path = settings_file or os.environ.get(SETTINGS_ENV, SETTINGS_FILE)
        settings.from_yaml(path, silent=settings_file is None)
    else:
        settings.from_mapping(test_config)

    logger.debug(f"settings: {sorted(settings.items())}")
    return settings


def configure_logging(level):
    """Install the root handler once; later calls only change the level"""
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s %(message)s")
    root.setLevel(level)
