#!/usr/bin/env python
"""
Load environment variables from a .env file and read flat key=value files.
"""

import logging
import os
from pathlib import Path
from typing import Dict, Union

logger = logging.getLogger(__name__)


def read_key_values(path: Union[str, Path]) -> Dict[str, str]:
    """Parse ``KEY=value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    with open(path, 'r', encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ValueError(f"{path}:{number}: expected key=value, got '{line}'")
            key, value = line.split('=', 1)
            values[key.strip()] = value.strip()
    return values


def load_env(env_file: str = '.env') -> bool:
    """Copy a .env file into the process environment without overriding set variables."""
    if not os.path.exists(env_file):
        logger.debug(f"{env_file} file not found")
        return False

    for key, value in read_key_values(env_file).items():
        os.environ.setdefault(key, value)
        logger.debug(f"Set {key}")
    return True


if __name__ == "__main__":
    logging.basicConfig(level=logging.DEBUG)
    load_env()

    print("Delay logistic lab configuration:")
    for key in sorted(k for k in os.environ if k.startswith('DDE_LAB_')):
        print(f"   - {key}: {os.environ[key]}")
