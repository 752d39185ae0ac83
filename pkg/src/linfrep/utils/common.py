import hashlib
import logging
import random
import string
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Optional, TypeVar, Union

from tqdm import tqdm

T = TypeVar("T")


def setup_logging(verbose: bool = False, log_file: Optional[Union[str, Path]] = None) -> logging.Logger:
    """
    Configure the ``linfrep`` logger.

    Parameters:
        verbose (bool): DEBUG on the console instead of INFO
        log_file (str | Path): optional file receiving every record with timestamps

    Returns:
        logging.Logger: the package logger
    """
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    logger = logging.getLogger("linfrep")
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    console_handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
    logger.addHandler(console_handler)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(log_format))
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


class ProgressLogger:
    """
    Progress tracking with [Progress] prefix.

    Logs instance counts and timings for suites; wraps iterations in a tqdm
    bar when stderr is a terminal.
    """

    def __init__(self, logger: logging.Logger):
        self.logger = logger
        self.suite_start_time = None
        self.suite_name = None
        self.instances_checked = 0
        self.instances_failed = 0

    def start_suite(self, name: str, total: int):
        self.suite_name = name
        self.suite_start_time = time.perf_counter()
        self.instances_checked = 0
        self.instances_failed = 0
        self.logger.info(f"[Progress] Suite {name}: {total} instances")

    def record(self, passed: bool):
        self.instances_checked += 1
        if not passed:
            self.instances_failed += 1

    def iterate(self, items: Iterable[T], total: Optional[int] = None) -> Iterator[T]:
        if sys.stderr.isatty():
            return iter(tqdm(items, total=total, desc=self.suite_name, leave=False))
        return iter(items)

    def end_suite(self):
        if self.suite_start_time is not None:
            elapsed = time.perf_counter() - self.suite_start_time
            self.logger.info(f"[Progress] Suite {self.suite_name}: {self.instances_checked} checked, "
                             f"{self.instances_failed} failed")
            self.logger.info(f"[Progress] Suite running time: {elapsed:.2f}s")


def parse_rational(value: Union[int, str, Fraction]) -> Fraction:
    """
    Parse a coefficient written as an integer or a reduced "p/q" string.

    Raises:
        ValueError: on floats, booleans or malformed strings
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Coefficient {value!r} must be an integer or a 'p/q' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if text and all(ch in "0123456789/-+" for ch in text) and text.count("/") <= 1:
            try:
                return Fraction(text)
            except (ValueError, ZeroDivisionError):
                pass
    raise ValueError(f"Malformed rational {value!r}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def generate_run_name(rng: Optional[random.Random] = None) -> str:
    """
    Unique run name "timestamp-randomstring".
    """
    rng = rng or random.Random()
    chars = string.ascii_letters + string.digits
    return f"{int(time.time())}-{''.join(rng.choice(chars) for _ in range(7))}"
