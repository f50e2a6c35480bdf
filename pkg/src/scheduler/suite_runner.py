import logging
from multiprocessing import Pool

from src.utils.config_loader import ConfigLoader
from src.utils.precision import configure_precision
from src.verification.suites import run_suite, SuiteOptions, SUITES
from src.utils.errors import LabError

logger = logging.getLogger(__name__)


def _init_worker(bits, overrides):
    # precision and overrides are set once per worker process
    for key, value in overrides.items():
        ConfigLoader().override(key, value)
    configure_precision(bits)


def _run(payload):
    name, options = payload
    return run_suite(name, options)


class SuiteRunner:
    """Runs verify suites, in worker processes when more than one is requested, and returns the
    reports in the order the suites were given."""

    def __init__(self, precision_bits, workers=0, overrides=None):
        self.precision_bits = precision_bits
        self.workers = workers
        self.overrides = dict(overrides or {})
        logger.info("SuiteRunner initialized.")

    def run(self, names, options: SuiteOptions):
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise LabError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        payloads = [(name, options) for name in names]
        if self.workers > 0 and len(payloads) > 1:
            logger.info(f"Running {len(payloads)} suites on {self.workers} worker processes")
            with Pool(processes=self.workers, initializer=_init_worker,
                      initargs=(self.precision_bits, self.overrides)) as pool:
                return pool.map(_run, payloads)
        logger.info(f"Running {len(payloads)} suite(s) sequentially")
        return [_run(payload) for payload in payloads]

    def get_runner_info(self):
        return {
            'precision_bits': self.precision_bits,
            'workers': self.workers,
            'overrides': self.overrides,
        }
