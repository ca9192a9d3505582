import dexassist.cli._check
import dexassist.cli._log
import dexassist.cli._sim
import dexassist.cli._version
from dexassist.cli._check import grads
from dexassist.cli._check import oracle
from dexassist.cli._log import export
from dexassist.cli._log import replay
from dexassist.cli._sim import run
from dexassist.cli._sim import sweep
from dexassist.cli._version import version
from dexassist.cli.app import app
from dexassist.cli.app import main
