from ._version import VERSION

__version__ = VERSION

# Import first
from ._settings import settings

import dexassist.models
import dexassist.typing
import dexassist.yaml

from ._logger import get_logger
from ._settings import Settings
from .version import show_version_info
