from .handsfactory import HandsFactory
from .paths import Paths

hands = HandsFactory()
