# telecanon - Perfect teleportation through three-qubit canonical channels
from .config import Config, RunConfig
from .core.channels import CanonicalParams1, CanonicalParams2, ChannelSpec, NamedChannel
from .core.teleport_manager import TeleportationManager

__version__ = "0.1.0"

__all__ = [
    'Config',
    'RunConfig',
    'CanonicalParams1',
    'CanonicalParams2',
    'ChannelSpec',
    'NamedChannel',
    'TeleportationManager',
]
