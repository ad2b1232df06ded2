"""Group key pre-distribution schemes over Z_N and the attacks that break them."""

from .errors import GkpError
from .modmath import Modulus, Residue, gen_modulus
from .schemes import GroupKey, PublicParams, SystemParams

__version__ = "0.1.0"
