"""Base types of the configuration model"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from errors import BaseError


class SpecError(BaseError):
    NAME = "Problem spec error"


class SolutionError(BaseError):
    NAME = "Solution error"


class VariableKind(Enum):
    JOINT = "joint"
    COMPONENT = "component"


@dataclass(frozen=True)
class Envo:
    """Environment object: an external body anchoring a set of joints (1-based)"""

    name: str
    joints: frozenset


@dataclass(frozen=True)
class VariableIndex:
    kind: VariableKind
    flat_index: int
    # set for joints
    joint: Optional[int] = None
    # set for components, always i < j
    pair: Optional[Tuple[int, int]] = None

    @property
    def label(self) -> str:
        if self.kind is VariableKind.JOINT:
            return "y%d" % self.joint
        return "z(%d,%d)" % self.pair

    @property
    def is_joint(self) -> bool:
        return self.kind is VariableKind.JOINT
