"""Exception hierarchy shared by all modules."""


class NetredError(Exception):
    """Base class for every error raised by this package."""


class NotSymmetric(NetredError):
    """A matrix that must be symmetric is not, beyond tolerance."""


class NotHurwitz(NetredError):
    """A matrix that must have all eigenvalues in the open left half plane does not."""


class KernelConditionViolated(NetredError):
    """The output matrix observes a mode in the closed right half plane.

    For norm computations this signals that the H2 norm is infinite or
    undefined for the given realization.
    """


class UnstablePoles(NetredError):
    """The transfer function has poles outside the open left half plane."""


class WitnessInvalid(NetredError):
    """The supplied witness matrix does not intertwine C and A (CA != XC)."""


class KernelViolated(NetredError):
    """ker A is not contained in ker C, so the DC gain formula does not apply."""


class NegativeWeight(NetredError):
    """An input graph carries a negative edge weight."""


class NodeInCell(NetredError):
    """A node was required to lie outside a cell but belongs to it."""


class InvalidPartition(NetredError):
    """A collection of cells is not a partition of the node set."""

    def __init__(self, message, node=None, cell_index=None):
        super().__init__(message)
        self.node = node
        self.cell_index = cell_index


class Disconnected(NetredError):
    """The network graph is not connected."""


class NotSynchronized(NetredError):
    """The network does not synchronize, so norm-based analysis is refused."""


class NotAEP(NetredError):
    """The partition is not almost equitable for the given graph."""


class NotSingleIntegrator(NetredError):
    """The agent dynamics is not the scalar integrator (A=0, B=1, E=1)."""


class NotSymmetricDynamics(NetredError):
    """The agent matrices A and B are not both symmetric."""


class UnknownExample(NetredError):
    """No generator is registered under the requested example name."""
