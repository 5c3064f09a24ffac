"""Multi-access DCSK link simulator with NC, CC and MIMO-relay CD topologies."""

__version__ = "0.1.0"
