"""waldkit: machine checks for S-construction additivity at desk scale."""

__version__ = "0.1.0"
