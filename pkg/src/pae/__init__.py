"""Exact symbolic evaluator for the affine E7 unshaded subfactor planar algebra."""

__version__ = "0.1.0"
