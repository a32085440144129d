"""Executable geometry of locally homogeneous (Type A) affine surfaces."""
