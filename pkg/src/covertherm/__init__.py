"""Simulated thermal and depth imaging of cover-draped articulated bodies.

Pipeline: capsule-limb body -> top-down heightfield -> cover drape
(morphological closing) -> contact mask -> screened heat diffusion on the
cover -> LWIR (Planck band radiance) and depth images. Also ships homography
label transfer and PCK scoring for 14-joint LSP skeletons.
"""

__version__ = "0.1.0"
