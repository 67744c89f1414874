"""Physical constants (SI)."""

#: Speed of light in vacuum, exact by definition of the metre.
C0 = 299_792_458.0
