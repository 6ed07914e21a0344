"""flatkit: computational toolkit for flat (translation) surfaces.

Modules
-------
numkit          exact rationals, real quadratic numbers, 2-vectors
surface         translation surfaces from polygon gluings
iet             interval exchange transformations and Rauzy classes
renorm          Rauzy-Veech/Zorich induction and Lyapunov spectra
torus           genus-one lab: Gauss map, continued fractions, lattice counts
squaretiled     square-tiled surfaces, censuses, SL(2,Z) orbits, volumes
genus2          Veech-surface decision procedures in genus two
billiards       rational billiards and unfoldings
counting        saddle connections, cylinders, Siegel-Veech statistics
classification  connected components of strata / spin parity
cli             command-line entry points
"""

__version__ = "0.1.0"
