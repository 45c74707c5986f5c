# Polarization-optics Fock-space simulator