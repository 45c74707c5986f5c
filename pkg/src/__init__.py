# Initial setup for the package