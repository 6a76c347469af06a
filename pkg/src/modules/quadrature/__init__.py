# Gauss quadrature and spectral density package
