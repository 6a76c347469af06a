# Ghost, precision and rank-degeneracy diagnostics package
