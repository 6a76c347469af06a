# Lanczos tridiagonalization package
