# Hessian column sparsity probing package
