# Reverse-mode autodiff package
