# Matrix-free operator package
