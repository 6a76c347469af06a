# Worker runtime package
