# Sharded vector package
