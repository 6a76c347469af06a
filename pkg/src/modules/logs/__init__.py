# Logs package
