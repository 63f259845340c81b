# Core Package
# Shared exceptions, enumerations, logging and numerical helpers used by every
# lorval app.
