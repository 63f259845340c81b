# Command-line front end: argument parsing, run configs and output writers.
