"""
Console package for the trackladder command line.
Provides Rich output helpers and the subcommand actions.
"""
