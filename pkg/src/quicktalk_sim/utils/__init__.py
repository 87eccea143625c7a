"""Subcommands of quicktalk-sim, one BaseUtility subclass per module."""
