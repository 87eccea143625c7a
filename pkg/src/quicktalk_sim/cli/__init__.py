"""Command-line helpers that are not subcommands themselves."""
