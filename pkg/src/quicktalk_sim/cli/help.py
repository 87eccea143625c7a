"""``quicktalk-sim help [command]``.

Reads the command metadata (command, brief_description, parameters) straight
from the utility classes. ``help keys`` lists every scenario key pattern.
"""
from __future__ import annotations

from quicktalk_sim.shared.utility_discovery import discover_utilities


def print_general_help() -> None:
    utilities = discover_utilities()

    print("quicktalk-sim - QuickTalk IR pinpointing and WiFi broadcast simulator\n")
    print("Available commands:\n")

    for cmd_name, utility_class in utilities.items():
        print(f"  {cmd_name:20s} {utility_class.brief_description}")

    print("\nUse 'quicktalk-sim help <command>' for detailed information about a specific command.")
    print("Use 'quicktalk-sim help keys' to list the scenario file keys.")
    print("Use 'quicktalk-sim <command> --help' to see argparse-generated help.")


def print_command_help(command: str) -> bool:
    """Print details for one command; returns False when it is unknown."""
    utilities = discover_utilities()
    utility_class = utilities.get(command)

    if not utility_class:
        print(f"Unknown command: {command}")
        print(f"\nAvailable commands: {', '.join(utilities.keys())}")
        return False

    print(f"Command: {utility_class.command}")
    print(f"\n{utility_class.brief_description}\n")

    if utility_class.parameters:
        print("Parameters:")
        for param in utility_class.parameters:
            required_marker = " (required)" if param.required else ""
            default_info = f" [default: {param.default}]" if param.default is not None and not param.required else ""
            print(f"  {param.name}{required_marker}")
            print(f"      {param.description}{default_info}")
        print()
    return True


def print_scenario_keys() -> None:
    from quicktalk_sim.scenario.scenario import known_keys

    print("Scenario keys (key = value, '#' starts a comment):\n")
    for key in known_keys():
        print(f"  {key}")


def main(command: str | None = None) -> int:
    if command == "keys":
        print_scenario_keys()
        return 0
    if command:
        return 0 if print_command_help(command) else 1
    print_general_help()
    return 0
