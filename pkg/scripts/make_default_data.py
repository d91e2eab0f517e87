"""Regenerate the shipped catalog and demo corpus under src/netword/data/."""

import json
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "netword" / "data"

CLASSES = [
    {
        "name": "user",
        "description": "add a new user from its IMSI number to the network.",
        "system_prompt": (
            "You are assistant to register new subscribers on a private 5G network. "
            "The input is a message in which someone wants to add a new user from its IMSI number.\n"
            "\n"
            "Base command 1: To add a new user, this is the base command:\n"
            "\"user add\"\n"
            "Always add the --imsi <imsi> flag carrying the subscriber's IMSI "
            "(14 or 15 decimal digits), similar to this command:\n"
            "\"user add --imsi 001010123456789\"\n"
            "If a display name for the subscriber is given, also add the --name <name> flag, "
            "similar to:\n"
            "\"user add --imsi 001010123456789 --name alice\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["user add"],
        "flags": [
            {"name": "--imsi", "arg_patterns": [["imsi"]]},
            {"name": "--name", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "list",
        "description": "List all of the users, gnode-bs, or nodes.",
        "system_prompt": (
            "You are assistant to generate 5G network management commands. "
            "The input is a message in which someone is trying to get the list of users, "
            "nodes, or gnodebs.\n"
            "\n"
            "Base command 1: If the user wants the list of users, this is the base command:\n"
            "\"list users\"\n"
            "If the list of active users between <start_time> and <end_time> is requested, "
            "also add --active <start_time> <end_time> flag, similar to this command:\n"
            "\"list users --active 20240801 20240901\"\n"
            "which gives active users from 2024/8/1 to 2024/9/1.\n"
            "If the user does not specify the time interval or requested already active users, "
            "use --active now flag, similar to:\n"
            "\"list users --active now\"\n"
            "If the user does not specify the end time but says the start time, "
            "use --active <start_time> now flag, similar to:\n"
            "\"list users --active 20240801 now\"\n"
            "\n"
            "Base command 2: If the user wants the list of gnodebs, this is the base command:\n"
            "\"list gnbs\"\n"
            "Base command 3: If the user wants the list of nodes, this is the base command:\n"
            "\"list nodes\"\n"
            "Dates are written as YYYYMMDD. Output only the command after \"Answer:\"."
        ),
        "base_commands": ["list users", "list gnbs", "list nodes"],
        "flags": [
            {
                "name": "--active",
                "arg_patterns": [["date", "date"], ["now"], ["date", "now"]],
            },
            {"name": "--limit", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "test",
        "description": "run a connectivity or throughput test against a subscriber or node.",
        "system_prompt": (
            "You are assistant to run diagnostic tests on a private 5G network. "
            "The input is a message in which someone wants to test connectivity or throughput.\n"
            "\n"
            "Base command 1: For a reachability test, this is the base command:\n"
            "\"test ping\"\n"
            "Base command 2: For a throughput measurement, this is the base command:\n"
            "\"test throughput\"\n"
            "If the test targets one subscriber, add the --imsi <imsi> flag "
            "(14 or 15 decimal digits), similar to:\n"
            "\"test ping --imsi 001010123456789\"\n"
            "If a number of probes is requested, add the --count <n> flag, similar to:\n"
            "\"test ping --count 5\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["test ping", "test throughput"],
        "flags": [
            {"name": "--imsi", "arg_patterns": [["imsi"]]},
            {"name": "--count", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "create",
        "description": "create a new network slice or cell configuration.",
        "system_prompt": (
            "You are assistant to provision resources on a private 5G network. "
            "The input is a message in which someone wants to create a slice or a cell.\n"
            "\n"
            "Base command 1: To create a network slice, this is the base command:\n"
            "\"create slice\"\n"
            "Base command 2: To create a cell, this is the base command:\n"
            "\"create cell\"\n"
            "Add the --name <name> flag with the requested name, similar to:\n"
            "\"create slice --name iot\"\n"
            "If a bandwidth is given, add the --bandwidth <value> flag, similar to:\n"
            "\"create cell --name cell7 --bandwidth 100mhz\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["create slice", "create cell"],
        "flags": [
            {"name": "--name", "arg_patterns": [["literal"]]},
            {"name": "--bandwidth", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "remove",
        "description": "remove a user or slice from the network.",
        "system_prompt": (
            "You are assistant to deprovision resources on a private 5G network. "
            "The input is a message in which someone wants to remove a user or a slice.\n"
            "\n"
            "Base command 1: To remove a subscriber, this is the base command:\n"
            "\"remove user\"\n"
            "Add the --imsi <imsi> flag with the subscriber's IMSI (14 or 15 decimal digits), "
            "similar to:\n"
            "\"remove user --imsi 001010123456789\"\n"
            "Base command 2: To remove a slice, this is the base command:\n"
            "\"remove slice\"\n"
            "Add the --name <name> flag with the slice name, similar to:\n"
            "\"remove slice --name iot\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["remove user", "remove slice"],
        "flags": [
            {"name": "--imsi", "arg_patterns": [["imsi"]]},
            {"name": "--name", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "start",
        "description": "start a network function or base station.",
        "system_prompt": (
            "You are assistant to operate a private 5G network. "
            "The input is a message in which someone wants to start a node or a base station.\n"
            "\n"
            "Base command 1: To start a core network function, this is the base command:\n"
            "\"start node\"\n"
            "Base command 2: To start a base station, this is the base command:\n"
            "\"start gnb\"\n"
            "Add the --name <name> flag naming the target, similar to:\n"
            "\"start gnb --name gnb1\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["start node", "start gnb"],
        "flags": [{"name": "--name", "arg_patterns": [["literal"]]}],
    },
    {
        "name": "stop",
        "description": "stop a network function or base station.",
        "system_prompt": (
            "You are assistant to operate a private 5G network. "
            "The input is a message in which someone wants to stop a node or a base station.\n"
            "\n"
            "Base command 1: To stop a core network function, this is the base command:\n"
            "\"stop node\"\n"
            "Base command 2: To stop a base station, this is the base command:\n"
            "\"stop gnb\"\n"
            "Add the --name <name> flag naming the target, similar to:\n"
            "\"stop gnb --name gnb1\"\n"
            "If an immediate or unconditional stop is requested, also add the --force flag "
            "(it takes no arguments), similar to:\n"
            "\"stop node --name amf1 --force\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["stop node", "stop gnb"],
        "flags": [
            {"name": "--name", "arg_patterns": [["literal"]]},
            {"name": "--force", "arg_patterns": [[]]},
        ],
    },
    {
        "name": "status",
        "description": "show the operational status of the core network or a node.",
        "system_prompt": (
            "You are assistant to inspect a private 5G network. "
            "The input is a message in which someone asks how the network or one of its "
            "components is doing.\n"
            "\n"
            "Base command 1: For the whole core network, this is the base command:\n"
            "\"status core\"\n"
            "Base command 2: For one network function, this is the base command:\n"
            "\"status node\"\n"
            "Base command 3: For one base station, this is the base command:\n"
            "\"status gnb\"\n"
            "For a single node or gnb, add the --name <name> flag, similar to:\n"
            "\"status gnb --name gnb1\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["status core", "status node", "status gnb"],
        "flags": [{"name": "--name", "arg_patterns": [["literal"]]}],
    },
    {
        "name": "config",
        "description": "show or change configuration parameters of the network.",
        "system_prompt": (
            "You are assistant to manage the configuration of a private 5G network. "
            "The input is a message in which someone wants to read or change a parameter.\n"
            "\n"
            "Base command 1: To display the running configuration, this is the base command:\n"
            "\"config show\"\n"
            "Base command 2: To change a parameter, this is the base command:\n"
            "\"config set\"\n"
            "For config set, add --key <parameter> and --value <value> flags, similar to:\n"
            "\"config set --key mcc --value 001\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["config show", "config set"],
        "flags": [
            {"name": "--key", "arg_patterns": [["literal"]]},
            {"name": "--value", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "log",
        "description": "show recent log entries from the network functions.",
        "system_prompt": (
            "You are assistant to inspect logs of a private 5G network. "
            "The input is a message in which someone wants to see log entries.\n"
            "\n"
            "Base command 1: To show logs, this is the base command:\n"
            "\"log show\"\n"
            "If a start date is given, add the --since <date> flag with the date as YYYYMMDD, "
            "similar to:\n"
            "\"log show --since 20240801\"\n"
            "If only current entries are wanted, use --since now.\n"
            "If a number of lines is requested, add the --lines <n> flag, similar to:\n"
            "\"log show --lines 100\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["log show"],
        "flags": [
            {"name": "--since", "arg_patterns": [["date"], ["now"]]},
            {"name": "--lines", "arg_patterns": [["literal"]]},
        ],
    },
    {
        "name": "monitor",
        "description": "monitor live traffic and performance metrics.",
        "system_prompt": (
            "You are assistant to watch a private 5G network in real time. "
            "The input is a message in which someone wants to monitor traffic or performance.\n"
            "\n"
            "Base command 1: To monitor traffic, this is the base command:\n"
            "\"monitor traffic\"\n"
            "Base command 2: To monitor performance metrics, this is the base command:\n"
            "\"monitor performance\"\n"
            "If a refresh interval is requested, add the --interval <value> flag, similar to:\n"
            "\"monitor performance --interval 5s\"\n"
            "If an end time is given, add the --until <date> flag with the date as YYYYMMDD "
            "(or --until now), similar to:\n"
            "\"monitor traffic --until 20241231\"\n"
            "Output only the command after \"Answer:\"."
        ),
        "base_commands": ["monitor traffic", "monitor performance"],
        "flags": [
            {"name": "--interval", "arg_patterns": [["literal"]]},
            {"name": "--until", "arg_patterns": [["date"], ["now"]]},
        ],
    },
]

CORPUS = [
    ("c001", "Could you kindly offer me a the list of active users since 2024/08/10 ?", "list users --active 20240810 now", "list"),
    ("c002", "I want list of active users", "list users --active now", "list"),
    ("c003", "Show all users that were active between 2024/08/01 and 2024/09/01", "list users --active 20240801 20240901", "list"),
    ("c004", "Give me the full list of gnodebs", "list gnbs", "list"),
    ("c005", "List every node in the network", "list nodes", "list"),
    ("c006", "Please add a new user with IMSI 001010123456789", "user add --imsi 001010123456789", "user"),
    ("c007", "Register subscriber 90170123456789 on the network", "user add --imsi 90170123456789", "user"),
    ("c008", "Add user alice with IMSI 001011234567890", "user add --imsi 001011234567890 --name alice", "user"),
    ("c009", "Check if subscriber 001010123456789 is reachable", "test ping --imsi 001010123456789", "test"),
    ("c010", "Run a throughput test", "test throughput", "test"),
    ("c011", "Ping the subscriber 90170123456789 five times", "test ping --imsi 90170123456789 --count 5", "test"),
    ("c012", "Create a new slice called iot", "create slice --name iot", "create"),
    ("c013", "Set up a cell named cell7 with 100mhz bandwidth", "create cell --name cell7 --bandwidth 100mhz", "create"),
    ("c014", "I need a new slice for video streaming called video", "create slice --name video", "create"),
    ("c015", "Remove the user with IMSI 001010123456789", "remove user --imsi 001010123456789", "remove"),
    ("c016", "Delete the iot slice", "remove slice --name iot", "remove"),
    ("c017", "Drop subscriber 90170123456789 from the network", "remove user --imsi 90170123456789", "remove"),
    ("c018", "Start the gnb named gnb1", "start gnb --name gnb1", "start"),
    ("c019", "Bring up the upf node", "start node --name upf1", "start"),
    ("c020", "Stop the gnb named gnb1", "stop gnb --name gnb1", "stop"),
    ("c021", "Shut down the amf node immediately", "stop node --name amf1 --force", "stop"),
    ("c022", "Force stop gnb2", "stop gnb --name gnb2 --force", "stop"),
    ("c023", "How is the core network doing?", "status core", "status"),
    ("c024", "What is the status of gnb1?", "status gnb --name gnb1", "status"),
    ("c025", "Show me the state of the smf node", "status node --name smf1", "status"),
    ("c026", "Show me the current configuration", "config show", "config"),
    ("c027", "Set the mcc to 001", "config set --key mcc --value 001", "config"),
    ("c028", "Change the tac parameter to 7", "config set --key tac --value 7", "config"),
    ("c029", "Show the logs", "log show", "log"),
    ("c030", "Show me the last 100 log lines", "log show --lines 100", "log"),
    ("c031", "Show logs since 2024/08/01", "log show --since 20240801", "log"),
    ("c032", "Monitor the live traffic", "monitor traffic", "monitor"),
    ("c033", "Watch performance metrics every 5 seconds", "monitor performance --interval 5s", "monitor"),
    ("c034", "Monitor traffic until 2024/12/31", "monitor traffic --until 20241231", "monitor"),
]


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    catalog = {"version": 1, "classes": CLASSES}
    (DATA / "catalog.json").write_text(
        json.dumps(catalog, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    with (DATA / "corpus.jsonl").open("w", encoding="utf-8") as fh:
        for rid, rin, rcmd, rcls in CORPUS:
            fh.write(
                json.dumps(
                    {"id": rid, "input": rin, "command": rcmd, "class": rcls},
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(f"wrote {DATA / 'catalog.json'} and {DATA / 'corpus.jsonl'}")


if __name__ == "__main__":
    main()
