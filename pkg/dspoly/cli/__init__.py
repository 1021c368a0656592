import pkgutil
import sys
from importlib import import_module

from tap import Tap

from dspoly.cli import commands
from dspoly.cli.core import ALL_COMMANDS, Command


DESCRIPTION = (
    "Dempster-Shafer goodness-of-fit tests for multinomial counts. "
    "Run 'dspoly <command> -h' for the options of each command."
)


# pyre-ignore[13]: command is unitialized
class ArgumentParser(Tap):
    command: str

    def configure(self) -> None:
        self.add_argument("command", choices=sorted(ALL_COMMANDS.keys()))


def load_commands() -> None:
    for module in pkgutil.iter_modules(commands.__path__):
        import_module(f"{commands.__name__}.{module.name}")


def main() -> None:
    load_commands()

    if len(sys.argv) > 1 and Command.is_valid(sys.argv[1]):
        sys.exit(Command.run(sys.argv[1], sys.argv[2:]))

    ArgumentParser(prog="dspoly", description=DESCRIPTION).parse_args()
